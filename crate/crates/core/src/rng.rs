//! Seeded, splittable random streams.
//!
//! Every Monte Carlo routine splits its work into a fixed number of worker
//! chunks. Chunk `w` draws from the ChaCha8 stream `w` of the generator
//! seeded with `seed`, and chunk results are combined in worker order, so
//! output depends only on `(seed, workers)` and not on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Worker count used when none is given.
pub const DEFAULT_WORKERS: usize = 8;

/// Generator for worker `worker` under `seed`.
pub fn worker_rng(seed: u64, worker: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker);
    rng
}

/// Splits `n` items into `workers` chunk sizes (earlier chunks take the
/// remainder).
pub fn partition(n: usize, workers: usize) -> Vec<usize> {
    let w = workers.max(1);
    (0..w).map(|i| n / w + usize::from(i < n % w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| 0).scan(worker_rng(7, 1), |r, _: u64| Some(r.random())).collect();
        let b: Vec<u64> = (0..4).map(|_| 0).scan(worker_rng(7, 1), |r, _: u64| Some(r.random())).collect();
        let c: Vec<u64> = (0..4).map(|_| 0).scan(worker_rng(7, 2), |r, _: u64| Some(r.random())).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn partition_covers_everything() {
        assert_eq!(partition(10, 3), vec![4, 3, 3]);
        assert_eq!(partition(2, 4), vec![1, 1, 0, 0]);
        assert_eq!(partition(5, 0), vec![5]);
    }
}
