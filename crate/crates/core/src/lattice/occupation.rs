//! Occupation-time form of the potential-kernel inner product.
//!
//! For zero-mass `σ`, `ν` on `Z²`,
//!
//! ```text
//! Σ_x σ(x) E_x[ Σ_{t<T} ν(S_t) ]  →  −Σ_{x,y} σ(x) ν(y) a(y − x)  as T → ∞,
//! ```
//!
//! with an `O(1/T)` truncation bias. By translation invariance the left side
//! equals `E_0[Σ_{t<T} μ(S_t)]` for the single measure
//! `μ(z) = Σ_{y − x = z} σ(x) ν(y)`, so one walk from the origin serves
//! every starting point of `σ`.
//!
//! While the walk is at L1 distance `d > 1` from the support of `μ` it
//! cannot touch it in the next `d − 1` steps; those steps are taken at once.
//! In the rotated coordinates `S¹ + S²`, `S¹ − S²` the walk is a pair of
//! independent ±1 walks, so a `k`-step jump is two `Binomial(k, 1/2)`
//! draws.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use super::PotentialKernelTable;
use crate::contrast::{Location, Space, Support};
use crate::kernels::{inner_product, Kernel};
use crate::rng::{partition, worker_rng};
use crate::{Contrast, Error, LatticePoint, Result};

/// Theoretical ratio between the occupation expectation and the `−a`
/// inner product (occupation counted once per step).
pub const OCCUPATION_CONSTANT: f64 = 1.0;
pub const MIN_HORIZON: u64 = 10_000;
pub const MIN_WALKS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct OccupationReport {
    pub estimate: f64,
    pub std_error: f64,
    /// `inner_product(σ, ν, −a)`.
    pub kernel_value: f64,
    /// `estimate / kernel_value`, when the kernel value is nonzero.
    pub calibrated_constant: Option<f64>,
    /// `|estimate − C·kernel_value| / |C·kernel_value|` with
    /// `C = OCCUPATION_CONSTANT`; the absolute error when the kernel value
    /// is zero.
    pub relative_error: f64,
    pub horizon: u64,
    pub walks: usize,
}

/// Monte Carlo check of the occupation identity with `walks` walks of
/// `horizon` steps, split over `workers` seeded streams.
pub fn occupation_identity_check(
    sigma: &Contrast,
    nu: &Contrast,
    horizon: u64,
    walks: usize,
    seed: u64,
    workers: usize,
) -> Result<OccupationReport> {
    for c in [sigma, nu] {
        if c.space() != Space::Lattice || c.support() != Support::Point {
            return Err(Error::IncompatibleKernel(
                "occupation check needs point-support lattice contrasts".into(),
            ));
        }
    }
    if horizon < MIN_HORIZON || walks < MIN_WALKS {
        return Err(Error::InvalidInput(format!(
            "need horizon >= {MIN_HORIZON} and walks >= {MIN_WALKS}, got {horizon} and {walks}"
        )));
    }
    let mu = difference_measure(sigma, nu);
    let span = mu.iter().map(|(z, _)| z.s.abs().max(z.t.abs())).max().unwrap_or(0);
    let table = Arc::new(PotentialKernelTable::new(span)?);
    let kernel_value = inner_product(sigma, nu, &Kernel::lattice_potential(table))?.value;

    let (estimate, std_error) = if mu.is_empty() {
        (0.0, 0.0)
    } else {
        let lookup: HashMap<LatticePoint, f64> = mu.iter().copied().collect();
        let chunks: Vec<(f64, f64)> = partition(walks, workers)
            .into_par_iter()
            .enumerate()
            .map(|(w, count)| {
                let mut rng = worker_rng(seed, w as u64);
                let (mut sum, mut sum_sq) = (0.0, 0.0);
                for _ in 0..count {
                    let v = walk_occupation(&mu, &lookup, horizon, &mut rng);
                    sum += v;
                    sum_sq += v * v;
                }
                (sum, sum_sq)
            })
            .collect();
        let (sum, sum_sq) = chunks.iter().fold((0.0, 0.0), |(a, b), &(s, q)| (a + s, b + q));
        let n = walks as f64;
        let mean = sum / n;
        let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
        (mean, (var / n).sqrt())
    };

    let target = OCCUPATION_CONSTANT * kernel_value;
    let relative_error = if target == 0.0 {
        (estimate - target).abs()
    } else {
        ((estimate - target) / target).abs()
    };
    Ok(OccupationReport {
        estimate,
        std_error,
        kernel_value,
        calibrated_constant: (kernel_value != 0.0).then(|| estimate / kernel_value),
        relative_error,
        horizon,
        walks,
    })
}

/// `μ(z) = Σ_{y − x = z} σ(x) ν(y)`, zero entries dropped.
fn difference_measure(sigma: &Contrast, nu: &Contrast) -> Vec<(LatticePoint, f64)> {
    let lattice = |l: &Location| match *l {
        Location::Lattice(p) => p,
        Location::Continuum(_) => unreachable!("checked lattice space"),
    };
    let mut mu: HashMap<LatticePoint, f64> = HashMap::new();
    for a in sigma.atoms() {
        for b in nu.atoms() {
            *mu.entry(lattice(&b.location) - lattice(&a.location)).or_default() += a.weight * b.weight;
        }
    }
    let mut out: Vec<(LatticePoint, f64)> = mu.into_iter().filter(|&(_, w)| w != 0.0).collect();
    out.sort_by_key(|&(p, _)| p);
    out
}

/// `Σ_{t<T} μ(S_t)` along one walk from the origin.
fn walk_occupation<R: Rng + ?Sized>(
    mu: &[(LatticePoint, f64)],
    lookup: &HashMap<LatticePoint, f64>,
    horizon: u64,
    rng: &mut R,
) -> f64 {
    let mut pos = LatticePoint::ORIGIN;
    let mut t = 0u64;
    let mut total = 0.0;
    while t < horizon {
        let d = mu.iter().map(|(z, _)| pos.manhattan(*z)).min().expect("nonempty support") as u64;
        if d == 0 {
            total += lookup[&pos];
        }
        if d > horizon - t {
            break;
        }
        let k = d.saturating_sub(1).max(1).min(horizon - t);
        if k == 1 {
            pos = pos + LatticePoint::ORIGIN.neighbors()[rng.random_range(0..4)];
        } else {
            let u = 2 * fair_binomial(k, rng) as i64 - k as i64;
            let v = 2 * fair_binomial(k, rng) as i64 - k as i64;
            pos = pos + LatticePoint::new((u + v) / 2, (u - v) / 2);
        }
        t += k;
    }
    total
}

/// `Binomial(k, 1/2)`: a popcount of `k` random bits for moderate `k`.
fn fair_binomial<R: Rng + ?Sized>(k: u64, rng: &mut R) -> u64 {
    const POPCOUNT_LIMIT: u64 = 2048;
    if k > POPCOUNT_LIMIT {
        return Binomial::new(k, 0.5).expect("valid binomial").sample(rng);
    }
    let mut count = 0;
    let mut left = k;
    while left >= 64 {
        count += u64::from(rng.next_u64().count_ones());
        left -= 64;
    }
    if left > 0 {
        count += u64::from((rng.next_u64() & ((1u64 << left) - 1)).count_ones());
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dipole() -> Contrast {
        Contrast::lattice_dipole(LatticePoint::ORIGIN, LatticePoint::new(1, 0))
    }

    #[test]
    fn difference_measure_of_dipole() {
        let mu = difference_measure(&dipole(), &dipole());
        assert_eq!(
            mu,
            vec![(LatticePoint::new(-1, 0), -1.0), (LatticePoint::ORIGIN, 2.0), (LatticePoint::new(1, 0), -1.0)]
        );
    }

    #[test]
    fn fair_binomial_moments() {
        let mut rng = worker_rng(21, 0);
        for k in [1u64, 63, 64, 65, 700, 5000] {
            let n = 20_000;
            let draws: Vec<f64> = (0..n).map(|_| fair_binomial(k, &mut rng) as f64).collect();
            assert!(draws.iter().all(|&x| x <= k as f64));
            let mean = draws.iter().sum::<f64>() / n as f64;
            let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let (m, v) = (k as f64 / 2.0, k as f64 / 4.0);
            assert!((mean - m).abs() < 5.0 * (v / n as f64).sqrt(), "k={k} mean={mean}");
            assert!((var / v - 1.0).abs() < 0.06, "k={k} var={var}");
        }
    }

    #[test]
    fn unreachable_support_ends_the_walk() {
        // the target is farther than the horizon
        let mu = vec![(LatticePoint::new(50, 0), 1.0)];
        let lookup = mu.iter().copied().collect();
        let mut rng = worker_rng(1, 0);
        for _ in 0..200 {
            assert!(walk_occupation(&mu, &lookup, 49, &mut rng) == 0.0);
        }
    }

    #[test]
    fn jump_walk_matches_stepwise_walk_in_mean() {
        // E_0[#visits to (3, 1) in the first 40 steps], jumps vs. plain steps
        let target = LatticePoint::new(3, 1);
        let mu = vec![(target, 1.0)];
        let lookup = mu.iter().copied().collect();
        let n = 200_000;
        let mut rng = worker_rng(5, 0);
        let jumped: f64 = (0..n).map(|_| walk_occupation(&mu, &lookup, 40, &mut rng)).sum::<f64>() / n as f64;
        let mut rng = worker_rng(6, 0);
        let mut plain = 0.0;
        for _ in 0..n {
            let mut p = LatticePoint::ORIGIN;
            for _ in 0..40 {
                if p == target {
                    plain += 1.0;
                }
                p = p + LatticePoint::ORIGIN.neighbors()[rng.random_range(0..4)];
            }
        }
        plain /= n as f64;
        // both means are ≈ 0.4 with standard error ≈ 2e-3
        assert!((jumped - plain).abs() < 0.012, "{jumped} vs {plain}");
    }

    #[test]
    fn dipole_identity_small_run() {
        let r = occupation_identity_check(&dipole(), &dipole(), 10_000, 100_000, 0, 4).unwrap();
        assert!((r.kernel_value - 2.0).abs() < 1e-13);
        assert!(r.relative_error < 0.05, "{r:?}");
    }

    #[test]
    fn empty_contrast_gives_zero() {
        let empty = Contrast::empty(Space::Lattice, Support::Point);
        let r = occupation_identity_check(&dipole(), &empty, 10_000, 100_000, 3, 4).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.kernel_value, 0.0);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = occupation_identity_check(&dipole(), &dipole(), 10_000, 100_000, 9, 4).unwrap();
        let b = occupation_identity_check(&dipole(), &dipole(), 10_000, 100_000, 9, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_short_runs_and_wrong_kinds() {
        assert!(occupation_identity_check(&dipole(), &dipole(), 100, 100_000, 0, 1).is_err());
        let cells = Contrast::new(vec![crate::Atom::cell(0, 0, 1.0), crate::Atom::cell(1, 0, -1.0)]).unwrap();
        assert!(occupation_identity_check(&cells, &cells, 10_000, 100_000, 0, 1).is_err());
    }
}
