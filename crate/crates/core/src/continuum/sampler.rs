//! Exit-point samplers for Brownian motion in the unit disk and the
//! statistics used to compare them with the Poisson kernel.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{check_interior, poisson_arc_probability, DiskBoundaryPoint};
use crate::rng::{partition, worker_rng};
use crate::{Error, Point, Result};

/// Walk-on-spheres stops within this distance of the circle.
pub const BOUNDARY_TOL: f64 = 1e-6;
/// Walk-on-spheres iteration cap per sample.
pub const WOS_MAX_ITER: usize = 100_000;
/// Largest admissible Euler step.
pub const MAX_EULER_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    WalkOnSpheres,
    /// Gaussian increments of variance `step` per coordinate.
    Euler { step: f64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::WalkOnSpheres => "wos",
            Method::Euler { .. } => "euler",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HittingDistribution {
    AnalyticPoisson {
        x0: Point,
    },
    Empirical {
        x0: Point,
        samples: Vec<DiskBoundaryPoint>,
        seed: u64,
        method: Method,
        /// Walk-on-spheres samples that hit the iteration cap (projected
        /// from wherever they stopped).
        capped: usize,
    },
}

impl HittingDistribution {
    pub fn x0(&self) -> Point {
        match self {
            HittingDistribution::AnalyticPoisson { x0 } | HittingDistribution::Empirical { x0, .. } => *x0,
        }
    }

    pub fn samples(&self) -> &[DiskBoundaryPoint] {
        match self {
            HittingDistribution::AnalyticPoisson { .. } => &[],
            HittingDistribution::Empirical { samples, .. } => samples,
        }
    }

    /// Counts in `bins` equal angular bins starting at angle 0.
    pub fn histogram(&self, bins: usize) -> Vec<u64> {
        bin_counts(self.samples(), bins)
    }
}

/// `n` exit points from `x₀`, split over `workers` seeded streams and
/// concatenated in worker order.
pub fn sample_hitting(x0: Point, n: usize, method: Method, seed: u64, workers: usize) -> Result<HittingDistribution> {
    check_interior(x0)?;
    if n == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    if let Method::Euler { step } = method {
        if !(step > 0.0 && step <= MAX_EULER_STEP) {
            return Err(Error::InvalidInput(format!("Euler step must lie in (0, {MAX_EULER_STEP}], got {step}")));
        }
    }
    let chunks: Vec<(Vec<DiskBoundaryPoint>, usize)> = partition(n, workers)
        .into_par_iter()
        .enumerate()
        .map(|(w, count)| {
            let mut rng = worker_rng(seed, w as u64);
            let mut capped = 0;
            let samples = (0..count)
                .map(|_| match method {
                    Method::WalkOnSpheres => {
                        let (p, hit_cap) = walk_on_spheres(x0, &mut rng);
                        capped += usize::from(hit_cap);
                        p
                    }
                    Method::Euler { step } => euler_exit(x0, step, &mut rng),
                })
                .collect();
            (samples, capped)
        })
        .collect();
    let capped = chunks.iter().map(|c| c.1).sum();
    let samples = chunks.into_iter().flat_map(|c| c.0).collect();
    Ok(HittingDistribution::Empirical {
        x0,
        samples,
        seed,
        method,
        capped,
    })
}

fn walk_on_spheres<R: Rng + ?Sized>(x0: Point, rng: &mut R) -> (DiskBoundaryPoint, bool) {
    let mut p = x0;
    for _ in 0..WOS_MAX_ITER {
        let d = 1.0 - p.norm();
        if d < BOUNDARY_TOL {
            return (DiskBoundaryPoint::from_point(p), false);
        }
        p = p + Point::on_unit_circle(rng.random_range(0.0..TAU)).scale(d);
    }
    (DiskBoundaryPoint::from_point(p), true)
}

fn euler_exit<R: Rng + ?Sized>(x0: Point, step: f64, rng: &mut R) -> DiskBoundaryPoint {
    let sd = step.sqrt();
    let mut p = x0;
    loop {
        let dx: f64 = rng.sample(StandardNormal);
        let dy: f64 = rng.sample(StandardNormal);
        let q = Point::new(p.x + sd * dx, p.y + sd * dy);
        if q.norm_sq() >= 1.0 {
            // first λ in (0, 1] with ‖p + λ(q − p)‖ = 1
            let d = q - p;
            let (a, b, c) = (d.norm_sq(), 2.0 * (p.x * d.x + p.y * d.y), p.norm_sq() - 1.0);
            let lambda = (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
            return DiskBoundaryPoint::from_point(p + d.scale(lambda));
        }
        p = q;
    }
}

/// Counts of boundary points in `bins` equal arcs `[2πk/bins, 2π(k+1)/bins)`.
pub fn bin_counts(samples: &[DiskBoundaryPoint], bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins];
    for s in samples {
        let k = ((s.angle() / TAU * bins as f64) as usize).min(bins - 1);
        counts[k] += 1;
    }
    counts
}

/// Expected counts of `n` exit points from `x₀` in each bin.
pub fn expected_counts(x0: Point, bins: usize, n: usize) -> Result<Vec<f64>> {
    let h = TAU / bins as f64;
    (0..bins)
        .map(|k| Ok(n as f64 * poisson_arc_probability(x0, k as f64 * h, (k + 1) as f64 * h)?))
        .collect()
}

/// Pearson statistic `Σ (O − E)² / E`.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum()
}

/// Quantile of the chi-square distribution with `dof` degrees of freedom.
pub fn chi_square_quantile(dof: usize, p: f64) -> f64 {
    ChiSquared::new(dof as f64).expect("positive degrees of freedom").inverse_cdf(p)
}

/// Total-variation distance between two binned empirical distributions.
pub fn total_variation(a: &[u64], b: &[u64]) -> f64 {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    0.5 * a.iter().zip(b).map(|(&x, &y)| (x as f64 / na - y as f64 / nb).abs()).sum::<f64>()
}

/// CSV `bin_start,bin_end,count,expected`.
pub fn histogram_csv(counts: &[u64], expected: &[f64]) -> String {
    let h = TAU / counts.len().max(1) as f64;
    let mut out = String::from("bin_start,bin_end,count,expected\n");
    for (k, (c, e)) in counts.iter().zip(expected).enumerate() {
        writeln!(out, "{:.11e},{:.11e},{c},{:.11e}", k as f64 * h, (k + 1) as f64 * h, e).expect("writing to a String cannot fail");
    }
    out
}
