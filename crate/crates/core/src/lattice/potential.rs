//! Potential kernel of the simple random walk on `Z²`.
//!
//! `a(x) = Σ_t [P₀(S_t = 0) − P₀(S_t = x)]`, or in Fourier form
//!
//! ```text
//! a(x) = (2π)⁻² ∫∫ (1 − cos(x·θ)) / (1 − (cos θ₁ + cos θ₂)/2) dθ.
//! ```
//!
//! The inner integral over `θ₂` is elementary: with `cosh α = 2 − cos θ₁`,
//! `∫ cos(nθ₂) / (cosh α − cos θ₂) dθ₂ = 2π e^{−nα} / sinh α`, which leaves
//!
//! ```text
//! a(m, n) = (2/π) ∫₀^π (1 − cos(mθ) e^{−nα}) / sinh α dθ,
//! sinh α = √2 · sin(θ/2) · √(3 − cos θ).
//! ```
//!
//! The integrand is analytic on `[0, π]` (the torus singularity cancels), so
//! composite Gauss–Legendre converges geometrically.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::quadrature::gl_composite;
use crate::{Error, LatticePoint, Result};

/// Largest lag a dense table may hold.
pub const MAX_TABLE_LAG: i64 = 64;

const GL_ORDER: usize = 20;

/// `a(s, t)` evaluated directly.
pub fn potential_kernel_value(s: i64, t: i64) -> f64 {
    let (a, b) = (s.abs(), t.abs());
    // put the larger coordinate in the exponential, the smaller in the cosine
    let (m, n) = (a.min(b) as f64, a.max(b) as f64);
    if m == 0.0 && n == 0.0 {
        return 0.0;
    }
    let f = |theta: f64| {
        let half = 0.5 * theta;
        let sinh_alpha = std::f64::consts::SQRT_2 * half.sin() * (3.0 - theta.cos()).sqrt();
        let alpha = sinh_alpha.asinh();
        let decay = (-n * alpha).exp();
        let s = (m * half).sin();
        (-(-n * alpha).exp_m1() + decay * 2.0 * s * s) / sinh_alpha
    };
    let panels = 8 + a.max(b) as usize;
    2.0 / PI * gl_composite(f, 0.0, PI, panels, GL_ORDER)
}

/// Dense table of `a(s, t)` for `|s|, |t| <= max_lag`, stored over the
/// canonical octant `0 <= t <= s`.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialKernelTable {
    max_lag: i64,
    values: Vec<f64>,
}

fn octant_index(s: i64, t: i64) -> usize {
    (s * (s + 1) / 2 + t) as usize
}

impl PotentialKernelTable {
    pub fn new(max_lag: i64) -> Result<Self> {
        if !(0..=MAX_TABLE_LAG).contains(&max_lag) {
            return Err(Error::InvalidInput(format!(
                "potential table lag must lie in 0..={MAX_TABLE_LAG}, got {max_lag}"
            )));
        }
        let lags: Vec<(i64, i64)> = (0..=max_lag).flat_map(|s| (0..=s).map(move |t| (s, t))).collect();
        let values = lags.par_iter().map(|&(s, t)| potential_kernel_value(s, t)).collect();
        Ok(PotentialKernelTable { max_lag, values })
    }

    pub fn max_lag(&self) -> i64 {
        self.max_lag
    }

    /// `a(s, t)`, or `None` outside the table.
    pub fn get(&self, s: i64, t: i64) -> Option<f64> {
        let (a, b) = (s.abs(), t.abs());
        if a.max(b) > self.max_lag {
            return None;
        }
        Some(self.values[octant_index(a.max(b), a.min(b))])
    }

    pub fn at(&self, p: LatticePoint) -> Option<f64> {
        self.get(p.s, p.t)
    }

    /// Largest `|(1/4)Σ_{y~x} a(y) − a(x) − 1{x = 0}|` over lags whose four
    /// neighbours are all in the table.
    pub fn laplacian_residual(&self) -> f64 {
        let m = self.max_lag - 1;
        let mut worst = 0.0f64;
        for s in -m..=m {
            for t in -m..=m {
                let x = LatticePoint::new(s, t);
                let mean = x.neighbors().iter().map(|&y| self.at(y).unwrap()).sum::<f64>() / 4.0;
                let delta = if x == LatticePoint::ORIGIN { 1.0 } else { 0.0 };
                worst = worst.max((mean - self.at(x).unwrap() - delta).abs());
            }
        }
        worst
    }

    /// CSV `s,t,a` over the canonical octant.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,a\n");
        for s in 0..=self.max_lag {
            for t in 0..=s {
                writeln!(out, "{s},{t},{:.11e}", self.values[octant_index(s, t)]).expect("writing to a String cannot fail");
            }
        }
        out
    }
}
