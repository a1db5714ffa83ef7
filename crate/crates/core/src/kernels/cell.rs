//! Cell-averaged logarithmic generalized covariance.
//!
//! `Γ(s, t)` is the average of `−log‖x − y‖` over `x` in the unit cell centred
//! at the origin and `y` in the unit cell centred at `(s, t)`. The difference
//! of two independent uniform points in a unit square has density
//! `(1 − |u|)(1 − |v|)` on `[−1, 1]²`, which reduces the four-fold integral
//! to a triangle-weighted two-fold one. Equivalently `Γ` is minus one half of
//! the 3×3 second difference (stencil `1, −2, 1` in each axis) of a fourth
//! antiderivative `F` with `∂²ₓ∂²ᵧF = log(x² + y²)`.
//!
//! Overlapping and adjacent cells (`max(|s|, |t|) <= 1`) use the closed
//! form, which is exact there. Other lags use tensor-product Gauss–Legendre
//! on the four quadrants of `[−1, 1]²`, where the integrand is analytic; the
//! closed form loses digits to cancellation as the lag grows.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{OnceLock, RwLock};

use crate::quadrature::gauss_legendre;
use crate::{Error, Result};

/// Requested absolute accuracy of each cell covariance.
pub const CELL_COV_TOL: f64 = 1e-10;

const LOW_ORDER: usize = 12;
const HIGH_ORDER: usize = 24;
const MAX_DEPTH: u32 = 6;

/// Canonical representative of the dihedral orbit of a lag.
pub fn canonical_lag(s: i64, t: i64) -> (i64, i64) {
    let (a, b) = (s.abs(), t.abs());
    (a.max(b), a.min(b))
}

fn cache() -> &'static RwLock<HashMap<(i64, i64), f64>> {
    static CACHE: OnceLock<RwLock<HashMap<(i64, i64), f64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Γ(s, t)`, cached per dihedral orbit. Safe to call from many threads.
pub fn cell_cov(s: i64, t: i64) -> Result<f64> {
    let key = canonical_lag(s, t);
    if let Some(&v) = cache().read().expect("cell cache poisoned").get(&key) {
        return Ok(v);
    }
    let v = cell_cov_uncached(key.0, key.1)?;
    cache().write().expect("cell cache poisoned").insert(key, v);
    Ok(v)
}

/// `Γ(s, t)` without touching the cache.
pub fn cell_cov_uncached(s: i64, t: i64) -> Result<f64> {
    let (s, t) = canonical_lag(s, t);
    if s <= 1 {
        Ok(cell_cov_closed_form(s, t))
    } else {
        cell_cov_quadrature(s, t, CELL_COV_TOL)
    }
}

/// Fourth antiderivative of `log(x² + y²)`: `∂²ₓ∂²ᵧF = log(x² + y²)`.
fn antiderivative(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    if r2 == 0.0 {
        return 0.0;
    }
    let (x2, y2) = (x * x, y * y);
    let mut v = (6.0 * x2 * y2 - x2 * x2 - y2 * y2) / 24.0 * r2.ln() - 25.0 / 24.0 * x2 * y2;
    if y != 0.0 {
        v += x * y * y2 * (x / y).atan() / 3.0;
    }
    if x != 0.0 {
        v += x * x2 * y * (y / x).atan() / 3.0;
    }
    v
}

/// Closed-form `Γ(s, t)`. Exact for small lags; accuracy degrades roughly
/// like `1e-16 · |lag|⁴ log|lag|` through cancellation.
pub fn cell_cov_closed_form(s: i64, t: i64) -> f64 {
    const STENCIL: [f64; 3] = [1.0, -2.0, 1.0];
    let (s, t) = (s as f64, t as f64);
    let mut acc = 0.0;
    for (i, ci) in STENCIL.iter().enumerate() {
        for (j, cj) in STENCIL.iter().enumerate() {
            acc += ci * cj * antiderivative(s + i as f64 - 1.0, t + j as f64 - 1.0);
        }
    }
    -0.5 * acc
}

/// Quadrature route for lags with `max(|s|, |t|) >= 2`.
pub fn cell_cov_quadrature(s: i64, t: i64, tol: f64) -> Result<f64> {
    let (s, t) = canonical_lag(s, t);
    if s <= 1 {
        return Err(Error::InvalidInput(format!(
            "quadrature route needs a non-adjacent lag, got ({s}, {t})"
        )));
    }
    let (sf, tf) = (s as f64, t as f64);
    let integrand = |u: f64, v: f64| {
        let w = (1.0 - u.abs()) * (1.0 - v.abs());
        let (dx, dy) = (sf + u, tf + v);
        -0.5 * w * (dx * dx + dy * dy).ln()
    };
    let mut total = 0.0;
    let mut worst = 0.0f64;
    for &(u0, u1) in &[(-1.0, 0.0), (0.0, 1.0)] {
        for &(v0, v1) in &[(-1.0, 0.0), (0.0, 1.0)] {
            let (val, err) = adaptive_rect(&integrand, [u0, u1, v0, v1], 0.25 * tol, 0);
            total += val;
            worst = worst.max(err);
        }
    }
    if worst > 0.25 * tol {
        return Err(Error::QuadratureFailure {
            context: format!("cell covariance at lag ({s}, {t})"),
            tolerance: tol,
            estimate: worst,
        });
    }
    Ok(total)
}

fn tensor_gl<F: Fn(f64, f64) -> f64>(f: &F, rect: [f64; 4], order: usize) -> f64 {
    let rule = gauss_legendre(order);
    let [u0, u1, v0, v1] = rect;
    let (hu, mu) = (0.5 * (u1 - u0), 0.5 * (u0 + u1));
    let (hv, mv) = (0.5 * (v1 - v0), 0.5 * (v0 + v1));
    let mut acc = 0.0;
    for &(xi, wi) in rule.iter() {
        let u = mu + hu * xi;
        let mut row = 0.0;
        for &(xj, wj) in rule.iter() {
            row += wj * f(u, mv + hv * xj);
        }
        acc += wi * row;
    }
    acc * hu * hv
}

/// Returns the integral and the largest unresolved error estimate.
fn adaptive_rect<F: Fn(f64, f64) -> f64>(f: &F, rect: [f64; 4], tol: f64, depth: u32) -> (f64, f64) {
    let coarse = tensor_gl(f, rect, LOW_ORDER);
    let fine = tensor_gl(f, rect, HIGH_ORDER);
    let err = (fine - coarse).abs();
    if err <= tol {
        return (fine, 0.0);
    }
    if depth >= MAX_DEPTH {
        return (fine, err);
    }
    let [u0, u1, v0, v1] = rect;
    let (um, vm) = (0.5 * (u0 + u1), 0.5 * (v0 + v1));
    let mut total = 0.0;
    let mut worst = 0.0f64;
    for sub in [[u0, um, v0, vm], [um, u1, v0, vm], [u0, um, vm, v1], [um, u1, vm, v1]] {
        let (v, e) = adaptive_rect(f, sub, 0.25 * tol, depth + 1);
        total += v;
        worst = worst.max(e);
    }
    (total, worst)
}

/// Pre-populates the cache for all lags with `|s|, |t| <= max_lag`.
pub fn prefill(max_lag: i64) -> Result<()> {
    for s in 0..=max_lag {
        for t in 0..=s {
            cell_cov(s, t)?;
        }
    }
    Ok(())
}

/// CSV `s,t,value` over canonical lags `0 <= t <= s <= max_lag`.
pub fn cell_cov_table_csv(max_lag: i64) -> Result<String> {
    let mut out = String::from("s,t,value\n");
    for s in 0..=max_lag {
        for t in 0..=s {
            writeln!(out, "{s},{t},{:.12e}", cell_cov(s, t)?).expect("writing to a String cannot fail");
        }
    }
    Ok(out)
}
