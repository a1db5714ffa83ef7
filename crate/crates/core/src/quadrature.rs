//! Numerical integration helpers.
//!
//! One-dimensional adaptive integration uses the double-exponential
//! (tanh-sinh) rule, which tolerates integrable endpoint singularities such
//! as `log|x − a|`. Callers split the interval at known singular points so
//! that singularities only ever sit at endpoints. Interior trouble spots are
//! handled by recursive bisection.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, OnceLock, RwLock};

use gauss_quad::legendre::GaussLegendre;

use crate::{Error, Result};

const MAX_DEPTH: u32 = 40;

type Rule = Arc<Vec<(f64, f64)>>;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, cached per order.
pub fn gauss_legendre(order: usize) -> Rule {
    static CACHE: OnceLock<RwLock<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.read().expect("quadrature cache poisoned").get(&order) {
        return Arc::clone(rule);
    }
    let order_nz = NonZeroUsize::new(order).expect("quadrature order must be positive");
    let rule: Vec<(f64, f64)> = GaussLegendre::new(order_nz)
        .as_node_weight_pairs()
        .to_vec();
    let rule = Arc::new(rule);
    cache
        .write()
        .expect("quadrature cache poisoned")
        .entry(order)
        .or_insert(rule)
        .clone()
}

/// Fixed-order Gauss–Legendre on `[a, b]`.
pub fn gl_integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, order: usize) -> f64 {
    let rule = gauss_legendre(order);
    let (half, mid) = (0.5 * (b - a), 0.5 * (a + b));
    half * rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>()
}

/// Composite Gauss–Legendre with `panels` equal panels.
pub fn gl_composite<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + h * i as f64;
            gl_integrate(&mut f, lo, lo + h, order)
        })
        .sum()
}

/// Adaptive integral of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Runs the double-exponential rule and bisects wherever its error
/// estimate exceeds the (halved) tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    let value = integrate_rec(f, a, b, tol, 0, &mut worst);
    if worst > tol {
        return Err(Error::QuadratureFailure {
            context: format!("adaptive integral over [{a}, {b}]"),
            tolerance: tol,
            estimate: worst,
        });
    }
    Ok(value)
}

fn integrate_rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32, worst: &mut f64) -> f64 {
    let out = quadrature::double_exponential::integrate(f, a, b, 0.25 * tol);
    if out.error_estimate <= 0.5 * tol || depth >= MAX_DEPTH {
        if depth >= MAX_DEPTH {
            *worst = worst.max(out.error_estimate);
        }
        return out.integral;
    }
    let mid = 0.5 * (a + b);
    integrate_rec(f, a, mid, 0.5 * tol, depth + 1, worst) + integrate_rec(f, mid, b, 0.5 * tol, depth + 1, worst)
}

/// Adaptive integral over `[a, b]` after splitting at the given interior
/// breakpoints (e.g. singular points of the integrand).
pub fn integrate_split<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<f64> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut edges = Vec::with_capacity(pts.len() + 2);
    edges.push(a);
    edges.extend(pts);
    edges.push(b);
    let share = tol / (edges.len() - 1) as f64;
    edges.windows(2).map(|w| integrate(f, w[0], w[1], share)).sum()
}
