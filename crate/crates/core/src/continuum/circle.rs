//! Kriging an interior point from arc segments of the unit circle.
//!
//! Each site is the uniform measure on one of `n` equal arcs; the log kernel
//! is averaged along the arcs. Because the arcs tile the circle, the Gram
//! matrix is circulant: with `h = 2π/n` and `w` the angular difference of
//! two points, `w − kh` has the triangle density `(1 − |u|/h)/h` on
//! `[−h, h]` for segments `k` apart, so
//!
//! ```text
//! G_k = −(1/h) ∫ (1 − |w − kh|/h) log|2 sin(w/2)| dw.
//! ```
//!
//! As `n` grows the segment weights converge to the Poisson-kernel mass of
//! each segment.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::{check_interior, poisson_arc_probability, CIRCLE_QUAD_TOL};
use crate::kriging::{fmt_sig, KrigingSolution, OrdinaryKriging};
use crate::quadrature::{integrate, integrate_split};
use crate::{Error, Point, Result};

pub const MIN_SEGMENTS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct SegmentWeight {
    pub theta_start: f64,
    pub theta_end: f64,
    pub weight: f64,
    /// Poisson-kernel mass of the segment.
    pub poisson_integral: f64,
}

#[derive(Clone, Debug)]
pub struct CircleKriging {
    pub solution: KrigingSolution,
    pub segments: Vec<SegmentWeight>,
}

impl CircleKriging {
    /// `max_j |ω_j − ∫_{seg j} v|`.
    pub fn max_error(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| (s.weight - s.poisson_integral).abs())
            .fold(0.0, f64::max)
    }

    /// CSV `segment,theta_start,theta_end,weight,poisson_integral`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("segment,theta_start,theta_end,weight,poisson_integral\n");
        for (j, s) in self.segments.iter().enumerate() {
            writeln!(
                out,
                "{j},{},{},{},{}",
                fmt_sig(s.theta_start),
                fmt_sig(s.theta_end),
                fmt_sig(s.weight),
                fmt_sig(s.poisson_integral)
            )
            .expect("writing to a String cannot fail");
        }
        out
    }
}

/// `−log|2 sin(w/2)|`, the log kernel at chord length for angle `w`.
fn chord_kernel(w: f64) -> f64 {
    let c = (2.0 * (0.5 * w).sin()).abs();
    if c == 0.0 {
        0.0
    } else {
        -c.ln()
    }
}

/// Arc-averaged log kernel between segments `k` apart.
fn segment_gram(k: usize, h: f64) -> Result<f64> {
    let c = k as f64 * h;
    let tri = |w: f64| (1.0 - (w - c).abs() / h) * chord_kernel(w);
    let v = if k == 0 {
        2.0 * integrate(&tri, 0.0, h, CIRCLE_QUAD_TOL)?
    } else {
        integrate(&tri, c - h, c, CIRCLE_QUAD_TOL)? + integrate(&tri, c, c + h, CIRCLE_QUAD_TOL)?
    };
    Ok(v / h)
}

/// Ordinary kriging of `x₀` from `n` equal arcs of the unit circle.
pub fn discretized_circle_kriging(x0: Point, n_segments: usize) -> Result<CircleKriging> {
    check_interior(x0)?;
    if n_segments < MIN_SEGMENTS {
        return Err(Error::InvalidInput(format!("need at least {MIN_SEGMENTS} segments, got {n_segments}")));
    }
    let n = n_segments;
    let h = TAU / n as f64;
    let first_row: Vec<f64> = (0..=n / 2).map(|k| segment_gram(k, h)).collect::<Result<_>>()?;
    let gram = DMatrix::from_fn(n, n, |i, j| {
        let k = i.abs_diff(j);
        first_row[k.min(n - k)]
    });

    let peak = x0.angle();
    let breaks: Vec<f64> = [peak - TAU, peak, peak + TAU].to_vec();
    let rhs: Vec<f64> = (0..n)
        .map(|j| {
            let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
            let f = |t: f64| -Point::on_unit_circle(t).dist(x0).ln();
            Ok(integrate_split(&f, a, b, &breaks, CIRCLE_QUAD_TOL)? / h)
        })
        .collect::<Result<_>>()?;

    let mut solution = OrdinaryKriging::from_gram(gram)?.solve_rhs(&rhs, 0.0)?;
    solution.sites = (0..n).map(|j| Point::on_unit_circle((j as f64 + 0.5) * h)).collect();
    solution.target = x0;
    let segments = (0..n)
        .map(|j| {
            let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
            Ok(SegmentWeight {
                theta_start: a,
                theta_end: b,
                weight: solution.weights[j],
                poisson_integral: poisson_arc_probability(x0, a, b)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CircleKriging { solution, segments })
}
