//! Brownian motion in the unit disk: harmonic measure as the kriging
//! coefficient function of the de Wijs process.
//!
//! From an interior point `x₀` the exit position of planar Brownian motion
//! has the Poisson kernel density
//!
//! ```text
//! v(x, x₀) = (1/2π) (1 − ‖x₀‖²) / ‖x − x₀‖²,   ‖x‖ = 1,
//! ```
//!
//! and `log‖x₀ − y‖ = ∫ log‖x − y‖ v(x, x₀) dx` for every `y` outside the
//! open disk, so `v` solves the continuous kriging equations.

mod circle;
mod sampler;

use std::f64::consts::{PI, TAU};

pub use circle::{discretized_circle_kriging, CircleKriging, SegmentWeight};
pub use sampler::{
    bin_counts, chi_square, chi_square_quantile, expected_counts, histogram_csv, sample_hitting, total_variation,
    HittingDistribution, Method, BOUNDARY_TOL, WOS_MAX_ITER,
};

use crate::quadrature::integrate_split;
use crate::{Error, Point, Result};

/// Absolute tolerance for integrals over the circle.
pub const CIRCLE_QUAD_TOL: f64 = 1e-12;

/// A point on the unit circle, by angle in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskBoundaryPoint {
    angle: f64,
}

impl DiskBoundaryPoint {
    pub fn new(angle: f64) -> Self {
        let a = angle.rem_euclid(TAU);
        DiskBoundaryPoint {
            angle: if a >= TAU { 0.0 } else { a },
        }
    }

    pub fn from_point(p: Point) -> Self {
        Self::new(p.y.atan2(p.x))
    }

    pub fn angle(self) -> f64 {
        self.angle
    }

    pub fn to_point(self) -> Point {
        Point::on_unit_circle(self.angle)
    }
}

fn check_interior(x0: Point) -> Result<()> {
    if !(x0.norm() < 1.0) {
        return Err(Error::NotInterior(format!("{x0} is not inside the unit disk")));
    }
    Ok(())
}

fn density(theta: f64, x0: Point) -> f64 {
    (1.0 - x0.norm_sq()) / (TAU * Point::on_unit_circle(theta).dist(x0).powi(2))
}

/// Poisson kernel `v(x, x₀)`.
pub fn poisson_kernel(x: DiskBoundaryPoint, x0: Point) -> Result<f64> {
    check_interior(x0)?;
    Ok(density(x.angle, x0))
}

/// Harmonic measure of the arc `[a, b]` (`a <= b`, angles in radians) seen
/// from `x₀`, by adaptive quadrature.
pub fn poisson_arc_probability(x0: Point, a: f64, b: f64) -> Result<f64> {
    check_interior(x0)?;
    let peak = x0.angle();
    let breaks: Vec<f64> = (-1..=2).map(|k| peak + k as f64 * TAU).collect();
    integrate_split(&|t| density(t, x0), a, b, &breaks, CIRCLE_QUAD_TOL)
}

/// `∫ v(x, x₀) dx` over the whole circle (1 in exact arithmetic).
pub fn poisson_normalization(x0: Point) -> Result<f64> {
    check_interior(x0)?;
    let peak = x0.angle();
    integrate_split(&|t| density(t, x0), peak - PI, peak + PI, &[peak], CIRCLE_QUAD_TOL)
}

/// `|∫ log‖x − y‖ v(x, x₀) dx − log‖x₀ − y‖|` for `‖y‖ >= 1`.
///
/// The integral runs over `[ψ, ψ + 2π]` with `ψ` the angle of `y`, so a
/// logarithmic singularity (for `y` on the circle) only ever sits at the
/// endpoints.
pub fn harmonic_identity_check(x0: Point, y: Point) -> Result<f64> {
    check_interior(x0)?;
    if y.norm() < 1.0 {
        return Err(Error::InvalidInput(format!("{y} lies inside the open disk")));
    }
    let psi = y.angle();
    let peak = x0.angle();
    let breaks = [peak, peak + TAU];
    let f = |t: f64| {
        let d = Point::on_unit_circle(t).dist(y);
        if d == 0.0 {
            0.0
        } else {
            d.ln() * density(t, x0)
        }
    };
    let integral = integrate_split(&f, psi, psi + TAU, &breaks, CIRCLE_QUAD_TOL)?;
    Ok((integral - x0.dist(y).ln()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::worker_rng;
    use proptest::prelude::*;
    use rand::Rng;

    /// Harmonic measure of a short arc from the angle it subtends at `x₀`:
    /// `ω = angle/π − (b − a)/2π`.
    fn arc_by_subtended_angle(x0: Point, a: f64, b: f64) -> f64 {
        let (u, w) = (Point::on_unit_circle(a) - x0, Point::on_unit_circle(b) - x0);
        let angle = (u.x * w.y - u.y * w.x).atan2(u.x * w.x + u.y * w.y);
        angle / PI - (b - a) / TAU
    }

    fn random_interior(rng: &mut impl Rng) -> Point {
        let r = 0.95 * rng.random::<f64>().sqrt();
        Point::on_unit_circle(rng.random_range(0.0..TAU)).scale(r)
    }

    #[test]
    fn kernel_examples() {
        let any = DiskBoundaryPoint::new(1.234);
        assert!((poisson_kernel(any, Point::ORIGIN).unwrap() - 1.0 / TAU).abs() < 1e-15);
        let x0 = Point::new(0.5, 0.0);
        assert!((poisson_kernel(DiskBoundaryPoint::new(0.0), x0).unwrap() - 3.0 / TAU).abs() < 1e-15);
        assert!((poisson_kernel(DiskBoundaryPoint::new(PI), x0).unwrap() - 1.0 / (6.0 * PI)).abs() < 1e-15);
        assert!(matches!(poisson_kernel(any, Point::new(1.0, 0.0)), Err(Error::NotInterior(_))));
    }

    #[test]
    fn boundary_point_angles_wrap() {
        assert_eq!(DiskBoundaryPoint::new(TAU).angle(), 0.0);
        assert!((DiskBoundaryPoint::new(-0.5).angle() - (TAU - 0.5)).abs() < 1e-15);
        let p = DiskBoundaryPoint::new(2.0).to_point();
        assert!((p.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn arc_probability_against_subtended_angle() {
        let mut rng = worker_rng(2, 0);
        for _ in 0..20 {
            let x0 = random_interior(&mut rng);
            let a = rng.random_range(0.0..TAU);
            let b = a + rng.random_range(0.01..1.0);
            let q = poisson_arc_probability(x0, a, b).unwrap();
            assert!((q - arc_by_subtended_angle(x0, a, b)).abs() < 1e-11);
        }
    }

    #[test]
    fn normalization_for_random_points() {
        let mut rng = worker_rng(4, 0);
        for _ in 0..50 {
            let x0 = random_interior(&mut rng);
            assert!((poisson_normalization(x0).unwrap() - 1.0).abs() < 1e-10);
        }
        // close to the boundary the kernel is sharply peaked
        assert!((poisson_normalization(Point::new(0.0, -0.999)).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn harmonic_identity_examples() {
        assert!(harmonic_identity_check(Point::ORIGIN, Point::new(2.0, 0.0)).unwrap() < 1e-8);
        assert!(harmonic_identity_check(Point::new(0.3, 0.4), Point::new(2.0, 0.0)).unwrap() < 1e-8);
        assert!(harmonic_identity_check(Point::ORIGIN, Point::new(0.0, 1.0)).unwrap() < 1e-6);
        assert!(harmonic_identity_check(Point::ORIGIN, Point::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn harmonic_identity_random_pairs() {
        let mut rng = worker_rng(8, 0);
        for i in 0..50 {
            let x0 = random_interior(&mut rng);
            let r = if i % 2 == 0 { 1.0 } else { rng.random_range(1.0..4.0) };
            let y = Point::on_unit_circle(rng.random_range(0.0..TAU)).scale(r);
            assert!(harmonic_identity_check(x0, y).unwrap() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn rotation_equivariance(r in 0.0f64..0.99, phi in 0.0f64..TAU, theta in 0.0f64..TAU, rot in -10.0f64..10.0) {
            let x0 = Point::on_unit_circle(phi).scale(r);
            let a = poisson_kernel(DiskBoundaryPoint::new(theta), x0).unwrap();
            let b = poisson_kernel(DiskBoundaryPoint::new(theta + rot), x0.rotate(rot)).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }
}
