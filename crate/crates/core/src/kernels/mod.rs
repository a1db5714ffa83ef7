//! Generalized covariances and bilinear forms on contrasts.
//!
//! A generalized covariance is only defined up to additive functions
//! `f₁(x) + f₂(y)`; on zero-mass contrasts every representative gives the
//! same inner product. The kernels here are fixed representatives:
//!
//! * [`Kernel::Log`]: `−log‖p − q‖`, with the value 0 at zero lag;
//! * [`Kernel::BesselK0`]: `K0(a‖p − q‖)`, with the finite part
//!   `−ln(a/2) − γ` at zero lag;
//! * [`Kernel::CellLog`]: the cell-averaged log kernel [`cell_cov`];
//! * [`Kernel::LatticePotential`]: `−a(p − q)` for the random-walk
//!   potential kernel `a`.

mod bessel;
pub mod cell;
mod spectral;

use std::f64::consts::PI;
use std::sync::Arc;

pub use bessel::{k0, k0_finite_part, EULER_GAMMA};
pub use cell::{cell_cov, cell_cov_closed_form, cell_cov_quadrature, cell_cov_table_csv, CELL_COV_TOL};
pub use spectral::{de_wijs_spectral_density, SpectralModel, DE_WIJS_SPECTRAL_SCALE, DIAGRAM_DE_WIJS_SCALE};

use crate::contrast::{Contrast, Space, Support};
use crate::lattice::PotentialKernelTable;
use crate::{Error, LatticePoint, Point, Result};

#[derive(Clone, Debug)]
pub enum Kernel {
    Log,
    BesselK0 { a: f64 },
    CellLog,
    LatticePotential(Arc<PotentialKernelTable>),
    /// `scale · base + shift`.
    Affine { base: Box<Kernel>, scale: f64, shift: f64 },
}

impl Kernel {
    pub fn bessel_k0(a: f64) -> Result<Kernel> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidInput(format!("Bessel kernel needs a > 0, got {a}")));
        }
        Ok(Kernel::BesselK0 { a })
    }

    pub fn lattice_potential(table: Arc<PotentialKernelTable>) -> Kernel {
        Kernel::LatticePotential(table)
    }

    /// The same kernel with a constant added to every evaluation.
    pub fn shifted(&self, shift: f64) -> Kernel {
        Kernel::Affine {
            base: Box::new(self.clone()),
            scale: 1.0,
            shift,
        }
    }

    /// The same kernel multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> Kernel {
        Kernel::Affine {
            base: Box::new(self.clone()),
            scale,
            shift: 0.0,
        }
    }

    /// Innermost non-affine kernel.
    pub fn base(&self) -> &Kernel {
        match self {
            Kernel::Affine { base, .. } => base.base(),
            k => k,
        }
    }

    /// Whether the zero-lag value is a convention rather than a limit.
    pub fn zero_lag_is_conventional(&self) -> bool {
        matches!(self.base(), Kernel::Log | Kernel::BesselK0 { .. })
    }

    /// Whether the kernel takes lattice lags (cells or lattice points).
    pub fn needs_integer_lags(&self) -> bool {
        matches!(self.base(), Kernel::CellLog | Kernel::LatticePotential(_))
    }

    /// Generalized covariance between locations `p` and `q`.
    ///
    /// Cell and lattice kernels require integer coordinates.
    pub fn gen_cov(&self, p: Point, q: Point) -> Result<f64> {
        match self {
            Kernel::Log => {
                let r = p.dist(q);
                Ok(if r == 0.0 { 0.0 } else { -r.ln() })
            }
            Kernel::BesselK0 { a } => {
                let r = p.dist(q);
                Ok(if r == 0.0 { k0_finite_part(*a) } else { k0(a * r) })
            }
            Kernel::CellLog | Kernel::LatticePotential(_) => {
                let lag = (p - q)
                    .as_lattice()
                    .ok_or_else(|| Error::IncompatibleKernel(format!("non-integer lag between {p} and {q}")))?;
                self.gen_cov_lag(lag)
            }
            Kernel::Affine { base, scale, shift } => Ok(scale * base.gen_cov(p, q)? + shift),
        }
    }

    /// Generalized covariance at an integer lag.
    pub fn gen_cov_lag(&self, lag: LatticePoint) -> Result<f64> {
        match self {
            Kernel::CellLog => cell_cov(lag.s, lag.t),
            Kernel::LatticePotential(table) => table
                .get(lag.s, lag.t)
                .map(|a| -a)
                .ok_or(Error::LagOutOfRange(lag.s, lag.t)),
            Kernel::Affine { base, scale, shift } => Ok(scale * base.gen_cov_lag(lag)? + shift),
            _ => self.gen_cov(lag.to_point(), Point::ORIGIN),
        }
    }

    fn check_compatible(&self, support: Support, space: Space) -> Result<()> {
        let ok = match (self.base(), support) {
            (Kernel::CellLog, Support::Cell) => space == Space::Lattice,
            (Kernel::Log | Kernel::BesselK0 { .. }, Support::Point) => true,
            (Kernel::LatticePotential(_), Support::Point) => space == Space::Lattice,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IncompatibleKernel(format!(
                "{} kernel cannot evaluate {support:?}-support contrasts on the {space:?}",
                self.name()
            )))
        }
    }

    pub fn name(&self) -> &'static str {
        match self.base() {
            Kernel::Log => "log",
            Kernel::BesselK0 { .. } => "bessel-k0",
            Kernel::CellLog => "cell-log",
            Kernel::LatticePotential(_) => "lattice-potential",
            Kernel::Affine { .. } => unreachable!("base() strips affine wrappers"),
        }
    }
}

/// Brownian-motion potential kernel `g(x, y) = −π⁻¹ log‖y − x‖`.
pub fn brownian_potential(x: Point, y: Point) -> f64 {
    -(y - x).norm().ln() / PI
}

/// Value of `⟨σ, ν⟩` and whether any coincident pair used the zero-lag
/// convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InnerProduct {
    pub value: f64,
    pub zero_lag_convention: bool,
}

/// `⟨σ, ν⟩ = Σᵢ Σⱼ σᵢ νⱼ k(xᵢ, yⱼ)`.
pub fn inner_product(sigma: &Contrast, nu: &Contrast, kernel: &Kernel) -> Result<InnerProduct> {
    if sigma.space() != nu.space() || sigma.support() != nu.support() {
        return Err(Error::MixedSupport("inner product of contrasts of different kinds".into()));
    }
    kernel.check_compatible(sigma.support(), sigma.space())?;
    let conventional = kernel.zero_lag_is_conventional();
    let mut value = 0.0;
    let mut flagged = false;
    for a in sigma.atoms() {
        let p = a.location.to_point();
        for b in nu.atoms() {
            let q = b.location.to_point();
            if conventional && p == q {
                flagged = true;
            }
            value += a.weight * b.weight * kernel.gen_cov(p, q)?;
        }
    }
    Ok(InnerProduct {
        value,
        zero_lag_convention: flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contrast::Atom;
    use crate::lattice::PotentialKernelTable;
    use nalgebra::{DMatrix, SymmetricEigen};
    use proptest::prelude::*;

    fn dipole_pts(a: (f64, f64), b: (f64, f64)) -> Contrast {
        Contrast::new(vec![Atom::point(a.0, a.1, 1.0), Atom::point(b.0, b.1, -1.0)]).unwrap()
    }

    #[test]
    fn log_kernel_values() {
        let k = Kernel::Log;
        assert_eq!(k.gen_cov(Point::new(0.0, 0.0), Point::new(1.0, 0.0)).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert!((k.gen_cov(Point::ORIGIN, Point::new(0.0, e)).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(k.gen_cov(Point::new(2.0, 3.0), Point::new(2.0, 3.0)).unwrap(), 0.0);
    }

    #[test]
    fn bessel_kernel_values() {
        let k = Kernel::bessel_k0(1.0).unwrap();
        let v = k.gen_cov(Point::ORIGIN, Point::new(0.6, 0.8)).unwrap();
        assert!((v - 0.42102443824070833).abs() < 1e-12);
        assert!(Kernel::bessel_k0(0.0).is_err());
    }

    #[test]
    fn gen_cov_is_symmetric() {
        let table = Arc::new(PotentialKernelTable::new(8).unwrap());
        let kernels = [Kernel::Log, Kernel::bessel_k0(0.3).unwrap(), Kernel::CellLog, Kernel::LatticePotential(table)];
        let pairs = [((0.0, 0.0), (3.0, -2.0)), ((1.0, 5.0), (-2.0, 1.0))];
        for k in &kernels {
            for &((a, b), (c, d)) in &pairs {
                let (p, q) = (Point::new(a, b), Point::new(c, d));
                assert_eq!(k.gen_cov(p, q).unwrap(), k.gen_cov(q, p).unwrap());
            }
        }
    }

    #[test]
    fn inner_product_log_example() {
        let s = dipole_pts((0.0, 0.0), (1.0, 0.0));
        let n = dipole_pts((10.0, 0.0), (11.0, 0.0));
        let ip = inner_product(&s, &n, &Kernel::Log).unwrap();
        assert!((ip.value - (99.0f64 / 100.0).ln()).abs() < 1e-14);
        assert!(!ip.zero_lag_convention);
        let self_ip = inner_product(&s, &s, &Kernel::Log).unwrap();
        assert!(self_ip.zero_lag_convention);
    }

    #[test]
    fn inner_product_lattice_potential_dipole() {
        let table = Arc::new(PotentialKernelTable::new(8).unwrap());
        let k = Kernel::LatticePotential(Arc::clone(&table));
        for r in 1..=6 {
            let s = Contrast::lattice_dipole(LatticePoint::ORIGIN, LatticePoint::new(r, 0));
            let v = inner_product(&s, &s, &k).unwrap().value;
            assert!((v - 2.0 * table.get(r, 0).unwrap()).abs() < 1e-13);
            assert!(v >= 0.0);
        }
    }

    #[test]
    fn inner_product_with_empty_is_zero() {
        let s = dipole_pts((0.0, 0.0), (1.0, 2.0));
        let empty = Contrast::empty(Space::Continuum, Support::Point);
        assert_eq!(inner_product(&s, &empty, &Kernel::Log).unwrap().value, 0.0);
    }

    #[test]
    fn incompatible_combinations() {
        let cells = Contrast::new(vec![Atom::cell(0, 0, 1.0), Atom::cell(2, 0, -1.0)]).unwrap();
        let pts = dipole_pts((0.0, 0.0), (1.0, 0.0));
        assert!(matches!(inner_product(&cells, &cells, &Kernel::Log), Err(Error::IncompatibleKernel(_))));
        assert!(matches!(inner_product(&pts, &pts, &Kernel::CellLog), Err(Error::IncompatibleKernel(_))));
        assert!(matches!(inner_product(&pts, &cells, &Kernel::Log), Err(Error::MixedSupport(_))));
        let table = Arc::new(PotentialKernelTable::new(4).unwrap());
        assert!(matches!(
            inner_product(&pts, &pts, &Kernel::LatticePotential(table)),
            Err(Error::IncompatibleKernel(_))
        ));
    }

    #[test]
    fn potential_table_lag_out_of_range() {
        let k = Kernel::LatticePotential(Arc::new(PotentialKernelTable::new(4).unwrap()));
        assert!(matches!(k.gen_cov_lag(LatticePoint::new(5, 0)), Err(Error::LagOutOfRange(5, 0))));
    }

    #[test]
    fn k0_difference_tends_to_log_difference() {
        // (K0(a r) − K0(a r')) → log r' − log r as a ↓ 0
        let a = 1e-4;
        for &(r, rp) in &[(1.0, 2.0), (0.5, 3.0), (2.0, 5.0)] {
            let lhs = k0(a * r) - k0(a * rp);
            assert!((lhs - (f64::ln(rp) - f64::ln(r))).abs() < 1e-6);
        }
    }

    #[test]
    fn brownian_potential_is_log_over_pi() {
        let v = brownian_potential(Point::ORIGIN, Point::new(0.0, 2.0));
        assert!((v + 2f64.ln() / PI).abs() < 1e-16);
    }

    #[test]
    fn cell_gram_is_positive_semidefinite() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.random_range(3..=20);
            let mut cells: Vec<(i64, i64)> = Vec::new();
            while cells.len() < n {
                let c = (rng.random_range(-6..=6), rng.random_range(-6..=6));
                if !cells.contains(&c) {
                    cells.push(c);
                }
            }
            // elementary contrasts δ_i − δ_0
            let basis: Vec<Contrast> = cells[1..]
                .iter()
                .map(|&(s, t)| Contrast::new(vec![Atom::cell(s, t, 1.0), Atom::cell(cells[0].0, cells[0].1, -1.0)]).unwrap())
                .collect();
            let m = basis.len();
            let gram = DMatrix::from_fn(m, m, |i, j| inner_product(&basis[i], &basis[j], &Kernel::CellLog).unwrap().value);
            let eig = SymmetricEigen::new(gram);
            let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(min >= -1e-8, "smallest eigenvalue {min}");
        }
    }

    fn random_point_contrast() -> impl Strategy<Value = Contrast> {
        prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0, -2.0f64..2.0), 1..6).prop_map(|raw| {
            let mut atoms: Vec<Atom> = raw.iter().map(|&(x, y, w)| Atom::point(x, y, w)).collect();
            let total: f64 = atoms.iter().map(|a| a.weight).sum();
            atoms.push(Atom::point(7.5, -7.5, -total));
            Contrast::new(atoms).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn constant_shift_does_not_change_inner_products(
            s in random_point_contrast(),
            n in random_point_contrast(),
            c in -50.0f64..50.0,
        ) {
            for k in [Kernel::Log, Kernel::bessel_k0(0.7).unwrap()] {
                let base = inner_product(&s, &n, &k).unwrap().value;
                let shifted = inner_product(&s, &n, &k.shifted(c)).unwrap().value;
                prop_assert!((base - shifted).abs() <= 1e-10 * base.abs().max(1.0));
            }
        }
    }
}
