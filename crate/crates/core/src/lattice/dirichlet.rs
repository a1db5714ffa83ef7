//! Discrete Dirichlet problem, and its agreement with kriging under the
//! potential kernel.
//!
//! For the simple random walk started at an interior point `x`, the law of
//! the first boundary point hit, `H(x, ·)`, is harmonic in `x` on the
//! interior. It is obtained for every boundary point at once from one sparse
//! Cholesky factorization of `4I − A_II` (`A` the nearest-neighbour
//! adjacency). The same weights come out of ordinary kriging of `x` from the
//! boundary under the generalized covariance `−a`.

use std::sync::Arc;

use nalgebra::DMatrix;
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix};

use super::{LatticeDomain, PotentialKernelTable};
use crate::kernels::Kernel;
use crate::kriging::OrdinaryKriging;
use crate::{Error, LatticePoint, Result};

/// Hitting distributions from every interior point.
#[derive(Clone, Debug)]
pub struct HittingMatrix {
    domain: LatticeDomain,
    /// Row `i`: interior point `i`; column `j`: boundary point `j`.
    probs: DMatrix<f64>,
}

impl HittingMatrix {
    pub fn new(domain: &LatticeDomain) -> Result<Self> {
        let n = domain.interior().len();
        let m = domain.boundary().len();
        let mut a = CooMatrix::new(n, n);
        let mut b = DMatrix::zeros(n, m);
        for (i, p) in domain.interior().iter().enumerate() {
            a.push(i, i, 4.0);
            for q in p.neighbors() {
                if let Some(j) = domain.interior_index(q) {
                    a.push(i, j, -1.0);
                } else if let Some(j) = domain.boundary_index(q) {
                    b[(i, j)] += 1.0;
                }
            }
        }
        let chol = CscCholesky::factor(&CscMatrix::from(&a))
            .map_err(|e| Error::SingularSystem(format!("interior Laplacian: {e:?}")))?;
        let probs = chol.solve(&b);
        Ok(HittingMatrix {
            domain: domain.clone(),
            probs,
        })
    }

    pub fn domain(&self) -> &LatticeDomain {
        &self.domain
    }

    /// Hitting distribution from `x`, aligned with `domain().boundary()`.
    pub fn row(&self, x: LatticePoint) -> Result<Vec<f64>> {
        let i = self
            .domain
            .interior_index(x)
            .ok_or_else(|| Error::NotInterior(format!("{x} is not an interior point")))?;
        Ok(self.probs.row(i).iter().copied().collect())
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.probs
    }
}

/// Probability that the walk from `x` first hits each boundary point,
/// aligned with `dom.boundary()`.
pub fn hitting_probabilities(dom: &LatticeDomain, x: LatticePoint) -> Result<Vec<f64>> {
    if dom.interior_index(x).is_none() {
        return Err(Error::NotInterior(format!("{x} is not an interior point")));
    }
    HittingMatrix::new(dom)?.row(x)
}

/// Kriging of interior points from the boundary under `−a`.
#[derive(Debug)]
pub struct BoundaryKriging {
    solver: OrdinaryKriging,
}

impl BoundaryKriging {
    pub fn new(dom: &LatticeDomain, table: &Arc<PotentialKernelTable>) -> Result<Self> {
        if dom.diameter() > table.max_lag() {
            return Err(Error::InvalidInput(format!(
                "potential table covers lags up to {}, domain needs {}",
                table.max_lag(),
                dom.diameter()
            )));
        }
        let sites = dom.boundary().iter().map(|p| p.to_point()).collect();
        let solver = OrdinaryKriging::new(sites, Kernel::lattice_potential(Arc::clone(table)))?;
        Ok(BoundaryKriging { solver })
    }

    /// Kriging weights for `x`, aligned with the boundary.
    pub fn weights(&self, x: LatticePoint) -> Result<Vec<f64>> {
        Ok(self.solver.solve(x.to_point())?.weights)
    }
}

/// `max_y |ω_y − H(x, y)|` for one interior point.
pub fn dynkin_crosscheck(dom: &LatticeDomain, x: LatticePoint, table: &Arc<PotentialKernelTable>) -> Result<f64> {
    let hitting = hitting_probabilities(dom, x)?;
    let weights = BoundaryKriging::new(dom, table)?.weights(x)?;
    Ok(max_abs_diff(&weights, &hitting))
}

/// [`dynkin_crosscheck`] at every interior point, sharing both
/// factorizations.
pub fn dynkin_crosscheck_all(dom: &LatticeDomain, table: &Arc<PotentialKernelTable>) -> Result<Vec<(LatticePoint, f64)>> {
    let hitting = HittingMatrix::new(dom)?;
    let kriging = BoundaryKriging::new(dom, table)?;
    dom.interior()
        .iter()
        .map(|&x| Ok((x, max_abs_diff(&kriging.weights(x)?, &hitting.row(x)?))))
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Krigs every interior point from `boundary_data` (aligned with
/// `dom.boundary()`) and returns the largest deviation from discrete
/// harmonicity, `|(1/4)Σ_{y~x} Ẑ(y) − Ẑ(x)|`, with data used at boundary
/// neighbours.
pub fn discrete_laplacian_of_kriged_surface(
    dom: &LatticeDomain,
    boundary_data: &[f64],
    table: &Arc<PotentialKernelTable>,
) -> Result<f64> {
    if boundary_data.len() != dom.boundary().len() {
        return Err(Error::InvalidInput(format!(
            "{} boundary values for {} boundary points",
            boundary_data.len(),
            dom.boundary().len()
        )));
    }
    let kriging = BoundaryKriging::new(dom, table)?;
    let kriged: Vec<f64> = dom
        .interior()
        .iter()
        .map(|&x| Ok(kriging.weights(x)?.iter().zip(boundary_data).map(|(w, z)| w * z).sum()))
        .collect::<Result<_>>()?;
    let value = |q: LatticePoint| match dom.interior_index(q) {
        Some(i) => kriged[i],
        None => boundary_data[dom.boundary_index(q).expect("validated domain")],
    };
    Ok(dom
        .interior()
        .iter()
        .enumerate()
        .map(|(i, p)| (p.neighbors().iter().map(|&q| value(q)).sum::<f64>() / 4.0 - kriged[i]).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::worker_rng;
    use rand::Rng;

    fn table() -> Arc<PotentialKernelTable> {
        Arc::new(PotentialKernelTable::new(16).unwrap())
    }

    /// Dense oracle: solve `h = P h` with `h = 1{y}` on the boundary by LU.
    fn dense_hitting(dom: &LatticeDomain, x: LatticePoint) -> Vec<f64> {
        let n = dom.interior().len();
        let mut a = DMatrix::<f64>::identity(n, n);
        let mut rhs = DMatrix::<f64>::zeros(n, dom.boundary().len());
        for (i, p) in dom.interior().iter().enumerate() {
            for q in p.neighbors() {
                match dom.interior_index(q) {
                    Some(j) => a[(i, j)] -= 0.25,
                    None => rhs[(i, dom.boundary_index(q).unwrap())] += 0.25,
                }
            }
        }
        let sol = a.lu().solve(&rhs).unwrap();
        sol.row(dom.interior_index(x).unwrap()).iter().copied().collect()
    }

    #[test]
    fn single_point_domain() {
        let o = LatticePoint::ORIGIN;
        let dom = LatticeDomain::new([o], o.neighbors()).unwrap();
        let h = hitting_probabilities(&dom, o).unwrap();
        assert!(h.iter().all(|p| (p - 0.25).abs() < 1e-15));
        assert!(dynkin_crosscheck(&dom, o, &table()).unwrap() < 1e-10);
    }

    #[test]
    fn three_by_three_against_dense_solve() {
        let dom = LatticeDomain::square_box(3).unwrap();
        let h = hitting_probabilities(&dom, LatticePoint::ORIGIN).unwrap();
        let oracle = dense_hitting(&dom, LatticePoint::ORIGIN);
        assert!(max_abs_diff(&h, &oracle) < 1e-14);
        let max = h.iter().copied().fold(0.0, f64::max);
        for (p, v) in dom.boundary().iter().zip(&h) {
            let axis = (p.s == 0) != (p.t == 0);
            if axis {
                assert!((v - max).abs() < 1e-15);
            } else {
                assert!(*v < max);
            }
            // corners are never hit
            if p.s.abs() == 2 && p.t.abs() == 2 {
                assert_eq!(*v, 0.0);
            }
        }
        assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rows_are_distributions() {
        let dom = LatticeDomain::random_simply_connected(40, &mut worker_rng(3, 0)).unwrap();
        let hm = HittingMatrix::new(&dom).unwrap();
        for &x in dom.interior() {
            let row = hm.row(x).unwrap();
            assert!(row.iter().all(|&p| p >= -1e-12));
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
        let off = dom.boundary()[0];
        assert!(matches!(hitting_probabilities(&dom, off), Err(Error::NotInterior(_))));
    }

    #[test]
    fn dynkin_on_boxes() {
        let t = table();
        let five = LatticeDomain::square_box(5).unwrap();
        assert!(dynkin_crosscheck(&five, LatticePoint::ORIGIN, &t).unwrap() < 1e-8);
        let nine = LatticeDomain::square_box(9).unwrap();
        assert!(dynkin_crosscheck(&nine, LatticePoint::new(2, 1), &t).unwrap() < 1e-8);
        for (_, dev) in dynkin_crosscheck_all(&LatticeDomain::rectangle(LatticePoint::new(0, 0), 4, 2).unwrap(), &t).unwrap() {
            assert!(dev < 1e-8);
        }
    }

    #[test]
    fn table_must_cover_domain() {
        let small = Arc::new(PotentialKernelTable::new(3).unwrap());
        assert!(BoundaryKriging::new(&LatticeDomain::square_box(5).unwrap(), &small).is_err());
    }

    #[test]
    fn kriged_surface_is_discrete_harmonic() {
        let t = table();
        let dom = LatticeDomain::square_box(5).unwrap();
        let constant = vec![3.5; dom.boundary().len()];
        assert!(discrete_laplacian_of_kriged_surface(&dom, &constant, &t).unwrap() < 1e-10);
        let linear: Vec<f64> = dom.boundary().iter().map(|p| p.s as f64).collect();
        assert!(discrete_laplacian_of_kriged_surface(&dom, &linear, &t).unwrap() < 1e-9);
        let kriging = BoundaryKriging::new(&dom, &t).unwrap();
        for &x in dom.interior() {
            let z: f64 = kriging.weights(x).unwrap().iter().zip(&linear).map(|(w, z)| w * z).sum();
            assert!((z - x.s as f64).abs() < 1e-9);
        }
        let mut rng = worker_rng(11, 0);
        let random: Vec<f64> = dom.boundary().iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        assert!(discrete_laplacian_of_kriged_surface(&dom, &random, &t).unwrap() < 1e-8);
    }
}
