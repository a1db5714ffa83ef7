//! Ordinary (intrinsic) kriging under a generalized covariance.
//!
//! With sites `x₁…xₙ`, target `x₀` and generalized covariance `K`, the
//! weights minimize the variance of the error contrast `Σ ωᵢ δ_{xᵢ} − δ_{x₀}`
//! subject to `Σ ωᵢ = 1`. The constraint makes the error a contrast, so the
//! problem is well posed for intrinsic kernels. The weights and Lagrange
//! multiplier solve the bordered system
//!
//! ```text
//! [ Γ  1 ] [ ω ]   [ γ₀ ]
//! [ 1ᵀ 0 ] [ λ ] = [ 1  ]
//! ```
//!
//! where `Γᵢⱼ = K(xᵢ, xⱼ)` and `γ₀ᵢ = K(xᵢ, x₀)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, Dyn, LU};
use rayon::prelude::*;

use crate::kernels::Kernel;
use crate::{Error, LatticePoint, Point, Result};

/// Largest admissible relative residual of the bordered solve.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Reported prediction variances are clamped at this floor.
pub const VARIANCE_FLOOR: f64 = -1e-9;
/// Pivot ratio below which the factorization is treated as rank deficient.
const PIVOT_RATIO_TOL: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct KrigingProblem {
    pub sites: Vec<Point>,
    pub target: Point,
    pub kernel: Kernel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KrigingSolution {
    pub sites: Vec<Point>,
    pub target: Point,
    pub weights: Vec<f64>,
    pub lagrange: f64,
    /// `max(raw_variance, VARIANCE_FLOOR)`.
    pub prediction_variance: f64,
    pub raw_variance: f64,
    /// Set when the raw variance fell below the floor (usually a sign of
    /// kernel values that are not accurate enough).
    pub variance_clamped: bool,
    /// Relative residual `‖Ax − b‖∞ / (‖A‖∞‖x‖∞ + ‖b‖∞)` of the bordered solve.
    pub residual: f64,
}

impl KrigingSolution {
    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Kriged value `Σ ωᵢ zᵢ` for data at the sites.
    pub fn predict(&self, data: &[f64]) -> f64 {
        self.weights.iter().zip(data).map(|(w, z)| w * z).sum()
    }

    /// CSV `s,t,weight` (lattice-indexed sites).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,weight\n");
        for (p, w) in self.sites.iter().zip(&self.weights) {
            writeln!(out, "{},{},{}", p.x, p.y, fmt_sig(*w)).expect("writing to a String cannot fail");
        }
        out
    }
}

/// Twelve significant digits in scientific notation.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

/// A factorized bordered system for a fixed set of sites; reusable across
/// targets.
pub struct OrdinaryKriging {
    sites: Vec<Point>,
    kernel: Option<Kernel>,
    bordered: DMatrix<f64>,
    lu: LU<f64, Dyn, Dyn>,
}

impl std::fmt::Debug for OrdinaryKriging {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrdinaryKriging")
            .field("sites", &self.sites.len())
            .field("kernel", &self.kernel)
            .finish()
    }
}

impl OrdinaryKriging {
    /// Assembles `Γ` from the kernel (in parallel over rows) and factorizes.
    pub fn new(sites: Vec<Point>, kernel: Kernel) -> Result<Self> {
        check_distinct(&sites)?;
        let n = sites.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| kernel.gen_cov(sites[i], sites[j])).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?;
        let gram = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let mut ok = Self::from_gram(gram)?;
        ok.sites = sites;
        ok.kernel = Some(kernel);
        Ok(ok)
    }

    /// Factorizes a precomputed symmetric generalized-covariance matrix.
    pub fn from_gram(gram: DMatrix<f64>) -> Result<Self> {
        let n = gram.nrows();
        if n == 0 || gram.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "Gram matrix must be square and nonempty, got {}x{}",
                gram.nrows(),
                gram.ncols()
            )));
        }
        let mut bordered = DMatrix::zeros(n + 1, n + 1);
        bordered.view_mut((0, 0), (n, n)).copy_from(&gram);
        for i in 0..n {
            bordered[(i, n)] = 1.0;
            bordered[(n, i)] = 1.0;
        }
        let lu = bordered.clone().lu();
        let u = lu.u();
        let diag = u.diagonal();
        let max = diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let min = diag.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if !(max > 0.0) || min / max < PIVOT_RATIO_TOL {
            return Err(Error::SingularSystem(format!(
                "pivot ratio {:.3e} below {PIVOT_RATIO_TOL:e}",
                if max > 0.0 { min / max } else { 0.0 }
            )));
        }
        Ok(OrdinaryKriging {
            sites: Vec::new(),
            kernel: None,
            bordered,
            lu,
        })
    }

    pub fn len(&self) -> usize {
        self.bordered.nrows() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Solves for a target location (requires construction via [`new`](Self::new)).
    pub fn solve(&self, target: Point) -> Result<KrigingSolution> {
        let kernel = self
            .kernel
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("solver built from a bare Gram matrix needs solve_rhs".into()))?;
        let rhs: Vec<f64> = self
            .sites
            .iter()
            .map(|&p| kernel.gen_cov(p, target))
            .collect::<Result<_>>()?;
        let target_self = kernel.gen_cov(target, target)?;
        let mut sol = self.solve_rhs(&rhs, target_self)?;
        sol.sites = self.sites.clone();
        sol.target = target;
        Ok(sol)
    }

    /// Solves with an explicit site-to-target vector `γ₀` and target
    /// self-covariance `K(x₀, x₀)`.
    pub fn solve_rhs(&self, rhs: &[f64], target_self: f64) -> Result<KrigingSolution> {
        let n = self.len();
        if rhs.len() != n {
            return Err(Error::InvalidInput(format!("rhs has {} entries, expected {n}", rhs.len())));
        }
        let mut b = DVector::zeros(n + 1);
        b.rows_mut(0, n).copy_from_slice(rhs);
        b[n] = 1.0;
        let x = self
            .lu
            .solve(&b)
            .ok_or_else(|| Error::SingularSystem("LU solve failed".into()))?;
        let r = &self.bordered * &x - &b;
        let residual = r.amax() / (self.bordered.amax() * (n + 1) as f64 * x.amax() + b.amax());
        if !(residual <= RESIDUAL_TOL) {
            return Err(Error::SingularSystem(format!("relative residual {residual:.3e}")));
        }
        let weights: Vec<f64> = x.rows(0, n).iter().copied().collect();
        let gram = self.bordered.view((0, 0), (n, n));
        let w = DVector::from_column_slice(&weights);
        let quad = w.dot(&(gram * &w));
        let cross: f64 = weights.iter().zip(rhs).map(|(a, b)| a * b).sum();
        let raw_variance = quad - 2.0 * cross + target_self;
        Ok(KrigingSolution {
            sites: Vec::new(),
            target: Point::ORIGIN,
            weights,
            lagrange: x[n],
            prediction_variance: raw_variance.max(VARIANCE_FLOOR),
            raw_variance,
            variance_clamped: raw_variance < VARIANCE_FLOOR,
            residual,
        })
    }
}

fn check_distinct(sites: &[Point]) -> Result<()> {
    if sites.is_empty() {
        return Err(Error::InvalidInput("kriging needs at least one site".into()));
    }
    let mut sorted: Vec<Point> = sites.to_vec();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::SingularSystem(format!("duplicate site {}", w[0])));
    }
    Ok(())
}

/// Solves one ordinary kriging problem.
pub fn solve_ordinary_kriging(problem: &KrigingProblem) -> Result<KrigingSolution> {
    OrdinaryKriging::new(problem.sites.clone(), problem.kernel.clone())?.solve(problem.target)
}

/// `Σ |ω|` over sites at Chebyshev distance greater than `radius` from the
/// target.
pub fn screening_report(sol: &KrigingSolution, radius: i64) -> f64 {
    let r = radius as f64;
    sol.sites
        .iter()
        .zip(&sol.weights)
        .filter(|(p, _)| (p.x - sol.target.x).abs().max((p.y - sol.target.y).abs()) > r)
        .map(|(_, w)| w.abs())
        .sum()
}

/// Published three-decimal coefficients `(s, t, ω)` for `0 <= s <= t`, `t >= 1`.
pub const TABLE1_REFERENCE: [(i64, i64, f64); 44] = {
    const ROW0: [f64; 8] = [0.342, -0.075, 0.017, -0.004, 0.001, 0.0, 0.0, 0.0];
    const ROW1: [f64; 8] = [-0.032, -0.001, 0.002, -0.001, 0.0, 0.0, 0.0, 0.0];
    const ROW2: [f64; 7] = [0.002, -0.001, 0.0, 0.0, 0.0, 0.0, 0.0];
    let mut out = [(0i64, 0i64, 0.0f64); 44];
    let mut k = 0;
    let mut s = 0;
    while s <= 8 {
        let mut t = if s == 0 { 1 } else { s };
        while t <= 8 {
            let v = match s {
                0 => ROW0[(t - 1) as usize],
                1 => ROW1[(t - 1) as usize],
                2 => ROW2[(t - 2) as usize],
                _ => 0.0,
            };
            out[k] = (s, t, v);
            k += 1;
            t += 1;
        }
        s += 1;
    }
    out
};

#[derive(Clone, Debug)]
pub struct Table1Entry {
    pub s: i64,
    pub t: i64,
    /// Orbit-averaged weight.
    pub weight: f64,
    /// Number of grid sites in the dihedral orbit.
    pub orbit_size: usize,
    pub reference: Option<f64>,
}

/// Cell-averaged kriging of the centre cell from the rest of a square grid.
#[derive(Clone, Debug)]
pub struct Table1 {
    pub half_width: i64,
    pub solution: KrigingSolution,
    pub entries: Vec<Table1Entry>,
    /// Largest spread of weights within a dihedral orbit, before folding.
    pub max_orbit_spread: f64,
}

impl Table1 {
    /// Largest `|ω − reference|` over entries that have a reference value.
    pub fn max_abs_error(&self) -> f64 {
        self.entries
            .iter()
            .filter_map(|e| e.reference.map(|r| (e.weight - r).abs()))
            .fold(0.0, f64::max)
    }

    pub fn entry(&self, s: i64, t: i64) -> Option<&Table1Entry> {
        let (a, b) = (s.abs().min(t.abs()), s.abs().max(t.abs()));
        self.entries.iter().find(|e| e.s == a && e.t == b)
    }

    /// CSV of the canonical entries.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,weight,weight_3dp,reference,abs_error\n");
        for e in &self.entries {
            let (r, err) = match e.reference {
                Some(r) => (format!("{r:.3}"), fmt_sig((e.weight - r).abs())),
                None => (String::new(), String::new()),
            };
            writeln!(out, "{},{},{},{:.3},{r},{err}", e.s, e.t, fmt_sig(e.weight), round3(e.weight))
                .expect("writing to a String cannot fail");
        }
        out
    }

    /// Upper-triangular layout: rows `s`, columns `t`, three decimals, with
    /// a `max_abs_error` footer.
    pub fn report(&self) -> String {
        let h = self.half_width;
        let mut out = String::from("s\\t");
        for t in 1..=h {
            write!(out, "{t:>9}").unwrap();
        }
        out.push('\n');
        for s in 0..=h {
            write!(out, "{s:<3}").unwrap();
            for t in 1..=h {
                match self.entries.iter().find(|e| e.s == s && e.t == t) {
                    Some(e) => write!(out, "{:>9.3}", round3(e.weight)).unwrap(),
                    None => out.push_str(&" ".repeat(9)),
                }
            }
            out.push('\n');
        }
        writeln!(out, "max_abs_error,{}", fmt_sig(self.max_abs_error())).unwrap();
        out
    }
}

fn round3(x: f64) -> f64 {
    let r = (x * 1000.0).round() / 1000.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Table 1 setting: 17×17 grid of unit cells minus the centre.
pub fn reproduce_table1() -> Result<Table1> {
    table1_with_half_width(8)
}

/// Kriges the centre cell of a `(2h+1)²` grid from the other cells under the
/// cell-averaged log kernel, and folds the weights by dihedral symmetry.
pub fn table1_with_half_width(half_width: i64) -> Result<Table1> {
    if half_width < 1 {
        return Err(Error::InvalidInput("grid half-width must be at least 1".into()));
    }
    let h = half_width;
    crate::kernels::cell::prefill(2 * h)?;
    let sites: Vec<Point> = (-h..=h)
        .flat_map(|s| (-h..=h).map(move |t| LatticePoint::new(s, t)))
        .filter(|&p| p != LatticePoint::ORIGIN)
        .map(LatticePoint::to_point)
        .collect();
    let solution = OrdinaryKriging::new(sites, Kernel::CellLog)?.solve(Point::ORIGIN)?;

    let mut orbits: BTreeMap<(i64, i64), Vec<f64>> = BTreeMap::new();
    for (p, &w) in solution.sites.iter().zip(&solution.weights) {
        let (a, b) = ((p.x as i64).abs(), (p.y as i64).abs());
        orbits.entry((a.min(b), a.max(b))).or_default().push(w);
    }
    let mut max_orbit_spread = 0.0f64;
    let entries = orbits
        .into_iter()
        .map(|((s, t), ws)| {
            let lo = ws.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ws.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            max_orbit_spread = max_orbit_spread.max(hi - lo);
            let reference = TABLE1_REFERENCE
                .iter()
                .find(|&&(rs, rt, _)| rs == s && rt == t)
                .map(|r| r.2);
            Table1Entry {
                s,
                t,
                weight: ws.iter().sum::<f64>() / ws.len() as f64,
                orbit_size: ws.len(),
                reference,
            }
        })
        .collect();
    Ok(Table1 {
        half_width: h,
        solution,
        entries,
        max_orbit_spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::PotentialKernelTable;
    use std::sync::Arc;

    fn lattice_kernel() -> Kernel {
        Kernel::LatticePotential(Arc::new(PotentialKernelTable::new(16).unwrap()))
    }

    #[test]
    fn symmetric_pair_gets_equal_weights() {
        for kernel in [Kernel::Log, Kernel::bessel_k0(0.5).unwrap(), Kernel::CellLog, lattice_kernel()] {
            let p = KrigingProblem {
                sites: vec![Point::new(-2.0, 1.0), Point::new(2.0, -1.0)],
                target: Point::ORIGIN,
                kernel,
            };
            let sol = solve_ordinary_kriging(&p).unwrap();
            assert!((sol.weights[0] - 0.5).abs() < 1e-12 && (sol.weights[1] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_interpolation_at_a_site() {
        let sites: Vec<Point> = [(0, 0), (3, 1), (-2, 2), (1, -4)]
            .iter()
            .map(|&(s, t)| Point::new(s as f64, t as f64))
            .collect();
        for kernel in [lattice_kernel(), Kernel::CellLog] {
            let ok = OrdinaryKriging::new(sites.clone(), kernel).unwrap();
            let sol = ok.solve(sites[2]).unwrap();
            for (i, w) in sol.weights.iter().enumerate() {
                let want = if i == 2 { 1.0 } else { 0.0 };
                assert!((w - want).abs() < 1e-9);
            }
            assert!(sol.prediction_variance.abs() < 1e-9);
        }
    }

    #[test]
    fn duplicate_sites_are_singular() {
        let p = KrigingProblem {
            sites: vec![Point::new(1.0, 0.0), Point::new(1.0, 0.0)],
            target: Point::ORIGIN,
            kernel: Kernel::Log,
        };
        assert!(matches!(solve_ordinary_kriging(&p), Err(Error::SingularSystem(_))));
    }

    #[test]
    fn rank_deficient_gram_is_singular() {
        // a constant Gram matrix makes the bordered system singular
        let gram = DMatrix::from_element(3, 3, 2.0);
        assert!(matches!(OrdinaryKriging::from_gram(gram), Err(Error::SingularSystem(_))));
    }

    #[test]
    fn single_site_takes_all_weight() {
        let sol = OrdinaryKriging::new(vec![Point::new(2.0, 0.0)], Kernel::Log)
            .unwrap()
            .solve(Point::ORIGIN)
            .unwrap();
        assert_eq!(sol.weights, vec![1.0]);
        // γ(0)=0 convention: 0 − 2·(−ln 2) + 0
        assert!((sol.raw_variance - 2.0 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn table1_small_grid_sanity() {
        let t = table1_with_half_width(2).unwrap();
        assert!((t.solution.weight_sum() - 1.0).abs() < 1e-10);
        assert!(t.max_orbit_spread < 1e-8);
        assert_eq!(t.entries.iter().map(|e| e.orbit_size).sum::<usize>(), 24);
        assert!(t.entry(0, 1).unwrap().weight > 0.3);
    }

    #[test]
    fn table1_reference_layout() {
        assert_eq!(TABLE1_REFERENCE[0], (0, 1, 0.342));
        assert_eq!(TABLE1_REFERENCE[8], (1, 1, -0.032));
        assert_eq!(TABLE1_REFERENCE[16], (2, 2, 0.002));
        assert_eq!(TABLE1_REFERENCE[43], (8, 8, 0.0));
    }

    #[test]
    fn screening_edge_radii() {
        let t = table1_with_half_width(3).unwrap();
        let all: f64 = t.solution.weights.iter().map(|w| w.abs()).sum();
        assert_eq!(screening_report(&t.solution, 0), all);
        assert!(all >= 1.0);
        assert_eq!(screening_report(&t.solution, 3), 0.0);
    }

    #[test]
    fn csv_export() {
        let t = table1_with_half_width(1).unwrap();
        let csv = t.solution.to_csv();
        assert!(csv.starts_with("s,t,weight\n"));
        assert_eq!(csv.lines().count(), 9);
        assert!(t.report().contains("max_abs_error,"));
    }
}
