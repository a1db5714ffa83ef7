//! The six runs behind the subcommands.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use rand::Rng;

use super::config::{CommandConfig, RunConfig};
use super::report::{Artifact, Check, RunResults};
use crate::continuum::{
    chi_square, chi_square_quantile, discretized_circle_kriging, expected_counts, harmonic_identity_check,
    histogram_csv, poisson_normalization, sample_hitting, HittingDistribution, Method,
};
use crate::kriging::{fmt_sig, screening_report, table1_with_half_width};
use crate::lattice::{
    discrete_laplacian_of_kriged_surface, dynkin_crosscheck, dynkin_crosscheck_all, occupation_identity_check,
    HittingMatrix, LatticeDomain, PotentialKernelTable, OCCUPATION_CONSTANT,
};
use crate::rng::worker_rng;
use crate::{Contrast, LatticePoint, Point, Result};

pub fn execute(config: &RunConfig) -> RunResults {
    let mut r = RunResults::new(config.command.name());
    r.info("seed", config.seed);
    r.info("workers", config.workers);
    let outcome = match &config.command {
        CommandConfig::Table1 {
            grid_half_width,
            tol,
            screening_radius,
        } => table1(&mut r, *grid_half_width, *tol, *screening_radius),
        CommandConfig::Hitting { x0, n, method, bins } => hitting(&mut r, config, *x0, *n, *method, *bins),
        CommandConfig::PoissonCheck { pairs, x0, segments } => poisson_check(&mut r, config, *pairs, *x0, segments),
        CommandConfig::LatticeCheck {
            domain,
            label,
            all_interior,
            point,
            random_domains,
            tol,
        } => lattice_check(&mut r, config, domain, label, *all_interior, *point, *random_domains, *tol),
        CommandConfig::Potential { max_lag } => potential(&mut r, *max_lag),
        CommandConfig::Occupation {
            horizon,
            walks,
            dipole,
            tol,
        } => occupation(&mut r, config, *horizon, *walks, *dipole, *tol),
    };
    if let Err(e) = outcome {
        let name = format!("{}.run", r.command);
        r.check(Check::errored(name, e));
    }
    r
}

fn table1(r: &mut RunResults, h: i64, tol: f64, radius: i64) -> Result<()> {
    let t = table1_with_half_width(h)?;
    r.info("grid_half_width", h);
    r.info("sites", t.solution.weights.len());
    r.info("lagrange", fmt_sig(t.solution.lagrange));
    r.info("prediction_variance", fmt_sig(t.solution.prediction_variance));
    r.info(&format!("screening_mass_beyond_radius_{radius}"), fmt_sig(screening_report(&t.solution, radius)));
    r.artifacts.push(Artifact::from_csv("table1.csv", &t.to_csv()));
    r.artifacts.push(Artifact::from_csv("table1_weights.csv", &t.solution.to_csv()));
    r.artifacts.push(Artifact::from_csv("table1_layout.txt", &t.report()));
    r.check(Check::at_most("table1.max_abs_error", t.max_abs_error(), tol));
    r.check(Check::below("table1.weight_sum_error", (t.solution.weight_sum() - 1.0).abs(), 1e-10));
    r.check(Check::below("table1.orbit_spread", t.max_orbit_spread, 1e-8));
    Ok(())
}

fn hitting(r: &mut RunResults, c: &RunConfig, x0: Point, n: usize, method: Method, bins: usize) -> Result<()> {
    let dist = sample_hitting(x0, n, method, c.seed, c.workers)?;
    let counts = dist.histogram(bins);
    let expected = expected_counts(x0, bins, n)?;
    let stat = chi_square(&counts, &expected);
    let quantile = chi_square_quantile(bins - 1, 0.999);
    r.info("method", method.name());
    if let Method::Euler { step } = method {
        r.info("step", fmt_sig(step));
    }
    r.info("x0", format!("{},{}", x0.x, x0.y));
    r.info("n", n);
    if let HittingDistribution::Empirical { capped, .. } = &dist {
        r.info("capped_walks", capped);
    }
    r.artifacts.push(Artifact::from_csv("hitting_histogram.csv", &histogram_csv(&counts, &expected)));
    r.check(Check::below("hitting.chi_square", stat, quantile));
    Ok(())
}

fn random_interior(rng: &mut impl Rng) -> Point {
    let radius = 0.95 * rng.random::<f64>().sqrt();
    Point::on_unit_circle(rng.random_range(0.0..TAU)).scale(radius)
}

fn poisson_check(r: &mut RunResults, c: &RunConfig, pairs: usize, x0: Point, segments: &[usize]) -> Result<()> {
    let mut rng = worker_rng(c.seed, 0);
    let mut rows = Vec::with_capacity(pairs);
    let (mut worst_norm, mut worst_identity) = (0.0f64, 0.0f64);
    for i in 0..pairs {
        let p = random_interior(&mut rng);
        let scale = if i % 2 == 0 { 1.0 } else { rng.random_range(1.0..4.0) };
        let y = Point::on_unit_circle(rng.random_range(0.0..TAU)).scale(scale);
        let norm_err = (poisson_normalization(p)? - 1.0).abs();
        let identity = harmonic_identity_check(p, y)?;
        worst_norm = worst_norm.max(norm_err);
        worst_identity = worst_identity.max(identity);
        rows.push(format!(
            "{},{},{},{},{},{}",
            fmt_sig(p.x),
            fmt_sig(p.y),
            fmt_sig(y.x),
            fmt_sig(y.y),
            fmt_sig(norm_err),
            fmt_sig(identity)
        ));
    }
    r.artifacts.push(Artifact {
        file_name: "poisson_pairs.csv".into(),
        header: "x0_x,x0_y,y_x,y_y,normalization_error,identity_residual".into(),
        rows,
    });
    r.check(Check::at_most("poisson.normalization_error", worst_norm, 1e-10));
    r.check(Check::below("poisson.harmonic_identity", worst_identity, 1e-6));

    let mut errors = Vec::with_capacity(segments.len());
    let mut last = None;
    for &n in segments {
        let ck = discretized_circle_kriging(x0, n)?;
        r.check(Check::at_most(
            format!("poisson.segments_{n}.weight_sum_error"),
            (ck.solution.weight_sum() - 1.0).abs(),
            1e-10,
        ));
        errors.push((n, ck.max_error()));
        last = Some(ck);
    }
    for w in errors.windows(2) {
        r.check(Check::at_least(
            format!("poisson.convergence_{}_{}", w[0].0, w[1].0),
            w[0].1 / w[1].1,
            1.8,
        ));
    }
    r.artifacts.push(Artifact {
        file_name: "circle_convergence.csv".into(),
        header: "segments,max_error".into(),
        rows: errors.iter().map(|(n, e)| format!("{n},{}", fmt_sig(*e))).collect(),
    });
    if let Some(ck) = last {
        r.artifacts.push(Artifact::from_csv("circle_kriging.csv", &ck.to_csv()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn lattice_check(
    r: &mut RunResults,
    c: &RunConfig,
    domain: &LatticeDomain,
    label: &str,
    all_interior: bool,
    point: LatticePoint,
    random_domains: usize,
    tol: f64,
) -> Result<()> {
    let mut domains = vec![(label.to_string(), domain.clone(), all_interior)];
    for i in 0..random_domains {
        let mut rng = worker_rng(c.seed, i as u64);
        let size = 10 + 5 * (i % 8);
        domains.push((format!("random{i}"), LatticeDomain::random_simply_connected(size, &mut rng)?, true));
    }
    let lag = domains.iter().map(|d| d.1.diameter()).max().unwrap_or(1);
    let table = Arc::new(PotentialKernelTable::new(lag)?);
    r.info("potential_table_max_lag", lag);

    let mut rows = Vec::new();
    for (name, dom, all) in &domains {
        let devs = if *all {
            dynkin_crosscheck_all(dom, &table)?
        } else {
            vec![(point, dynkin_crosscheck(dom, point, &table)?)]
        };
        let worst = devs.iter().map(|d| d.1).fold(0.0, f64::max);
        rows.extend(devs.iter().map(|(p, d)| format!("{name},{},{},{}", p.s, p.t, fmt_sig(*d))));
        r.check(Check::below(format!("lattice.dynkin.{name}"), worst, tol));

        let hm = HittingMatrix::new(dom)?;
        let m = hm.matrix();
        let sum_err = m.row_iter().map(|row| (row.sum() - 1.0).abs()).fold(0.0, f64::max);
        let min = m.iter().copied().fold(0.0, f64::min);
        r.check(Check::at_most(format!("lattice.hitting_sum.{name}"), sum_err, 1e-10));
        r.check(Check::at_most(format!("lattice.hitting_negativity.{name}"), (-min).max(0.0), 1e-12));
    }

    let mut rng = worker_rng(c.seed, u64::MAX);
    let data: Vec<f64> = domain.boundary().iter().map(|_| rng.random_range(-1.0..1.0)).collect();
    let residual = discrete_laplacian_of_kriged_surface(domain, &data, &table)?;
    r.check(Check::below(format!("lattice.kriged_laplacian.{label}"), residual, tol));

    r.artifacts.push(Artifact::from_csv("lattice_domain.csv", &domain.to_csv()));
    r.artifacts.push(Artifact {
        file_name: "lattice_dynkin.csv".into(),
        header: "domain,s,t,max_deviation".into(),
        rows,
    });
    Ok(())
}

fn potential(r: &mut RunResults, max_lag: i64) -> Result<()> {
    let table = PotentialKernelTable::new(max_lag)?;
    let a = |s, t| table.get(s, t).expect("within table");
    r.check(Check::at_most("potential.a(1,0)", (a(1, 0) - 1.0).abs(), 1e-8));
    r.check(Check::at_most("potential.a(1,1)", (a(1, 1) - 4.0 / PI).abs(), 1e-8));
    r.check(Check::at_most("potential.a(2,0)", (a(2, 0) - (4.0 - 8.0 / PI)).abs(), 1e-8));
    r.check(Check::below("potential.laplacian_residual", table.laplacian_residual(), 1e-10));
    let l = max_lag as f64;
    r.info("log_offset_at_max_lag", fmt_sig(a(max_lag, 0) - 2.0 / PI * l.ln()));
    r.artifacts.push(Artifact::from_csv("potential_kernel.csv", &table.to_csv()));
    Ok(())
}

fn occupation(r: &mut RunResults, c: &RunConfig, horizon: u64, walks: usize, dipole: LatticePoint, tol: f64) -> Result<()> {
    let sigma = Contrast::lattice_dipole(LatticePoint::ORIGIN, dipole);
    let rep = occupation_identity_check(&sigma, &sigma, horizon, walks, c.seed, c.workers)?;
    let calibrated = rep.calibrated_constant.map_or_else(|| "undefined".to_string(), fmt_sig);
    r.info("dipole", format!("{},{}", dipole.s, dipole.t));
    r.info("horizon", horizon);
    r.info("walks", walks);
    r.info("estimate", fmt_sig(rep.estimate));
    r.info("std_error", fmt_sig(rep.std_error));
    r.info("kernel_value", fmt_sig(rep.kernel_value));
    r.info("theoretical_constant", fmt_sig(OCCUPATION_CONSTANT));
    r.info("calibrated_constant", &calibrated);
    r.artifacts.push(Artifact {
        file_name: "occupation.csv".into(),
        header: "horizon,walks,estimate,std_error,kernel_value,calibrated_constant,relative_error".into(),
        rows: vec![format!(
            "{horizon},{walks},{},{},{},{calibrated},{}",
            fmt_sig(rep.estimate),
            fmt_sig(rep.std_error),
            fmt_sig(rep.kernel_value),
            fmt_sig(rep.relative_error)
        )],
    });
    r.check(Check::below("occupation.relative_error", rep.relative_error, tol));
    Ok(())
}
