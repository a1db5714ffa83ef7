//! Command-line front end: reproduction runs and verification suites.
//!
//! Every parameter can come from a flag or from a flat `key = value` config
//! file (`--config`); flags win. Keys are the flag names without the leading
//! dashes. The seed defaults to 0 and is never read from the environment.
//!
//! Exit status: 0 when every check passes, 1 when any check fails or a run
//! aborts, 2 on bad arguments.

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{ConfigFile, RunConfig};
pub use report::{emit_report, Artifact, Check, RunResults};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "dewijs", version, about = "De Wijs kriging reproduction and verification runs")]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Random seed (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of Monte Carlo worker streams (default 8).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Directory for CSV and report artifacts (default `dewijs-output`).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Subcommand, Debug)]
pub enum CommandArgs {
    /// Krig the centre cell of a square grid of unit cells.
    Table1(Table1Args),
    /// Sample Brownian exit points from the unit disk.
    Hitting(HittingArgs),
    /// Poisson-kernel normalization, harmonic identity and arc-segment kriging.
    PoissonCheck(PoissonCheckArgs),
    /// Kriging under the potential kernel against random-walk hitting probabilities.
    LatticeCheck(LatticeCheckArgs),
    /// Tabulate the random-walk potential kernel.
    Potential(PotentialArgs),
    /// Occupation-time Monte Carlo estimate of a potential-kernel inner product.
    Occupation(OccupationArgs),
}

#[derive(Args, Debug, Default)]
pub struct Table1Args {
    #[arg(long)]
    pub grid_half_width: Option<i64>,
    /// Largest admissible deviation from the published coefficients.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Chebyshev radius for the reported screening mass.
    #[arg(long)]
    pub screening_radius: Option<i64>,
}

#[derive(Args, Debug, Default)]
pub struct HittingArgs {
    /// Start point `x,y` inside the unit disk.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// `wos` or `euler`.
    #[arg(long)]
    pub method: Option<String>,
    /// Euler step (variance per coordinate).
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub bins: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct PoissonCheckArgs {
    /// Number of random (x0, y) pairs.
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Interior point for the arc-segment kriging run.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Comma-separated segment counts, each double the previous.
    #[arg(long)]
    pub segments: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct LatticeCheckArgs {
    /// Side of a square interior box centred at the origin.
    #[arg(long = "box")]
    pub box_size: Option<i64>,
    /// Domain CSV `s,t,role` instead of a box.
    #[arg(long)]
    pub domain_file: Option<PathBuf>,
    /// Check every interior point (default: only `--point`).
    #[arg(long)]
    pub all_interior: bool,
    /// Interior point `s,t` (default: the origin, or the first interior point).
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Additional random hole-free domains to check.
    #[arg(long)]
    pub random_domains: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct PotentialArgs {
    #[arg(long)]
    pub max_lag: Option<i64>,
}

#[derive(Args, Debug, Default)]
pub struct OccupationArgs {
    #[arg(long)]
    pub horizon: Option<u64>,
    #[arg(long)]
    pub walks: Option<usize>,
    /// Second end of the dipole `δ(0,0) − δ(s,t)` used for both contrasts.
    #[arg(long, allow_hyphen_values = true)]
    pub dipole: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Output goes to stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let config = match RunConfig::resolve(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let results = commands::execute(&config);
    for line in results.summary_lines() {
        println!("{line}");
    }
    if let Err(e) = emit_report(&results, &config.output) {
        eprintln!("error: writing artifacts to {}: {e}", config.output.display());
        return EXIT_FAILED;
    }
    if results.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("dewijs-cli-{name}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        dir
    }

    fn run_in(dir: &std::path::Path, args: &[&str]) -> i32 {
        let mut full = vec!["dewijs".to_string(), "--output".into(), dir.display().to_string()];
        full.extend(args.iter().map(|s| s.to_string()));
        run(full)
    }

    #[test]
    fn usage_errors_exit_2() {
        let dir = scratch("usage");
        assert_eq!(run_in(&dir, &[]), EXIT_USAGE);
        assert_eq!(run_in(&dir, &["no-such-command"]), EXIT_USAGE);
        assert_eq!(run_in(&dir, &["table1", "--tol", "-1"]), EXIT_USAGE);
        assert_eq!(run_in(&dir, &["hitting", "--x0", "2,0"]), EXIT_USAGE);
        assert_eq!(run_in(&dir, &["lattice-check", "--box", "0"]), EXIT_USAGE);
        assert_eq!(run(["dewijs", "--help"]), EXIT_OK);
        assert!(!dir.exists());
    }

    #[test]
    fn passing_and_failing_runs() {
        let dir = scratch("table1");
        assert_eq!(run_in(&dir, &["table1"]), EXIT_OK);
        let report = std::fs::read_to_string(dir.join("table1_report.txt")).unwrap();
        assert!(report.contains("PASS table1.max_abs_error"));
        assert!(!report.contains("FAILED"));
        assert_eq!(run_in(&dir, &["table1", "--tol", "1e-6"]), EXIT_FAILED);
        let report = std::fs::read_to_string(dir.join("table1_report.txt")).unwrap();
        assert!(report.contains("FAIL table1.max_abs_error"));
        assert!(report.ends_with("FAILED\n"));
        assert!(std::fs::read_to_string(dir.join("table1.csv")).unwrap().ends_with("# FAILED\n"));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn lattice_run_is_reproducible() {
        let (a, b) = (scratch("lattice-a"), scratch("lattice-b"));
        let args = ["--seed", "7", "lattice-check", "--box", "5", "--all-interior", "--random-domains", "2"];
        assert_eq!(run_in(&a, &args), EXIT_OK);
        assert_eq!(run_in(&b, &args), EXIT_OK);
        for f in ["lattice-check_report.txt", "lattice_domain.csv", "lattice_dynkin.csv"] {
            assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
        }
        std::fs::remove_dir_all(a).unwrap();
        std::fs::remove_dir_all(b).unwrap();
    }
}
