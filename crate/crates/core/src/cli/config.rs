//! Flag and config-file resolution into a validated run configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use super::{Cli, CommandArgs};
use crate::continuum::Method;
use crate::lattice::{LatticeDomain, MAX_TABLE_LAG, MIN_HORIZON, MIN_WALKS};
use crate::rng::DEFAULT_WORKERS;
use crate::{LatticePoint, Point};

const KNOWN_KEYS: &[&str] = &[
    "seed",
    "workers",
    "output",
    "grid-half-width",
    "tol",
    "screening-radius",
    "x0",
    "n",
    "method",
    "step",
    "bins",
    "pairs",
    "segments",
    "box",
    "domain-file",
    "all-interior",
    "point",
    "random-domains",
    "max-lag",
    "horizon",
    "walks",
    "dipole",
];

/// Flat `key = value` lines; `#` starts a comment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected `key = value`, got `{raw}`", i + 1))?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(format!("config line {}: unknown key `{key}`", i + 1));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("reading config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Flag value if given, else the file value, else `default`.
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(s) => s.parse().map_err(|_| format!("invalid value `{s}` for `{key}`")),
            None => Ok(default),
        }
    }

    fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, String> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.get(key)
            .map(|s| s.parse().map_err(|_| format!("invalid value `{s}` for `{key}`")))
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CommandConfig {
    Table1 {
        grid_half_width: i64,
        tol: f64,
        screening_radius: i64,
    },
    Hitting {
        x0: Point,
        n: usize,
        method: Method,
        bins: usize,
    },
    PoissonCheck {
        pairs: usize,
        x0: Point,
        segments: Vec<usize>,
    },
    LatticeCheck {
        domain: LatticeDomain,
        label: String,
        all_interior: bool,
        point: LatticePoint,
        random_domains: usize,
        tol: f64,
    },
    Potential {
        max_lag: i64,
    },
    Occupation {
        horizon: u64,
        walks: usize,
        dipole: LatticePoint,
        tol: f64,
    },
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Table1 { .. } => "table1",
            CommandConfig::Hitting { .. } => "hitting",
            CommandConfig::PoissonCheck { .. } => "poisson-check",
            CommandConfig::LatticeCheck { .. } => "lattice-check",
            CommandConfig::Potential { .. } => "potential",
            CommandConfig::Occupation { .. } => "occupation",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandConfig,
    pub seed: u64,
    pub workers: usize,
    pub output: PathBuf,
}

fn parse_pair<T: FromStr>(s: &str, what: &str) -> Result<(T, T), String> {
    let bad = || format!("invalid {what} `{s}`, expected `a,b`");
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = parse_pair::<f64>(s, "point")?;
    Ok(Point::new(x, y))
}

fn parse_lattice_point(s: &str) -> Result<LatticePoint, String> {
    let (a, b) = parse_pair::<i64>(s, "lattice point")?;
    Ok(LatticePoint::new(a, b))
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn interior_point(p: Point) -> Result<Point, String> {
    require(p.norm() < 1.0, || format!("x0 {p} must lie inside the unit disk"))?;
    Ok(p)
}

impl RunConfig {
    pub fn resolve(cli: Cli) -> Result<Self, String> {
        let file = match &cli.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let seed = file.pick(cli.seed, "seed", 0u64)?;
        let workers = file.pick(cli.workers, "workers", DEFAULT_WORKERS)?;
        require(workers >= 1, || "workers must be at least 1".into())?;
        let output = file.pick(cli.output, "output", PathBuf::from("dewijs-output"))?;

        let command = match cli.command {
            CommandArgs::Table1(a) => {
                let grid_half_width = file.pick(a.grid_half_width, "grid-half-width", 8)?;
                let tol = file.pick(a.tol, "tol", 1e-3)?;
                let screening_radius = file.pick(a.screening_radius, "screening-radius", 2)?;
                require((1..=32).contains(&grid_half_width), || {
                    format!("grid-half-width must lie in 1..=32, got {grid_half_width}")
                })?;
                require(tol > 0.0, || format!("tol must be positive, got {tol}"))?;
                require(screening_radius >= 0, || "screening-radius must be nonnegative".into())?;
                CommandConfig::Table1 {
                    grid_half_width,
                    tol,
                    screening_radius,
                }
            }
            CommandArgs::Hitting(a) => {
                let x0 = interior_point(parse_point(&file.pick(a.x0, "x0", "0.5,0".to_string())?)?)?;
                let n = file.pick(a.n, "n", 1_000_000usize)?;
                let step = file.pick(a.step, "step", 1e-4)?;
                let bins = file.pick(a.bins, "bins", 36usize)?;
                let method = match file.pick(a.method, "method", "wos".to_string())?.as_str() {
                    "wos" => Method::WalkOnSpheres,
                    "euler" => {
                        require(step > 0.0 && step <= 1e-3, || format!("step must lie in (0, 1e-3], got {step}"))?;
                        Method::Euler { step }
                    }
                    other => return Err(format!("method must be `wos` or `euler`, got `{other}`")),
                };
                require(n >= 1, || "n must be at least 1".into())?;
                require(bins >= 2, || "bins must be at least 2".into())?;
                CommandConfig::Hitting { x0, n, method, bins }
            }
            CommandArgs::PoissonCheck(a) => {
                let pairs = file.pick(a.pairs, "pairs", 50usize)?;
                let x0 = interior_point(parse_point(&file.pick(a.x0, "x0", "0.5,0".to_string())?)?)?;
                let segments: Vec<usize> = file
                    .pick(a.segments, "segments", "90,180,360".to_string())?
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| format!("invalid segment count `{s}`")))
                    .collect::<Result<_, _>>()?;
                require(!segments.is_empty() && segments.iter().all(|&n| (8..=4096).contains(&n)), || {
                    "segment counts must lie in 8..=4096".into()
                })?;
                CommandConfig::PoissonCheck { pairs, x0, segments }
            }
            CommandArgs::LatticeCheck(a) => {
                let domain_file = file.pick_opt(a.domain_file, "domain-file")?;
                let all_interior = a.all_interior || file.pick(None, "all-interior", false)?;
                let point = file.pick_opt(a.point, "point")?.map(|s| parse_lattice_point(&s)).transpose()?;
                let random_domains = file.pick(a.random_domains, "random-domains", 0usize)?;
                let tol = file.pick(a.tol, "tol", 1e-8)?;
                let (domain, label) = match domain_file {
                    Some(path) => {
                        let text = std::fs::read_to_string(&path)
                            .map_err(|e| format!("reading domain {}: {e}", path.display()))?;
                        let d = LatticeDomain::from_csv(&text).map_err(|e| e.to_string())?;
                        (d, path.display().to_string())
                    }
                    None => {
                        let k = file.pick(a.box_size, "box", 5i64)?;
                        require((1..=MAX_TABLE_LAG - 2).contains(&k), || {
                            format!("box must lie in 1..={}, got {k}", MAX_TABLE_LAG - 2)
                        })?;
                        (LatticeDomain::square_box(k).map_err(|e| e.to_string())?, format!("box{k}"))
                    }
                };
                require(domain.diameter() <= MAX_TABLE_LAG, || {
                    format!("domain diameter {} exceeds {MAX_TABLE_LAG}", domain.diameter())
                })?;
                let point = match point {
                    Some(p) => {
                        require(domain.interior_index(p).is_some(), || format!("point {p} is not interior"))?;
                        p
                    }
                    None if domain.interior_index(LatticePoint::ORIGIN).is_some() => LatticePoint::ORIGIN,
                    None => domain.interior()[0],
                };
                require(tol > 0.0, || "tol must be positive".into())?;
                CommandConfig::LatticeCheck {
                    domain,
                    label,
                    all_interior,
                    point,
                    random_domains,
                    tol,
                }
            }
            CommandArgs::Potential(a) => {
                let max_lag = file.pick(a.max_lag, "max-lag", MAX_TABLE_LAG)?;
                require((2..=MAX_TABLE_LAG).contains(&max_lag), || {
                    format!("max-lag must lie in 2..={MAX_TABLE_LAG}, got {max_lag}")
                })?;
                CommandConfig::Potential { max_lag }
            }
            CommandArgs::Occupation(a) => {
                let horizon = file.pick(a.horizon, "horizon", 100_000u64)?;
                let walks = file.pick(a.walks, "walks", 1_000_000usize)?;
                let dipole = parse_lattice_point(&file.pick(a.dipole, "dipole", "1,0".to_string())?)?;
                let tol = file.pick(a.tol, "tol", 0.05)?;
                require(horizon >= MIN_HORIZON, || format!("horizon must be at least {MIN_HORIZON}"))?;
                require(walks >= MIN_WALKS, || format!("walks must be at least {MIN_WALKS}"))?;
                require(dipole != LatticePoint::ORIGIN, || "dipole end must differ from the origin".into())?;
                require(dipole.s.abs().max(dipole.t.abs()) <= MAX_TABLE_LAG / 2, || "dipole end too far".into())?;
                require(tol > 0.0, || "tol must be positive".into())?;
                CommandConfig::Occupation {
                    horizon,
                    walks,
                    dipole,
                    tol,
                }
            }
        };
        Ok(RunConfig {
            command,
            seed,
            workers,
            output,
        })
    }
}
