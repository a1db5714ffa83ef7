//! Check results and artifact emission.

use std::fmt::Write as _;
use std::path::Path;

use crate::kriging::fmt_sig;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Below,
    AtMost,
    AtLeast,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        }
    }
}

/// One verified invariant: a measured value against a tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tol: f64,
    pub relation: Relation,
    pub pass: bool,
    /// Set when the computation itself failed.
    pub error: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, measured: f64, relation: Relation, tol: f64) -> Self {
        let pass = match relation {
            Relation::Below => measured < tol,
            Relation::AtMost => measured <= tol,
            Relation::AtLeast => measured >= tol,
        };
        Check {
            name: name.into(),
            measured,
            tol,
            relation,
            pass,
            error: None,
        }
    }

    pub fn below(name: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self::new(name, measured, Relation::Below, tol)
    }

    pub fn at_most(name: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self::new(name, measured, Relation::AtMost, tol)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self::new(name, measured, Relation::AtLeast, tol)
    }

    pub fn errored(name: impl Into<String>, error: impl std::fmt::Display) -> Self {
        Check {
            name: name.into(),
            measured: f64::NAN,
            tol: f64::NAN,
            relation: Relation::Below,
            pass: false,
            error: Some(error.to_string()),
        }
    }

    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        match &self.error {
            Some(e) => format!("{verdict} {} error={e}", self.name),
            None => format!(
                "{verdict} {} measured={} {} tol={}",
                self.name,
                fmt_sig(self.measured),
                self.relation.symbol(),
                fmt_sig(self.tol)
            ),
        }
    }
}

/// A CSV file: header line plus data rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub header: String,
    pub rows: Vec<String>,
}

impl Artifact {
    /// Splits CSV text whose first line is the header.
    pub fn from_csv(file_name: impl Into<String>, csv: &str) -> Self {
        let mut lines = csv.lines();
        let header = lines.next().unwrap_or_default().to_string();
        Artifact {
            file_name: file_name.into(),
            header,
            rows: lines.map(str::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunResults {
    pub command: String,
    pub checks: Vec<Check>,
    /// Reported values that are not checked (`key=value`).
    pub info: Vec<(String, String)>,
    pub artifacts: Vec<Artifact>,
}

impl RunResults {
    pub fn new(command: &str) -> Self {
        RunResults {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn info(&mut self, key: &str, value: impl std::fmt::Display) {
        self.info.push((key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.info.iter().map(|(k, v)| format!("INFO {k}={v}")).collect();
        lines.extend(self.checks.iter().map(Check::line));
        let passed = self.checks.iter().filter(|c| c.pass).count();
        lines.push(format!(
            "{} {}: {passed}/{} checks passed",
            if self.passed() { "PASS" } else { "FAIL" },
            self.command,
            self.checks.len()
        ));
        lines
    }
}

/// Writes every artifact and `<command>_report.txt` into `dir`. When any
/// check failed, each file ends with a `FAILED` marker line.
pub fn emit_report(results: &RunResults, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let failed = !results.passed();
    for a in &results.artifacts {
        let mut text = String::with_capacity(a.header.len() + 32 * a.rows.len());
        text.push_str(&a.header);
        text.push('\n');
        for r in &a.rows {
            text.push_str(r);
            text.push('\n');
        }
        if failed {
            text.push_str("# FAILED\n");
        }
        std::fs::write(dir.join(&a.file_name), text)?;
    }
    let mut report = String::new();
    for line in results.summary_lines() {
        writeln!(report, "{line}").expect("writing to a String cannot fail");
    }
    if failed {
        report.push_str("FAILED\n");
    }
    std::fs::write(dir.join(format!("{}_report.txt", results.command)), report)?;
    Ok(())
}
