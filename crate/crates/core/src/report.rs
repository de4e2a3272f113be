//! Run reports and their table / CSV / JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::{Config, ExtF64};

pub const TOOL: &str = "bethe-zeros";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub j: usize,
    pub root: f64,
    pub lower: ExtF64,
    pub upper: ExtF64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_root: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bethe_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub de_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub iterations: usize,
    pub grad_norm: f64,
    pub bethe_residual_max: f64,
    pub within_bounds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub kappa_minus: f64,
    pub kappa_plus: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_plus: Option<f64>,
}

/// Outcome of a table comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCheck {
    pub which: u8,
    pub tolerance: f64,
    pub passed: bool,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    /// Number of individual checks per category.
    pub checks: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Config>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<Config>,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<Constants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_discrepancy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub de_residual_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<TableCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub messages: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            input: None,
            rows: Vec::new(),
            certificate: None,
            constants: None,
            max_discrepancy: None,
            de_residual_max: None,
            table: None,
            verify: None,
            messages: Vec::new(),
            timings_ms: None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
            Format::Table => self.render_table(),
        }
    }

    fn render_csv(&self) -> String {
        let mut s = String::from("j,root,lower,upper,oracle_root,bethe_residual,de_residual\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.j,
                r.root,
                ext(r.lower),
                ext(r.upper),
                r.oracle_root.map(|x| x.to_string()).unwrap_or_default(),
                opt(r.bethe_residual),
                opt(r.de_residual)
            );
        }
        s
    }

    fn render_table(&self) -> String {
        let mut s = format!("{} {} {}\n", self.tool, self.version, self.command);
        if let Some(input) = &self.input {
            let _ = writeln!(s, "input: {}", serde_json::to_string(input).expect("config serializes"));
        }
        let three = self.table.is_some();
        if !self.rows.is_empty() {
            let _ = writeln!(
                s,
                "{:>3} {:>18} {:>18} {:>18} {:>18} {:>10} {:>10}",
                "j", "root", "lower", "upper", "oracle", "bethe_res", "de_res"
            );
            for r in &self.rows {
                let num = |x: f64| if three { round3(x) } else { format!("{x:.12}") };
                let bound = |b: ExtF64| if b.0.is_finite() { num(b.0) } else { ext(b) };
                let opt = |v: Option<f64>, f: &dyn Fn(f64) -> String| v.map(f).unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    s,
                    "{:>3} {:>18} {:>18} {:>18} {:>18} {:>10} {:>10}",
                    r.j,
                    num(r.root),
                    bound(r.lower),
                    bound(r.upper),
                    opt(r.oracle_root, &num),
                    opt(r.bethe_residual, &|x| format!("{x:.2e}")),
                    opt(r.de_residual, &|x| format!("{x:.2e}")),
                );
            }
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(
                s,
                "certificate: iterations {}, |grad|_inf {:.2e}, max bethe residual {:.2e}, within bounds {}",
                c.iterations, c.grad_norm, c.bethe_residual_max, c.within_bounds
            );
        }
        if let Some(k) = &self.constants {
            let _ = write!(s, "kappa- {:.6}, kappa+ {:.6}", k.kappa_minus, k.kappa_plus);
            if let (Some(km), Some(kp)) = (k.k_minus, k.k_plus) {
                let _ = write!(s, "; k- {km:.6}, k+ {kp:.6}");
            }
            s.push('\n');
        }
        if let Some(d) = self.max_discrepancy {
            let _ = writeln!(s, "max |bethe - oracle|: {d:.2e}");
        }
        if let Some(d) = self.de_residual_max {
            let _ = writeln!(s, "max difference-equation residual: {d:.2e}");
        }
        if let Some(t) = &self.table {
            if t.passed {
                let _ = writeln!(s, "check table {}: pass (tolerance {:e})", t.which, t.tolerance);
            } else {
                let _ = writeln!(s, "check table {}: MISMATCH", t.which);
                for m in &t.mismatches {
                    let _ = writeln!(s, "  {m}");
                }
            }
        }
        if let Some(v) = &self.verify {
            let _ = writeln!(s, "verify: seed {}, {} cases, {} passed", v.seed, v.cases, v.passed);
            for (name, count) in &v.checks {
                let _ = writeln!(s, "  {name}: {count}");
            }
            if let Some(f) = &v.first_failure {
                let _ = writeln!(s, "first failure: {f}");
            }
            if let Some(c) = &v.counterexample {
                let _ = writeln!(s, "counterexample: {}", serde_json::to_string(c).expect("config serializes"));
            }
        }
        for m in &self.messages {
            let _ = writeln!(s, "note: {m}");
        }
        if let Some(t) = &self.timings_ms {
            for (k, v) in t {
                let _ = writeln!(s, "time {k}: {v:.3} ms");
            }
        }
        s
    }
}

fn ext(v: ExtF64) -> String {
    if v.0 == f64::INFINITY {
        "inf".into()
    } else if v.0 == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        v.0.to_string()
    }
}

/// Three decimals, ties rounded away from zero.
pub fn round3(x: f64) -> String {
    let r = (x * 1000.0).round() / 1000.0;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r:.3}")
}
