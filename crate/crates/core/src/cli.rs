//! Command-line front end. [`run`] takes the argument list and output
//! streams and returns the process exit code, so it can be driven from tests.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use log::warn;

use crate::bethe_system::BetheSystem;
use crate::bounds::{bound_box, family_k_pm, normalized_k};
use crate::config::{parse_config, ExtF64, Problem};
use crate::error::{Error, Result};
use crate::polyzeros::params::parse_param;
use crate::polyzeros::{de_residuals, family_to_bethe, zeros_via_oracle, Family, PolynomialSpec};
use crate::report::{round3, Certificate, Constants, Format, Row, RunReport, TableCheck, VerifySummary};
use crate::solver::{solve, SolverConfig};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_TABLE_MISMATCH: i32 = 3;
pub const EXIT_VERIFY_FAILURE: i32 = 4;

/// Tolerance of `table --check`.
pub const TABLE_TOL: f64 = 5e-4;

#[derive(Debug, Parser)]
#[command(name = "bethe-zeros", version, about = "Convex Bethe systems and zeros of Askey-scheme polynomials")]
pub struct Cli {
    /// Add wall-clock timings (milliseconds) to the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a system or polynomial described by a JSON file.
    Solve {
        config: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Zeros and bounds of a Wilson, Askey-Wilson or continuous Hahn polynomial.
    Zeros {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Comma-separated; complex values as re+imi. Askey-Wilson takes a,b,c,d,q.
        #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true, required = true)]
        params: Vec<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Reproduce one of the three reference tables.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Compare with the printed values and exit 3 on mismatch.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Seeded random self-checks.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        cases: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

struct Timer {
    enabled: bool,
    start: Instant,
    laps: BTreeMap<String, f64>,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Timer {
            enabled,
            start: Instant::now(),
            laps: BTreeMap::new(),
        }
    }

    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let v = f();
        *self.laps.entry(name.to_string()).or_insert(0.0) += t0.elapsed().as_secs_f64() * 1e3;
        v
    }

    fn finish(mut self, report: &mut RunReport) {
        if self.enabled {
            self.laps.insert("total".into(), self.start.elapsed().as_secs_f64() * 1e3);
            report.timings_ms = Some(self.laps);
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_VALIDATION,
    }
}

fn solver_config(tol: f64, max_iters: usize) -> Result<SolverConfig> {
    let cfg = SolverConfig {
        grad_tol: tol,
        max_iters,
        fd_check: false,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn finite_or_none(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Solution, certificate and bound box of a system.
pub fn system_report(sys: &BetheSystem, cfg: &SolverConfig, command: &str, timings: bool) -> Result<RunReport> {
    let mut timer = Timer::new(timings);
    let mut report = RunReport::new(command);
    report.input = Some(Problem::System(sys.clone()).to_config());
    let sol = timer.time("solve", || solve(sys, cfg))?;
    let bx = timer.time("bounds", || bound_box(sys))?;
    let res = sys.bethe_residual(&sol.xi)?;
    report.rows = sol
        .xi
        .iter()
        .enumerate()
        .map(|(j, &x)| Row {
            j: j + 1,
            root: x,
            lower: ExtF64(bx.coord_lower[j]),
            upper: ExtF64(bx.upper(j)),
            oracle_root: None,
            bethe_residual: Some(res[j]),
            de_residual: None,
        })
        .collect();
    report.certificate = Some(Certificate {
        iterations: sol.iterations,
        grad_norm: sol.grad_norm,
        bethe_residual_max: sol.bethe_residual_max,
        within_bounds: sol.within_bounds,
    });
    let (km, kp) = normalized_k(sys);
    report.constants = Some(Constants {
        kappa_minus: bx.kappa_minus,
        kappa_plus: bx.kappa_plus,
        k_minus: finite_or_none(km),
        k_plus: finite_or_none(kp),
    });
    timer.finish(&mut report);
    Ok(report)
}

/// Zeros by both methods, bounds, discrepancy and residuals.
pub fn polynomial_report(spec: &PolynomialSpec, cfg: &SolverConfig, command: &str, timings: bool) -> Result<RunReport> {
    let mut timer = Timer::new(timings);
    let sys = family_to_bethe(spec)?;
    let mut report = timer.time("solve", || system_report(&sys, cfg, command, false))?;
    report.input = Some(Problem::Polynomial(spec.clone()).to_config());
    let roots: Vec<f64> = report.rows.iter().map(|r| r.root).collect();
    match timer.time("oracle", || zeros_via_oracle(spec)) {
        Ok(oracle) => {
            let mut worst: f64 = 0.0;
            for (row, o) in report.rows.iter_mut().zip(&oracle) {
                worst = worst.max((row.root - o).abs());
                row.oracle_root = Some(*o);
            }
            report.max_discrepancy = Some(worst);
        }
        Err(e) => report.messages.push(format!("oracle unavailable: {e}")),
    }
    match de_residuals(spec, &roots) {
        Ok(de) => {
            for (row, d) in report.rows.iter_mut().zip(&de) {
                row.de_residual = Some(*d);
            }
            report.de_residual_max = Some(de.iter().fold(0.0, |m: f64, &d| m.max(d)));
        }
        Err(e) => report.messages.push(format!("difference-equation residual unavailable: {e}")),
    }
    let (km, kp) = family_k_pm(spec)?;
    if let Some(c) = report.constants.as_mut() {
        c.k_minus = finite_or_none(km);
        c.k_plus = finite_or_none(kp);
    }
    timer.finish(&mut report);
    Ok(report)
}

pub fn problem_report(problem: &Problem, cfg: &SolverConfig, command: &str, timings: bool) -> Result<RunReport> {
    match problem {
        Problem::System(s) => system_report(s, cfg, command, timings),
        Problem::Polynomial(p) => polynomial_report(p, cfg, command, timings),
    }
}

/// A reference table: parameters and the printed cells for `xi_5, ..., xi_1`.
pub struct ReferenceTable {
    pub which: u8,
    pub spec: PolynomialSpec,
    pub roots: [f64; 5],
    pub lower: [f64; 5],
    pub upper: Option<[f64; 5]>,
}

pub fn reference_table(which: u8) -> Result<ReferenceTable> {
    let t = match which {
        1 => ReferenceTable {
            which,
            spec: PolynomialSpec::real(Family::AskeyWilson, 5, &[0.3, -0.2, 0.15, 0.1, 0.1])?,
            roots: [0.496, 0.997, 1.508, 2.033, 2.577],
            lower: [0.400, 0.800, 1.200, 1.600, 2.000],
            upper: Some([0.675, 1.350, 2.025, 2.700, 3.375]),
        },
        2 => ReferenceTable {
            which,
            spec: PolynomialSpec::real(Family::Wilson, 5, &[1.15, 1.1, 1.0, 0.9])?,
            roots: [0.632, 1.292, 2.090, 3.099, 4.477],
            lower: [0.264, 0.528, 0.793, 1.057, 1.321],
            upper: None,
        },
        3 => ReferenceTable {
            which,
            spec: PolynomialSpec::real(Family::ContinuousHahn, 10, &[1.1, 0.9])?,
            roots: [0.261, 0.838, 1.554, 2.481, 3.770],
            lower: [0.131, 0.392, 0.653, 0.915, 1.176],
            upper: None,
        },
        other => return Err(Error::Validation(format!("table {other} does not exist (expected 1, 2 or 3)"))),
    };
    Ok(t)
}

/// Report restricted to the printed columns `xi_5, ..., xi_1`, with the
/// comparison against the printed cells.
pub fn table_report(which: u8, timings: bool) -> Result<RunReport> {
    let t = reference_table(which)?;
    let mut report = polynomial_report(&t.spec, &SolverConfig::default(), "table", timings)?;
    report.rows = (1..=5).rev().map(|j| report.rows[j - 1].clone()).collect();
    // the printed upper bounds are the raw coordinate bounds, without the
    // (0, pi) cap
    let bx = bound_box(&family_to_bethe(&t.spec)?)?;
    if let Some(cap) = bx.coord_cap {
        report.messages.push(format!("upper bounds shown without the cap {cap:.6} on every root"));
    }
    for row in report.rows.iter_mut() {
        row.upper = ExtF64(bx.coord_upper[row.j - 1]);
    }
    let mut mismatches = Vec::new();
    for (col, row) in report.rows.iter().enumerate() {
        let mut cell = |name: &str, got: f64, want: f64| {
            if !((got - want).abs() <= TABLE_TOL) {
                mismatches.push(format!(
                    "xi_{} {name}: computed {} ({got}), expected {want:.3}",
                    row.j,
                    round3(got)
                ));
            }
        };
        cell("root", row.root, t.roots[col]);
        cell("lower", row.lower.0, t.lower[col]);
        if let Some(up) = t.upper {
            cell("upper", row.upper.0, up[col]);
        }
    }
    report.table = Some(TableCheck {
        which,
        tolerance: TABLE_TOL,
        passed: mismatches.is_empty(),
        mismatches,
    });
    Ok(report)
}

pub fn verify_report(seed: u64, cases: usize, timings: bool) -> Result<RunReport> {
    let mut timer = Timer::new(timings);
    let mut report = RunReport::new("verify");
    let threads = verify::thread_cap()?;
    let outcomes = timer.time("cases", || verify::run_cases(seed, cases, threads))?;
    let mut checks = BTreeMap::new();
    for o in &outcomes {
        for (k, v) in &o.checks {
            *checks.entry(k.clone()).or_insert(0) += v;
        }
    }
    let first = outcomes.iter().find_map(|o| o.failure.clone());
    if cases == 0 {
        warn!("verify ran with --cases 0; nothing was checked");
        report.messages.push("no cases requested; nothing was checked".into());
    }
    report.verify = Some(VerifySummary {
        seed,
        cases,
        passed: outcomes.iter().filter(|o| o.failure.is_none()).count(),
        checks,
        first_failure: first.as_ref().map(|f| f.0.clone()),
        counterexample: first.map(|f| f.1),
    });
    timer.finish(&mut report);
    Ok(report)
}

fn emit(out: &mut dyn Write, report: &RunReport, format: Format) -> i32 {
    match out.write_all(report.render(format).as_bytes()) {
        Ok(()) => EXIT_OK,
        Err(_) => EXIT_VALIDATION,
    }
}

fn fail(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    if let Error::NonConvergence { last, .. } = e {
        let _ = writeln!(err, "last iterate: {last:?}");
    }
    exit_code(e)
}

fn read_config(path: &PathBuf) -> Result<Problem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let timings = cli.timings;
    match cli.command {
        Command::Solve {
            config,
            tol,
            max_iters,
            format,
        } => {
            let result = solver_config(tol, max_iters)
                .and_then(|cfg| read_config(&config).and_then(|p| problem_report(&p, &cfg, "solve", timings)));
            match result {
                Ok(r) => emit(out, &r, format),
                Err(e) => fail(err, &e),
            }
        }
        Command::Zeros {
            family,
            n,
            params,
            tol,
            max_iters,
            format,
        } => {
            let result = (|| {
                let cfg = solver_config(tol, max_iters)?;
                let params = params.iter().map(|s| parse_param(s)).collect::<Result<Vec<_>>>()?;
                let spec = PolynomialSpec::new(family, n, params)?;
                polynomial_report(&spec, &cfg, "zeros", timings)
            })();
            match result {
                Ok(r) => emit(out, &r, format),
                Err(e) => fail(err, &e),
            }
        }
        Command::Table { which, check, format } => match table_report(which, timings) {
            Ok(mut r) => {
                let passed = r.table.as_ref().is_some_and(|t| t.passed);
                if !check {
                    r.table = None;
                }
                let code = emit(out, &r, format);
                if check && !passed {
                    if let Some(t) = &r.table {
                        for m in &t.mismatches {
                            let _ = writeln!(err, "mismatch: {m}");
                        }
                    }
                    EXIT_TABLE_MISMATCH
                } else {
                    code
                }
            }
            Err(e) => fail(err, &e),
        },
        Command::Verify { seed, cases, format } => match verify_report(seed, cases, timings) {
            Ok(r) => {
                let code = emit(out, &r, format);
                let v = r.verify.as_ref().expect("verify summary");
                if let (Some(f), Some(c)) = (&v.first_failure, &v.counterexample) {
                    let _ = writeln!(err, "verify failed: {f}");
                    let _ = writeln!(err, "{}", serde_json::to_string_pretty(c).expect("config serializes"));
                    EXIT_VERIFY_FAILURE
                } else {
                    code
                }
            }
            Err(e) => fail(err, &e),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn tables_check() {
        for w in ["1", "2", "3"] {
            let (code, out, err) = run_args(&["bethe-zeros", "table", "--which", w, "--check"]);
            assert_eq!(code, EXIT_OK, "{out}{err}");
            assert!(out.contains("pass"));
        }
    }

    #[test]
    fn zeros_with_negative_params() {
        let (code, out, _) = run_args(&[
            "bethe-zeros", "zeros", "--family", "askey-wilson", "--n", "5", "--params", "0.3,-0.2,0.15,0.1,0.1",
            "--format", "csv",
        ]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 6);
        assert!(out.lines().nth(5).unwrap().starts_with("5,0.49"));
    }

    #[test]
    fn bad_input_exits_one() {
        let (code, _, err) = run_args(&["bethe-zeros", "zeros", "--family", "wilson", "--n", "3", "--params", "1,2,3"]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.starts_with("error:"));
        let (code, _, _) = run_args(&["bethe-zeros", "table", "--which", "4"]);
        assert_eq!(code, EXIT_VALIDATION);
    }

    #[test]
    fn nonconvergence_exits_two() {
        let (code, _, err) = run_args(&[
            "bethe-zeros", "zeros", "--family", "wilson", "--n", "5", "--params", "1.15,1.1,1,0.9", "--max-iters", "1",
        ]);
        assert_eq!(code, EXIT_NONCONVERGENCE, "{err}");
    }
}
