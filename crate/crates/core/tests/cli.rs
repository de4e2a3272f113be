use std::path::PathBuf;

use bethe_zeros::cli::{run, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_VALIDATION};
use bethe_zeros::report::RunReport;
use bethe_zeros::{parse_config, Problem};

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["bethe-zeros"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_config(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// Replaces e-notation residuals (rounding-level noise) with `#`.
fn mask_residuals(s: &str) -> String {
    s.split('\n')
        .map(|line| {
            line.split(' ')
                .map(|tok| {
                    let t = tok.trim_end_matches(',');
                    if t.contains('e') && t.parse::<f64>().is_ok() {
                        tok.replace(t, "#")
                    } else {
                        tok.to_string()
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn table_goldens() {
    for (w, golden) in [
        ("1", include_str!("golden/table1.txt")),
        ("2", include_str!("golden/table2.txt")),
        ("3", include_str!("golden/table3.txt")),
    ] {
        let (code, out, err) = run_args(&["table", "--which", w, "--check"]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert_eq!(mask_residuals(&out), mask_residuals(golden), "table {w}");
    }
}

#[test]
fn table_without_check_has_no_verdict() {
    let (code, out, _) = run_args(&["table", "--which", "2", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[1].starts_with("5,0.63"));
    assert!(rows[1].split(',').nth(3) == Some("inf"));
}

#[test]
fn solve_trivial_linear_system() {
    let path = write_config(
        "linear.json",
        r#"{"system": {"type": "B", "kind": "rational", "alpha": 1, "epsilon": 0, "mu": [1]}}"#,
    );
    let (code, out, err) = run_args(&["solve", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let report: RunReport = serde_json::from_str(&out).unwrap();
    assert!((report.rows[0].root - std::f64::consts::PI).abs() < 1e-15);
    // |e^{2 i pi} - 1| with pi rounded to f64
    assert!(report.rows[0].bethe_residual.unwrap() <= 4.0 * f64::EPSILON);
    assert_eq!(report.certificate.unwrap().iterations, 0);
}

#[test]
fn solve_askey_wilson_system_config() {
    let path = write_config(
        "aw.json",
        r#"{"system": {"type": "B", "kind": "trigonometric", "alpha": 0, "epsilon": 0,
            "a_params": [0.3, -0.2, 0.15, 0.1], "b_params": [0.1], "mu": [5, 4, 3, 2, 1]}}"#,
    );
    let (code, out, err) = run_args(&["solve", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let roots: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let want = [2.577, 2.033, 1.508, 0.997, 0.496];
    for (r, w) in roots.iter().zip(want) {
        assert!((r - w).abs() < 5e-4, "{r} vs {w}");
    }
}

#[test]
fn solve_rejects_hyperbolic_alpha_zero() {
    let path = write_config(
        "hyper0.json",
        r#"{"system": {"type": "B", "kind": "hyperbolic", "alpha": 0, "epsilon": 0,
            "a_params": [0.5, 0.5, 0.5], "b_params": [0.5], "mu": [2, 1]}}"#,
    );
    let (code, out, err) = run_args(&["solve", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(out.is_empty());
    assert!(err.contains("sufficiently close to 0 in the interval"), "{err}");
}

#[test]
fn solve_reports_nonconvergence() {
    let path = write_config(
        "tight.json",
        r#"{"polynomial": {"family": "wilson", "n": 5, "params": [1.15, 1.1, 1.0, 0.9]}}"#,
    );
    let (code, _, err) = run_args(&["solve", path.to_str().unwrap(), "--max-iters", "1"]);
    assert_eq!(code, EXIT_NONCONVERGENCE);
    assert!(err.contains("no convergence"));
    let (code, _, _) = run_args(&["solve", "/nonexistent/config.json"]);
    assert_eq!(code, EXIT_VALIDATION);
}

#[test]
fn zeros_examples() {
    let (code, out, _) = run_args(&["zeros", "--family", "wilson", "--n", "5", "--params", "1.15,1.1,1.0,0.9", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    for line in out.lines().skip(1) {
        assert_eq!(line.split(',').nth(3), Some("inf"));
    }
    let (code, out, _) = run_args(&["zeros", "--family", "continuous-hahn", "--n", "10", "--params", "1.1,0.9", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let report: RunReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.rows.len(), 10);
    assert!(report.max_discrepancy.unwrap() <= 1e-8);
    assert!(report.de_residual_max.unwrap() <= 1e-8);
    assert!((report.rows[4].root - 0.261).abs() < 5e-4);
}

#[test]
fn zeros_domain_error_names_condition() {
    let (code, _, err) = run_args(&["zeros", "--family", "askey-wilson", "--n", "3", "--params", "0.3,1.2,0,0,0.5"]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn json_output_round_trips() {
    for args in [
        vec!["zeros", "--family", "askey-wilson", "--n", "4", "--params", "0.5+0.2i,0.5-0.2i,-0.3,0.1,0.4", "--format", "json"],
        vec!["zeros", "--family", "wilson", "--n", "3", "--params", "1,2,3,0.5", "--format", "json"],
    ] {
        let (code, out, err) = run_args(&args);
        assert_eq!(code, EXIT_OK, "{err}");
        let report: RunReport = serde_json::from_str(&out).unwrap();
        let input = serde_json::to_string(report.input.as_ref().unwrap()).unwrap();
        let problem = parse_config(&input).unwrap();
        assert!(matches!(problem, Problem::Polynomial(_)));
        assert_eq!(parse_config(&problem.to_json()).unwrap(), problem);
    }
    let path = write_config(
        "sys.json",
        r#"{"system": {"type": "A", "kind": "trigonometric", "alpha": 0.7, "beta": 0.3,
            "a_params": [-0.4, {"magnitude": "inf"}], "b_params": [0.2], "mu": [3, 1, 0]}}"#,
    );
    let (code, out, err) = run_args(&["solve", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let report: RunReport = serde_json::from_str(&out).unwrap();
    let echoed = serde_json::to_string(report.input.as_ref().unwrap()).unwrap();
    let original = parse_config(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parse_config(&echoed).unwrap(), original);
    // the report itself is accepted as a configuration
    let again = write_config("sys_again.json", &out);
    let (_, out2, _) = run_args(&["solve", again.to_str().unwrap(), "--format", "json"]);
    let report2: RunReport = serde_json::from_str(&out2).unwrap();
    assert_eq!(report.rows, report2.rows);
}

#[test]
fn verify_is_deterministic_and_passes() {
    let a = run_args(&["verify", "--seed", "42", "--cases", "25"]);
    let b = run_args(&["verify", "--seed", "42", "--cases", "25"]);
    assert_eq!(a.0, EXIT_OK, "{}", a.2);
    assert!(a.1.contains("25 cases, 25 passed"));
    assert_eq!(a, b);
    let j1 = run_args(&["verify", "--seed", "7", "--cases", "9", "--format", "json"]);
    let j2 = run_args(&["verify", "--seed", "7", "--cases", "9", "--format", "json"]);
    assert_eq!(j1, j2);
}

#[test]
fn verify_zero_cases_warns() {
    let (code, out, _) = run_args(&["verify", "--cases", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("nothing was checked"));
}

#[test]
fn timings_are_opt_in() {
    let (_, plain, _) = run_args(&["table", "--which", "1", "--format", "json"]);
    assert!(!plain.contains("timings_ms"));
    let (_, timed, _) = run_args(&["--timings", "table", "--which", "1", "--format", "json"]);
    let report: RunReport = serde_json::from_str(&timed).unwrap();
    assert!(report.timings_ms.unwrap().contains_key("total"));
}

#[test]
fn usage_errors() {
    let (code, _, err) = run_args(&["table", "--which", "4"]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(!err.is_empty());
    let (code, out, _) = run_args(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify"));
}
