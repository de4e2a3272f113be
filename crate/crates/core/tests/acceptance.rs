//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bethe_zeros::bounds::bound_box;
use bethe_zeros::polyzeros::{de_residual, family_to_bethe, solve_family, zeros_via_oracle};
use bethe_zeros::potentials::raw_integrand;
use bethe_zeros::quadrature;
use bethe_zeros::verify::{case_rng, fd_check_at, random_point, random_polynomial, random_system, FAMILIES, KINDS};
use bethe_zeros::{family_k_pm, solve, CoupledParameter, Family, PolynomialSpec, PotentialKind, SolverConfig, SystemType};
use rand::Rng;

type Outcome = Result<String, String>;

struct TableCase {
    spec: PolynomialSpec,
    roots: [f64; 5],
    lower: [f64; 5],
    upper: Option<[f64; 5]>,
}

/// Compares the printed cells for xi_5, ..., xi_1 within 5e-4 and checks
/// the one-second budget.
fn table(case: TableCase) -> Outcome {
    let t0 = Instant::now();
    let sol = solve_family(&case.spec, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let bx = bound_box(&family_to_bethe(&case.spec).unwrap()).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for col in 0..5 {
        let j = 5 - col;
        let mut cell = |name: &str, got: f64, want: f64| {
            let d = (got - want).abs();
            worst = worst.max(d);
            if !(d <= 5e-4) {
                bad.push(format!("xi_{j} {name} {got:.6} vs {want:.3}"));
            }
        };
        cell("root", sol.xi[j - 1], case.roots[col]);
        cell("lower", bx.coord_lower[j - 1], case.lower[col]);
        if let Some(up) = case.upper {
            cell("upper", bx.coord_upper[j - 1], up[col]);
        }
    }
    if elapsed >= Duration::from_secs(1) {
        bad.push(format!("took {elapsed:?}"));
    }
    if bad.is_empty() {
        Ok(format!("max cell deviation {worst:.1e}, {elapsed:.2?}"))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_1() -> Outcome {
    table(TableCase {
        spec: PolynomialSpec::real(Family::AskeyWilson, 5, &[0.3, -0.2, 0.15, 0.1, 0.1]).unwrap(),
        roots: [0.496, 0.997, 1.508, 2.033, 2.577],
        lower: [0.400, 0.800, 1.200, 1.600, 2.000],
        upper: Some([0.675, 1.350, 2.025, 2.700, 3.375]),
    })
}

fn criterion_2() -> Outcome {
    table(TableCase {
        spec: PolynomialSpec::real(Family::Wilson, 5, &[1.15, 1.1, 1.0, 0.9]).unwrap(),
        roots: [0.632, 1.292, 2.090, 3.099, 4.477],
        lower: [0.264, 0.528, 0.793, 1.057, 1.321],
        upper: None,
    })
}

fn criterion_3() -> Outcome {
    table(TableCase {
        spec: PolynomialSpec::real(Family::ContinuousHahn, 10, &[1.1, 0.9]).unwrap(),
        roots: [0.261, 0.838, 1.554, 2.481, 3.770],
        lower: [0.131, 0.392, 0.653, 0.915, 1.176],
        upper: None,
    })
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=50usize {
        let spec = PolynomialSpec::real(Family::AskeyWilson, n, &[0.0; 5]).unwrap();
        let (km, kp) = family_k_pm(&spec).map_err(|e| e.to_string())?;
        if km != (n + 1) as f64 || kp != (n + 1) as f64 {
            return Err(format!("n = {n}: k- = {km}, k+ = {kp}"));
        }
        let xi = solve_family(&spec, &SolverConfig::default()).map_err(|e| format!("n = {n}: {e}"))?.xi;
        for (j, x) in xi.iter().enumerate() {
            let exact = (n - j) as f64 * PI / (n + 1) as f64;
            worst = worst.max((x - exact).abs());
        }
    }
    if worst <= 1e-10 {
        Ok(format!("max |xi_j - exact| = {worst:.1e}"))
    } else {
        Err(format!("max |xi_j - exact| = {worst:e}"))
    }
}

/// Everything measured on the random sweep; shared by criteria 5 to 7.
struct Sweep {
    discrepancy: f64,
    poly_violation: f64,
    bethe_residual: f64,
    de_residual: f64,
    elapsed: Duration,
    errors: Vec<String>,
}

const SWEEP_SEED: u64 = 20_240_601;

fn polynomial_sweep() -> Sweep {
    let t0 = Instant::now();
    let mut s = Sweep {
        discrepancy: 0.0,
        poly_violation: 0.0,
        bethe_residual: 0.0,
        de_residual: 0.0,
        elapsed: Duration::ZERO,
        errors: Vec::new(),
    };
    for (fi, family) in FAMILIES.into_iter().enumerate() {
        for case in 0..100 {
            let mut rng = case_rng(SWEEP_SEED + 1000 * fi as u64, case);
            let n = rng.gen_range(1..=12);
            let spec = random_polynomial(&mut rng, family, n, case == 0);
            let mut run = || -> bethe_zeros::Result<()> {
                let sol = solve_family(&spec, &SolverConfig::default())?;
                let oracle = zeros_via_oracle(&spec)?;
                for (a, b) in sol.xi.iter().zip(&oracle) {
                    s.discrepancy = s.discrepancy.max((a - b).abs());
                }
                let bx = bound_box(&family_to_bethe(&spec)?)?;
                s.poly_violation = s.poly_violation.max(bx.max_violation(&sol.xi));
                s.bethe_residual = s.bethe_residual.max(sol.bethe_residual_max);
                s.de_residual = s.de_residual.max(de_residual(&spec, &sol.xi)?);
                Ok(())
            };
            if let Err(e) = run() {
                s.errors.push(format!("{} case {case}: {e}", family.name()));
            }
        }
    }
    s.elapsed = t0.elapsed();
    s
}

fn criterion_5(s: &Sweep) -> Outcome {
    if !s.errors.is_empty() {
        return Err(s.errors.join("; "));
    }
    let msg = format!("300 specs, max discrepancy {:.1e}, {:.2?}", s.discrepancy, s.elapsed);
    if s.discrepancy <= 1e-8 && s.elapsed < Duration::from_secs(60) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_6(s: &Sweep) -> Outcome {
    let mut worst_sys: f64 = 0.0;
    let mut errors = Vec::new();
    for (ti, stype) in [SystemType::A, SystemType::B].into_iter().enumerate() {
        for (ki, kind) in KINDS.into_iter().enumerate() {
            for case in 0..50 {
                let mut rng = case_rng(SWEEP_SEED + 7 + 100 * (3 * ti + ki) as u64, case);
                let sys = random_system(&mut rng, stype, kind);
                match solve(&sys, &SolverConfig::default()).and_then(|sol| Ok(bound_box(&sys)?.max_violation(&sol.xi))) {
                    Ok(v) => worst_sys = worst_sys.max(v),
                    Err(e) => errors.push(format!("{stype:?}/{} case {case}: {e}", kind.name())),
                }
            }
        }
    }
    if !errors.is_empty() || !s.errors.is_empty() {
        return Err(errors.into_iter().chain(s.errors.iter().cloned()).collect::<Vec<_>>().join("; "));
    }
    let msg = format!(
        "max violation: polynomials {:.1e}, 300 alpha > 0 systems {:.1e}",
        s.poly_violation, worst_sys
    );
    if s.poly_violation <= 1e-12 && worst_sys <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_7(s: &Sweep) -> Outcome {
    let mut hess: f64 = 0.0;
    let mut morse: f64 = 0.0;
    let mut chol_fail = 0;
    let mut sys_residual: f64 = 0.0;
    for case in 0..200 {
        let mut rng = case_rng(SWEEP_SEED + 99, case);
        let sys = if case % 2 == 0 {
            let stype = if case % 4 == 0 { SystemType::A } else { SystemType::B };
            random_system(&mut rng, stype, KINDS[(case / 4) % 3])
        } else {
            let n = rng.gen_range(1..=8);
            family_to_bethe(&random_polynomial(&mut rng, FAMILIES[(case / 2) % 3], n, false)).unwrap()
        };
        let x = random_point(&mut rng, &sys);
        let c = fd_check_at(&sys, &x).map_err(|e| format!("case {case}: {e}"))?;
        hess = hess.max(c.hessian_rel);
        morse = morse.max(c.morse_rel);
        chol_fail += usize::from(!c.cholesky_ok);
        let sol = solve(&sys, &SolverConfig::default()).map_err(|e| format!("case {case}: {e}"))?;
        sys_residual = sys_residual.max(sol.bethe_residual_max);
    }
    let bethe = s.bethe_residual.max(sys_residual);
    let msg = format!(
        "200 points: hessian {hess:.1e}, morse {morse:.1e}, cholesky failures {chol_fail}; bethe residual {bethe:.1e}, difference residual {:.1e}",
        s.de_residual
    );
    if hess <= 1e-6 && morse <= 1e-5 && chol_fail == 0 && bethe <= 1e-8 && s.de_residual <= 1e-8 && s.errors.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_8() -> Outcome {
    let mut worst: f64 = 0.0;
    for (ki, kind) in [PotentialKind::Rational, PotentialKind::Hyperbolic, PotentialKind::Trigonometric]
        .into_iter()
        .enumerate()
    {
        let mut rng = case_rng(SWEEP_SEED + 555, ki);
        for _ in 0..20 {
            let (m, sign) = match kind {
                PotentialKind::Rational => (rng.gen_range(0.1..3.0), 1),
                PotentialKind::Hyperbolic => (rng.gen_range(0.1..PI - 0.1), 1),
                PotentialKind::Trigonometric => (rng.gen_range(0.1..3.0), if rng.gen_bool(0.5) { 1 } else { -1 }),
            };
            let p = CoupledParameter::new(kind, m, sign, 0.0).map_err(|e| e.to_string())?;
            for g in 0..100 {
                let x = -10.0 + 20.0 * (g as f64 + 0.5) / 100.0;
                let q = quadrature::integrate(|y| raw_integrand(kind, m, sign, y), 0.0, x, 1e-13, 0.0)
                    .map_err(|e| e.to_string())?;
                worst = worst.max((q - p.value(x)).abs());
            }
        }
    }
    if worst <= 1e-10 {
        Ok(format!("6000 points, max |closed form - quadrature| = {worst:.1e}"))
    } else {
        Err(format!("max |closed form - quadrature| = {worst:e}"))
    }
}

fn main() -> ExitCode {
    let sweep = polynomial_sweep();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 Askey-Wilson table", criterion_1()),
        ("2 Wilson table", criterion_2()),
        ("3 continuous Hahn table", criterion_3()),
        ("4 Chebyshev exactness", criterion_4()),
        ("5 oracle equivalence", criterion_5(&sweep)),
        ("6 bound satisfaction", criterion_6(&sweep)),
        ("7 numerical self-consistency", criterion_7(&sweep)),
        ("8 closed-form potentials", criterion_8()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(m) => println!("criterion {name}: PASS ({m})"),
            Err(m) => {
                failed += 1;
                println!("criterion {name}: FAIL ({m})");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
