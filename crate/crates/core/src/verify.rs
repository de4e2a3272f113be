//! Seeded random specs and the checks run by `bethe-zeros verify`.
//!
//! Case `i` draws from its own generator seeded with `seed + i`, so results
//! do not depend on the number of worker threads.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bethe_system::{BetheSystem, SystemType, WeightVector};
use crate::bounds::bound_box;
use crate::config::{Config, Problem};
use crate::error::{Error, Result};
use crate::polyzeros::{de_residual, family_to_bethe, solve_family, zeros_via_oracle, Family, PolynomialSpec};
use crate::potentials::{CoupledParameter, PotentialKind};
use crate::solver::{solve, SolverConfig};

pub const THREADS_ENV: &str = "BETHE_ZEROS_THREADS";

pub const DISCREPANCY_TOL: f64 = 1e-8;
pub const BOUND_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const HESSIAN_TOL: f64 = 1e-6;
pub const MORSE_TOL: f64 = 1e-5;

pub const MAX_DEGREE: usize = 12;
pub const KINDS: [PotentialKind; 3] = [
    PotentialKind::Rational,
    PotentialKind::Hyperbolic,
    PotentialKind::Trigonometric,
];
pub const FAMILIES: [Family; 3] = [Family::Wilson, Family::AskeyWilson, Family::ContinuousHahn];

pub fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(case as u64))
}

/// Random polynomial of degree `n`. Wilson and continuous Hahn parameters
/// are uniform in `(0.1, 3)`, Askey-Wilson parameters and `q` in
/// `(-0.95, 0.95)`. With `pair`, the first two parameters form a complex
/// conjugate pair.
pub fn random_polynomial<R: Rng>(rng: &mut R, family: Family, n: usize, pair: bool) -> PolynomialSpec {
    let c = |v: f64| Complex64::new(v, 0.0);
    let mut params: Vec<Complex64> = match family {
        Family::Wilson | Family::ContinuousHahn => {
            (0..family.param_count()).map(|_| c(rng.gen_range(0.1..3.0))).collect()
        }
        Family::AskeyWilson => (0..5).map(|_| c(rng.gen_range(-0.95..0.95))).collect(),
    };
    if pair {
        let z = match family {
            Family::AskeyWilson => Complex64::from_polar(rng.gen_range(0.05..0.95), rng.gen_range(0.1..PI - 0.1)),
            _ => Complex64::new(rng.gen_range(0.1..3.0), rng.gen_range(0.1..2.0)),
        };
        params[0] = z;
        params[1] = z.conj();
    }
    PolynomialSpec::new(family, n, params).expect("sampled inside the parameter domain")
}

fn random_parameter<R: Rng>(rng: &mut R, kind: PotentialKind) -> CoupledParameter {
    let p = match kind {
        PotentialKind::Rational => CoupledParameter::rational(rng.gen_range(0.1..3.0)),
        PotentialKind::Hyperbolic => CoupledParameter::hyperbolic(rng.gen_range(0.1..PI - 0.1)),
        PotentialKind::Trigonometric => match rng.gen_range(0..6) {
            0 => Ok(CoupledParameter::trig_free()),
            1 => CoupledParameter::trigonometric(rng.gen_range(0.1..3.0), -1),
            _ => CoupledParameter::trigonometric(rng.gen_range(0.1..3.0), 1),
        },
    }
    .expect("sampled inside the parameter domain");
    if kind != PotentialKind::Hyperbolic && p.trig_sign == 1 && !p.is_free() && rng.gen_bool(0.2) {
        return p.with_pair_offset(rng.gen_range(0.05..2.0)).expect("valid offset");
    }
    p
}

/// Random system with `alpha > 0`, `n <= 6`, `K <= 3`, `L <= 2`.
pub fn random_system<R: Rng>(rng: &mut R, stype: SystemType, kind: PotentialKind) -> BetheSystem {
    let n = rng.gen_range(1..=6);
    let alpha = rng.gen_range(0.1..3.0);
    let k = rng.gen_range(0..=3);
    let l = rng.gen_range(0..=2);
    let a: Vec<_> = (0..k).map(|_| random_parameter(rng, kind)).collect();
    let b: Vec<_> = (0..l).map(|_| random_parameter(rng, kind)).collect();
    let mut mu = vec![0i64; n];
    let mut cur: i64 = match stype {
        SystemType::A => rng.gen_range(-3..=3),
        SystemType::B => rng.gen_range(1..=3),
    };
    for m in mu.iter_mut().rev() {
        *m = cur;
        cur += rng.gen_range(1..=3);
    }
    let mu = WeightVector(mu);
    match stype {
        SystemType::A => BetheSystem::type_a(kind, alpha, rng.gen_range(0.0..1.0), a, b, mu),
        SystemType::B => BetheSystem::type_b(kind, alpha, rng.gen_range(0..=1), a, b, mu),
    }
    .expect("sampled inside the parameter domain")
}

/// Random strictly decreasing point in the fundamental domain.
pub fn random_point<R: Rng>(rng: &mut R, sys: &BetheSystem) -> Vec<f64> {
    let (lo, hi) = match (sys.stype, sys.kind) {
        (SystemType::B, PotentialKind::Trigonometric) => (0.05, PI - 0.05),
        (SystemType::B, _) => (0.05, 4.0),
        (SystemType::A, PotentialKind::Trigonometric) => (-PI / 2.0, PI / 2.0),
        (SystemType::A, _) => (-4.0, 4.0),
    };
    loop {
        let mut x: Vec<f64> = (0..sys.n).map(|_| rng.gen_range(lo..hi)).collect();
        x.sort_by(|a, b| b.total_cmp(a));
        if x.windows(2).all(|w| w[0] - w[1] > 1e-3) {
            return x;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyCheck {
    pub discrepancy: f64,
    pub bound_violation: f64,
    pub bethe_residual: f64,
    pub de_residual: f64,
}

/// Solves `spec` both ways and measures every acceptance quantity.
pub fn check_polynomial(spec: &PolynomialSpec) -> Result<PolyCheck> {
    let sys = family_to_bethe(spec)?;
    let sol = solve_family(spec, &SolverConfig::default())?;
    let oracle = zeros_via_oracle(spec)?;
    let discrepancy = sol.xi.iter().zip(&oracle).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(PolyCheck {
        discrepancy,
        bound_violation: bound_box(&sys)?.max_violation(&sol.xi),
        bethe_residual: sol.bethe_residual_max,
        de_residual: de_residual(spec, &sol.xi)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemCheck {
    pub bound_violation: f64,
    pub bethe_residual: f64,
}

pub fn check_system(sys: &BetheSystem) -> Result<SystemCheck> {
    let sol = solve(sys, &SolverConfig::default())?;
    Ok(SystemCheck {
        bound_violation: bound_box(sys)?.max_violation(&sol.xi),
        bethe_residual: sol.bethe_residual_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdCheck {
    /// `max |H - H_fd| / max(1, max |H|)`.
    pub hessian_rel: f64,
    /// `max_k |g_k - dM/dxi_k| / max(1, |g_k|)`.
    pub morse_rel: f64,
    pub cholesky_ok: bool,
}

/// Central-difference checks of the Hessian against the gradient and of
/// the gradient against the Morse function.
pub fn fd_check_at(sys: &BetheSystem, xi: &[f64]) -> Result<FdCheck> {
    let n = xi.len();
    let h = sys.hessian(xi)?;
    let g = sys.gradient(xi)?;
    let step = 1e-6;
    let mut fd = DMatrix::zeros(n, n);
    let mut morse_rel: f64 = 0.0;
    for k in 0..n {
        let mut p = xi.to_vec();
        let mut q = xi.to_vec();
        p[k] += step;
        q[k] -= step;
        let (gp, gq) = (sys.gradient(&p)?, sys.gradient(&q)?);
        for j in 0..n {
            fd[(j, k)] = (gp[j] - gq[j]) / (2.0 * step);
        }
        let dm = (sys.morse_value(&p)? - sys.morse_value(&q)?) / (2.0 * step);
        morse_rel = morse_rel.max((dm - g[k]).abs() / g[k].abs().max(1.0));
    }
    let scale = h.abs().max().max(1.0);
    Ok(FdCheck {
        hessian_rel: (&h - fd).abs().max() / scale,
        morse_rel,
        cholesky_ok: h.cholesky().is_some(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub case: usize,
    pub checks: BTreeMap<String, usize>,
    pub failure: Option<(String, Config)>,
}

/// One verify case: a random polynomial (family rotating with `case`), a
/// random `alpha > 0` system (type and kind rotating with `case`) and a
/// finite-difference check at a random point of the latter.
pub fn run_case(seed: u64, case: usize) -> CaseOutcome {
    let mut rng = case_rng(seed, case);
    let mut out = CaseOutcome {
        case,
        checks: BTreeMap::new(),
        failure: None,
    };
    let family = FAMILIES[case % 3];
    let n = rng.gen_range(1..=MAX_DEGREE);
    let spec = random_polynomial(&mut rng, family, n, (case / 3) % 4 == 0);
    let stype = if (case / 3) % 2 == 0 { SystemType::A } else { SystemType::B };
    let sys = random_system(&mut rng, stype, KINDS[case % 3]);
    let point = random_point(&mut rng, &sys);

    let poly_cfg = || Problem::Polynomial(spec.clone()).to_config();
    let sys_cfg = || Problem::System(sys.clone()).to_config();
    let fail = |out: &mut CaseOutcome, msg: String, cfg: Config| {
        if out.failure.is_none() {
            out.failure = Some((format!("case {case}: {msg}"), cfg));
        }
    };
    let count = |out: &mut CaseOutcome, name: &str| *out.checks.entry(name.to_string()).or_insert(0) += 1;

    match check_polynomial(&spec) {
        Ok(c) => {
            count(&mut out, "oracle equivalence");
            count(&mut out, "polynomial bounds");
            count(&mut out, "polynomial residuals");
            if c.discrepancy > DISCREPANCY_TOL {
                fail(&mut out, format!("Bethe and oracle zeros differ by {:e}", c.discrepancy), poly_cfg());
            } else if c.bound_violation > BOUND_TOL {
                fail(&mut out, format!("bound violated by {:e}", c.bound_violation), poly_cfg());
            } else if c.bethe_residual > RESIDUAL_TOL || c.de_residual > RESIDUAL_TOL {
                fail(
                    &mut out,
                    format!("residuals bethe {:e}, difference equation {:e}", c.bethe_residual, c.de_residual),
                    poly_cfg(),
                );
            }
        }
        Err(e) => fail(&mut out, e.to_string(), poly_cfg()),
    }
    match check_system(&sys) {
        Ok(c) => {
            count(&mut out, "system bounds");
            if c.bound_violation > BOUND_TOL {
                fail(&mut out, format!("system bound violated by {:e}", c.bound_violation), sys_cfg());
            } else if c.bethe_residual > RESIDUAL_TOL {
                fail(&mut out, format!("system Bethe residual {:e}", c.bethe_residual), sys_cfg());
            }
        }
        Err(e) => fail(&mut out, e.to_string(), sys_cfg()),
    }
    match fd_check_at(&sys, &point) {
        Ok(c) => {
            count(&mut out, "finite differences");
            if c.hessian_rel > HESSIAN_TOL || c.morse_rel > MORSE_TOL || !c.cholesky_ok {
                fail(
                    &mut out,
                    format!(
                        "finite differences at {point:?}: hessian {:e}, morse {:e}, cholesky {}",
                        c.hessian_rel, c.morse_rel, c.cholesky_ok
                    ),
                    sys_cfg(),
                );
            }
        }
        Err(e) => fail(&mut out, e.to_string(), sys_cfg()),
    }
    out
}

/// Worker count from `BETHE_ZEROS_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Validation(format!("{THREADS_ENV} must be a positive integer, got \"{v}\""))),
        },
    }
}

/// Runs cases `0..cases` in parallel; outcomes are returned in case order.
pub fn run_cases(seed: u64, cases: usize, threads: Option<usize>) -> Result<Vec<CaseOutcome>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..cases).into_par_iter().map(|c| run_case(seed, c)).collect()))
}
