//! C ABI for `bethe-zeros`.
//!
//! Problems and solutions are opaque heap handles owned by the caller and
//! released with `bz_problem_free` / `bz_solution_free`. Every function
//! returns a [`BzStatus`]; on failure the message is available from
//! `bz_last_error_message` on the same thread. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bethe_zeros::bounds::bound_box;
use bethe_zeros::{
    family_to_bethe, parse_config, solve, zeros_via_oracle, BetheSystem, Error, Family, PolynomialSpec, Problem,
    SolverConfig,
};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BzStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed input, domain violation or dimension mismatch.
    InvalidArgument = 2,
    NonConvergence = 3,
    /// Singularity, numeric instability or oracle failure.
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// A validated Bethe system or polynomial.
pub struct BzProblem {
    problem: Problem,
}

/// Roots in decreasing order with their bounds and certificate.
pub struct BzSolution {
    roots: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    iterations: usize,
    grad_norm: f64,
    bethe_residual_max: f64,
    within_bounds: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> BzStatus {
    match e {
        Error::Domain(_) | Error::Validation(_) | Error::Dimension { .. } | Error::Unsupported(_) => {
            BzStatus::InvalidArgument
        }
        Error::NonConvergence { .. } => BzStatus::NonConvergence,
        Error::Singularity(_) | Error::NumericInstability(_) | Error::OracleFailure(_) => BzStatus::Numerical,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), (BzStatus, String)>>(f: F) -> BzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BzStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BzStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (BzStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (BzStatus, String) {
    (BzStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (BzStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (BzStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Parses a JSON document (`{"system": ...}` or `{"polynomial": ...}`).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bz_problem_from_json(json: *const c_char, out: *mut *mut BzProblem) -> BzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        let problem = parse_config(text).map_err(lib_err)?;
        write_out(out, BzProblem { problem });
        Ok(())
    })
}

/// Builds a polynomial problem. `family` is `"wilson"`, `"askey-wilson"`
/// or `"continuous-hahn"`; `params_im` may be null for real parameters.
///
/// # Safety
/// `params_re` (and `params_im` if non-null) must point to `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn bz_polynomial_new(
    family: *const c_char,
    n: usize,
    params_re: *const f64,
    params_im: *const f64,
    count: usize,
    out: *mut *mut BzProblem,
) -> BzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let family: Family = read_str(family, "family")?.parse().map_err(lib_err)?;
        if params_re.is_null() && count > 0 {
            return Err(null("params_re"));
        }
        let params: Vec<Complex64> = (0..count)
            .map(|k| {
                let im = if params_im.is_null() { 0.0 } else { *params_im.add(k) };
                Complex64::new(*params_re.add(k), im)
            })
            .collect();
        let spec = PolynomialSpec::new(family, n, params).map_err(lib_err)?;
        write_out(
            out,
            BzProblem {
                problem: Problem::Polynomial(spec),
            },
        );
        Ok(())
    })
}

/// # Safety
/// `problem` must come from this library (or be null) and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bz_problem_free(problem: *mut BzProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of unknowns.
///
/// # Safety
/// `problem` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bz_problem_size(problem: *const BzProblem, out: *mut usize) -> BzStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match &p.problem {
            Problem::System(s) => s.n,
            Problem::Polynomial(s) => s.n,
        };
        Ok(())
    })
}

fn system_of(p: &BzProblem) -> Result<BetheSystem, (BzStatus, String)> {
    match &p.problem {
        Problem::System(s) => Ok(s.clone()),
        Problem::Polynomial(s) => family_to_bethe(s).map_err(lib_err),
    }
}

/// Minimizes the Morse function. `grad_tol <= 0` and `max_iters == 0` select
/// the defaults (`1e-12`, `200`).
///
/// # Safety
/// `problem` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bz_solve(
    problem: *const BzProblem,
    grad_tol: f64,
    max_iters: usize,
    out: *mut *mut BzSolution,
) -> BzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        let mut cfg = SolverConfig::default();
        if grad_tol > 0.0 {
            cfg.grad_tol = grad_tol;
        }
        if max_iters > 0 {
            cfg.max_iters = max_iters;
        }
        let sys = system_of(p)?;
        let sol = solve(&sys, &cfg).map_err(lib_err)?;
        let bx = bound_box(&sys).map_err(lib_err)?;
        write_out(
            out,
            BzSolution {
                lower: bx.coord_lower.clone(),
                upper: (0..sys.n).map(|j| bx.upper(j)).collect(),
                roots: sol.xi,
                iterations: sol.iterations,
                grad_norm: sol.grad_norm,
                bethe_residual_max: sol.bethe_residual_max,
                within_bounds: sol.within_bounds,
            },
        );
        Ok(())
    })
}

/// # Safety
/// `solution` must come from this library (or be null) and not be used again.
#[no_mangle]
pub unsafe extern "C" fn bz_solution_free(solution: *mut BzSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), (BzStatus, String)> {
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if len < src.len() {
        return Err((
            BzStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Copies the roots (decreasing) into `buf`.
///
/// # Safety
/// `solution` must be a valid handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bz_solution_roots(solution: *const BzSolution, buf: *mut f64, len: usize) -> BzStatus {
    guard(|| copy_out(&solution.as_ref().ok_or_else(|| null("solution"))?.roots, buf, len))
}

/// Coordinate lower bounds (`-INFINITY` where none is known).
///
/// # Safety
/// As [`bz_solution_roots`].
#[no_mangle]
pub unsafe extern "C" fn bz_solution_lower(solution: *const BzSolution, buf: *mut f64, len: usize) -> BzStatus {
    guard(|| copy_out(&solution.as_ref().ok_or_else(|| null("solution"))?.lower, buf, len))
}

/// Coordinate upper bounds (`INFINITY` where none is known).
///
/// # Safety
/// As [`bz_solution_roots`].
#[no_mangle]
pub unsafe extern "C" fn bz_solution_upper(solution: *const BzSolution, buf: *mut f64, len: usize) -> BzStatus {
    guard(|| copy_out(&solution.as_ref().ok_or_else(|| null("solution"))?.upper, buf, len))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BzCertificate {
    pub iterations: usize,
    pub grad_norm: f64,
    pub bethe_residual_max: f64,
    pub within_bounds: bool,
}

/// # Safety
/// `solution` must be a valid handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bz_solution_certificate(solution: *const BzSolution, out: *mut BzCertificate) -> BzStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = BzCertificate {
            iterations: s.iterations,
            grad_norm: s.grad_norm,
            bethe_residual_max: s.bethe_residual_max,
            within_bounds: s.within_bounds,
        };
        Ok(())
    })
}

/// Zeros of a polynomial problem by sign scanning and bisection.
///
/// # Safety
/// `problem` must be a valid handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bz_oracle_zeros(problem: *const BzProblem, buf: *mut f64, len: usize) -> BzStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        let Problem::Polynomial(spec) = &p.problem else {
            return Err((BzStatus::InvalidArgument, "the oracle needs a polynomial problem".into()));
        };
        let zeros = zeros_via_oracle(spec).map_err(lib_err)?;
        copy_out(&zeros, buf, len)
    })
}

/// Message of the last failed call on this thread (empty after success).
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn bz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn bz_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}
