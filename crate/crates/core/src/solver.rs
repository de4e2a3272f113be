//! Damped Newton minimization of the Morse function.

use log::warn;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::bethe_system::{BetheSystem, SystemType};
use crate::bounds::{bound_box, BoundBox};
use crate::error::{Error, Result};

const ARMIJO: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;
/// Absolute slack when checking the bound box on a converged solution.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stopping tolerance on the infinity norm of the gradient.
    pub grad_tol: f64,
    pub max_iters: usize,
    /// Compare the analytic Hessian with finite differences of the
    /// gradient at the starting point.
    pub fd_check: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            grad_tol: 1e-12,
            max_iters: 200,
            fd_check: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0 && self.grad_tol.is_finite()) {
            return Err(Error::Validation(format!("grad_tol = {} must be positive", self.grad_tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::Validation("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheSolution {
    pub xi: Vec<f64>,
    pub iterations: usize,
    pub grad_norm: f64,
    pub bethe_residual_max: f64,
    pub within_bounds: bool,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Starting point built from the bound box.
pub fn initial_point(sys: &BetheSystem) -> Result<Vec<f64>> {
    let bx = bound_box(sys)?;
    Ok(initial_point_from_box(sys, &bx))
}

fn interior(lo: f64, up: f64) -> f64 {
    if up.is_finite() {
        0.5 * (lo + up)
    } else {
        1.5 * lo
    }
}

fn initial_point_from_box(sys: &BetheSystem, bx: &BoundBox) -> Vec<f64> {
    let n = sys.n;
    match sys.stype {
        SystemType::B => (0..n).map(|j| interior(bx.coord_lower[j], bx.upper(j))).collect(),
        SystemType::A => {
            let mut xi = vec![0.0; n];
            let t = sys.targets();
            xi[n - 1] = t[n - 1] / (sys.alpha + bx.kappa_minus);
            for j in (0..n - 1).rev() {
                xi[j] = xi[j + 1] + interior(bx.gap_lower[j][j + 1], bx.gap_upper[j][j + 1]);
            }
            if sys.alpha == 0.0 {
                // Centre the (antisymmetric) configuration.
                let mean = xi.iter().sum::<f64>() / n as f64;
                xi.iter_mut().for_each(|x| *x -= mean);
            }
            xi
        }
    }
}

fn fd_check(sys: &BetheSystem, xi: &[f64]) -> Result<()> {
    let h = sys.hessian(xi)?;
    let step = 1e-6;
    let scale = h.abs().max().max(1.0);
    for k in 0..xi.len() {
        let mut p = xi.to_vec();
        let mut q = xi.to_vec();
        p[k] += step;
        q[k] -= step;
        let gp = sys.gradient(&p)?;
        let gq = sys.gradient(&q)?;
        for j in 0..xi.len() {
            let fd = (gp[j] - gq[j]) / (2.0 * step);
            if (fd - h[(j, k)]).abs() > 1e-5 * scale {
                return Err(Error::NumericInstability(format!(
                    "Hessian entry ({j}, {k}) = {} disagrees with finite difference {fd}",
                    h[(j, k)]
                )));
            }
        }
    }
    Ok(())
}

/// Upper bound on `f(xi + t d) - f(xi)`: `phi' = g . d` is nondecreasing
/// along the ray, so right Riemann sums of it bound the increment from
/// above. The grid is refined (up to 16 cells) until the bound drops to
/// `target`. `None` when the gradient fails on the segment.
fn ray_increment_bound(sys: &BetheSystem, xi: &[f64], dir: &[f64], t: f64, dphi_t: f64, target: f64) -> Option<f64> {
    let dphi = |s: f64| -> Option<f64> {
        let p: Vec<f64> = xi.iter().zip(dir).map(|(x, d)| x + s * d).collect();
        let g = sys.gradient(&p).ok()?;
        let v: f64 = g.iter().zip(dir).map(|(a, b)| a * b).sum();
        v.is_finite().then_some(v)
    };
    // right endpoints k t / m for k = 1..m
    let mut values = vec![dphi_t];
    let mut bound = t * dphi_t;
    while bound > target && values.len() < 16 {
        let m = 2 * values.len();
        let mut refined = Vec::with_capacity(m);
        for (k, &v) in values.iter().enumerate() {
            refined.push(dphi(t * (2 * k + 1) as f64 / m as f64)?);
            refined.push(v);
        }
        values = refined;
        bound = t / m as f64 * values.iter().sum::<f64>();
    }
    Some(bound)
}

/// Solves from the default starting point.
pub fn solve(sys: &BetheSystem, cfg: &SolverConfig) -> Result<BetheSolution> {
    sys.validate()?;
    let bx = bound_box(sys)?;
    let start = initial_point_from_box(sys, &bx);
    run(sys, cfg, &bx, start)
}

/// Solves from an explicit starting point.
pub fn solve_from(sys: &BetheSystem, cfg: &SolverConfig, start: &[f64]) -> Result<BetheSolution> {
    sys.validate()?;
    if start.len() != sys.n {
        return Err(Error::Dimension {
            expected: sys.n,
            got: start.len(),
        });
    }
    let bx = bound_box(sys)?;
    run(sys, cfg, &bx, start.to_vec())
}

fn run(sys: &BetheSystem, cfg: &SolverConfig, bx: &BoundBox, mut xi: Vec<f64>) -> Result<BetheSolution> {
    cfg.validate()?;
    if cfg.fd_check {
        fd_check(sys, &xi)?;
    }
    let mut g = sys.gradient(&xi)?;
    let mut iterations = 0;
    while inf_norm(&g) > cfg.grad_tol {
        if iterations >= cfg.max_iters {
            return Err(Error::NonConvergence {
                iterations,
                grad_norm: inf_norm(&g),
                last: xi,
            });
        }
        iterations += 1;
        let h = sys.hessian(&xi)?;
        let gv = DVector::from_column_slice(&g);
        let (dir, newton) = match h.clone().cholesky() {
            Some(ch) => (-ch.solve(&gv), true),
            None => {
                warn!("Hessian factorization failed at iteration {iterations}; taking a steepest-descent step");
                (-(&h * &gv), false)
            }
        };
        let gv_dir = gv.dot(&dir);
        let (dir, slope) = if gv_dir < 0.0 {
            (dir, gv_dir)
        } else {
            (-gv.clone(), -gv.dot(&gv))
        };
        // Armijo on the Morse function f along the ray: phi(t) = f(xi + t d)
        // is convex, so phi'(t) <= c phi'(0) already implies the decrease;
        // otherwise phi(t) - phi(0) is bounded from phi' = g . d.
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = xi.iter().zip(dir.iter()).map(|(x, d)| x + t * d).collect();
            let gt = sys.gradient(&trial)?;
            if gt.iter().all(|v| v.is_finite()) {
                let dphi: f64 = gt.iter().zip(dir.iter()).map(|(a, b)| a * b).sum();
                let bound = ARMIJO * t * slope;
                let ok = dphi <= ARMIJO * slope
                    || ray_increment_bound(sys, &xi, dir.as_slice(), t, dphi, bound).is_some_and(|inc| inc <= bound);
                if ok {
                    accepted = Some((trial, gt));
                    break;
                }
            }
            t *= BACKTRACK;
        }
        match accepted {
            Some((trial, gt)) => {
                xi = trial;
                g = gt;
            }
            None => {
                // Rounding floor: no step length shows a measurable decrease.
                if newton {
                    let trial: Vec<f64> = xi.iter().zip(dir.iter()).map(|(x, d)| x + d).collect();
                    let gt = sys.gradient(&trial)?;
                    if inf_norm(&gt) <= cfg.grad_tol {
                        xi = trial;
                        g = gt;
                        break;
                    }
                }
                return Err(Error::NonConvergence {
                    iterations,
                    grad_norm: inf_norm(&g),
                    last: xi,
                });
            }
        }
    }
    // One polishing Newton step: near the minimum it is quadratically
    // convergent, so it brings xi from tolerance level to rounding level.
    if let Some(ch) = sys.hessian(&xi)?.cholesky() {
        let step = -ch.solve(&DVector::from_column_slice(&g));
        let trial: Vec<f64> = xi.iter().zip(step.iter()).map(|(x, d)| x + d).collect();
        let gt = sys.gradient(&trial)?;
        if inf_norm(&gt) <= inf_norm(&g) {
            xi = trial;
            g = gt;
        }
    }
    let grad_norm = inf_norm(&g);
    let bethe_residual_max = sys.bethe_residual(&xi)?.into_iter().fold(0.0, f64::max);
    let within_bounds = sys.in_fundamental_domain(&xi) && bx.contains(&xi, BOUND_SLACK);
    Ok(BetheSolution {
        xi,
        iterations,
        grad_norm,
        bethe_residual_max,
        within_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe_system::{make_rho, WeightVector};
    use crate::potentials::{CoupledParameter, PotentialKind};
    use std::f64::consts::PI;

    fn aw_table() -> BetheSystem {
        let t = |p| CoupledParameter::from_trig_family_value(p).unwrap();
        BetheSystem::type_b(
            PotentialKind::Trigonometric,
            0.0,
            0,
            vec![t(0.3), t(-0.2), t(0.15), t(0.1)],
            vec![t(0.1)],
            make_rho(5).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn linear_type_b() {
        let sys = BetheSystem::type_b(PotentialKind::Rational, 1.0, 1, vec![], vec![], WeightVector(vec![2, 1])).unwrap();
        let s = solve(&sys, &SolverConfig::default()).unwrap();
        assert!((s.xi[0] - 2.5 * PI).abs() < 1e-13 && (s.xi[1] - 1.5 * PI).abs() < 1e-13);
        assert!(s.within_bounds);
    }

    #[test]
    fn initial_point_examples() {
        let sys = BetheSystem::type_b(PotentialKind::Rational, 1.0, 0, vec![], vec![], WeightVector(vec![1])).unwrap();
        assert!((initial_point(&sys).unwrap()[0] - PI).abs() < 1e-15);
        let sys = BetheSystem::type_a(PotentialKind::Rational, 1.0, 0.0, vec![], vec![], WeightVector(vec![2, 1])).unwrap();
        let x0 = initial_point(&sys).unwrap();
        assert!((x0[0] - 4.0 * PI).abs() < 1e-14 && (x0[1] - 2.0 * PI).abs() < 1e-14);
        let x0 = initial_point(&aw_table()).unwrap();
        assert!(x0.iter().all(|&x| x > 0.0 && x < PI));
    }

    #[test]
    fn aw_table_roots() {
        let s = solve(&aw_table(), &SolverConfig::default()).unwrap();
        let expect = [2.57734013, 2.03318713, 1.50783751, 0.99674169, 0.49585441];
        for (x, e) in s.xi.iter().zip(expect) {
            assert!((x - e).abs() < 1e-7, "{x} vs {e}");
        }
        assert!(s.within_bounds);
        assert!(s.bethe_residual_max < 1e-8);
    }

    #[test]
    fn chebyshev_limit() {
        let f = CoupledParameter::trig_free();
        let sys = BetheSystem::type_b(PotentialKind::Trigonometric, 0.0, 0, vec![f; 4], vec![f], make_rho(5).unwrap()).unwrap();
        let s = solve(&sys, &SolverConfig::default()).unwrap();
        for (j, x) in s.xi.iter().enumerate() {
            assert!((x - PI * (5 - j) as f64 / 6.0).abs() < 1e-13);
        }
    }

    #[test]
    fn non_convergence_reports_last_iterate() {
        let cfg = SolverConfig {
            grad_tol: 1e-12,
            max_iters: 1,
            fd_check: false,
        };
        match solve(&aw_table(), &cfg) {
            Err(Error::NonConvergence { iterations, last, .. }) => {
                assert_eq!(iterations, 1);
                assert_eq!(last.len(), 5);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            grad_tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(solve(&aw_table(), &bad).is_err());
        let fd = SolverConfig {
            fd_check: true,
            ..SolverConfig::default()
        };
        assert!(solve(&aw_table(), &fd).is_ok());
    }
}
