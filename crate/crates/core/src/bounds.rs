//! A-priori constants and bound boxes for the global minimum.
//!
//! Normalization: `kappa_pm` returns the constants that enter the bounds in
//! the form
//!
//! * type A gaps: `2 pi (mu_j - mu_j') / (alpha + kappa)`,
//! * type B coordinates: `pi (mu_j + eps/2) / (alpha + kappa)`,
//!
//! i.e. `kappa = sum_k max v_a' + n sum_l max v_b'` for type A and
//! `kappa = (1/2) sum_k max v_a' + (n - 1) sum_l max v_b'` for type B (and the
//! same with `min` for `kappa_plus`). The family constants `k^(n)` used for
//! polynomial zeros are `k = kappa` for type B systems and `k = kappa / 2`
//! for type A systems, see [`normalized_k`].

use std::f64::consts::PI;

use crate::bethe_system::{make_rho, make_rho_tilde_and_beta, BetheSystem, SystemType};
use crate::error::{Error, Result};
use crate::polyzeros::{Family, PolynomialSpec};
use crate::potentials::{CoupledParameter, PotentialKind};

/// Coordinate and gap bounds. `gap_lower[(j, j')]` / `gap_upper[(j, j')]`
/// bound `xi_j - xi_j'` for `j < j'`; other entries are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundBox {
    pub coord_lower: Vec<f64>,
    pub coord_upper: Vec<f64>,
    /// Extra upper cap on every coordinate (trigonometric type B at
    /// `alpha = 0` with `K > 2`, `L > 0`, `mu = rho`, `eps = 0`: roots lie in
    /// `(0, pi)`).
    pub coord_cap: Option<f64>,
    pub gap_lower: Vec<Vec<f64>>,
    pub gap_upper: Vec<Vec<f64>>,
    pub kappa_minus: f64,
    pub kappa_plus: f64,
}

impl BoundBox {
    /// Effective coordinate upper bound including the cap.
    pub fn upper(&self, j: usize) -> f64 {
        match self.coord_cap {
            Some(c) => self.coord_upper[j].min(c),
            None => self.coord_upper[j],
        }
    }

    /// Largest violation of any coordinate or gap inequality by `xi`
    /// (0 when all hold).
    pub fn max_violation(&self, xi: &[f64]) -> f64 {
        let n = xi.len();
        let mut worst: f64 = 0.0;
        for (j, &x) in xi.iter().enumerate() {
            worst = worst.max(self.coord_lower[j] - x);
            worst = worst.max(x - self.upper(j));
            for jp in (j + 1)..n {
                let gap = x - xi[jp];
                worst = worst.max(self.gap_lower[j][jp] - gap);
                worst = worst.max(gap - self.gap_upper[j][jp]);
            }
        }
        worst
    }

    /// Whether every inequality holds up to `abs_slack` plus a few ulps of
    /// the bound itself.
    pub fn contains(&self, xi: &[f64], abs_slack: f64) -> bool {
        let n = xi.len();
        let tol = |b: f64| abs_slack + 4.0 * f64::EPSILON * if b.is_finite() { b.abs() } else { 0.0 };
        for (j, &x) in xi.iter().enumerate() {
            let (lo, up) = (self.coord_lower[j], self.upper(j));
            if x < lo - tol(lo) || x > up + tol(up) {
                return false;
            }
            for jp in (j + 1)..n {
                let gap = x - xi[jp];
                let (glo, gup) = (self.gap_lower[j][jp], self.gap_upper[j][jp]);
                if gap < glo - tol(glo) || gap > gup + tol(gup) {
                    return false;
                }
            }
        }
        true
    }
}

fn sum_range(params: &[CoupledParameter]) -> (f64, f64) {
    params.iter().fold((0.0, 0.0), |(mx, mn), p| {
        let r = p.base_deriv_range();
        let m = p.multiplicity() as f64;
        (mx + m * r.max, mn + m * r.min)
    })
}

/// `(kappa_minus, kappa_plus)`; conjugate pairs contribute twice the term of
/// their real part.
pub fn kappa_pm(sys: &BetheSystem) -> (f64, f64) {
    let (a_max, a_min) = sum_range(&sys.a_params);
    let (b_max, b_min) = sum_range(&sys.b_params);
    let n = sys.n as f64;
    match sys.stype {
        SystemType::A => (a_max + n * b_max, a_min + n * b_min),
        SystemType::B => (0.5 * a_max + (n - 1.0) * b_max, 0.5 * a_min + (n - 1.0) * b_min),
    }
}

/// `kappa_pm` rescaled to the family convention `k^(n)`.
pub fn normalized_k(sys: &BetheSystem) -> (f64, f64) {
    let (km, kp) = kappa_pm(sys);
    match sys.stype {
        SystemType::A => (0.5 * km, 0.5 * kp),
        SystemType::B => (km, kp),
    }
}

fn div_or_inf(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(num)
        }
    } else {
        num / den
    }
}

/// Whether the trigonometric roots are known to lie in `(0, pi)`.
pub fn has_pi_cap(sys: &BetheSystem) -> bool {
    sys.kind == PotentialKind::Trigonometric
        && sys.stype == SystemType::B
        && sys.alpha == 0.0
        && sys.k_count() > 2
        && sys.l_count() > 0
        && sys.epsilon == Some(0)
        && make_rho(sys.n).is_ok_and(|rho| rho == sys.mu)
}

/// Whether the type A system is the symmetric `alpha = 0`, `mu = rho~`
/// configuration whose roots are placed antisymmetrically about 0.
fn is_symmetric_type_a(sys: &BetheSystem) -> bool {
    sys.stype == SystemType::A
        && sys.alpha == 0.0
        && sys
            .a_params
            .iter()
            .chain(&sys.b_params)
            .all(|p| p.kind == PotentialKind::Rational)
        && make_rho_tilde_and_beta(sys.n).is_ok_and(|(rt, b)| rt == sys.mu && sys.beta == Some(b))
}

pub fn bound_box(sys: &BetheSystem) -> Result<BoundBox> {
    sys.validate()?;
    let n = sys.n;
    let (km, kp) = kappa_pm(sys);
    let den_lo = sys.alpha + km;
    let den_up = sys.alpha + kp;
    if den_lo <= 0.0 {
        return Err(Error::Validation("bounds require alpha + kappa_minus > 0".into()));
    }
    let mu: Vec<f64> = sys.mu.as_slice().iter().map(|&m| m as f64).collect();
    let mut gap_lower = vec![vec![0.0; n]; n];
    let mut gap_upper = vec![vec![0.0; n]; n];
    let gap_scale = match sys.stype {
        SystemType::A => 2.0 * PI,
        SystemType::B => PI,
    };
    for j in 0..n {
        for jp in (j + 1)..n {
            let d = gap_scale * (mu[j] - mu[jp]);
            gap_lower[j][jp] = d / den_lo;
            gap_upper[j][jp] = div_or_inf(d, den_up);
        }
    }
    let (coord_lower, coord_upper) = match sys.stype {
        SystemType::B => {
            let s = sys.shift();
            let lo = mu.iter().map(|m| PI * (m + s) / den_lo).collect();
            let up = mu.iter().map(|m| div_or_inf(PI * (m + s), den_up)).collect();
            (lo, up)
        }
        SystemType::A if is_symmetric_type_a(sys) => {
            // Antisymmetric roots: 2 xi_j = xi_j - xi_{n+1-j} is a gap.
            let mut lo = vec![f64::NEG_INFINITY; n];
            let mut up = vec![f64::INFINITY; n];
            for j in 1..=n {
                let c = (n + 1) as f64 - 2.0 * j as f64;
                if c >= 0.0 {
                    lo[j - 1] = PI * c / den_lo;
                    if c == 0.0 {
                        up[j - 1] = 0.0;
                    }
                } else {
                    up[j - 1] = PI * c / den_lo;
                }
            }
            (lo, up)
        }
        SystemType::A => (vec![f64::NEG_INFINITY; n], vec![f64::INFINITY; n]),
    };
    Ok(BoundBox {
        coord_lower,
        coord_upper,
        coord_cap: has_pi_cap(sys).then_some(PI),
        gap_lower,
        gap_upper,
        kappa_minus: km,
        kappa_plus: kp,
    })
}

/// Family constants `(k_minus, k_plus)` for the zeros of degree-`n`
/// polynomials; Wilson and continuous Hahn have `k_plus = 0` (no upper
/// bound). Conjugate pairs enter through `Re` (Wilson, continuous Hahn) or
/// the modulus (Askey-Wilson).
pub fn family_k_pm(spec: &PolynomialSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    let n = spec.n as f64;
    let groups = spec.groups()?;
    match spec.family {
        Family::Wilson => {
            let s: f64 = groups.iter().map(|g| g.multiplicity() / g.value().re).sum();
            Ok((2.0 * (n - 1.0) + s, 0.0))
        }
        Family::ContinuousHahn => {
            let s: f64 = groups.iter().map(|g| g.multiplicity() / g.value().re).sum();
            Ok((n + s, 0.0))
        }
        Family::AskeyWilson => {
            let ratio = |m: f64| (1.0 - m) / (1.0 + m);
            let q = ratio(spec.q().expect("askey-wilson q").abs());
            let (mut sm, mut sp) = (0.0, 0.0);
            for g in &groups {
                let r = ratio(g.value().norm());
                sm += g.multiplicity() / r;
                sp += g.multiplicity() * r;
            }
            Ok(((n - 1.0) / q + 0.5 * sm, (n - 1.0) * q + 0.5 * sp))
        }
    }
}
