//! Convex Bethe systems of type A and B: validation, the Yang–Yang Morse
//! function, its gradient (the critical equations), Hessian, and the
//! residual of the exponentiated product-form Bethe equations.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{CoupledParameter, PotentialKind};

/// Periodic (`A`) or open-boundary (`B`) system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemType {
    A,
    B,
}

/// A strictly decreasing integer weight `mu`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    /// Membership in the dominant cone of type A.
    pub fn in_lambda_a(&self) -> bool {
        !self.is_empty() && self.is_strictly_decreasing()
    }

    /// Membership in the dominant cone of type B.
    pub fn in_lambda_b(&self) -> bool {
        self.in_lambda_a() && *self.0.last().expect("non-empty") > 0
    }
}

/// `rho = (n, n-1, ..., 1)`.
pub fn make_rho(n: usize) -> Result<WeightVector> {
    if n == 0 {
        return Err(Error::Validation("rho requires n >= 1".into()));
    }
    Ok(WeightVector((1..=n as i64).rev().collect()))
}

/// `rho~_j = floor((n + 1 - 2j) / 2)` together with `beta_n` (1/2 for even
/// `n`, 0 for odd `n`).
pub fn make_rho_tilde_and_beta(n: usize) -> Result<(WeightVector, f64)> {
    if n == 0 {
        return Err(Error::Validation("rho~ requires n >= 1".into()));
    }
    let n = n as i64;
    let mu = (1..=n).map(|j| (n + 1 - 2 * j).div_euclid(2)).collect();
    let beta = if n % 2 == 0 { 0.5 } else { 0.0 };
    Ok((WeightVector(mu), beta))
}

/// A convex Bethe system.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheSystem {
    pub stype: SystemType,
    pub kind: PotentialKind,
    pub n: usize,
    pub alpha: f64,
    /// Type A only.
    pub beta: Option<f64>,
    /// Type B only; 0 or 1.
    pub epsilon: Option<u8>,
    pub a_params: Vec<CoupledParameter>,
    pub b_params: Vec<CoupledParameter>,
    pub mu: WeightVector,
}

impl BetheSystem {
    pub fn type_a(
        kind: PotentialKind,
        alpha: f64,
        beta: f64,
        a_params: Vec<CoupledParameter>,
        b_params: Vec<CoupledParameter>,
        mu: WeightVector,
    ) -> Result<Self> {
        let sys = BetheSystem {
            stype: SystemType::A,
            kind,
            n: mu.len(),
            alpha,
            beta: Some(beta),
            epsilon: None,
            a_params,
            b_params,
            mu,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn type_b(
        kind: PotentialKind,
        alpha: f64,
        epsilon: u8,
        a_params: Vec<CoupledParameter>,
        b_params: Vec<CoupledParameter>,
        mu: WeightVector,
    ) -> Result<Self> {
        let sys = BetheSystem {
            stype: SystemType::B,
            kind,
            n: mu.len(),
            alpha,
            beta: None,
            epsilon: Some(epsilon),
            a_params,
            b_params,
            mu,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// `K`, counting a conjugate pair as two parameters.
    pub fn k_count(&self) -> usize {
        self.a_params.iter().map(CoupledParameter::multiplicity).sum()
    }

    /// `L`, counting a conjugate pair as two parameters.
    pub fn l_count(&self) -> usize {
        self.b_params.iter().map(CoupledParameter::multiplicity).sum()
    }

    /// `beta` for type A, `epsilon / 2` for type B.
    pub fn shift(&self) -> f64 {
        match self.stype {
            SystemType::A => self.beta.unwrap_or(0.0),
            SystemType::B => f64::from(self.epsilon.unwrap_or(0)) / 2.0,
        }
    }

    /// Right-hand sides `2 pi (mu_j + shift)` of the critical equations.
    pub fn targets(&self) -> Vec<f64> {
        let s = self.shift();
        self.mu.0.iter().map(|&m| 2.0 * PI * (m as f64 + s)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Validation("n must be at least 1".into()));
        }
        if self.mu.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: self.mu.len(),
            });
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Domain(format!("alpha = {} must lie in [0, inf)", self.alpha)));
        }
        for p in self.a_params.iter().chain(&self.b_params) {
            p.validate()?;
            if p.kind != self.kind {
                return Err(Error::Validation(format!(
                    "parameter of kind {} in a {} system",
                    p.kind.name(),
                    self.kind.name()
                )));
            }
        }
        match self.stype {
            SystemType::A => {
                if self.epsilon.is_some() {
                    return Err(Error::Validation("epsilon belongs to type B systems only".into()));
                }
                let beta = self
                    .beta
                    .ok_or_else(|| Error::Validation("type A system requires beta".into()))?;
                if !(0.0..1.0).contains(&beta) {
                    return Err(Error::Domain(format!("beta = {beta} must lie in [0, 1)")));
                }
                if !self.mu.in_lambda_a() {
                    return Err(Error::Validation("type A weight must be strictly decreasing".into()));
                }
            }
            SystemType::B => {
                if self.beta.is_some() {
                    return Err(Error::Validation("beta belongs to type A systems only".into()));
                }
                let eps = self
                    .epsilon
                    .ok_or_else(|| Error::Validation("type B system requires epsilon".into()))?;
                if eps > 1 {
                    return Err(Error::Domain(format!("epsilon = {eps} must be 0 or 1")));
                }
                if !self.mu.in_lambda_b() {
                    return Err(Error::Validation(
                        "type B weight must be strictly decreasing with positive entries".into(),
                    ));
                }
            }
        }
        if self.alpha == 0.0 {
            self.validate_alpha_zero()?;
        }
        Ok(())
    }

    /// The degenerate `alpha = 0` systems for which a unique minimum is
    /// guaranteed.
    fn validate_alpha_zero(&self) -> Result<()> {
        let k = self.k_count();
        let l = self.l_count();
        if self.kind == PotentialKind::Hyperbolic {
            return Err(Error::Validation(
                "alpha = 0 is not supported for hyperbolic systems: existence of the minimum is only \
                 known for parameters sufficiently close to 0 in the interval (0, pi)"
                    .into(),
            ));
        }
        match self.stype {
            SystemType::B => match self.kind {
                PotentialKind::Rational => {
                    if k <= 2 || l == 0 {
                        return Err(Error::Validation(format!(
                            "rational type B at alpha = 0 requires K > 2 and L > 0 (got K = {k}, L = {l})"
                        )));
                    }
                    if self.mu != make_rho(self.n)? {
                        return Err(Error::Validation(
                            "rational type B at alpha = 0 requires mu = rho = (n, ..., 1)".into(),
                        ));
                    }
                    if self.epsilon != Some(0) {
                        return Err(Error::Validation(
                            "rational type B at alpha = 0 requires epsilon = 0".into(),
                        ));
                    }
                }
                PotentialKind::Trigonometric => {
                    if k == 0 {
                        return Err(Error::Validation(
                            "trigonometric type B at alpha = 0 requires K > 0".into(),
                        ));
                    }
                }
                PotentialKind::Hyperbolic => unreachable!(),
            },
            SystemType::A => {
                if self.kind != PotentialKind::Rational {
                    return Err(Error::Validation(
                        "type A at alpha = 0 is only supported for rational systems".into(),
                    ));
                }
                if k == 0 || l == 0 {
                    return Err(Error::Validation(format!(
                        "rational type A at alpha = 0 requires K > 0 and L > 0 (got K = {k}, L = {l})"
                    )));
                }
                let (rho_tilde, beta_n) = make_rho_tilde_and_beta(self.n)?;
                if self.mu != rho_tilde || self.beta != Some(beta_n) {
                    return Err(Error::Validation(
                        "rational type A at alpha = 0 requires mu = rho~ and beta = beta_n".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_dim(&self, xi: &[f64]) -> Result<()> {
        if xi.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: xi.len(),
            });
        }
        Ok(())
    }

    fn sum_a(&self, x: f64) -> f64 {
        self.a_params.iter().map(|p| p.value(x)).sum()
    }

    fn sum_b(&self, x: f64) -> f64 {
        self.b_params.iter().map(|p| p.value(x)).sum()
    }

    fn sum_a_deriv(&self, x: f64) -> f64 {
        self.a_params.iter().map(|p| p.derivative(x)).sum()
    }

    fn sum_b_deriv(&self, x: f64) -> f64 {
        self.b_params.iter().map(|p| p.derivative(x)).sum()
    }

    /// Left-hand side minus right-hand side of the critical equations.
    pub fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(xi)?;
        let targets = self.targets();
        let grad = (0..self.n)
            .map(|j| {
                let x = xi[j];
                let mut lhs = match self.stype {
                    SystemType::A => self.alpha * x,
                    SystemType::B => 2.0 * self.alpha * x,
                };
                lhs += self.sum_a(x);
                for (jp, &y) in xi.iter().enumerate() {
                    if jp == j {
                        continue;
                    }
                    lhs += match self.stype {
                        SystemType::A => self.sum_b(x - y),
                        SystemType::B => self.sum_b(x + y) + self.sum_b(x - y),
                    };
                }
                lhs - targets[j]
            })
            .collect();
        Ok(grad)
    }

    /// Hessian of the Morse function.
    pub fn hessian(&self, xi: &[f64]) -> Result<DMatrix<f64>> {
        self.check_dim(xi)?;
        let n = self.n;
        let diag_alpha = match self.stype {
            SystemType::A => self.alpha,
            SystemType::B => 2.0 * self.alpha,
        };
        let mut h = DMatrix::zeros(n, n);
        for j in 0..n {
            h[(j, j)] = diag_alpha + self.sum_a_deriv(xi[j]);
        }
        for j in 0..n {
            for jp in (j + 1)..n {
                let diff = self.sum_b_deriv(xi[j] - xi[jp]);
                let (diag, off) = match self.stype {
                    SystemType::A => (diff, -diff),
                    SystemType::B => {
                        let sum = self.sum_b_deriv(xi[j] + xi[jp]);
                        (sum + diff, sum - diff)
                    }
                };
                h[(j, j)] += diag;
                h[(jp, jp)] += diag;
                h[(j, jp)] = off;
                h[(jp, j)] = off;
            }
        }
        Ok(h)
    }

    /// The Yang–Yang Morse function. Hyperbolic and trigonometric
    /// antiderivatives go through quadrature, so this is diagnostic only.
    pub fn morse_value(&self, xi: &[f64]) -> Result<f64> {
        self.check_dim(xi)?;
        let quad_coef = match self.stype {
            SystemType::A => 0.5 * self.alpha,
            SystemType::B => self.alpha,
        };
        let targets = self.targets();
        let mut total = 0.0;
        for j in 0..self.n {
            let x = xi[j];
            total += quad_coef * x * x - targets[j] * x;
            for p in &self.a_params {
                total += p.antiderivative(x)?;
            }
        }
        for j in 0..self.n {
            for jp in (j + 1)..self.n {
                for p in &self.b_params {
                    total += p.antiderivative(xi[j] - xi[jp])?;
                    if self.stype == SystemType::B {
                        total += p.antiderivative(xi[j] + xi[jp])?;
                    }
                }
            }
        }
        Ok(total)
    }

    /// `|LHS_j / RHS_j - 1|` of the exponentiated Bethe equations, evaluated
    /// in complex arithmetic from `s(ia +- x)`.
    pub fn bethe_residual(&self, xi: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(xi)?;
        let mut out = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let x = xi[j];
            let (lhs, mut rhs) = match self.stype {
                SystemType::A => (
                    Complex64::new(0.0, self.alpha * x).exp(),
                    Complex64::new(0.0, 2.0 * PI * self.beta.unwrap_or(0.0)).exp(),
                ),
                SystemType::B => (
                    Complex64::new(0.0, 2.0 * self.alpha * x).exp(),
                    Complex64::new(if self.epsilon == Some(1) { -1.0 } else { 1.0 }, 0.0),
                ),
            };
            for p in &self.a_params {
                rhs *= p.bethe_factor(x)?;
            }
            for (jp, &y) in xi.iter().enumerate() {
                if jp == j {
                    continue;
                }
                for p in &self.b_params {
                    rhs *= p.bethe_factor(x - y)?;
                    if self.stype == SystemType::B {
                        rhs *= p.bethe_factor(x + y)?;
                    }
                }
            }
            if rhs.norm() == 0.0 || !rhs.is_finite() {
                return Err(Error::Singularity(format!("Bethe product vanishes at j = {}", j + 1)));
            }
            out.push((lhs / rhs - 1.0).norm());
        }
        Ok(out)
    }

    /// Whether `xi` lies in the open wedge (type A) or open cone (type B).
    pub fn in_fundamental_domain(&self, xi: &[f64]) -> bool {
        let ordered = xi.windows(2).all(|w| w[0] > w[1]);
        match self.stype {
            SystemType::A => ordered,
            SystemType::B => ordered && xi.last().is_some_and(|&x| x > 0.0),
        }
    }
}
