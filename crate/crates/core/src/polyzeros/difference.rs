//! Second-order difference operators of the three families and the
//! two-term identity `A(xi_j) p(xi_j + s) + A(-xi_j) p(xi_j - s) = 0` that
//! holds at every zero `xi_j`.

use num_complex::Complex64;

use super::{eval_in_variable, Family, PolynomialSpec};
use crate::error::{Error, Result};

type C = Complex64;

/// Coefficient function, eigenvalue and shift of the difference equation
/// `A(xi) (p(xi + s) - p(xi)) + A(-xi) (p(xi - s) - p(xi)) = E_n p(xi)`
/// with `s = i` (Wilson, continuous Hahn) or `s = -i log q` (Askey-Wilson).
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceOperator {
    pub spec: PolynomialSpec,
}

impl DifferenceOperator {
    pub fn new(spec: &PolynomialSpec) -> Result<Self> {
        spec.validate()?;
        Ok(DifferenceOperator { spec: spec.clone() })
    }

    fn abcd(&self) -> &[C] {
        match self.spec.family {
            Family::AskeyWilson => &self.spec.params[..4],
            _ => &self.spec.params,
        }
    }

    /// `A(xi)` at complex `xi`.
    pub fn coefficient(&self, xi: C) -> C {
        let i = C::new(0.0, 1.0);
        match self.spec.family {
            Family::Wilson => {
                let num: C = self.abcd().iter().map(|&a| xi + i * a).product();
                num / (2.0 * xi * (2.0 * xi + i))
            }
            Family::ContinuousHahn => self.abcd().iter().map(|&a| xi + i * a).product(),
            Family::AskeyWilson => {
                let q = self.spec.q().expect("q");
                let e = (i * xi).exp();
                let num: C = self.abcd().iter().map(|&a| 1.0 - a * e).product();
                num / ((1.0 - e * e) * (1.0 - q * e * e))
            }
        }
    }

    /// `E_m` for degree `m` (defaults to the polynomial degree in [`Self::eigenvalue`]).
    pub fn eigenvalue_for(&self, m: usize) -> f64 {
        let mf = m as f64;
        let p = &self.spec.params;
        match self.spec.family {
            Family::Wilson => {
                let s: C = p.iter().sum();
                -mf * (mf + s.re - 1.0)
            }
            Family::ContinuousHahn => -mf * (mf + 2.0 * (p[0] + p[1]).re - 1.0),
            Family::AskeyWilson => {
                let q = p[4].re;
                let abcd: C = p[..4].iter().product();
                q.powi(-(m as i32)) * (1.0 - q.powi(m as i32)) * (1.0 - abcd.re * q.powi(m as i32 - 1))
            }
        }
    }

    pub fn eigenvalue(&self) -> f64 {
        self.eigenvalue_for(self.spec.n)
    }

    /// Whether `E_0, ..., E_n` are pairwise distinct.
    pub fn nondegenerate(&self) -> bool {
        let e: Vec<f64> = (0..=self.spec.n).map(|m| self.eigenvalue_for(m)).collect();
        (0..e.len()).all(|i| (i + 1..e.len()).all(|k| e[i] != e[k]))
    }

    /// Natural variable at `xi + s` and `xi - s` for the family shift `s`.
    fn shifted_variables(&self, xi: C) -> (C, C) {
        let i = C::new(0.0, 1.0);
        match self.spec.family {
            Family::Wilson => ((xi + i) * (xi + i), (xi - i) * (xi - i)),
            Family::ContinuousHahn => (xi + i, xi - i),
            Family::AskeyWilson => {
                // e^{i(xi - i log q)} = q e^{i xi}
                let q = self.spec.q().expect("q");
                let e = (i * xi).exp();
                (0.5 * (q * e + 1.0 / (q * e)), 0.5 * (e / q + q / e))
            }
        }
    }

    /// Left- and right-hand side of the difference equation applied to the
    /// spec polynomial at complex `xi` (requires `q != 0`).
    pub fn apply(&self, xi: C) -> (C, C) {
        let p = |x: C| eval_in_variable(&self.spec, x).value;
        let p0 = p(super::variable_at(self.spec.family, xi));
        let (xp, xm) = self.shifted_variables(xi);
        let lhs = self.coefficient(xi) * (p(xp) - p0) + self.coefficient(-xi) * (p(xm) - p0);
        (lhs, self.eigenvalue() * p0)
    }
}

/// Per-root relative residual `|t1 + t2| / (|t1| + |t2|)` of the two-term
/// identity, with the polynomial written as the product over `roots`.
pub fn de_residuals(spec: &PolynomialSpec, roots: &[f64]) -> Result<Vec<f64>> {
    let op = DifferenceOperator::new(spec)?;
    if roots.len() != spec.n {
        return Err(Error::Dimension {
            expected: spec.n,
            got: roots.len(),
        });
    }
    let i = C::new(0.0, 1.0);
    let mut out = Vec::with_capacity(roots.len());
    for (j, &x) in roots.iter().enumerate() {
        let z = C::new(x, 0.0);
        let (p_plus, p_minus): (C, C) = match spec.family {
            Family::Wilson => (
                roots.iter().map(|&r| (z + i) * (z + i) - r * r).product(),
                roots.iter().map(|&r| (z - i) * (z - i) - r * r).product(),
            ),
            Family::ContinuousHahn => (
                roots.iter().map(|&r| z + i - r).product(),
                roots.iter().map(|&r| z - i - r).product(),
            ),
            Family::AskeyWilson => {
                // 2q (cos(xi -+ i log q) - cos r), finite at q = 0
                let q = spec.q().expect("q");
                let e = (i * z).exp();
                (
                    roots.iter().map(|&r| 1.0 / e - 2.0 * q * r.cos() + q * q * e).product(),
                    roots.iter().map(|&r| e - 2.0 * q * r.cos() + q * q / e).product(),
                )
            }
        };
        let t1 = op.coefficient(z) * p_plus;
        let t2 = op.coefficient(-z) * p_minus;
        let norm = t1.norm() + t2.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Singularity(format!(
                "difference-equation terms vanish or diverge at root {}",
                j + 1
            )));
        }
        out.push((t1 + t2).norm() / norm);
    }
    Ok(out)
}

/// Largest per-root residual.
pub fn de_residual(spec: &PolynomialSpec, roots: &[f64]) -> Result<f64> {
    Ok(de_residuals(spec, roots)?.into_iter().fold(0.0, f64::max))
}
