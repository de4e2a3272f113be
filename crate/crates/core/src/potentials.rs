//! The building blocks of the Bethe systems: the interaction function
//! `s(x)`, the phase potentials `v_a(x)`, their derivatives and
//! antiderivatives.
//!
//! Closed forms used for the potentials (with `w = e^{-A}` for the
//! trigonometric kind):
//!
//! | kind          | `v_a(x)`                                         | `v_a'(x)`                         |
//! |---------------|--------------------------------------------------|-----------------------------------|
//! | rational      | `2 atan(x / a)`                                  | `2a / (a^2 + x^2)`                |
//! | hyperbolic    | `2 atan(tanh(x/2) cot(a/2))`                     | `sin a / (cosh x - cos a)`        |
//! | trigonometric | `2 atan(c tan(x/2)) + 2 pi round(x / 2 pi)`      | `sinh A / (cosh A -+ cos x)`      |
//!
//! where `c = coth(A/2)` on the principal branch and `c = tanh(A/2)` on the
//! `Im(a) = pi` branch. `A = +inf` is the free limit `v(x) = x`.
//!
//! A parameter with a positive `pair_offset` stands for a complex conjugate
//! pair `{a + i theta, a - i theta}`; its potential is the (real) sum of the
//! two members, `v_a(x + theta) + v_a(x - theta)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Rational, hyperbolic or trigonometric interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Rational,
    Hyperbolic,
    Trigonometric,
}

impl PotentialKind {
    pub fn name(self) -> &'static str {
        match self {
            PotentialKind::Rational => "rational",
            PotentialKind::Hyperbolic => "hyperbolic",
            PotentialKind::Trigonometric => "trigonometric",
        }
    }
}

/// Lower and upper bound of `v_a'` over the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivRange {
    pub min: f64,
    pub max: f64,
}

/// One coupling parameter `a_k` or `b_l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledParameter {
    pub kind: PotentialKind,
    /// `a` for rational/hyperbolic, `A = Re(a)` for trigonometric
    /// (`f64::INFINITY` encodes the free limit).
    pub magnitude: f64,
    /// `+1` or `-1`; `-1` encodes `Im(a) = pi` (trigonometric only).
    pub trig_sign: i8,
    /// `theta = Im(a)` of a conjugate pair; zero for a real parameter.
    pub pair_offset: f64,
}

impl CoupledParameter {
    pub fn rational(a: f64) -> Result<Self> {
        Self::new(PotentialKind::Rational, a, 1, 0.0)
    }

    pub fn hyperbolic(a: f64) -> Result<Self> {
        Self::new(PotentialKind::Hyperbolic, a, 1, 0.0)
    }

    pub fn trigonometric(magnitude: f64, sign: i8) -> Result<Self> {
        Self::new(PotentialKind::Trigonometric, magnitude, sign, 0.0)
    }

    /// Trigonometric parameter with `A = +inf`, i.e. `v(x) = x`.
    pub fn trig_free() -> Self {
        CoupledParameter {
            kind: PotentialKind::Trigonometric,
            magnitude: f64::INFINITY,
            trig_sign: 1,
            pair_offset: 0.0,
        }
    }

    /// Trigonometric parameter `a` with `e^{-a} = p` for a real family
    /// parameter `p` in `(-1, 1)`.
    pub fn from_trig_family_value(p: f64) -> Result<Self> {
        if !(p > -1.0 && p < 1.0) {
            return Err(Error::Domain(format!(
                "trigonometric family value {p} must lie in (-1, 1)"
            )));
        }
        if p == 0.0 {
            return Ok(Self::trig_free());
        }
        let sign = if p > 0.0 { 1 } else { -1 };
        Self::trigonometric(-p.abs().ln(), sign)
    }

    pub fn new(kind: PotentialKind, magnitude: f64, trig_sign: i8, pair_offset: f64) -> Result<Self> {
        let p = CoupledParameter {
            kind,
            magnitude,
            trig_sign,
            pair_offset,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_pair_offset(self, theta: f64) -> Result<Self> {
        let p = CoupledParameter {
            pair_offset: theta,
            ..self
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.magnitude;
        match self.kind {
            PotentialKind::Rational => {
                if !(m > 0.0 && m.is_finite()) {
                    return Err(Error::Domain(format!("rational parameter {m} must lie in (0, inf)")));
                }
            }
            PotentialKind::Hyperbolic => {
                if !(m > 0.0 && m < PI) {
                    return Err(Error::Domain(format!("hyperbolic parameter {m} must lie in (0, pi)")));
                }
            }
            PotentialKind::Trigonometric => {
                if !(m > 0.0) || m.is_nan() {
                    return Err(Error::Domain(format!(
                        "trigonometric parameter Re(a) = {m} must lie in (0, inf]"
                    )));
                }
            }
        }
        if self.trig_sign != 1 && self.trig_sign != -1 {
            return Err(Error::Domain(format!("trig_sign must be +1 or -1, got {}", self.trig_sign)));
        }
        if self.kind != PotentialKind::Trigonometric && self.trig_sign != 1 {
            return Err(Error::Domain("trig_sign = -1 is only defined for trigonometric parameters".into()));
        }
        if !(self.pair_offset >= 0.0 && self.pair_offset.is_finite()) {
            return Err(Error::Domain(format!(
                "pair_offset must be a finite nonnegative number, got {}",
                self.pair_offset
            )));
        }
        if self.kind == PotentialKind::Trigonometric && self.trig_sign == -1 && self.pair_offset > 0.0 {
            return Err(Error::Domain(
                "a trigonometric parameter cannot carry both the Im(a) = pi branch and a conjugate-pair offset".into(),
            ));
        }
        Ok(())
    }

    pub fn is_pair(&self) -> bool {
        self.pair_offset > 0.0
    }

    /// Number of Bethe parameters this entry stands for (2 for a pair).
    pub fn multiplicity(&self) -> usize {
        if self.is_pair() {
            2
        } else {
            1
        }
    }

    pub fn is_free(&self) -> bool {
        self.kind == PotentialKind::Trigonometric && self.magnitude == f64::INFINITY
    }

    /// `v_p(x)`; pairs return the combined pair potential.
    pub fn value(&self, x: f64) -> f64 {
        if self.is_pair() {
            let t = self.pair_offset;
            self.base_value(x + t) + self.base_value(x - t)
        } else {
            self.base_value(x)
        }
    }

    /// `v_p'(x)`; pairs return the sum of the two shifted derivatives.
    pub fn derivative(&self, x: f64) -> f64 {
        if self.is_pair() {
            let t = self.pair_offset;
            self.base_derivative(x + t) + self.base_derivative(x - t)
        } else {
            self.base_derivative(x)
        }
    }

    /// `int_0^x v_p(t) dt`.
    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        if self.is_pair() {
            let t = self.pair_offset;
            Ok(self.base_antiderivative(x + t)? + self.base_antiderivative(x - t)?
                - 2.0 * self.base_antiderivative(t)?)
        } else {
            self.base_antiderivative(x)
        }
    }

    /// Range of `v'` for the real part of the parameter (per pair member).
    pub fn base_deriv_range(&self) -> DerivRange {
        let m = self.magnitude;
        match self.kind {
            PotentialKind::Rational => DerivRange { min: 0.0, max: 2.0 / m },
            PotentialKind::Hyperbolic => DerivRange {
                min: 0.0,
                max: 1.0 / (0.5 * m).tan(),
            },
            PotentialKind::Trigonometric => {
                if self.is_free() {
                    DerivRange { min: 1.0, max: 1.0 }
                } else {
                    let t = (0.5 * m).tanh();
                    DerivRange { min: t, max: 1.0 / t }
                }
            }
        }
    }

    /// The complex parameter values `a` this entry represents.
    pub fn complex_values(&self) -> Vec<Complex64> {
        let im = match (self.kind, self.trig_sign) {
            (PotentialKind::Trigonometric, -1) => PI,
            _ => 0.0,
        };
        if self.is_pair() {
            vec![
                Complex64::new(self.magnitude, self.pair_offset),
                Complex64::new(self.magnitude, -self.pair_offset),
            ]
        } else {
            vec![Complex64::new(self.magnitude, im)]
        }
    }

    /// Product over the represented complex parameters of
    /// `s(ia + x) / s(ia - x)`, which equals `exp(-i v_p(x))`.
    pub fn bethe_factor(&self, x: f64) -> Result<Complex64> {
        let mut out = Complex64::new(1.0, 0.0);
        for a in self.complex_values() {
            out *= s_ratio(self.kind, a, x)?;
        }
        Ok(out)
    }

    fn trig_w(&self) -> f64 {
        (-self.magnitude).exp()
    }

    fn base_value(&self, x: f64) -> f64 {
        let m = self.magnitude;
        match self.kind {
            PotentialKind::Rational => 2.0 * (x / m).atan(),
            PotentialKind::Hyperbolic => 2.0 * ((0.5 * x).tanh() / (0.5 * m).tan()).atan(),
            PotentialKind::Trigonometric => {
                if self.is_free() {
                    return x;
                }
                let w = self.trig_w();
                let c = if self.trig_sign == 1 {
                    (1.0 + w) / (1.0 - w)
                } else {
                    (1.0 - w) / (1.0 + w)
                };
                let turns = (x / (2.0 * PI)).round();
                let r = x - 2.0 * PI * turns;
                // atan2 keeps the branch point r = +-pi continuous.
                2.0 * (c * (0.5 * r).sin()).atan2((0.5 * r).cos()) + 2.0 * PI * turns
            }
        }
    }

    fn base_derivative(&self, x: f64) -> f64 {
        let m = self.magnitude;
        match self.kind {
            PotentialKind::Rational => 2.0 * m / (m * m + x * x),
            PotentialKind::Hyperbolic => {
                let sh = (0.5 * x).sinh();
                let s = (0.5 * m).sin();
                m.sin() / (2.0 * (sh * sh + s * s))
            }
            PotentialKind::Trigonometric => {
                if self.is_free() {
                    return 1.0;
                }
                let w = self.trig_w();
                let one_minus_w = -(-m).exp_m1();
                let h = if self.trig_sign == 1 {
                    (0.5 * x).sin()
                } else {
                    (0.5 * x).cos()
                };
                one_minus_w * (1.0 + w) / (one_minus_w * one_minus_w + 4.0 * w * h * h)
            }
        }
    }

    fn base_antiderivative(&self, x: f64) -> Result<f64> {
        let x = x.abs();
        if x == 0.0 {
            return Ok(0.0);
        }
        match self.kind {
            PotentialKind::Rational => {
                let m = self.magnitude;
                let r = x / m;
                Ok(2.0 * x * r.atan() - m * (r * r).ln_1p())
            }
            PotentialKind::Trigonometric if self.is_free() => Ok(0.5 * x * x),
            _ => quadrature::integrate(|t| self.base_value(t), 0.0, x, 1e-12, 1e-14),
        }
    }
}

/// `s(z)`: `z/2`, `sinh(z/2)` or `sin(z/2)`.
pub fn s_eval(kind: PotentialKind, z: Complex64) -> Complex64 {
    let h = 0.5 * z;
    match kind {
        PotentialKind::Rational => h,
        PotentialKind::Hyperbolic => h.sinh(),
        PotentialKind::Trigonometric => h.sin(),
    }
}

// Beyond this magnitude sin((ia +- x)/2) overflows; use the equivalent
// form exp(-ix) (1 - w e^{ix}) / (1 - w e^{-ix}) with w = e^{-a}.
const TRIG_ASYMPTOTIC: f64 = 600.0;
// Beyond this |x| sinh((x +- ia)/2) is replaced by its exponential form
// -e^{ia} (1 - e^{-x-ia}) / (1 - e^{-x+ia}), which never overflows.
const HYP_ASYMPTOTIC: f64 = 40.0;

/// `s(ia + x) / s(ia - x)` for a single complex parameter value `a`.
pub fn s_ratio(kind: PotentialKind, a: Complex64, x: f64) -> Result<Complex64> {
    let i = Complex64::i();
    if kind == PotentialKind::Trigonometric && a.re > TRIG_ASYMPTOTIC {
        let phase = Complex64::new(0.0, -x).exp();
        if a.re.is_infinite() {
            return Ok(phase);
        }
        let w = (-a).exp();
        let e = Complex64::new(0.0, x).exp();
        return Ok(phase * (1.0 - w * e) / (1.0 - w / e));
    }
    if kind == PotentialKind::Hyperbolic && x.abs() > HYP_ASYMPTOTIC {
        let t = Complex64::new(-x.abs(), 0.0);
        let r = -(i * a).exp() * (1.0 - (t - i * a).exp()) / (1.0 - (t + i * a).exp());
        return Ok(if x > 0.0 { r } else { 1.0 / r });
    }
    let num = s_eval(kind, i * a + x);
    let den = s_eval(kind, i * a - x);
    if den.norm() < 1e-300 || !den.is_finite() || !num.is_finite() {
        return Err(Error::Singularity(format!(
            "s(ia - x) vanishes or overflows at a = {a}, x = {x}"
        )));
    }
    Ok(num / den)
}

/// `v_p(x)` with domain validation.
pub fn v_eval(p: &CoupledParameter, x: f64) -> Result<f64> {
    p.validate()?;
    Ok(p.value(x))
}

/// `v_p'(x)` with domain validation.
pub fn v_deriv(p: &CoupledParameter, x: f64) -> Result<f64> {
    p.validate()?;
    Ok(p.derivative(x))
}

/// The interval containing `v_p'(x)` for all real `x`. Pair parameters are
/// rejected; their ranges are combined at the bound layer.
pub fn v_deriv_range(p: &CoupledParameter) -> Result<DerivRange> {
    p.validate()?;
    if p.is_pair() {
        return Err(Error::Unsupported(
            "derivative range of a conjugate pair; use the real part per member".into(),
        ));
    }
    Ok(p.base_deriv_range())
}

/// `int_0^x v_p(t) dt` (diagnostics only).
pub fn v_antideriv(p: &CoupledParameter, x: f64) -> Result<f64> {
    p.validate()?;
    p.antiderivative(x)
}

/// The integrand `v_p'` as printed in the integral definition of `v`,
/// evaluated without any of the stabilising rewrites above. Exposed so that
/// tests can integrate it independently of the closed forms.
pub fn raw_integrand(kind: PotentialKind, magnitude: f64, trig_sign: i8, y: f64) -> f64 {
    match kind {
        PotentialKind::Rational => 2.0 * magnitude / (magnitude * magnitude + y * y),
        PotentialKind::Hyperbolic => magnitude.sin() / (y.cosh() - magnitude.cos()),
        PotentialKind::Trigonometric => {
            if magnitude.is_infinite() {
                1.0
            } else {
                magnitude.sinh() / (magnitude.cosh() - f64::from(trig_sign) * y.cos())
            }
        }
    }
}
