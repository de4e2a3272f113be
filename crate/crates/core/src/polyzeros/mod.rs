//! Zeros of the Wilson, Askey-Wilson and symmetric continuous Hahn
//! polynomials, both as minima of the associated Bethe systems and, as an
//! independent check, by sign scanning and bisection of the polynomials
//! themselves.

pub mod difference;
pub mod params;
pub mod recurrence;
pub mod series;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bethe_system::{make_rho, make_rho_tilde_and_beta, BetheSystem};
use crate::bounds::family_k_pm;
use crate::error::{Error, Result};
use crate::potentials::{CoupledParameter, PotentialKind};
use crate::rootfind::{bisect, linspace, sign_changes};
use crate::solver::{solve, BetheSolution, SolverConfig};

pub use difference::{de_residual, de_residuals, DifferenceOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Wilson,
    AskeyWilson,
    ContinuousHahn,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Wilson => "wilson",
            Family::AskeyWilson => "askey-wilson",
            Family::ContinuousHahn => "continuous-hahn",
        }
    }

    /// Number of entries in the parameter list (`q` last for Askey-Wilson).
    pub fn param_count(self) -> usize {
        match self {
            Family::Wilson => 4,
            Family::AskeyWilson => 5,
            Family::ContinuousHahn => 2,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wilson" => Ok(Family::Wilson),
            "askey-wilson" => Ok(Family::AskeyWilson),
            "continuous-hahn" => Ok(Family::ContinuousHahn),
            other => Err(Error::Validation(format!(
                "unknown family '{other}' (expected wilson, askey-wilson or continuous-hahn)"
            ))),
        }
    }
}

/// A polynomial family, degree and parameters. Non-real parameters must
/// come in conjugate pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialSpec {
    pub family: Family,
    pub n: usize,
    #[serde(with = "params::param_list")]
    pub params: Vec<Complex64>,
}

/// One real parameter or one conjugate pair `re +- i im` (`im > 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Group {
    Real(f64),
    Pair(Complex64),
}

impl Group {
    pub(crate) fn value(self) -> Complex64 {
        match self {
            Group::Real(v) => Complex64::new(v, 0.0),
            Group::Pair(z) => z,
        }
    }

    pub(crate) fn multiplicity(self) -> f64 {
        match self {
            Group::Real(_) => 1.0,
            Group::Pair(_) => 2.0,
        }
    }
}

fn group_conjugates(vals: &[Complex64]) -> Result<Vec<Group>> {
    let mut used = vec![false; vals.len()];
    let mut out = Vec::new();
    for i in 0..vals.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = vals[i];
        if z.im == 0.0 {
            out.push(Group::Real(z.re));
            continue;
        }
        let partner = (i + 1..vals.len()).find(|&k| !used[k] && vals[k] == z.conj());
        match partner {
            Some(k) => {
                used[k] = true;
                out.push(Group::Pair(Complex64::new(z.re, z.im.abs())));
            }
            None => {
                return Err(Error::Domain(format!(
                    "complex parameter {} has no conjugate partner; non-real parameters must come in conjugate pairs",
                    params::format_param(z)
                )))
            }
        }
    }
    Ok(out)
}

impl PolynomialSpec {
    pub fn new(family: Family, n: usize, params: Vec<Complex64>) -> Result<Self> {
        let spec = PolynomialSpec { family, n, params };
        spec.validate()?;
        Ok(spec)
    }

    pub fn real(family: Family, n: usize, params: &[f64]) -> Result<Self> {
        Self::new(family, n, params.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Validation("degree n must be at least 1".into()));
        }
        let expected = self.family.param_count();
        if self.params.len() != expected {
            return Err(Error::Dimension {
                expected,
                got: self.params.len(),
            });
        }
        if self.params.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        for g in self.groups()? {
            let z = g.value();
            match self.family {
                Family::Wilson | Family::ContinuousHahn => {
                    if !(z.re > 0.0) {
                        return Err(Error::Domain(format!(
                            "{} parameter {} violates the positivity condition (real parameters > 0, conjugate pairs with Re > 0)",
                            self.family.name(),
                            params::format_param(z)
                        )));
                    }
                }
                Family::AskeyWilson => {
                    if !(z.norm() < 1.0) {
                        return Err(Error::Domain(format!(
                            "askey-wilson parameter {} must lie in the open unit disc (reals in (-1, 1) or conjugate pairs with |.| < 1)",
                            params::format_param(z)
                        )));
                    }
                }
            }
        }
        if self.family == Family::AskeyWilson {
            let q = self.params[4];
            if q.im != 0.0 || !(q.re > -1.0 && q.re < 1.0) {
                return Err(Error::Domain(format!(
                    "askey-wilson q = {} must be real in (-1, 1)",
                    params::format_param(q)
                )));
            }
        }
        Ok(())
    }

    /// The parameters other than `q`, grouped into reals and conjugate pairs.
    pub(crate) fn groups(&self) -> Result<Vec<Group>> {
        let k = match self.family {
            Family::AskeyWilson => 4,
            _ => self.params.len(),
        };
        group_conjugates(&self.params[..k.min(self.params.len())])
    }

    /// `q` for Askey-Wilson.
    pub fn q(&self) -> Option<f64> {
        (self.family == Family::AskeyWilson).then(|| self.params[4].re)
    }

    fn four(&self) -> [Complex64; 4] {
        [self.params[0], self.params[1], self.params[2], self.params[3]]
    }

    fn two(&self) -> [Complex64; 2] {
        [self.params[0], self.params[1]]
    }
}

/// The Bethe system whose minimum consists of the zeros of `spec`.
pub fn family_to_bethe(spec: &PolynomialSpec) -> Result<BetheSystem> {
    spec.validate()?;
    let groups = spec.groups()?;
    match spec.family {
        Family::Wilson | Family::ContinuousHahn => {
            let a_params = groups
                .iter()
                .map(|g| match *g {
                    Group::Real(v) => CoupledParameter::rational(v),
                    Group::Pair(z) => CoupledParameter::rational(z.re)?.with_pair_offset(z.im),
                })
                .collect::<Result<Vec<_>>>()?;
            let b_params = vec![CoupledParameter::rational(1.0)?];
            if spec.family == Family::Wilson {
                BetheSystem::type_b(PotentialKind::Rational, 0.0, 0, a_params, b_params, make_rho(spec.n)?)
            } else {
                let (mu, beta) = make_rho_tilde_and_beta(spec.n)?;
                BetheSystem::type_a(PotentialKind::Rational, 0.0, beta, a_params, b_params, mu)
            }
        }
        Family::AskeyWilson => {
            let a_params = groups
                .iter()
                .map(|g| match *g {
                    Group::Real(v) => CoupledParameter::from_trig_family_value(v),
                    // e^{-a} = r e^{i phi}  <=>  a = -ln r - i phi
                    Group::Pair(z) => CoupledParameter::trigonometric(-z.norm().ln(), 1)?.with_pair_offset(z.arg().abs()),
                })
                .collect::<Result<Vec<_>>>()?;
            let q = CoupledParameter::from_trig_family_value(spec.q().expect("askey-wilson q"))?;
            BetheSystem::type_b(PotentialKind::Trigonometric, 0.0, 0, a_params, vec![q], make_rho(spec.n)?)
        }
    }
}

/// Polynomial value in its natural variable (`xi^2`, `cos xi` or `xi`),
/// which may be complex.
pub fn eval_in_variable(spec: &PolynomialSpec, x: Complex64) -> recurrence::RecurrenceValue {
    match spec.family {
        Family::Wilson => recurrence::wilson(spec.n, spec.four(), x),
        Family::AskeyWilson => recurrence::askey_wilson(spec.n, spec.four(), spec.q().expect("q"), x),
        Family::ContinuousHahn => recurrence::continuous_hahn(spec.n, spec.two(), x),
    }
}

/// The natural variable at a (possibly complex) point `xi`.
pub fn variable_at(family: Family, xi: Complex64) -> Complex64 {
    match family {
        Family::Wilson => xi * xi,
        Family::AskeyWilson => xi.cos(),
        Family::ContinuousHahn => xi,
    }
}

const IMAG_RESIDUE_TOL: f64 = 1e-10;

fn real_part_checked(value: Complex64, scale: f64, what: &str) -> Result<f64> {
    if value.im.abs() > IMAG_RESIDUE_TOL * scale.max(value.norm()) {
        return Err(Error::NumericInstability(format!(
            "{what}: imaginary residue {:e} exceeds tolerance relative to scale {scale:e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// Monic polynomial value at real `xi` (three-term recurrence).
pub fn eval_poly(spec: &PolynomialSpec, xi: f64) -> Result<f64> {
    let v = eval_in_variable(spec, variable_at(spec.family, Complex64::new(xi, 0.0)));
    real_part_checked(v.value, v.scale, "polynomial evaluation")
}

/// Monic polynomial value at real `xi` from the hypergeometric series.
pub fn eval_series(spec: &PolynomialSpec, xi: f64) -> Result<f64> {
    spec.validate()?;
    let z = Complex64::new(xi, 0.0);
    let v = match spec.family {
        Family::Wilson => series::wilson(spec.n, spec.four(), z),
        Family::AskeyWilson => series::askey_wilson(spec.n, spec.four(), spec.q().expect("q"), z)?,
        Family::ContinuousHahn => series::continuous_hahn(spec.n, spec.two(), z),
    };
    real_part_checked(v.value, v.scale, "series evaluation")
}

/// Zeros (decreasing) from the Bethe minimum, default solver settings.
pub fn zeros_via_bethe(spec: &PolynomialSpec) -> Result<Vec<f64>> {
    Ok(solve_family(spec, &SolverConfig::default())?.xi)
}

pub fn solve_family(spec: &PolynomialSpec, cfg: &SolverConfig) -> Result<BetheSolution> {
    solve(&family_to_bethe(spec)?, cfg)
}

const MAX_DOUBLINGS: usize = 20;
const BISECT_TOL: f64 = 1e-12;

/// Zeros (decreasing) by sign scanning and bisection of [`eval_poly`].
///
/// The grid spacing never exceeds half the a-priori minimal gap
/// `pi / k_minus`, so consecutive zeros always fall into different cells.
pub fn zeros_via_oracle(spec: &PolynomialSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = spec.n;
    let (k_minus, _) = family_k_pm(spec)?;
    let h_gap = PI / (2.0 * k_minus);
    let f = |x: f64| eval_poly(spec, x);
    let mut last_count = 0;
    for d in 0..=MAX_DOUBLINGS {
        let grid = match spec.family {
            Family::AskeyWilson => {
                let cells = (8 * n).max((PI / h_gap).ceil() as usize) << d;
                linspace(0.0, PI, cells)
            }
            Family::Wilson => {
                let u0 = 2.0 * PI * n as f64 / k_minus;
                let h = (u0 / (8 * n) as f64).min(h_gap);
                let u = u0 * (1u64 << d) as f64;
                linspace(0.0, u, (u / h).ceil() as usize)
            }
            Family::ContinuousHahn => {
                let u0 = PI * n as f64 / k_minus;
                let h = (u0 / (8 * n) as f64).min(h_gap);
                let u = u0 * (1u64 << d) as f64;
                let mut cells = (2.0 * u / h).ceil() as usize;
                if cells % 2 == 0 {
                    cells += 1;
                }
                linspace(-u, u, cells)
            }
        };
        let brackets = sign_changes(&f, &grid)?;
        last_count = brackets.len();
        if brackets.len() > n {
            return Err(Error::OracleFailure(format!(
                "{} sign changes found for a degree-{n} polynomial",
                brackets.len()
            )));
        }
        if brackets.len() == n {
            let mut roots = brackets
                .into_iter()
                .map(|b| bisect(&f, b, BISECT_TOL))
                .collect::<Result<Vec<f64>>>()?;
            roots.sort_by(|a, b| b.total_cmp(a));
            return Ok(roots);
        }
    }
    Err(Error::OracleFailure(format!(
        "only {last_count} of {n} sign changes found after {MAX_DOUBLINGS} doublings"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn aw_table() -> PolynomialSpec {
        PolynomialSpec::real(Family::AskeyWilson, 5, &[0.3, -0.2, 0.15, 0.1, 0.1]).unwrap()
    }

    fn wilson_table() -> PolynomialSpec {
        PolynomialSpec::real(Family::Wilson, 5, &[1.15, 1.1, 1.0, 0.9]).unwrap()
    }

    fn hahn_table() -> PolynomialSpec {
        PolynomialSpec::real(Family::ContinuousHahn, 10, &[1.1, 0.9]).unwrap()
    }

    #[test]
    fn mapping_examples() {
        let sys = family_to_bethe(&aw_table()).unwrap();
        let mags: Vec<f64> = sys.a_params.iter().map(|p| p.magnitude).collect();
        let signs: Vec<i8> = sys.a_params.iter().map(|p| p.trig_sign).collect();
        for (m, p) in mags.iter().zip([0.3f64, 0.2, 0.15, 0.1]) {
            assert!((m + p.ln()).abs() < 1e-15);
        }
        assert_eq!(signs, vec![1, -1, 1, 1]);
        assert!((sys.b_params[0].magnitude + 0.1f64.ln()).abs() < 1e-15);
        assert_eq!(sys.b_params[0].trig_sign, 1);

        let sys = family_to_bethe(&wilson_table()).unwrap();
        let mags: Vec<f64> = sys.a_params.iter().map(|p| p.magnitude).collect();
        assert_eq!(mags, vec![1.15, 1.1, 1.0, 0.9]);
        assert_eq!(sys.b_params, vec![CoupledParameter::rational(1.0).unwrap()]);

        let sys = family_to_bethe(&hahn_table()).unwrap();
        assert_eq!(sys.beta, Some(0.5));
        assert_eq!(sys.mu, make_rho_tilde_and_beta(10).unwrap().0);
    }

    #[test]
    fn conjugate_pairs_map_to_pair_parameters() {
        let spec = PolynomialSpec::new(
            Family::Wilson,
            3,
            vec![
                Complex64::new(0.8, 0.5),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.8, -0.5),
                Complex64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let sys = family_to_bethe(&spec).unwrap();
        assert_eq!(sys.a_params.len(), 3);
        assert_eq!(sys.k_count(), 4);
        assert_eq!(sys.a_params[0].pair_offset, 0.5);

        let lonely = PolynomialSpec::new(Family::ContinuousHahn, 2, vec![Complex64::new(1.0, 0.2), Complex64::new(1.0, 0.3)]);
        assert!(lonely.is_err());
    }

    #[test]
    fn domain_checks() {
        assert!(PolynomialSpec::real(Family::Wilson, 3, &[1.0, -0.1, 1.0, 1.0]).is_err());
        assert!(PolynomialSpec::real(Family::AskeyWilson, 3, &[1.0, 0.1, 0.1, 0.1, 0.1]).is_err());
        assert!(PolynomialSpec::real(Family::AskeyWilson, 3, &[0.1, 0.1, 0.1, 0.1, -1.0]).is_err());
        assert!(PolynomialSpec::real(Family::ContinuousHahn, 0, &[1.0, 1.0]).is_err());
        assert!(matches!(
            PolynomialSpec::real(Family::ContinuousHahn, 3, &[1.0]),
            Err(Error::Dimension { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn chebyshev_value() {
        let spec = PolynomialSpec::real(Family::AskeyWilson, 5, &[0.0; 5]).unwrap();
        assert!(eval_poly(&spec, PI / 6.0).unwrap().abs() < 1e-15);
        let roots = zeros_via_oracle(&spec).unwrap();
        for (j, r) in roots.iter().enumerate() {
            assert!((r - PI * (5 - j) as f64 / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn wilson_table_root_is_a_zero() {
        // The printed 3-decimal root, measured against the magnitude of the
        // largest series term.
        let spec = wilson_table();
        let v = eval_poly(&spec, 0.632).unwrap();
        let scale = series::wilson(5, spec.four(), Complex64::new(0.632, 0.0)).scale;
        assert!(v.abs() <= 1e-6 * scale);
        let roots = zeros_via_bethe(&spec).unwrap();
        assert!(eval_poly(&spec, roots[4]).unwrap().abs() <= 1e-14 * scale);
    }

    #[test]
    fn table_roots_both_methods() {
        let cases = [
            (aw_table(), vec![2.577, 2.033, 1.508, 0.997, 0.496]),
            (wilson_table(), vec![4.477, 3.099, 2.090, 1.292, 0.632]),
        ];
        for (spec, expect) in cases {
            let b = zeros_via_bethe(&spec).unwrap();
            let o = zeros_via_oracle(&spec).unwrap();
            for ((x, y), e) in b.iter().zip(&o).zip(&expect) {
                assert!((x - e).abs() < 5e-4);
                assert!((x - y).abs() < 1e-8);
            }
        }
        let spec = hahn_table();
        let b = zeros_via_bethe(&spec).unwrap();
        let o = zeros_via_oracle(&spec).unwrap();
        let positive = [3.770, 2.481, 1.554, 0.838, 0.261];
        for j in 0..10 {
            assert!((b[j] - o[j]).abs() < 1e-8);
            assert!((o[j] + o[9 - j]).abs() < 1e-10);
        }
        for (x, e) in b.iter().zip(positive) {
            assert!((x - e).abs() < 5e-4);
        }
    }

    #[test]
    fn series_agrees_with_recurrence() {
        // The series cancels catastrophically (by up to |q|^{-n(n-1)/2} for
        // Askey-Wilson), so agreement is measured against its largest term.
        for spec in [aw_table(), wilson_table(), hahn_table()] {
            for &x in &[0.1, 0.7, 1.9, 2.8] {
                let r = eval_poly(&spec, x).unwrap();
                let s = eval_series(&spec, x).unwrap();
                let z = Complex64::new(x, 0.0);
                let scale = match spec.family {
                    Family::Wilson => series::wilson(spec.n, spec.four(), z).scale,
                    Family::ContinuousHahn => series::continuous_hahn(spec.n, spec.two(), z).scale,
                    Family::AskeyWilson => series::askey_wilson(spec.n, spec.four(), 0.1, z).unwrap().scale,
                };
                assert!((r - s).abs() <= 1e-13 * scale.max(1.0), "{:?} at {x}: {r} vs {s}", spec.family);
            }
        }
    }

    #[test]
    fn monic_by_divided_differences() {
        // Leading coefficient via an n-th divided difference in the
        // natural variable.
        for spec in [aw_table(), wilson_table(), PolynomialSpec::real(Family::ContinuousHahn, 5, &[1.1, 0.9]).unwrap()] {
            let n = spec.n;
            let nodes: Vec<f64> = (0..=n).map(|k| -0.6 + 0.3 * k as f64).collect();
            let mut dd: Vec<f64> = nodes
                .iter()
                .map(|&x| eval_in_variable(&spec, Complex64::new(x, 0.0)).value.re)
                .collect();
            for level in 1..=n {
                for i in (level..=n).rev() {
                    dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
                }
            }
            assert!((dd[n] - 1.0).abs() < 1e-9, "{:?}: {}", spec.family, dd[n]);
        }
    }

    proptest! {
        #[test]
        fn parity(x in -4.0f64..4.0, a in 0.2f64..3.0, b in 0.2f64..3.0, n in 1usize..10) {
            let h = PolynomialSpec::real(Family::ContinuousHahn, n, &[a, b]).unwrap();
            let p = eval_poly(&h, x).unwrap();
            let m = eval_poly(&h, -x).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let scale = eval_in_variable(&h, Complex64::new(x, 0.0)).scale;
            prop_assert!((m - sign * p).abs() <= 1e-10 * scale.max(p.abs()));
            let w = PolynomialSpec::real(Family::Wilson, n, &[a, b, 1.0, 0.5]).unwrap();
            prop_assert_eq!(eval_poly(&w, x).unwrap(), eval_poly(&w, -x).unwrap());
        }

        #[test]
        fn product_identity(params in prop::collection::vec(-0.9f64..0.9, 5), n in 1usize..9, xs in prop::collection::vec(0.0f64..PI, 20)) {
            let spec = PolynomialSpec::real(Family::AskeyWilson, n, &params).unwrap();
            let roots = zeros_via_bethe(&spec).unwrap();
            for x in xs {
                let direct = eval_poly(&spec, x).unwrap();
                let product: f64 = roots.iter().map(|r| x.cos() - r.cos()).product();
                let scale = eval_in_variable(&spec, Complex64::new(x.cos(), 0.0)).scale;
                prop_assert!((direct - product).abs() <= 1e-8 * scale.max(direct.abs()), "{} vs {}", direct, product);
            }
        }
    }
}
