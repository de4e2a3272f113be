//! Terminating hypergeometric (Wilson, continuous Hahn) and basic
//! hypergeometric (Askey-Wilson) series in monic normalization, summed by
//! forward recurrence on the term ratio.
//!
//! The Askey-Wilson sum loses about `n (n - 1) / 2` powers of `|q|^{-1}` to
//! cancellation, so it is kept as an independent cross-check; the
//! recurrences in [`super::recurrence`] are used for evaluation.

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

/// Result of a series summation: the value and the largest partial term
/// magnitude (scale for the imaginary-residue check).
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: C,
    pub scale: f64,
}

fn one() -> C {
    C::new(1.0, 0.0)
}

/// Monic Wilson polynomial via its terminating 4F3 at argument `xi`.
pub fn wilson(n: usize, params: [C; 4], xi: C) -> SeriesValue {
    let [a, b, c, d] = params;
    let s = a + b + c + d;
    let i = C::new(0.0, 1.0);
    let nf = n as f64;
    let mut pre = if n % 2 == 0 { one() } else { -one() };
    for k in 0..n {
        let kf = k as f64;
        pre *= (a + b + kf) * (a + c + kf) * (a + d + kf) / (nf + s - 1.0 + kf);
    }
    let mut term = one();
    let mut total = one();
    let mut scale: f64 = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - nf) * (nf + s - 1.0 + kf) * (a + i * xi + kf) * (a - i * xi + kf)
            / ((a + b + kf) * (a + c + kf) * (a + d + kf) * (kf + 1.0));
        total += term;
        scale = scale.max(term.norm());
    }
    SeriesValue {
        value: pre * total,
        scale: pre.norm() * scale,
    }
}

/// Monic symmetric continuous Hahn polynomial via its terminating 3F2.
pub fn continuous_hahn(n: usize, params: [C; 2], xi: C) -> SeriesValue {
    let [a, b] = params;
    let i = C::new(0.0, 1.0);
    let nf = n as f64;
    let top = nf + 2.0 * a + 2.0 * b - 1.0;
    let mut pre = i.powu(n as u32);
    for k in 0..n {
        let kf = k as f64;
        pre *= (2.0 * a + kf) * (a + b + kf) / (top + kf);
    }
    let mut term = one();
    let mut total = one();
    let mut scale: f64 = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - nf) * (top + kf) * (a + i * xi + kf) / ((2.0 * a + kf) * (a + b + kf) * (kf + 1.0));
        total += term;
        scale = scale.max(term.norm());
    }
    SeriesValue {
        value: pre * total,
        scale: pre.norm() * scale,
    }
}

/// Monic Askey-Wilson polynomial via its terminating 4Phi3. The polynomial
/// is symmetric in `a, b, c, d`, so the largest parameter in modulus is
/// moved into the distinguished slot to keep the `(2a)^{-n}` prefactor
/// finite.
pub fn askey_wilson(n: usize, params: [C; 4], q: f64, xi: C) -> Result<SeriesValue> {
    if q == 0.0 {
        return Err(Error::Unsupported(
            "series evaluation needs q != 0; use the recurrence".into(),
        ));
    }
    let mut p = params;
    let lead = (0..4)
        .max_by(|&i, &j| p[i].norm().total_cmp(&p[j].norm()))
        .expect("four parameters");
    p.swap(0, lead);
    let [a, b, c, d] = p;
    if a.norm() < 1e-8 {
        return Err(Error::Unsupported(
            "series evaluation needs a parameter of modulus >= 1e-8; use the recurrence".into(),
        ));
    }
    let i = C::new(0.0, 1.0);
    let abcd = a * b * c * d;
    let qn1 = q.powi(n as i32 - 1);
    let mut pre = one();
    for k in 0..n {
        let qk = q.powi(k as i32);
        pre *= (one() - a * b * qk) * (one() - a * c * qk) * (one() - a * d * qk)
            / (2.0 * a * (one() - abcd * qn1 * qk));
    }
    let e_plus = (i * xi).exp();
    let e_minus = (-i * xi).exp();
    let mut term = one();
    let mut total = one();
    let mut scale: f64 = 1.0;
    for k in 0..n {
        let qk = q.powi(k as i32);
        let num = (1.0 - q.powi(k as i32 - n as i32))
            * (one() - abcd * qn1 * qk)
            * (one() - a * e_plus * qk)
            * (one() - a * e_minus * qk);
        let den = (one() - a * b * qk) * (one() - a * c * qk) * (one() - a * d * qk) * (1.0 - q * qk);
        term *= num / den * q;
        total += term;
        scale = scale.max(term.norm());
    }
    Ok(SeriesValue {
        value: pre * total,
        scale: pre.norm() * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyzeros::recurrence;

    fn re(v: f64) -> C {
        C::new(v, 0.0)
    }

    #[test]
    fn aw_reference_values() {
        // Well-conditioned for moderate q; for q = 0.1 the terms reach
        // about 1e10 times the value, which bounds the attainable accuracy.
        let v = askey_wilson(4, [re(0.5), re(0.7), re(-0.4), re(0.2)], 0.8, re(0.3)).unwrap();
        let r = recurrence::askey_wilson(4, [re(0.5), re(0.7), re(-0.4), re(0.2)], 0.8, re(0.3f64.cos())).value;
        assert!((v.value - r).norm() < 1e-13);
        let v = askey_wilson(5, [re(0.3), re(-0.2), re(0.15), re(0.1)], 0.1, re(0.3)).unwrap();
        assert!(v.scale > 1e8);
        assert!((v.value.re - 0.070342588120005509648).abs() < 1e-14 * v.scale);
    }

    #[test]
    fn aw_slot_choice_continuity() {
        // A vanishing parameter in the first position is moved out of the
        // distinguished slot; the value is continuous in it.
        let at = |a0: f64| askey_wilson(4, [re(a0), re(0.5), re(-0.3), re(0.2)], 0.4, re(1.3)).unwrap().value.re;
        assert!((at(0.0) - at(1e-6)).abs() < 1e-6);
        let rec = recurrence::askey_wilson(4, [re(0.0), re(0.5), re(-0.3), re(0.2)], 0.4, re(1.3f64.cos())).value.re;
        assert!((at(0.0) - rec).abs() < 1e-13);
    }

    #[test]
    fn aw_degenerate_inputs_rejected() {
        assert!(askey_wilson(3, [re(0.0); 4], 0.5, re(1.0)).is_err());
        assert!(askey_wilson(3, [re(0.3); 4], 0.0, re(1.0)).is_err());
    }

    #[test]
    fn series_match_recurrences() {
        for n in 1..9 {
            for &x in &[0.2, 1.1, 2.9] {
                let w = [re(1.15), re(1.1), re(1.0), re(0.9)];
                let s = wilson(n, w, re(x));
                let r = recurrence::wilson(n, w, re(x * x)).value.re;
                assert!((s.value.re - r).abs() <= 1e-13 * s.scale.max(1.0), "wilson n={n}");
                let h = [re(1.1), re(0.9)];
                let s = continuous_hahn(n, h, re(x));
                let r = recurrence::continuous_hahn(n, h, re(x)).value.re;
                assert!((s.value.re - r).abs() <= 1e-13 * s.scale.max(1.0), "hahn n={n}");
                let p = [re(0.6), re(-0.4), C::new(0.2, 0.5), C::new(0.2, -0.5)];
                let s = askey_wilson(n, p, -0.5, re(x)).unwrap();
                let r = recurrence::askey_wilson(n, p, -0.5, re(x.cos())).value;
                assert!((s.value - r).norm() <= 1e-13 * s.scale.max(1.0), "aw n={n}: {} vs {r}", s.value);
            }
        }
    }
}
