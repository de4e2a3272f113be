//! Three-term recurrences for the monic polynomials
//! `p_{m+1}(x) = (x - b_m) p_m(x) - c_m p_{m-1}(x)`, evaluated in complex
//! arithmetic so that conjugate-pair parameters and complex arguments work
//! unchanged.
//!
//! The variable `x` is `xi^2` (Wilson), `cos xi` (Askey-Wilson) or `xi`
//! (continuous Hahn).

use num_complex::Complex64;

type C = Complex64;

/// Value of the recurrence at `x` together with a magnitude bound obtained
/// by running the same recurrence on absolute values, with `|x - b_m|`
/// replaced by `|x|` plus the moduli of the terms summed into `b_m` (used to
/// judge the size of rounding residue).
#[derive(Debug, Clone, Copy)]
pub struct RecurrenceValue {
    pub value: C,
    pub scale: f64,
}

fn run<F: Fn(usize) -> (C, C, f64)>(n: usize, x: C, coeffs: F) -> RecurrenceValue {
    let (mut pm, mut p) = (C::new(0.0, 0.0), C::new(1.0, 0.0));
    let (mut sm, mut s) = (0.0, 1.0);
    for m in 0..n {
        let (b, c, b_mag) = coeffs(m);
        let next = (x - b) * p - c * pm;
        let snext = (x.norm() + b_mag) * s + c.norm() * sm;
        pm = p;
        p = next;
        sm = s;
        s = snext;
    }
    RecurrenceValue { value: p, scale: s }
}

/// Wilson, `x = xi^2`.
pub fn wilson(n: usize, params: [C; 4], x: C) -> RecurrenceValue {
    let [a, b, c, d] = params;
    let s = a + b + c + d;
    let big_a = |m: f64| (m + s - 1.0) * (m + a + b) * (m + a + c) * (m + a + d) / ((2.0 * m + s - 1.0) * (2.0 * m + s));
    let big_c = |m: f64| {
        m * (m + b + c - 1.0) * (m + b + d - 1.0) * (m + c + d - 1.0) / ((2.0 * m + s - 2.0) * (2.0 * m + s - 1.0))
    };
    run(n, x, |m| {
        let mf = m as f64;
        let cm = if m == 0 { C::new(0.0, 0.0) } else { big_c(mf) };
        let b = big_a(mf) + cm - a * a;
        let c = if m == 0 { C::new(0.0, 0.0) } else { big_a(mf - 1.0) * cm };
        (b, c, big_a(mf).norm() + cm.norm() + (a * a).norm())
    })
}

/// Continuous Hahn in the symmetric specialization `(a, b, a, b)`, `x = xi`.
pub fn continuous_hahn(n: usize, params: [C; 2], x: C) -> RecurrenceValue {
    let [a, b] = params;
    let s = 2.0 * (a + b);
    let i = C::new(0.0, 1.0);
    let big_a = |m: f64| -(m + s - 1.0) * (m + 2.0 * a) * (m + a + b) / ((2.0 * m + s - 1.0) * (2.0 * m + s));
    let big_c = |m: f64| m * (m + a + b - 1.0) * (m + 2.0 * b - 1.0) / ((2.0 * m + s - 2.0) * (2.0 * m + s - 1.0));
    run(n, x, |m| {
        let mf = m as f64;
        let cm = if m == 0 { C::new(0.0, 0.0) } else { big_c(mf) };
        let b = i * (big_a(mf) + cm + a);
        let c = if m == 0 { C::new(0.0, 0.0) } else { -big_a(mf - 1.0) * cm };
        (b, c, big_a(mf).norm() + cm.norm() + a.norm())
    })
}

/// Askey-Wilson, `x = cos xi`. No coefficient divides by `a` or `q`, so the
/// vanishing-parameter limits (Chebyshev `U_n / 2^n` when everything is 0)
/// are evaluated directly.
pub fn askey_wilson(n: usize, params: [C; 4], q: f64, x: C) -> RecurrenceValue {
    let [a, b, c, d] = params;
    let one = C::new(1.0, 0.0);
    let s1 = b + c + d;
    let s2 = b * c + b * d + c * d;
    let s3 = b * c * d;
    let e = a * s3;
    let qp = |k: i32| q.powi(k);
    // C_m / a
    let c_over_a = |m: i32| {
        (1.0 - qp(m)) * (one - b * c * qp(m - 1)) * (one - b * d * qp(m - 1)) * (one - c * d * qp(m - 1))
            / ((one - e * qp(2 * m - 2)) * (one - e * qp(2 * m - 1)))
    };
    run(n, x, |m| {
        let m = m as i32;
        if m == 0 {
            let x0 = (s1 - s3 - a * s2 + a * a * s3) / (one - e);
            return (0.5 * (a + x0), C::new(0.0, 0.0), 0.5 * (a.norm() + x0.norm()));
        }
        let den = (one - e * qp(2 * m - 1)) * (one - e * qp(2 * m));
        let xm = (s1 * qp(m)
            + s3 * qp(m - 1) * (1.0 - qp(m) - qp(m + 1))
            + a * (s3 * s3 * qp(4 * m - 1) - s2 * qp(2 * m) - s1 * s3 * qp(2 * m - 1))
            + a * a * (s3 * qp(3 * m) + s2 * s3 * qp(3 * m - 1))
            - a * a * a * s3 * s3 * qp(4 * m - 1))
            / den;
        let cn = c_over_a(m);
        let bm = 0.5 * (a + xm - a * cn);
        let a_prev = if m == 1 {
            (one - a * b) * (one - a * c) * (one - a * d) / (one - e)
        } else {
            let k = m - 1;
            (one - a * b * qp(k)) * (one - a * c * qp(k)) * (one - a * d * qp(k)) * (one - e * qp(k - 1))
                / ((one - e * qp(2 * k - 1)) * (one - e * qp(2 * k)))
        };
        (bm, 0.25 * a_prev * cn, 0.5 * (a.norm() + xm.norm() + (a * cn).norm()))
    })
}
