//! Sign-change bracketing on a grid and bisection refinement.

use crate::error::Result;

/// A sign change of `f` between `lo` and `hi` (`lo == hi` for an exact zero
/// at a grid point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Scans `f` over the increasing `grid` and reports every sign change.
pub fn sign_changes<F: Fn(f64) -> Result<f64>>(f: &F, grid: &[f64]) -> Result<Vec<Bracket>> {
    let mut out = Vec::new();
    let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    let mut i = 0;
    while i < grid.len() {
        if values[i] == 0.0 {
            out.push(Bracket {
                lo: grid[i],
                hi: grid[i],
                f_lo: 0.0,
                f_hi: 0.0,
            });
            i += 1;
            continue;
        }
        if i + 1 < grid.len() && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0) {
            out.push(Bracket {
                lo: grid[i],
                hi: grid[i + 1],
                f_lo: values[i],
                f_hi: values[i + 1],
            });
        }
        i += 1;
    }
    Ok(out)
}

/// Bisects a bracket down to width `tol` and returns the midpoint.
pub fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, bracket: Bracket, tol: f64) -> Result<f64> {
    let Bracket {
        mut lo,
        mut hi,
        mut f_lo,
        ..
    } = bracket;
    if lo == hi {
        return Ok(lo);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `count + 1` equally spaced points spanning `[a, b]`.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    let h = (b - a) / count as f64;
    (0..=count).map(|i| if i == count { b } else { a + h * i as f64 }).collect()
}
