//! Scalar root finding: grid bracketing, bisection and a guarded Newton polish.

use crate::error::{Error, Result};

/// Bisection budget.
pub const MAX_BISECTION: usize = 200;

/// Newton budget.
pub const MAX_NEWTON: usize = 64;

/// Root of `f` on `[lo, hi]` by bisection to an interval width of `xtol`.
///
/// `f(lo)` and `f(hi)` must have opposite signs (a zero endpoint is returned
/// directly).
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) || flo.is_nan() || fhi.is_nan() {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::ConvergenceFailure {
        stage: "bisection",
        iterations: MAX_BISECTION,
        residual: hi - lo,
    })
}

/// Sub-intervals `[a, b]` of the grid `lo + (hi−lo)·i/cells` on which `f`
/// changes sign, in increasing order. Non-finite samples break brackets.
pub fn sign_changes<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cells: usize) -> Vec<(f64, f64)> {
    let cells = cells.max(1);
    let h = (hi - lo) / cells as f64;
    let mut out = Vec::new();
    let mut prev = (lo, f(lo));
    for i in 1..=cells {
        let t = if i == cells { hi } else { lo + h * i as f64 };
        let v = f(t);
        if prev.1.is_finite() && v.is_finite() && (prev.1 == 0.0 || prev.1.signum() != v.signum()) {
            out.push((prev.0, t));
        }
        prev = (t, v);
    }
    out
}

/// Newton refinement of a bracketed root with a centered finite-difference
/// slope; any step leaving `[lo, hi]` or failing to reduce `|f|` is rejected
/// and the bracketed estimate is returned.
pub fn newton_polish<F: Fn(f64) -> f64>(f: F, x0: f64, lo: f64, hi: f64) -> f64 {
    let mut x = x0;
    let mut fx = f(x);
    for _ in 0..8 {
        if fx == 0.0 || !fx.is_finite() {
            break;
        }
        let h = 1e-7 * x.abs().max(1e-3);
        let (a, b) = ((x - h).max(lo), (x + h).min(hi));
        if b <= a {
            break;
        }
        let d = (f(b) - f(a)) / (b - a);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let xn = x - fx / d;
        if !(xn > lo && xn < hi) {
            break;
        }
        let fxn = f(xn);
        if fxn.is_nan() || fx.is_nan() || fxn.abs() >= fx.abs() {
            break;
        }
        x = xn;
        fx = fxn;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::RootNotBracketed { .. })
        ));
    }

    #[test]
    fn bisect_accepts_endpoint_root() {
        assert_eq!(bisect(|x| x - 1.0, 1.0, 3.0, 1e-12).unwrap(), 1.0);
    }

    #[test]
    fn sign_changes_of_sine() {
        let b = sign_changes(f64::sin, 0.5, 10.0, 100);
        assert_eq!(b.len(), 3);
        for (k, (a, c)) in b.iter().enumerate() {
            let root = std::f64::consts::PI * (k + 1) as f64;
            assert!(*a <= root && root <= *c);
        }
    }

    #[test]
    fn polish_improves_estimate() {
        let f = |x: f64| x.cos() - x;
        let r = newton_polish(f, 0.74, 0.7, 0.8);
        assert!(f(r).abs() < 1e-14);
    }
}
