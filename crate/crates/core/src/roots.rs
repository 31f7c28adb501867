//! Bracketed scalar root finding, sign-change scans and golden-section
//! minimization.

use crate::error::{Result, SolError};

/// Bisection on a sign-changing bracket. Stops when the bracket is narrower
/// than `tol` or stops shrinking in floating point.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: f64, what: &'static str) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(SolError::NoSignChange { what, lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= tol || mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Positions (linearly interpolated) where consecutive samples change sign.
/// Samples with `|v| <= zero_tol` are treated as carrying no sign.
pub fn sign_changes(ts: &[f64], vs: &[f64], zero_tol: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for (&t, &v) in ts.iter().zip(vs) {
        if v.abs() <= zero_tol {
            continue;
        }
        if let Some((tp, vp)) = last {
            if vp.signum() != v.signum() {
                out.push(tp + (t - tp) * vp / (vp - v));
            }
        }
        last = Some((t, v));
    }
    out
}

/// Golden-section search for the minimum of a unimodal function on `[a, b]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14, "x²−2").unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bisect_requires_bracket() {
        let e = bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-10, "x²+1");
        assert!(matches!(e, Err(SolError::NoSignChange { .. })));
    }

    #[test]
    fn sign_change_scan() {
        let ts: Vec<f64> = (0..101).map(|i| i as f64 * 0.1).collect();
        let vs: Vec<f64> = ts.iter().map(|t| (t - 2.5) * (t - 7.5)).collect();
        let c = sign_changes(&ts, &vs, 0.0);
        assert_eq!(c.len(), 2);
        assert!((c[0] - 2.5).abs() < 0.05 && (c[1] - 7.5).abs() < 0.05);
    }

    #[test]
    fn golden_parabola() {
        let (x, fx) = golden_section(|x| (x - 0.3) * (x - 0.3) + 1.0, 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-15);
    }
}
