//! Complete elliptic integrals of the first and second kind and the
//! arithmetic-geometric mean.
//!
//! Parameter convention: `m = k²`.
//!
//! ```text
//! K(m) = ∫₀^(π/2) dθ / √(1 − m sin²θ)        m ∈ [0, 1)
//! E(m) = ∫₀^(π/2) √(1 − m sin²θ) dθ          m ∈ [0, 1]
//! ```
//!
//! `K` is evaluated through `K(m) = (π/2) / AGM(√(1−m), 1)` and `E` through
//! the descending Landen/AGM recursion, `E = K·(1 − Σ 2ⁿ⁻¹ cₙ²)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Result};

const AGM_MAX_ITER: usize = 64;
const AGM_REL_TOL: f64 = 1e-15;

/// A value of `K` or `E` together with the parameter it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticValue {
    pub m: f64,
    pub value: f64,
}

/// Arithmetic-geometric mean of two nonnegative numbers.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0) {
        return Err(domain("agm", format!("arguments must be nonnegative, got ({a}, {b})")));
    }
    Ok(agm_iter(a, b).0)
}

/// Runs the AGM iteration; returns the limit and the sequence of
/// half-differences `cₙ = (aₙ₋₁ − bₙ₋₁)/2` (n ≥ 1).
fn agm_iter(a: f64, b: f64) -> (f64, Vec<f64>) {
    let (mut a, mut b) = (a, b);
    let mut cs = Vec::new();
    if a == 0.0 || b == 0.0 {
        return (0.0, cs);
    }
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= AGM_REL_TOL * a.max(b) {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        cs.push(0.5 * (a - b));
        a = an;
        b = bn;
    }
    (0.5 * (a + b), cs)
}

/// Complete elliptic integral of the first kind.
pub fn ellip_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(domain("ellip_k", format!("m = {m} outside [0, 1)")));
    }
    Ok(FRAC_PI_2 / agm_iter((1.0 - m).sqrt(), 1.0).0)
}

/// Complete elliptic integral of the second kind.
pub fn ellip_e(m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(domain("ellip_e", format!("m = {m} outside [0, 1]")));
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    let (mean, cs) = agm_iter(1.0, (1.0 - m).sqrt());
    let k = FRAC_PI_2 / mean;
    // c₀² = m, weight 2⁻¹; cₙ² weighted by 2ⁿ⁻¹.
    let mut sum = 0.5 * m;
    let mut w = 0.5;
    for c in cs {
        w *= 2.0;
        sum += w * c * c;
    }
    Ok(k * (1.0 - sum))
}

/// `K` and `E` as functions of the complementary parameter `mc = 1 − m`.
/// Accurate near `m = 1`, where forming `1 − m` from `m` loses digits.
pub fn ellip_ke_comp(mc: f64) -> Result<(f64, f64)> {
    if !(mc > 0.0 && mc <= 1.0) {
        return Err(domain("ellip_ke_comp", format!("mc = {mc} outside (0, 1]")));
    }
    let (mean, cs) = agm_iter(1.0, mc.sqrt());
    let k = FRAC_PI_2 / mean;
    let mut sum = 0.5 * (1.0 - mc);
    let mut w = 0.5;
    for c in cs {
        w *= 2.0;
        sum += w * c * c;
    }
    Ok((k, k * (1.0 - sum)))
}

/// `dK/dm = ((m−1)K + E) / (2m − 2m²)`; singular at the endpoints.
pub fn ellip_k_deriv(m: f64) -> Result<f64> {
    if !(m > 0.0 && m < 1.0) {
        return Err(domain("ellip_k_deriv", format!("m = {m} outside (0, 1)")));
    }
    let k = ellip_k(m)?;
    let e = ellip_e(m)?;
    Ok(((m - 1.0) * k + e) / (2.0 * m - 2.0 * m * m))
}

/// `dE/dm = (E − K) / (2m)`.
pub fn ellip_e_deriv(m: f64) -> Result<f64> {
    if !(m > 0.0 && m < 1.0) {
        return Err(domain("ellip_e_deriv", format!("m = {m} outside (0, 1)")));
    }
    let k = ellip_k(m)?;
    let e = ellip_e(m)?;
    Ok((e - k) / (2.0 * m))
}

/// The two sides of the near-singular bound on `K`:
/// `(|K(m) + ½ log((1−m)/16)|, ((1−m)/8)·|log((1−m)/16)|)`.
pub fn k_log_asymptote(m: f64) -> Result<(f64, f64)> {
    let k = ellip_k(m)?;
    let l = ((1.0 - m) / 16.0).ln();
    Ok(((k + 0.5 * l).abs(), (1.0 - m) / 8.0 * l.abs()))
}
