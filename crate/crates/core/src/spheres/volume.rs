//! Coarse volume bound for the ball of radius `r`.
//!
//! With `u = e^r`, every point of the ball satisfies `|x|, |y| ≤ u + r`,
//! `|z| ≤ r` and `(|x| − r)(|y| − r) ≤ u`.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::quad::integrate_pieces;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeBound {
    pub r: f64,
    /// `72 r² e^r`.
    pub closed_form: f64,
    /// `8r(r+1)(u+r)`, each of the two slabs.
    pub slab: f64,
    /// `8r ∫₁^u u/x dx`, by quadrature.
    pub log_part: f64,
    /// Volume of the region itself, by quadrature in `x`.
    pub region: f64,
    /// Exact volume of the region.
    pub region_exact: f64,
}

/// Height in `y` of the region over `x ≥ 0` in one quadrant.
fn height(r: f64, u: f64, x: f64) -> f64 {
    if x <= r + 1.0 {
        u + r
    } else {
        (u + r).min(r + u / (x - r))
    }
}

pub fn volume_region_bound(r: f64) -> Result<VolumeBound> {
    if !(r >= 1.0 && r <= 600.0) {
        return Err(domain("volume_region_bound", format!("r = {r} outside [1, 600]")));
    }
    let u = r.exp();
    let tol = 1e-12 * u;
    let area = integrate_pieces(|x| height(r, u, x), &[0.0, r, r + 1.0, r + 2.0, u + r], tol);
    let log_part = 8.0 * r * integrate_pieces(|x| u / x, &[1.0, 2.0, u.sqrt(), u], tol);
    let exact = (r + 1.0) * (u + r) + r * (u - 1.0) + u * u.ln();
    Ok(VolumeBound {
        r,
        closed_form: 72.0 * r * r * u,
        slab: 8.0 * r * (r + 1.0) * (u + r),
        log_part,
        region: 8.0 * r * area,
        region_exact: 8.0 * r * exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_fits_under_bound() {
        for r in [1.0, 5.0, 10.0] {
            let v = volume_region_bound(r).unwrap();
            assert!(v.region <= v.closed_form);
            assert!((v.region - v.region_exact).abs() < 1e-8 * v.region_exact);
            assert!(2.0 * v.slab + v.log_part <= v.closed_form * (1.0 + 1e-12));
        }
    }

    #[test]
    fn log_part() {
        let v = volume_region_bound(10.0).unwrap();
        let u = f64::exp(10.0);
        assert!((v.log_part - 800.0 * u).abs() < 1e-8 * v.log_part);
        assert_eq!(v.closed_form, 7200.0 * u);
    }

    #[test]
    fn rejects_small_r() {
        assert!(volume_region_bound(0.5).is_err());
    }
}
