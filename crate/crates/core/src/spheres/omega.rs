//! The region `Ω_r` of the positive quadrant containing `η_Z(S_r)`:
//! `min(ab², a²b) ≤ c·e^r`, `max(a, b) ≤ m·e^r`, with limiting constants
//! `c = 2`, `m = 1/2`.

use serde::Serialize;

use super::mesh::SphereMesh;
use crate::error::Result;
use crate::flow::level_from_period;
use crate::symflow::solve_symmetric;

/// Constants of `Ω_r`, each scaled by `1 + slack`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaConstants {
    pub c: f64,
    pub m: f64,
}

impl OmegaConstants {
    pub fn relaxed(slack: f64) -> Self {
        OmegaConstants { c: 2.0 * (1.0 + slack), m: 0.5 * (1.0 + slack) }
    }
}

/// Area of `Ω_r`: the square `[0, x₀]²`, `x₀ = (c e^r)^{1/3}`, plus the two
/// arms `b ≤ √(c e^r / a)` for `x₀ ≤ a ≤ m e^r` and their mirror.
pub fn omega_region_area(r: f64, k: OmegaConstants) -> f64 {
    let u = r.exp();
    let x0 = (k.c * u).cbrt();
    let hi = k.m * u;
    if hi <= x0 {
        return hi * hi;
    }
    x0 * x0 + 2.0 * (k.c * u).sqrt() * 2.0 * (hi.sqrt() - x0.sqrt())
}

pub fn in_omega(r: f64, a: f64, b: f64, k: OmegaConstants) -> bool {
    let u = r.exp();
    let (a, b) = (a.abs(), b.abs());
    (a * b * b).min(a * a * b) <= k.c * u && a.max(b) <= k.m * u
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaReport {
    pub r: f64,
    pub area_over_exp: f64,
    pub samples: usize,
    pub outside: usize,
    /// `max min(ab², a²b) / e^r` over samples.
    pub max_slope_term: f64,
    /// `max max(a, b) / e^r` over samples.
    pub max_extent: f64,
}

/// Compares every image of the positive-sector mesh with `Ω_r`.
pub fn omega_containment(mesh: &SphereMesh, k: OmegaConstants) -> OmegaReport {
    let r = mesh.r;
    let u = r.exp();
    let mut rep = OmegaReport {
        r,
        area_over_exp: omega_region_area(r, OmegaConstants::relaxed(0.0)) / u,
        samples: mesh.images.len(),
        outside: 0,
        max_slope_term: 0.0,
        max_extent: 0.0,
    };
    for p in &mesh.images {
        let (a, b) = (p.x.abs(), p.y.abs());
        rep.max_slope_term = rep.max_slope_term.max((a * b * b).min(a * a * b) / u);
        rep.max_extent = rep.max_extent.max(a.max(b) / u);
        if !in_omega(r, a, b, k) {
            rep.outside += 1;
        }
    }
    rep
}

/// `(max |z|, max min(a, b))` over the images of `∂S_r′`.
pub fn boundary_strip(mesh: &SphereMesh) -> (f64, f64) {
    mesh.boundary().iter().fold((0.0, 0.0), |(z, s), &i| {
        let p = mesh.images[i];
        (z.max(p.z.abs()), s.max(p.x.abs().min(p.y.abs())))
    })
}

/// `max b(t)` over `t ∈ (0, ℓ]` on `n` samples of the symmetric flowline of
/// period `l`; `E(2t·u_t) = (a(t), b(t), 0)` are the images of the
/// distinguished vectors.
pub fn distinguished_strip(l: f64, n: usize) -> Result<f64> {
    let level = level_from_period(l)?;
    let sf = solve_symmetric(&level, level.half())?;
    Ok((1..=n).map(|i| sf.state(level.half() * i as f64 / n as f64).b).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_tends_to_four() {
        let k = OmegaConstants::relaxed(0.0);
        let ratios: Vec<f64> = [10.0, 20.0, 40.0].iter().map(|&r| omega_region_area(r, k) / f64::exp(r)).collect();
        assert!(ratios.windows(2).all(|w| w[0] < w[1]));
        assert!(ratios.iter().all(|&q| q < 4.0));
        assert!((ratios[2] - 4.0).abs() < 1e-5);
    }

    #[test]
    fn area_matches_quadrature() {
        let (r, k) = (6.0, OmegaConstants::relaxed(0.1));
        let u = f64::exp(r);
        let height = |a: f64| {
            let cap = k.m * u;
            let h = if a * a * a <= k.c * u { cap.min(k.c * u / (a * a)) } else { (k.c * u / a).sqrt() };
            h.min(cap)
        };
        let x0 = (k.c * u).cbrt();
        let q = crate::quad::integrate_pieces(height, &[0.0, (k.c / k.m).sqrt(), x0, k.m * u], 1e-6);
        assert!((q - omega_region_area(r, k)).abs() < 1e-6 * q, "{q}");
    }

    #[test]
    fn distinguished_images() {
        let level = level_from_period(10.0).unwrap();
        let sf = solve_symmetric(&level, level.half()).unwrap();
        let t = 0.6 * level.half();
        let u = sf.u(t);
        let e = crate::flow::exp_map([2.0 * t * u[0], 2.0 * t * u[1], 2.0 * t * u[2]]).unwrap();
        let s = sf.state(t);
        assert!((e.x - s.a).abs() < 1e-8 * s.a && (e.y - s.b).abs() < 1e-8 && e.z.abs() < 1e-8);
        let b = distinguished_strip(10.0, 50).unwrap();
        assert!(b > 2.0 && b < 2.2, "{b}");
    }

    #[test]
    fn membership() {
        let k = OmegaConstants::relaxed(0.0);
        assert!(in_omega(10.0, 1.0, 1.0, k));
        assert!(!in_omega(10.0, 0.6 * f64::exp(10.0), 1.0, k));
        assert!(!in_omega(10.0, 1000.0, 1000.0, k));
    }
}
