//! Riemannian area of `E(S_r′)` from per-vertex frames.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::mesh::{direction, direction_partials, mesh_ode_options, mesh_sphere_with, MeshOptions, SphereMesh};
use crate::error::{Result, SolError};
use crate::flow::{exp_map_with, exp_with_frames_opts};
use crate::solcore::area_element;

/// Relative gap allowed between a grid and its refinement.
pub const RICHARDSON_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaEstimate {
    pub r: f64,
    pub resolution: usize,
    /// Estimate on the `resolution` grid.
    pub coarse: f64,
    /// Estimate on the `2·resolution` grid; the reported value.
    pub fine: f64,
    pub rel_change: f64,
}

impl AreaEstimate {
    pub fn value(&self) -> f64 {
        self.fine
    }
}

/// Trapezoid sum over the mesh taking every `stride`-th level and angle.
/// Covers all four sectors.
pub fn mesh_area(mesh: &SphereMesh, stride: usize) -> Result<f64> {
    let frames = mesh
        .frames
        .as_ref()
        .ok_or_else(|| SolError::InvalidParam("mesh has no frames".into()))?;
    let n = mesh.resolution;
    if n % stride != 0 {
        return Err(SolError::InvalidParam(format!("stride {stride} does not divide {n}")));
    }
    let rows: Vec<usize> = (0..=n).step_by(stride).collect();
    let d_alpha = mesh.alpha_r * stride as f64 / n as f64;
    let d_psi = PI * stride as f64 / n as f64;
    let mut total = 0.0;
    for (k, &i) in rows.iter().enumerate() {
        let w = if k == 0 || k == rows.len() - 1 { 0.5 } else { 1.0 };
        let row: f64 = (0..mesh.cols())
            .step_by(stride)
            .map(|j| {
                let f = frames[mesh.idx(i, j)];
                area_element(mesh.image(i, j), f[0], f[1])
            })
            .sum();
        total += w * row;
    }
    Ok(4.0 * total * d_alpha * d_psi)
}

/// Area estimate with a Richardson-style comparison against the grid of
/// half the spacing. Fails when the two differ by more than 1%.
pub fn sphere_area(r: f64, resolution: usize) -> Result<AreaEstimate> {
    let est = sphere_area_unchecked(r, resolution)?;
    if est.rel_change > RICHARDSON_TOL {
        return Err(SolError::NotConverged(format!(
            "sphere area at r = {r}: {} vs {} (rel {:.3e})",
            est.coarse, est.fine, est.rel_change
        )));
    }
    Ok(est)
}

pub fn sphere_area_unchecked(r: f64, resolution: usize) -> Result<AreaEstimate> {
    let mesh = mesh_sphere_with(r, 2 * resolution, &MeshOptions { frames: true, ode: mesh_ode_options() })?;
    let fine = mesh_area(&mesh, 1)?;
    let coarse = mesh_area(&mesh, 2)?;
    Ok(AreaEstimate { r, resolution, coarse, fine, rel_change: ((fine - coarse) / fine).abs() })
}

/// `4π(cosh r − 1)` and `20π e^r`.
pub fn area_bounds(r: f64) -> (f64, f64) {
    (4.0 * PI * (r.cosh() - 1.0), 20.0 * PI * r.exp())
}

/// Largest relative difference between variational frames and central
/// differences of the exponential map (vector step `1e-6·r`) at `n`
/// scattered directions of the positive sector.
pub fn frame_cross_check(r: f64, n: usize) -> Result<f64> {
    let alpha_r = super::mesh::alpha_for_radius(r)?;
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let opts = mesh_ode_options();
    let errs: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let alpha = alpha_r * (0.05 + 0.9 * ((k as f64 + 0.5) / n as f64));
            let psi = 2.0 * PI * ((k as f64 * golden) % 1.0);
            let u = direction(alpha, psi);
            let du = direction_partials(alpha, psi);
            let (_, frames) = exp_with_frames_opts(r, u, du, &opts)?;
            let h = 1e-6 * r;
            let mut worst: f64 = 0.0;
            for (d, f) in du.iter().zip(frames) {
                let plus = exp_map_with(std::array::from_fn(|i| r * u[i] + h * d[i]), &opts)?;
                let minus = exp_map_with(std::array::from_fn(|i| r * u[i] - h * d[i]), &opts)?;
                let s = r / (2.0 * h);
                let fd = [(plus.x - minus.x) * s, (plus.y - minus.y) * s, (plus.z - minus.z) * s];
                let diff = ((fd[0] - f.u).powi(2) + (fd[1] - f.v).powi(2) + (fd[2] - f.w).powi(2)).sqrt();
                let size = (f.u * f.u + f.v * f.v + f.w * f.w).sqrt();
                worst = worst.max(diff / size.max(1e-300));
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}
