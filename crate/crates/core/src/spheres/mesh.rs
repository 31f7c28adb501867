//! Meshing the positive sector of `S_r′ = S_r ∩ μ⁻¹[0, π]` in loop-level
//! coordinates and pushing it through the exponential map.
//!
//! A unit direction is written `u(α, ψ)`: `α = √(xy)` picks the loop level
//! and `ψ ∈ [0, 2π)` runs once around it. With `p = (x+y)/√2`,
//! `q = (x−y)/√2`, the level is the ellipse `2p² + z² = 1 + 2α²` cut by
//! `|q| = √(p² − 2α²)`. In the positive sector `μ(r·u) ≤ π` exactly when
//! `α ≤ α_r`, where `α_r` is the level of period `r`, so `∂S_r′` is the row
//! `α = α_r`.
//!
//! `ψ ↦ ψ + π` is the isometry `(x, y, z) ↦ (y, x, −z)`, which commutes with
//! the exponential map; only `ψ ∈ [0, π)` is integrated.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SolError};
use crate::flow::{exp_map_with, exp_with_frames_opts, level_from_period, MIN_PERIOD};
use crate::ode::OdeOptions;
use crate::solcore::{SolPoint, TangentVec};

/// Tolerances used for the per-vertex integrations.
pub fn mesh_ode_options() -> OdeOptions {
    OdeOptions::with_tol(1e-10, 1e-10)
}

#[derive(Debug, Clone, Copy)]
pub struct MeshOptions {
    pub frames: bool,
    pub ode: OdeOptions,
}

impl Default for MeshOptions {
    fn default() -> Self {
        MeshOptions { frames: false, ode: mesh_ode_options() }
    }
}

/// Unit direction at loop level `α`, loop angle `ψ`.
pub fn direction(alpha: f64, psi: f64) -> [f64; 3] {
    let a2 = 2.0 * alpha * alpha;
    let big = 1.0 + a2;
    let theta_m = (1.0 - a2).max(0.0).sqrt().atan2(2.0 * alpha);
    let theta = theta_m * psi.sin();
    let rp = (0.5 * big).sqrt();
    let p = rp * theta.cos();
    let z = big.sqrt() * theta.sin();
    // q = ±√(p² − 2α²) written without cancellation or a sign switch.
    let (s1, c1) = (0.25 * PI - 0.5 * psi).sin_cos();
    let sinc = |t: f64| if t.abs() < 1e-8 { 1.0 - t * t / 6.0 } else { t.sin() / t };
    let q = rp * 2.0 * theta_m * s1 * c1 * (sinc(2.0 * theta_m * s1 * s1) * sinc(2.0 * theta_m * c1 * c1)).max(0.0).sqrt();
    [(p + q) * FRAC_1_SQRT_2, (p - q) * FRAC_1_SQRT_2, z]
}

/// `(∂u/∂α, ∂u/∂ψ)` by differencing [`direction`].
pub fn direction_partials(alpha: f64, psi: f64) -> [[f64; 3]; 2] {
    let h = 1e-6;
    let sub = |a: [f64; 3], b: [f64; 3], s: f64| -> [f64; 3] { std::array::from_fn(|k| (a[k] - b[k]) * s) };
    let da = if alpha + h <= FRAC_1_SQRT_2 {
        sub(direction(alpha + h, psi), direction(alpha - h, psi), 0.5 / h)
    } else {
        let (f0, f1, f2) = (direction(alpha, psi), direction(alpha - h, psi), direction(alpha - 2.0 * h, psi));
        std::array::from_fn(|k| (3.0 * f0[k] - 4.0 * f1[k] + f2[k]) / (2.0 * h))
    };
    let dp = sub(direction(alpha, psi + h), direction(alpha, psi - h), 0.5 / h);
    [da, dp]
}

/// Loop level of the perfect directions at radius `r`; `1/√2` when every
/// direction is small.
pub fn alpha_for_radius(r: f64) -> Result<f64> {
    if r <= MIN_PERIOD {
        Ok(FRAC_1_SQRT_2)
    } else {
        Ok(level_from_period(r)?.alpha)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereMesh {
    pub r: f64,
    pub resolution: usize,
    pub alpha_r: f64,
    /// `resolution + 1` levels from 0 to `α_r`.
    pub alphas: Vec<f64>,
    /// `2·resolution` loop angles covering `[0, 2π)`.
    pub psis: Vec<f64>,
    /// Row-major `(α, ψ)` unit directions.
    pub vertices: Vec<[f64; 3]>,
    pub images: Vec<SolPoint>,
    /// `dE(r·∂u/∂α)` and `dE(r·∂u/∂ψ)` per vertex when requested.
    pub frames: Option<Vec<[TangentVec; 2]>>,
}

fn flip(p: SolPoint) -> SolPoint {
    SolPoint::new(p.y, p.x, -p.z)
}

fn flip_t(t: TangentVec) -> TangentVec {
    TangentVec::new(t.v, t.u, -t.w)
}

impl SphereMesh {
    pub fn cols(&self) -> usize {
        self.psis.len()
    }

    pub fn rows(&self) -> usize {
        self.alphas.len()
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.cols() + j % self.cols()
    }

    pub fn image(&self, i: usize, j: usize) -> SolPoint {
        self.images[self.idx(i, j)]
    }

    /// True when `∂S_r′` is nonempty, i.e. `r > π√2`.
    pub fn has_boundary(&self) -> bool {
        self.alpha_r < FRAC_1_SQRT_2
    }

    /// Vertex indices of `∂S_r′` in the positive sector.
    pub fn boundary(&self) -> Vec<usize> {
        if !self.has_boundary() {
            return Vec::new();
        }
        let i = self.rows() - 1;
        (0..self.cols()).map(|j| self.idx(i, j)).collect()
    }

    /// Quads `(i, j)` split into two triangles, indices into `images`.
    pub fn triangles(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let (rows, cols) = (self.rows(), self.cols());
        (0..rows - 1).flat_map(move |i| {
            (0..cols).flat_map(move |j| {
                let a = self.idx(i, j);
                let b = self.idx(i + 1, j);
                let c = self.idx(i + 1, j + 1);
                let d = self.idx(i, j + 1);
                [[a, b, c], [a, c, d]]
            })
        })
    }

    /// Whether all images off the last row are pairwise distinct. The last
    /// row is either `∂S_r′`, where partners share an image, or the single
    /// direction `α = 1/√2`.
    pub fn interior_images_distinct(&self) -> bool {
        let mut pts: Vec<[f64; 3]> = (0..self.rows() - 1)
            .flat_map(|i| (0..self.cols()).map(move |j| (i, j)))
            .map(|(i, j)| self.image(i, j).to_array())
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        pts.windows(2).all(|w| {
            let d = ((w[0][0] - w[1][0]).powi(2) + (w[0][1] - w[1][1]).powi(2) + (w[0][2] - w[1][2]).powi(2)).sqrt();
            d > 1e-9 * (1.0 + w[0][0].abs() + w[0][1].abs())
        })
    }
}

pub fn mesh_sphere(r: f64, resolution: usize) -> Result<SphereMesh> {
    mesh_sphere_with(r, resolution, &MeshOptions::default())
}

pub fn mesh_sphere_with(r: f64, resolution: usize, opts: &MeshOptions) -> Result<SphereMesh> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(SolError::InvalidParam(format!("radius {r} must be positive")));
    }
    if resolution < 64 {
        return Err(SolError::InvalidParam(format!("resolution {resolution} < 64")));
    }
    let n = resolution;
    let alpha_r = alpha_for_radius(r)?;
    let alphas: Vec<f64> = (0..=n).map(|i| alpha_r * i as f64 / n as f64).collect();
    let psis: Vec<f64> = (0..2 * n).map(|j| PI * j as f64 / n as f64).collect();
    let half: Vec<(usize, usize)> = (0..=n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();

    type Vertex = (SolPoint, Option<[TangentVec; 2]>);
    let computed: Vec<Vertex> = half
        .par_iter()
        .map(|&(i, j)| -> Result<Vertex> {
            let u = direction(alphas[i], psis[j]);
            if opts.frames {
                let du = direction_partials(alphas[i], psis[j]);
                let (p, f) = exp_with_frames_opts(r, u, du, &opts.ode)?;
                Ok((p, Some(f)))
            } else {
                Ok((exp_map_with([r * u[0], r * u[1], r * u[2]], &opts.ode)?, None))
            }
        })
        .collect::<Result<_>>()?;

    let cols = 2 * n;
    let mut vertices = Vec::with_capacity((n + 1) * cols);
    let mut images = Vec::with_capacity((n + 1) * cols);
    let mut frames = opts.frames.then(|| Vec::with_capacity((n + 1) * cols));
    for i in 0..=n {
        for j in 0..cols {
            vertices.push(direction(alphas[i], psis[j]));
            let (p, f) = computed[i * n + j % n];
            if j < n {
                images.push(p);
                if let (Some(fr), Some(f)) = (frames.as_mut(), f) {
                    fr.push(f);
                }
            } else {
                images.push(flip(p));
                if let (Some(fr), Some(f)) = (frames.as_mut(), f) {
                    fr.push([flip_t(f[0]), flip_t(f[1])]);
                }
            }
        }
    }
    Ok(SphereMesh { r, resolution, alpha_r, alphas, psis, vertices, images, frames })
}
