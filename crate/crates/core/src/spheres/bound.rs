//! Assembling the area bound from projection data.
//!
//! `A_r < (N_X A_X + N_Y A_Y)/(θ − ε) + Σ_k k A_{Z,k} / (√(1−θ²) − ε)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::roots::golden_section;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundInputs {
    pub n_x: u32,
    pub a_x: f64,
    pub n_y: u32,
    pub a_y: f64,
    /// `k → A_{Z,k}`.
    pub a_z_by_k: BTreeMap<u32, f64>,
}

impl BoundInputs {
    /// Limits in units of `e^r`: `N = 2`, `A_X = A_Y = π`, all of `η_Z`
    /// covered twice with area 16.
    pub fn limiting() -> Self {
        BoundInputs { n_x: 2, a_x: PI, n_y: 2, a_y: PI, a_z_by_k: BTreeMap::from([(2, 16.0)]) }
    }

    pub fn scaled(&self, s: f64) -> Self {
        BoundInputs {
            a_x: self.a_x * s,
            a_y: self.a_y * s,
            a_z_by_k: self.a_z_by_k.iter().map(|(k, a)| (*k, a * s)).collect(),
            ..*self
        }
    }

    fn hyperbolic(&self) -> f64 {
        self.n_x as f64 * self.a_x + self.n_y as f64 * self.a_y
    }

    fn euclidean(&self) -> f64 {
        self.a_z_by_k.iter().map(|(k, a)| *k as f64 * a).sum()
    }
}

pub fn combine_bound(inputs: &BoundInputs, theta: f64, eps: f64) -> Result<f64> {
    if !(eps >= 0.0 && theta > eps && theta < 1.0) {
        return Err(domain("combine_bound", format!("θ = {theta} outside ({eps}, 1)")));
    }
    let d = (1.0 - theta * theta).sqrt() - eps;
    if d <= 0.0 {
        return Err(domain("combine_bound", format!("√(1−θ²) ≤ ε at θ = {theta}")));
    }
    Ok(inputs.hyperbolic() / (theta - eps) + inputs.euclidean() / d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalTheta {
    pub theta: f64,
    pub bound: f64,
}

/// Minimizes [`combine_bound`] over `θ` with `ε = 0`.
pub fn optimize_theta(inputs: &BoundInputs) -> Result<OptimalTheta> {
    let f = |t: f64| combine_bound(inputs, t, 0.0).unwrap_or(f64::INFINITY);
    let (theta, bound) = golden_section(f, 1e-6, 1.0 - 1e-9, 1e-10);
    Ok(OptimalTheta { theta, bound })
}
