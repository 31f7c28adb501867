//! Numerical checks on the cut locus: perfect vectors of length `r`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SolError};
use crate::flow::{exp_map, level_from_period, MIN_PERIOD};
use crate::symflow::{holonomy_spread, perfect_endpoints, reciprocity_defect};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutLocusReport {
    pub r: f64,
    pub samples: usize,
    /// `max |E(x, y, z) − E(x, y, −z)|`.
    pub partner_residual: f64,
    /// `max |z|` of the endpoints.
    pub max_abs_z: f64,
    /// `(max − min)/mean` of `a·b`.
    pub holonomy_spread: f64,
    /// `max |σ(E(V))·σ(V) − 1|`.
    pub reciprocity: f64,
}

pub fn cutlocus_checks(r: f64, samples: usize) -> Result<CutLocusReport> {
    if !(r > MIN_PERIOD) {
        return Err(SolError::InvalidParam(format!("no perfect vectors of length {r} ≤ π√2")));
    }
    let ends = perfect_endpoints(&level_from_period(r)?, samples)?;
    let partner = ends
        .par_iter()
        .map(|(v, p)| -> Result<f64> { Ok(exp_map([v[0], v[1], -v[2]])?.dist_euclid(p)) })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(CutLocusReport {
        r,
        samples,
        partner_residual: partner,
        max_abs_z: ends.iter().map(|(_, p)| p.z.abs()).fold(0.0, f64::max),
        holonomy_spread: holonomy_spread(&ends),
        reciprocity: reciprocity_defect(&ends),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partners_meet() {
        let rep = cutlocus_checks(6.0, 8).unwrap();
        assert!(rep.partner_residual < 1e-6, "{rep:?}");
        assert!(rep.max_abs_z < 1e-7);
        assert!(rep.holonomy_spread < 1e-6);
        assert!(rep.reciprocity < 1e-6);
    }

    #[test]
    fn needs_perfect_vectors() {
        assert!(cutlocus_checks(4.0, 4).is_err());
    }
}
