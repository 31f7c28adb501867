//! The yin-yang curve: directions of length `r` whose flowlines end in
//! `Π_Z`, where `d(η_Z∘E)` is singular.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SolError};
use crate::flow::{exp_map_with, integrate_flow_with, level_from_period, Direction, UnitVec, MIN_PERIOD};
use crate::isochron::upsilon;
use crate::ode::OdeOptions;
use crate::symflow::solve_symmetric;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YinYangSample {
    pub period: f64,
    /// Unit direction `u` with `E(r·u)` on `Υ_r`.
    pub direction: [f64; 3],
    /// `η_Z(E(r·u))`.
    pub image: (f64, f64),
    /// Distance from the isochronal curve point at the same period.
    pub upsilon_gap: f64,
    /// `|z|` at the end of the forward flowline of duration `r`.
    pub end_z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YinYangCurve {
    pub r: f64,
    pub samples: Vec<YinYangSample>,
    /// Crossings of `Υ_r` with its mirror `(a, b) ↦ (b, a)`.
    pub mirror_crossings: usize,
}

impl YinYangCurve {
    pub fn max_upsilon_gap(&self) -> f64 {
        self.samples.iter().map(|s| s.upsilon_gap).fold(0.0, f64::max)
    }

    pub fn max_end_z(&self) -> f64 {
        self.samples.iter().map(|s| s.end_z).fold(0.0, f64::max)
    }
}

/// `samples` periods uniformly in `[max(r, π√2), 4r]`.
pub fn yinyang_curve(r: f64, samples: usize) -> Result<YinYangCurve> {
    if !(r >= 5.0) || samples < 2 {
        return Err(SolError::InvalidParam(format!("yin-yang needs r ≥ 5 and ≥ 2 samples, got {r}, {samples}")));
    }
    let l0 = r.max(MIN_PERIOD);
    let l1 = 4.0 * r;
    let opts = OdeOptions::default();
    let pts: Vec<YinYangSample> = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<YinYangSample> {
            let l = l0 + (l1 - l0) * i as f64 / (samples - 1) as f64;
            let level = level_from_period(l)?;
            let u = solve_symmetric(&level, r)?.u(r);
            let p = exp_map_with([r * u[0], r * u[1], r * u[2]], &opts)?;
            let ups = upsilon(r, l)?.point;
            let fwd = integrate_flow_with(UnitVec::normalize(u)?, r, Direction::Forward, &opts)?;
            Ok(YinYangSample {
                period: l,
                direction: u,
                image: (p.x, p.y),
                upsilon_gap: (p.x - ups.0).hypot(p.y - ups.1),
                end_z: fwd.eval(r)[2].abs(),
            })
        })
        .collect::<Result<_>>()?;
    let poly: Vec<(f64, f64)> = pts.iter().map(|s| s.image).collect();
    let mirror: Vec<(f64, f64)> = poly.iter().map(|&(a, b)| (b, a)).collect();
    Ok(YinYangCurve { r, mirror_crossings: polyline_crossings(&poly, &mirror), samples: pts })
}

fn cross(o: (f64, f64), p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0)
}

/// Proper crossings between the segments of two polylines.
pub fn polyline_crossings(p: &[(f64, f64)], q: &[(f64, f64)]) -> usize {
    let mut n = 0;
    for s in p.windows(2) {
        for t in q.windows(2) {
            let d1 = cross(s[0], s[1], t[0]);
            let d2 = cross(s[0], s[1], t[1]);
            let d3 = cross(t[0], t[1], s[0]);
            let d4 = cross(t[0], t[1], s[1]);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                n += 1;
            }
        }
    }
    n
}
