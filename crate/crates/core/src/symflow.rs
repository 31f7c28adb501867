//! Symmetric flowlines: the backward flow from a loop seed coupled with the
//! endpoint coordinates `(a, b)` of the associated geodesic segments.
//!
//! ```text
//! x' = −xz    y' = yz    z' = x² − y²
//! a' = 2x + az    b' = 2y − bz    c̄' = z
//! ```
//!
//! with `(x, y, z)(0) = (x₀, y₀, 0)` and `a(0) = b(0) = c̄(0) = 0`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::flow::{exp_map, exp_map_with, integrate_flow, Direction, LoopLevel, UnitVec};
use crate::ode::{self, OdeOptions, Trajectory};
use crate::output::write_csv;
use crate::quad::integrate;
use crate::solcore::SolPoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymFlowState {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub a: f64,
    pub b: f64,
    pub ua: f64,
    pub ub: f64,
    pub cbar: f64,
}

#[inline]
pub(crate) fn sym_field(s: &[f64; 6]) -> [f64; 6] {
    let [x, y, z, a, b, _] = *s;
    [-x * z, y * z, x * x - y * y, 2.0 * x + a * z, 2.0 * y - b * z, z]
}

/// Dense solution of the symmetric system on one loop level.
#[derive(Debug, Clone)]
pub struct SymFlow {
    pub level: LoopLevel,
    pub traj: Trajectory<6>,
}

impl SymFlow {
    pub fn state(&self, t: f64) -> SymFlowState {
        let [x, y, z, a, b, cbar] = self.traj.eval(t);
        SymFlowState { t, x, y, z, a, b, ua: 0.5 * a, ub: 0.5 * b, cbar }
    }

    pub fn duration(&self) -> f64 {
        self.traj.t_end
    }

    /// Backward-flow state `u_t`.
    pub fn u(&self, t: f64) -> [f64; 3] {
        let s = self.traj.eval(t);
        [s[0], s[1], s[2]]
    }

    /// Rows `t,x,y,z,a,b,ua,ub,cbar` on `n` uniform samples.
    pub fn write_csv<W: Write>(&self, w: W, n: usize) -> Result<()> {
        let rows = self.traj.sample(0.0, self.duration(), n).into_iter().map(|(t, s)| {
            vec![t, s[0], s[1], s[2], s[3], s[4], 0.5 * s[3], 0.5 * s[4], s[5]]
        });
        write_csv(w, &["t", "x", "y", "z", "a", "b", "ua", "ub", "cbar"], rows)
    }
}

pub fn solve_symmetric(level: &LoopLevel, duration: f64) -> Result<SymFlow> {
    solve_symmetric_with(level, duration, &OdeOptions::default())
}

pub fn solve_symmetric_with(level: &LoopLevel, duration: f64, opts: &OdeOptions) -> Result<SymFlow> {
    let [x0, y0, _] = level.seed();
    let traj = ode::solve(|_, s| sym_field(s), 0.0, [x0, y0, 0.0, 0.0, 0.0, 0.0], duration, opts)?;
    Ok(SymFlow { level: *level, traj })
}

/// Largest deviations from the identities satisfied by the symmetric system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// `max |ax − by − 2z|` on a grid over `[0, L]`.
    pub matei2: f64,
    /// `max |a(r)x(r) − ∫₀ʳ 2x²|` over `r ∈ {ℓ/2, ℓ, L}`.
    pub transform_x: f64,
    /// `max |b(r)y(r) − ∫₀ʳ 2y²|` over the same `r`.
    pub transform_y: f64,
    /// `|b(ℓ)/a(ℓ) − y₀/x₀|`.
    pub reciprocity: f64,
    /// `|a(L) − 2b(ℓ)|` and the same relative to `a(L)`.
    pub doubling_abs: f64,
    pub doubling_rel: f64,
    /// `|a(L)/2 − b(ℓ)|`.
    pub underline: f64,
    /// `|c̄(L)|`.
    pub cbar_end: f64,
}

impl IdentityResiduals {
    pub fn max_abs(&self) -> f64 {
        [
            self.matei2,
            self.transform_x,
            self.transform_y,
            self.reciprocity,
            self.doubling_abs,
            self.underline,
            self.cbar_end,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn identity_residuals(level: &LoopLevel) -> Result<IdentityResiduals> {
    identity_residuals_with(level, &OdeOptions::default())
}

pub fn identity_residuals_with(level: &LoopLevel, opts: &OdeOptions) -> Result<IdentityResiduals> {
    let l = level.period;
    let half = 0.5 * l;
    let sf = solve_symmetric_with(level, l, opts)?;
    let n = 4000;
    let matei2 = (0..=n)
        .map(|i| {
            let s = sf.state(l * i as f64 / n as f64);
            (s.a * s.x - s.b * s.y - 2.0 * s.z).abs()
        })
        .fold(0.0, f64::max);
    let mesh = sf.traj.mesh();
    let mut tx: f64 = 0.0;
    let mut ty: f64 = 0.0;
    for r in [0.5 * half, half, l] {
        let breaks: Vec<f64> = mesh.iter().copied().filter(|&t| t < r).chain(std::iter::once(r)).collect();
        let ix: f64 = breaks.windows(2).map(|w| integrate(|t| 2.0 * sf.u(t)[0].powi(2), w[0], w[1], 1e-13)).sum();
        let iy: f64 = breaks.windows(2).map(|w| integrate(|t| 2.0 * sf.u(t)[1].powi(2), w[0], w[1], 1e-13)).sum();
        let s = sf.state(r);
        tx = tx.max((s.a * s.x - ix).abs());
        ty = ty.max((s.b * s.y - iy).abs());
    }
    let sh = sf.state(half);
    let sl = sf.state(l);
    let [x0, y0, _] = level.seed();
    Ok(IdentityResiduals {
        matei2,
        transform_x: tx,
        transform_y: ty,
        reciprocity: (sh.b / sh.a - y0 / x0).abs(),
        doubling_abs: (sl.a - 2.0 * sh.b).abs(),
        doubling_rel: (sl.a - 2.0 * sh.b).abs() / sl.a.abs(),
        underline: (sl.ua - sh.b).abs(),
        cbar_end: sl.cbar.abs(),
    })
}

/// The half-flowline endpoint `(a/2, b/2, c̄)` at time `t`.
pub fn doubling_endpoint(sf: &SymFlow, t: f64) -> SolPoint {
    let s = sf.state(t);
    SolPoint::new(s.ua, s.ub, s.cbar)
}

/// `|exp(t·u_t) − (a/2, b/2, c̄)(t)|`.
pub fn doubling_residual(sf: &SymFlow, t: f64, opts: &OdeOptions) -> Result<f64> {
    let u = sf.u(t);
    let e = exp_map_with([t * u[0], t * u[1], t * u[2]], opts)?;
    Ok(e.dist_euclid(&doubling_endpoint(sf, t)))
}

/// Endpoint values on one loop level, normalized by their limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow {
    pub period: f64,
    /// `b(ℓ)`, tending to 2.
    pub b_half: f64,
    /// `a(ℓ)b(ℓ)/e^ℓ`, tending to 1.
    pub ab_over_exp: f64,
    /// `a(L)/2`, tending to 2.
    pub ua_full: f64,
    /// `(b(L)/2)·2/e^{L/2}`, tending to 1.
    pub ub_full_scaled: f64,
    /// `(a(ℓ)/2)/(e^ℓ/4)`, tending to 1.
    pub ua_half_scaled: f64,
    /// `b(ℓ)/2`, tending to 1.
    pub ub_half: f64,
}

impl AsymptoticRow {
    /// Distances of each entry from its limit.
    pub fn gaps(&self) -> [f64; 6] {
        [
            (self.b_half - 2.0).abs(),
            (self.ab_over_exp - 1.0).abs(),
            (self.ua_full - 2.0).abs(),
            (self.ub_full_scaled - 1.0).abs(),
            (self.ua_half_scaled - 1.0).abs(),
            (self.ub_half - 1.0).abs(),
        ]
    }
}

pub fn endpoint_asymptotics(periods: &[f64]) -> Result<Vec<AsymptoticRow>> {
    use rayon::prelude::*;
    periods
        .par_iter()
        .map(|&l| {
            let lv = crate::flow::level_from_period(l)?;
            let sf = solve_symmetric(&lv, l)?;
            let h = sf.state(0.5 * l);
            let f = sf.state(l);
            Ok(AsymptoticRow {
                period: l,
                b_half: h.b,
                ab_over_exp: h.a * h.b / (0.5 * l).exp(),
                ua_full: f.ua,
                ub_full_scaled: f.ub * 2.0 / (0.5 * l).exp(),
                ua_half_scaled: h.ua / ((0.5 * l).exp() / 4.0),
                ub_half: h.ub,
            })
        })
        .collect()
}

/// True when every gap in consecutive rows is non-increasing.
pub fn trends_toward_limits(rows: &[AsymptoticRow]) -> bool {
    rows.windows(2).all(|w| {
        let (g0, g1) = (w[0].gaps(), w[1].gaps());
        g0.iter().zip(&g1).all(|(a, b)| b <= a)
    })
}

/// Endpoints `E(L·u)` for `n` starting phases `u` around one loop; every
/// such vector is perfect.
pub fn perfect_endpoints(level: &LoopLevel, n: usize) -> Result<Vec<([f64; 3], SolPoint)>> {
    use rayon::prelude::*;
    let l = level.period;
    let s = level.seed();
    let seed = UnitVec::new(s[0], s[1], s[2])?;
    let around = integrate_flow(seed, l, Direction::Forward)?;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let w = around.eval(l * i as f64 / n as f64);
            let v = [l * w[0], l * w[1], l * w[2]];
            Ok((v, exp_map(v)?))
        })
        .collect()
}

/// `(max − min)/mean` of `a·b` over perfect endpoints.
pub fn holonomy_spread(endpoints: &[([f64; 3], SolPoint)]) -> f64 {
    let ab: Vec<f64> = endpoints.iter().map(|(_, p)| p.x * p.y).collect();
    let mean = ab.iter().sum::<f64>() / ab.len() as f64;
    let (lo, hi) = ab.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    (hi - lo) / mean
}

/// `max |σ(E(V))·σ(V) − 1|` with `σ(x, y, z) = y/x`.
pub fn reciprocity_defect(endpoints: &[([f64; 3], SolPoint)]) -> f64 {
    endpoints
        .iter()
        .map(|(v, p)| ((p.y / p.x) * (v[1] / v[0]) - 1.0).abs())
        .fold(0.0, f64::max)
}
