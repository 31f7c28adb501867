//! The structure field on the unit sphere, its loop level sets and periods,
//! and the Riemannian exponential map at the identity.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::elliptic::{agm, ellip_ke_comp};
use crate::error::{domain, Result, SolError};
use crate::ode::{self, OdeOptions, Trajectory};
use crate::roots::bisect;
use crate::solcore::{SolPoint, TangentVec, Z_LIMIT};

/// Smallest loop period, reached on the level `α = 1/√2`.
pub const MIN_PERIOD: f64 = PI * SQRT_2;

/// Tolerance used by [`classify`] for perfect vectors.
pub const PERFECT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVec {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitVec {
    /// Normalizes a nonzero vector.
    pub fn normalize(v: [f64; 3]) -> Result<Self> {
        let n = norm3(v);
        if !(n > 0.0) || !n.is_finite() {
            return Err(domain("UnitVec::normalize", format!("cannot normalize {v:?}")));
        }
        Ok(UnitVec { x: v[0] / n, y: v[1] / n, z: v[2] / n })
    }

    /// Accepts `v` only if it is already unit within 1e-12.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = norm3([x, y, z]);
        if (n - 1.0).abs() > 1e-12 {
            return Err(domain("UnitVec::new", format!("|v| = {n}")));
        }
        Ok(UnitVec { x, y, z })
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// A loop level set `{xy = α²}` of the structure field, seen from its seed
/// `(x₀, y₀, 0)` with `x₀ > y₀ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopLevel {
    pub alpha: f64,
    pub period: f64,
    pub y0: f64,
    pub m: f64,
}

impl LoopLevel {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        let period = period_from_alpha(alpha)?;
        let a4 = alpha.powi(4);
        let y0 = (2.0 * a4 / (1.0 + (1.0 - 4.0 * a4).max(0.0).sqrt())).sqrt();
        let a2 = 2.0 * alpha * alpha;
        Ok(LoopLevel { alpha, period, y0, m: (1.0 - a2) / (1.0 + a2) })
    }

    pub fn x0(&self) -> f64 {
        (1.0 - self.y0 * self.y0).sqrt()
    }

    /// Half period `ℓ`.
    pub fn half(&self) -> f64 {
        0.5 * self.period
    }

    /// The seed `(x₀, y₀, 0)`.
    pub fn seed(&self) -> [f64; 3] {
        [self.x0(), self.y0, 0.0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MuClass {
    Small,
    Perfect,
    Large,
}

/// `Σ(x, y, z) = (xz, −yz, −x² + y²)`.
pub fn structure_field(v: [f64; 3]) -> [f64; 3] {
    let [x, y, z] = v;
    [x * z, -y * z, -x * x + y * y]
}

/// `μ(V) = AGM(√|xy|, ½√((|x|+|y|)² + z²))`.
pub fn mu(v: [f64; 3]) -> f64 {
    let [x, y, z] = v;
    let g = (x * y).abs().sqrt();
    let s = x.abs() + y.abs();
    let a = 0.5 * (s * s + z * z).sqrt();
    agm(g, a).unwrap_or(0.0)
}

pub fn classify(v: [f64; 3]) -> MuClass {
    let m = mu(v);
    if (m - PI).abs() <= PERFECT_TOL {
        MuClass::Perfect
    } else if m < PI {
        MuClass::Small
    } else {
        MuClass::Large
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= FRAC_1_SQRT_2 * (1.0 + 1e-15)) {
        return Err(domain("period_from_alpha", format!("alpha = {alpha} outside (0, 1/√2]")));
    }
    Ok(())
}

/// `L_α = π / AGM(α, ½√(1+2α²))`.
pub fn period_from_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(PI / agm(alpha, 0.5 * (1.0 + 2.0 * alpha * alpha).sqrt())?)
}

/// The same period as `(4/√(1+2α²))·K((1−2α²)/(1+2α²))`.
pub fn period_from_alpha_k(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let d = 1.0 + 2.0 * alpha * alpha;
    let (k, _) = ellip_ke_comp(4.0 * alpha * alpha / d)?;
    Ok(4.0 / d.sqrt() * k)
}

/// Pieces of `L(y) = 4f(y)K(g(y))` and their `y`-derivatives.
struct PeriodParts {
    f: f64,
    df: f64,
    g: f64,
    dg: f64,
    gc: f64,
}

fn period_parts(y: f64) -> PeriodParts {
    let c = (1.0 - y * y).sqrt();
    let s = 2.0 * y * c;
    let ds = 2.0 * (1.0 - 2.0 * y * y) / c;
    let f = 1.0 / (1.0 + s).sqrt();
    let df = -0.5 * (1.0 + s).powf(-1.5) * ds;
    let g = (1.0 - s) / (1.0 + s);
    let dg = -2.0 * ds / ((1.0 + s) * (1.0 + s));
    PeriodParts { f, df, g, dg, gc: 2.0 * s / (1.0 + s) }
}

fn check_seed(y: f64, op: &'static str) -> Result<()> {
    if !(y > 0.0 && y <= FRAC_1_SQRT_2 * (1.0 + 1e-15)) {
        return Err(domain(op, format!("y = {y} outside (0, 1/√2]")));
    }
    Ok(())
}

/// Period of the loop through `(√(1−y²), y, 0)`.
pub fn period_of_y(y: f64) -> Result<f64> {
    check_seed(y, "period_of_y")?;
    let p = period_parts(y);
    if p.gc >= 1.0 {
        return Ok(MIN_PERIOD);
    }
    let (k, _) = ellip_ke_comp(p.gc)?;
    Ok(4.0 * p.f * k)
}

/// `dL/dy` from the chain rule through `K(g)`; requires `0 < y < 1/√2`.
pub fn period_of_y_deriv(y: f64) -> Result<f64> {
    if !(y > 0.0 && y < FRAC_1_SQRT_2) {
        return Err(domain("period_of_y_deriv", format!("y = {y} outside (0, 1/√2)")));
    }
    let p = period_parts(y);
    let (k, e) = ellip_ke_comp(p.gc)?;
    // dK/dm with m = g and 1 − m = gc.
    let dk = (e - p.gc * k) / (2.0 * p.g * p.gc);
    Ok(4.0 * (p.df * k + p.f * dk * p.dg))
}

fn period_monotone() -> bool {
    static CHECK: OnceLock<bool> = OnceLock::new();
    *CHECK.get_or_init(|| {
        let n = 10_000;
        let mut prev = f64::INFINITY;
        for i in 1..=n {
            let y = FRAC_1_SQRT_2 * i as f64 / n as f64;
            match period_of_y(y) {
                Ok(l) if l < prev => prev = l,
                _ => return false,
            }
        }
        true
    })
}

/// Inverts `L(y)` by bisection in `log y`.
pub fn level_from_period(l: f64) -> Result<LoopLevel> {
    if !(l >= MIN_PERIOD * (1.0 - 1e-14)) || !l.is_finite() {
        return Err(domain("level_from_period", format!("L = {l} below π√2: no loop level set")));
    }
    if !period_monotone() {
        return Err(SolError::NotConverged("period is not monotone in y on the check grid".into()));
    }
    let y0 = if l <= MIN_PERIOD {
        FRAC_1_SQRT_2
    } else {
        let hi = FRAC_1_SQRT_2.ln();
        // L ≈ −2 log(y/16) for small y.
        let mut lo = (16.0f64.ln() - 0.5 * l - 2.0).min(hi - 1e-3);
        while period_of_y(lo.exp())? < l {
            lo -= 2.0;
            if lo < -740.0 {
                return Err(domain("level_from_period", format!("L = {l} too large")));
            }
        }
        let t = bisect(|t| Ok(period_of_y(t.exp())? - l), lo, hi, 0.0, "L(y) − L")?;
        t.exp().min(FRAC_1_SQRT_2)
    };
    let alpha = (y0 * (1.0 - y0 * y0).sqrt()).sqrt();
    let a2 = 2.0 * alpha * alpha;
    Ok(LoopLevel { alpha, period: l, y0, m: (1.0 - a2) / (1.0 + a2) })
}

/// Dense flowline of `Σ` (forward) or `−Σ` (backward).
#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub direction: Direction,
    pub traj: Trajectory<3>,
}

impl FlowTrajectory {
    pub fn eval(&self, t: f64) -> [f64; 3] {
        self.traj.eval(t)
    }

    pub fn duration(&self) -> f64 {
        self.traj.t_end
    }
}

pub fn integrate_flow(v0: UnitVec, duration: f64, dir: Direction) -> Result<FlowTrajectory> {
    integrate_flow_with(v0, duration, dir, &OdeOptions::default())
}

pub fn integrate_flow_with(v0: UnitVec, duration: f64, dir: Direction, opts: &OdeOptions) -> Result<FlowTrajectory> {
    if !(duration >= 0.0) {
        return Err(SolError::InvalidParam(format!("duration {duration} < 0")));
    }
    let sgn = match dir {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let traj = ode::solve(
        |_, v: &[f64; 3]| {
            let s = structure_field(*v);
            [sgn * s[0], sgn * s[1], sgn * s[2]]
        },
        0.0,
        v0.to_array(),
        duration,
        opts,
    )?;
    Ok(FlowTrajectory { direction: dir, traj })
}

/// Joint field for `(w, p)`: `w' = Σ(w)`, `p' = (e^{p₃}w₁, e^{−p₃}w₂, w₃)`.
#[inline]
fn exp_field(s: &[f64; 6]) -> [f64; 6] {
    let [x, y, z, _, _, p3] = *s;
    let e = p3.exp();
    [x * z, -y * z, -x * x + y * y, e * x, y / e, z]
}

fn guard(p: &[f64; 6]) -> Result<()> {
    if p[5].abs() > Z_LIMIT {
        Err(SolError::Overflow { z: p[5] })
    } else {
        Ok(())
    }
}

/// Dense geodesic `t ↦ exp(t·u)` with its left-translated velocity.
#[derive(Debug, Clone)]
pub struct ExpPath {
    pub traj: Trajectory<6>,
}

impl ExpPath {
    /// Position and unit velocity `w(t)` in the Lie algebra.
    pub fn eval(&self, t: f64) -> (SolPoint, [f64; 3]) {
        let s = self.traj.eval(t);
        (SolPoint::new(s[3], s[4], s[5]), [s[0], s[1], s[2]])
    }

    pub fn end(&self) -> SolPoint {
        let s = self.traj.y_end;
        SolPoint::new(s[3], s[4], s[5])
    }

    /// Coordinate velocity `p'(t) = dL_{p(t)}(w(t))`.
    pub fn velocity(&self, t: f64) -> (SolPoint, TangentVec) {
        let s = self.traj.eval(t);
        let d = exp_field(&s);
        (SolPoint::new(s[3], s[4], s[5]), TangentVec::new(d[3], d[4], d[5]))
    }
}

fn split(v: [f64; 3]) -> Result<Option<(f64, [f64; 3])>> {
    let r = norm3(v);
    if r == 0.0 {
        return Ok(None);
    }
    if !r.is_finite() {
        return Err(domain("exp_map", format!("non-finite vector {v:?}")));
    }
    Ok(Some((r, [v[0] / r, v[1] / r, v[2] / r])))
}

pub fn exp_map(v: [f64; 3]) -> Result<SolPoint> {
    exp_map_with(v, &OdeOptions::default())
}

pub fn exp_map_with(v: [f64; 3], opts: &OdeOptions) -> Result<SolPoint> {
    let Some((r, u)) = split(v)? else {
        return Ok(SolPoint::IDENTITY);
    };
    let s = ode::solve_final(|_, s| exp_field(s), 0.0, [u[0], u[1], u[2], 0.0, 0.0, 0.0], r, opts)?;
    guard(&s)?;
    Ok(SolPoint::new(s[3], s[4], s[5]))
}

pub fn exp_path(v: [f64; 3]) -> Result<ExpPath> {
    exp_path_with(v, &OdeOptions::default())
}

pub fn exp_path_with(v: [f64; 3], opts: &OdeOptions) -> Result<ExpPath> {
    let (r, u) = split(v)?.unwrap_or((0.0, [0.0, 0.0, 1.0]));
    let traj = ode::solve(|_, s| exp_field(s), 0.0, [u[0], u[1], u[2], 0.0, 0.0, 0.0], r, opts)?;
    guard(&traj.y_end)?;
    Ok(ExpPath { traj })
}

/// `exp(r·u)` together with `dE_{r·u}(r·du)` for two tangent directions
/// `du` of the unit sphere at `u`, from the linearized joint system.
pub fn exp_with_frames(r: f64, u: [f64; 3], du: [[f64; 3]; 2]) -> Result<(SolPoint, [TangentVec; 2])> {
    exp_with_frames_opts(r, u, du, &OdeOptions::default())
}

pub fn exp_with_frames_opts(
    r: f64,
    u: [f64; 3],
    du: [[f64; 3]; 2],
    opts: &OdeOptions,
) -> Result<(SolPoint, [TangentVec; 2])> {
    let mut s0 = [0.0; 18];
    s0[..3].copy_from_slice(&u);
    s0[6..9].copy_from_slice(&du[0]);
    s0[12..15].copy_from_slice(&du[1]);
    let field = |_: f64, s: &[f64; 18]| {
        let [x, y, z, _, _, p3] = [s[0], s[1], s[2], s[3], s[4], s[5]];
        let e = p3.exp();
        let mut d = [0.0; 18];
        d[..6].copy_from_slice(&[x * z, -y * z, -x * x + y * y, e * x, y / e, z]);
        for k in [6, 12] {
            let [a, b, c, _, _, q3] = [s[k], s[k + 1], s[k + 2], s[k + 3], s[k + 4], s[k + 5]];
            d[k] = a * z + x * c;
            d[k + 1] = -b * z - y * c;
            d[k + 2] = -2.0 * x * a + 2.0 * y * b;
            d[k + 3] = e * (a + x * q3);
            d[k + 4] = (b - y * q3) / e;
            d[k + 5] = c;
        }
        d
    };
    let s = ode::solve_final(field, 0.0, s0, r, opts)?;
    if s[5].abs() > Z_LIMIT {
        return Err(SolError::Overflow { z: s[5] });
    }
    Ok((
        SolPoint::new(s[3], s[4], s[5]),
        [TangentVec::new(s[9], s[10], s[11]), TangentVec::new(s[15], s[16], s[17])],
    ))
}

/// Direction `(cos φ, 0, sin φ)` whose geodesic of length `r` ends in the
/// plane `z = 0`, and that endpoint.
pub fn slice_shot(r: f64) -> Result<(UnitVec, SolPoint)> {
    let end_z = |phi: f64| -> Result<f64> { Ok(exp_map([r * phi.cos(), 0.0, r * phi.sin()])?.z) };
    let phi = bisect(end_z, 0.0, 0.5 * PI - 1e-9, 1e-15, "endpoint z along the slice")?;
    let u = UnitVec::normalize([phi.cos(), 0.0, phi.sin()])?;
    Ok((u, exp_map([r * u.x, 0.0, r * u.z])?))
}
