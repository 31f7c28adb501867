//! Derivatives of the symmetric system with respect to the period `L`, the
//! auxiliary ratios `X = ẋ/x`, `Y = ẏ/y`, `Z = ż`, `B = ḃ/b`, isochronal
//! curves `Υ_r(L) = (a_L(r)/2, b_L(r)/2)`, vanishing points and cusps.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, SolError};
use crate::flow::{level_from_period, period_of_y_deriv, LoopLevel};
use crate::ode::{self, OdeOptions, Trajectory};
use crate::output::write_csv;
use crate::roots::{bisect, sign_changes};

/// `b` below this is treated as zero when forming `B = ḃ/b`.
pub const B_MASK: f64 = 1e-8;

pub const DELTA0: f64 = 1.0 / 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarState {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub a: f64,
    pub b: f64,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub da: f64,
    pub db: f64,
}

impl VarState {
    pub fn big_x(&self) -> f64 {
        self.dx / self.x
    }

    pub fn big_y(&self) -> f64 {
        self.dy / self.y
    }

    pub fn big_z(&self) -> f64 {
        self.dz
    }

    /// `None` while `b` is still within [`B_MASK`] of its initial zero.
    pub fn big_b(&self) -> Option<f64> {
        (self.b > B_MASK).then(|| self.db / self.b)
    }

    /// `x·ȧ/2 + y·ḃ/2`.
    pub fn matei3(&self) -> f64 {
        0.5 * (self.x * self.da + self.y * self.db)
    }

    /// `B − (x·ua/(2y·ub))X + Y/2 + Z/(2y·ub)`, the defect of the closed
    /// form of `B`.
    pub fn nice_residual(&self) -> Option<f64> {
        let b = self.big_b()?;
        let (ua, ub) = (0.5 * self.a, 0.5 * self.b);
        Some(b - self.x * ua / (2.0 * self.y * ub) * self.big_x() + 0.5 * self.big_y() + self.big_z() / (2.0 * self.y * ub))
    }
}

#[inline]
fn var_field(s: &[f64; 10]) -> [f64; 10] {
    let [x, y, z, a, b, dx, dy, dz, da, db] = *s;
    [
        -x * z,
        y * z,
        x * x - y * y,
        2.0 * x + a * z,
        2.0 * y - b * z,
        -dx * z - x * dz,
        dy * z + y * dz,
        2.0 * x * dx - 2.0 * y * dy,
        2.0 * dx + da * z + a * dz,
        2.0 * dy - db * z - b * dz,
    ]
}

/// Dense solution of the 10-dimensional variational system.
#[derive(Debug, Clone)]
pub struct VarFlow {
    pub level: LoopLevel,
    pub traj: Trajectory<10>,
}

impl VarFlow {
    pub fn state(&self, t: f64) -> VarState {
        let [x, y, z, a, b, dx, dy, dz, da, db] = self.traj.eval(t);
        VarState { t, x, y, z, a, b, dx, dy, dz, da, db }
    }

    pub fn duration(&self) -> f64 {
        self.traj.t_end
    }

    /// Uniform grid of states on `[t0, t1]`.
    pub fn grid(&self, t0: f64, t1: f64, n: usize) -> Vec<VarState> {
        (0..=n).map(|i| self.state(t0 + (t1 - t0) * i as f64 / n as f64)).collect()
    }

    /// Rows `t,X,Y,Z,B` on `[0, L]`; `B` is NaN where masked.
    pub fn write_aux_csv<W: Write>(&self, w: W, n: usize) -> Result<()> {
        let l = self.level.period.min(self.duration());
        let rows = self
            .grid(0.0, l, n)
            .into_iter()
            .map(|s| vec![s.t, s.big_x(), s.big_y(), s.big_z(), s.big_b().unwrap_or(f64::NAN)]);
        write_csv(w, &["t", "X", "Y", "Z", "B"], rows)
    }
}

/// Initial L-derivatives `(ẋ, ẏ)(0)`.
pub fn initial_derivatives(level: &LoopLevel) -> Result<(f64, f64)> {
    let dl = period_of_y_deriv(level.y0)?;
    if dl == 0.0 || !dl.is_finite() {
        return Err(domain("solve_variational", format!("dL/dy = {dl} at y0 = {}", level.y0)));
    }
    let dy = 1.0 / dl;
    Ok((-(level.y0 / level.x0()) * dy, dy))
}

/// Solves on `[0, 2L]`.
pub fn solve_variational(level: &LoopLevel) -> Result<VarFlow> {
    solve_variational_until(level, 2.0 * level.period, &OdeOptions::default())
}

pub fn solve_variational_until(level: &LoopLevel, t_end: f64, opts: &OdeOptions) -> Result<VarFlow> {
    let (dx0, dy0) = initial_derivatives(level)?;
    let [x0, y0, _] = level.seed();
    let s0 = [x0, y0, 0.0, 0.0, 0.0, dx0, dy0, 0.0, 0.0, 0.0];
    let traj = ode::solve(|_, s| var_field(s), 0.0, s0, t_end, opts)?;
    Ok(VarFlow { level: *level, traj })
}

fn state_at(level: &LoopLevel, t: f64) -> Result<VarState> {
    let (dx0, dy0) = initial_derivatives(level)?;
    let [x0, y0, _] = level.seed();
    let s0 = [x0, y0, 0.0, 0.0, 0.0, dx0, dy0, 0.0, 0.0, 0.0];
    let [x, y, z, a, b, dx, dy, dz, da, db] = ode::solve_final(|_, s| var_field(s), 0.0, s0, t, &OdeOptions::default())?;
    Ok(VarState { t, x, y, z, a, b, dx, dy, dz, da, db })
}

/// `(X, Y, Z, B)` at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxValues {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub b: Option<f64>,
}

impl AuxValues {
    fn of(s: &VarState) -> Self {
        AuxValues { t: s.t, x: s.big_x(), y: s.big_y(), z: s.big_z(), b: s.big_b() }
    }

    /// Largest componentwise distance from `target`; a masked `B` counts as
    /// infinitely far.
    pub fn distance(&self, target: [f64; 4]) -> f64 {
        let db = self.b.map_or(f64::INFINITY, |b| (b - target[3]).abs());
        (self.x - target[0]).abs().max((self.y - target[1]).abs()).max((self.z - target[2]).abs()).max(db)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxReport {
    pub period: f64,
    pub start: AuxValues,
    pub half: AuxValues,
    pub full: AuxValues,
}

pub fn aux_report(level: &LoopLevel) -> Result<AuxReport> {
    let l = level.period;
    let vf = solve_variational_until(level, l, &OdeOptions::default())?;
    Ok(AuxReport {
        period: l,
        start: AuxValues::of(&vf.state(0.0)),
        half: AuxValues::of(&vf.state(0.5 * l)),
        full: AuxValues::of(&vf.state(l)),
    })
}

/// A point of the isochronal curve `Υ_r` with its L-velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpsilonPoint {
    pub r: f64,
    pub period: f64,
    pub point: (f64, f64),
    pub velocity: (f64, f64),
    /// `−x_L(r)/y_L(r)`, the slope the velocity must have when nonzero.
    pub slope: f64,
    /// `x·v₁ + y·v₂`.
    pub matei3: f64,
}

pub fn upsilon(r: f64, l: f64) -> Result<UpsilonPoint> {
    if !(l >= r && r > 0.0) {
        return Err(SolError::InvalidParam(format!("upsilon needs L ≥ r > 0, got r = {r}, L = {l}")));
    }
    let lv = level_from_period(l)?;
    let s = state_at(&lv, r)?;
    Ok(UpsilonPoint {
        r,
        period: l,
        point: (0.5 * s.a, 0.5 * s.b),
        velocity: (0.5 * s.da, 0.5 * s.db),
        slope: -s.x / s.y,
        matei3: s.matei3(),
    })
}

/// `Υ_r` sampled at `n + 1` uniform periods in `[l0, l1]`.
pub fn isochron_curve(r: f64, l0: f64, l1: f64, n: usize) -> Result<Vec<UpsilonPoint>> {
    (0..=n)
        .into_par_iter()
        .map(|i| upsilon(r, l0 + (l1 - l0) * i as f64 / n as f64))
        .collect()
}

/// Rows `L,a,b,da,db,slope`, where `(a, b)` is the point of `Υ_r` and
/// `(da, db)` its L-velocity.
pub fn write_isochron_csv<W: Write>(w: W, curve: &[UpsilonPoint]) -> Result<()> {
    let rows = curve
        .iter()
        .map(|p| vec![p.period, p.point.0, p.point.1, p.velocity.0, p.velocity.1, p.slope]);
    write_csv(w, &["L", "a", "b", "da", "db", "slope"], rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingPoint {
    pub period: f64,
    pub t_l: f64,
    pub s_l: f64,
    /// Sign changes of `ḃ` found on a 200-point grid over `[L/2, L]`.
    pub changes_on_half: Vec<f64>,
    /// `ḃ` is negative on the grid over `[L/2, t_L)` and positive over `(t_L, L]`.
    pub signs_ok: bool,
}

pub fn vanishing_point(level: &LoopLevel) -> Result<VanishingPoint> {
    let vf = solve_variational_until(level, level.period, &OdeOptions::default())?;
    vanishing_point_of(&vf)
}

pub fn vanishing_point_of(vf: &VarFlow) -> Result<VanishingPoint> {
    let l = vf.level.period;
    let db = |t: f64| vf.state(t).db;
    let t_l = bisect(|t| Ok(db(t)), l - 1.0, l, 1e-10, "ḃ on [L−1, L]")?;
    let n = 200;
    let ts: Vec<f64> = (0..=n).map(|i| 0.5 * l + 0.5 * l * i as f64 / n as f64).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| db(t)).collect();
    let changes = sign_changes(&ts, &vs, 0.0);
    let signs_ok = ts.iter().zip(&vs).all(|(&t, &v)| {
        if t < t_l - 1e-9 {
            v < 0.0
        } else if t > t_l + 1e-9 {
            v > 0.0
        } else {
            true
        }
    });
    Ok(VanishingPoint { period: l, t_l, s_l: l - t_l, changes_on_half: changes, signs_ok })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityRow {
    pub period: f64,
    pub t_l: f64,
    pub s_l: f64,
    /// Centered difference of `t_L` with step 0.1.
    pub dt_dl: f64,
}

pub fn monotonicity_scan(periods: &[f64]) -> Result<Vec<MonotonicityRow>> {
    const H: f64 = 0.1;
    periods
        .par_iter()
        .map(|&l| {
            let t = |l: f64| -> Result<f64> { Ok(vanishing_point(&level_from_period(l)?)?.t_l) };
            let t0 = t(l)?;
            let dt = (t(l + H)? - t(l - H)?) / (2.0 * H);
            Ok(MonotonicityRow { period: l, t_l: t0, s_l: l - t0, dt_dl: dt })
        })
        .collect()
}

/// Cusp of the isochronal curve `Υ_r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspTrack {
    pub r: f64,
    pub lstar: f64,
    pub t_l: f64,
    pub s_l: f64,
    pub kappa: (f64, f64),
    /// Sign changes of `ḃ_L(r)` over `L ∈ [r, 4r]`.
    pub changes: Vec<f64>,
}

pub fn db_at(r: f64, l: f64) -> Result<f64> {
    Ok(state_at(&level_from_period(l)?, r)?.db)
}

pub fn cusp_for_radius(r: f64) -> Result<CuspTrack> {
    if !(r >= 6.0) {
        return Err(SolError::InvalidParam(format!("cusp tracking needs r ≥ 6, got {r}")));
    }
    let n = 400;
    let ls: Vec<f64> = (0..n).map(|i| r + 3.0 * r * i as f64 / (n - 1) as f64).collect();
    let vs: Vec<f64> = ls.par_iter().map(|&l| db_at(r, l)).collect::<Result<_>>()?;
    let changes = sign_changes(&ls, &vs, 0.0);
    if changes.len() != 1 {
        return Err(SolError::SignChanges { what: "ḃ_L(r) over L ∈ [r, 4r]", count: changes.len(), locations: changes });
    }
    let lstar = bisect(|l| db_at(r, l), r.max(crate::flow::MIN_PERIOD), r + 1.0, 1e-10, "ḃ_L(r) over L ∈ (r, r+1)")?;
    let p = upsilon(r, lstar)?;
    Ok(CuspTrack { r, lstar, t_l: r, s_l: lstar - r, kappa: p.point, changes })
}

pub fn write_cusp_csv<W: Write>(w: W, cusps: &[CuspTrack]) -> Result<()> {
    let rows = cusps.iter().map(|c| vec![c.r, c.lstar, c.kappa.0, c.kappa.1, c.t_l, c.s_l]);
    write_csv(w, &["r", "Lstar", "a_r", "b_r", "t_L", "s_L"], rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl LemmaCheck {
    fn below(name: &str, value: f64, bound: f64) -> Self {
        LemmaCheck { name: name.into(), value, bound, pass: value < bound }
    }

    fn above(name: &str, value: f64, bound: f64) -> Self {
        LemmaCheck { name: name.into(), value, bound, pass: value > bound }
    }
}

/// Dense-grid checks of the statements about `Y`, `Z` near the end of a loop.
pub fn variation_lemma_checks(level: &LoopLevel) -> Result<Vec<LemmaCheck>> {
    let l = level.period;
    let vf = solve_variational_until(level, l, &OdeOptions::default())?;
    let n = 2000;
    let tail = vf.grid(l - 1.0, l, n);
    let max_yz = tail.iter().map(|s| s.big_y().abs().max(s.big_z().abs())).fold(0.0, f64::max);
    // Y' = Z, since X' = −Z and Y' = ż = Z.
    let max_dy = tail.iter().map(|s| s.big_z()).fold(f64::NEG_INFINITY, f64::max);
    let min_y_mid = vf
        .grid(0.5 * l, l - 1.0, n)
        .iter()
        .skip(1)
        .map(|s| s.big_y())
        .fold(f64::INFINITY, f64::min);
    let min_z_first = vf.grid(0.0, 0.5 * l, n).iter().map(|s| s.big_z()).fold(f64::INFINITY, f64::min);
    let full = vf.grid(0.0, l, 4 * n);
    let ts: Vec<f64> = full.iter().map(|s| s.t).collect();
    let zs: Vec<f64> = full.iter().map(|s| s.big_z()).collect();
    let z_changes = sign_changes(&ts, &zs, 1e-12).len();
    Ok(vec![
        LemmaCheck::below("max |Y|,|Z| on [L-1, L]", max_yz, 5.0),
        LemmaCheck::below("Y(L)", vf.state(l).big_y(), -DELTA0),
        LemmaCheck::below("max Y' on [L-1, L]", max_dy, -DELTA0),
        LemmaCheck::above("Y(L-1)", vf.state(l - 1.0).big_y(), DELTA0),
        LemmaCheck::above("min Y on (L/2, L-1]", min_y_mid, 0.0),
        LemmaCheck::above("min Z on [0, L/2]", min_z_first, -1e-12),
        LemmaCheck::below("sign changes of Z on [0, L]", z_changes as f64, 1.5),
    ])
}

/// `max |Y + B|` on `[L−1, L]`.
pub fn y_plus_b_tail(level: &LoopLevel) -> Result<f64> {
    let l = level.period;
    let vf = solve_variational_until(level, l, &OdeOptions::default())?;
    Ok(vf
        .grid(l - 1.0, l, 2000)
        .iter()
        .filter_map(|s| s.big_b().map(|b| (s.big_y() + b).abs()))
        .fold(0.0, f64::max))
}

/// Smallest period on `probe` (in order) for which `check` passes.
pub fn smallest_passing_period<F>(probe: &[f64], check: F) -> Option<f64>
where
    F: Fn(&LoopLevel) -> bool + Sync,
{
    let passes: Vec<bool> = probe
        .par_iter()
        .map(|&l| level_from_period(l).map(|lv| check(&lv)).unwrap_or(false))
        .collect();
    probe.iter().zip(passes).find(|(_, p)| *p).map(|(l, _)| *l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(l: f64) -> LoopLevel {
        level_from_period(l).unwrap()
    }

    #[test]
    fn initial_dz_is_zero() {
        let vf = solve_variational_until(&lv(8.0), 8.0, &OdeOptions::default()).unwrap();
        let s = vf.state(0.0);
        assert_eq!((s.dz, s.da, s.db), (0.0, 0.0, 0.0));
    }

    #[test]
    fn y_start_near_minus_half() {
        let r = aux_report(&lv(20.0)).unwrap();
        assert!((r.start.y + 0.5).abs() < 0.05, "{:?}", r.start);
    }

    #[test]
    fn x_plus_y_constant() {
        let vf = solve_variational(&lv(12.0)).unwrap();
        let s0 = vf.state(0.0);
        let c = s0.big_x() + s0.big_y();
        for s in vf.grid(0.0, 12.0, 500) {
            assert!((s.big_x() + s.big_y() - c).abs() < 1e-7, "t = {}", s.t);
        }
    }

    #[test]
    fn l_derivative_matches_difference() {
        let l = 16.0;
        let h = 1e-4;
        let vf = solve_variational(&lv(l)).unwrap();
        let plus = crate::symflow::solve_symmetric(&lv(l + h), l).unwrap();
        let minus = crate::symflow::solve_symmetric(&lv(l - h), l).unwrap();
        for t in [l / 4.0, l / 2.0, l] {
            let fd = (plus.state(t).y - minus.state(t).y) / (2.0 * h);
            let an = vf.state(t).dy;
            assert!(((fd - an) / an).abs() < 1e-3, "t = {t}: {fd} vs {an}");
        }
    }

    #[test]
    fn upsilon_velocity_is_orthogonal() {
        let p = upsilon(5.0, 9.0).unwrap();
        let s = state_at(&lv(9.0), 5.0).unwrap();
        assert!((s.x * p.velocity.0 + s.y * p.velocity.1).abs() < 1e-7);
        assert!(upsilon(5.0, 4.0).is_err());
    }
}
