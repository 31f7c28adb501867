use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2};

use super::{Check, RunConfig};
use crate::elliptic::{agm, ellip_e, ellip_e_deriv, ellip_k, ellip_k_deriv, k_log_asymptote};
use crate::error::Result;
use crate::flow::{self, exp_path_with, integrate_flow_with, level_from_period, period_from_alpha, Direction, UnitVec};
use crate::isochron::{self, aux_report, cusp_for_radius, isochron_curve, monotonicity_scan, solve_variational_until};
use crate::quad::integrate;
use crate::solcore::{metric_norm, slice_reach, Plane};
use crate::spheres::{self, area, bound, cutlocus, omega, raster, volume, yinyang};
use crate::symflow::{self, doubling_residual, identity_residuals_with, solve_symmetric_with};

struct Suite {
    name: &'static str,
    checks: Vec<Check>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, checks: Vec::new() }
    }

    fn push(&mut self, check: String, lemma_ref: &str, value: f64, bound: f64, pass: bool) {
        self.checks.push(Check { suite: self.name.into(), check, lemma_ref: lemma_ref.into(), value, bound, pass });
    }

    fn below(&mut self, check: impl Into<String>, lemma_ref: &str, value: f64, bound: f64) {
        self.push(check.into(), lemma_ref, value, bound, value <= bound);
    }

    fn above(&mut self, check: impl Into<String>, lemma_ref: &str, value: f64, bound: f64) {
        self.push(check.into(), lemma_ref, value, bound, value > bound);
    }

    /// `value ∈ (lo, hi)`; the reported bound is the nearer end.
    fn inside(&mut self, check: impl Into<String>, lemma_ref: &str, value: f64, lo: f64, hi: f64) {
        let bound = if (value - lo).abs() < (value - hi).abs() { lo } else { hi };
        self.push(check.into(), lemma_ref, value, bound, value > lo && value < hi);
    }

    fn flag(&mut self, check: impl Into<String>, lemma_ref: &str, ok: bool) {
        self.push(check.into(), lemma_ref, ok as u8 as f64, 1.0, ok);
    }
}

pub(super) fn run(name: &str, cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut s = match name {
        "elliptic" => Suite::new("elliptic"),
        "flow" => Suite::new("flow"),
        "symflow" => Suite::new("symflow"),
        "isochron" => Suite::new("isochron"),
        _ => Suite::new("spheres"),
    };
    match name {
        "elliptic" => elliptic(&mut s, cfg)?,
        "flow" => flow_suite(&mut s, cfg)?,
        "symflow" => symflow_suite(&mut s, cfg)?,
        "isochron" => isochron_suite(&mut s, cfg)?,
        _ => spheres_suite(&mut s, cfg)?,
    }
    Ok(s.checks)
}

fn quad_k(m: f64) -> f64 {
    integrate(|t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-14)
}

fn quad_e(m: f64) -> f64 {
    integrate(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-14)
}

fn elliptic(s: &mut Suite, cfg: &RunConfig) -> Result<()> {
    let n = cfg.grid;
    let ms: Vec<f64> = (0..n).map(|i| 0.99 * i as f64 / (n - 1) as f64).collect();
    let mut dk: f64 = 0.0;
    let mut de: f64 = 0.0;
    let mut dagm: f64 = 0.0;
    for &m in &ms {
        let qk = quad_k(m);
        dk = dk.max((ellip_k(m)? - qk).abs());
        de = de.max((ellip_e(m)? - quad_e(m)).abs());
        dagm = dagm.max((FRAC_PI_2 / agm((1.0 - m).sqrt(), 1.0)? - qk).abs());
    }
    s.below("K vs quadrature", "definition of K", dk, 1e-10);
    s.below("E vs quadrature", "definition of E", de, 1e-10);
    s.below("K = π/(2 AGM(√(1−m), 1))", "AGM identity", dagm, 1e-12);
    let mut worst: f64 = 0.0;
    for m in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let h = 1e-6;
        let fk = (ellip_k(m + h)? - ellip_k(m - h)?) / (2.0 * h);
        let fe = (ellip_e(m + h)? - ellip_e(m - h)?) / (2.0 * h);
        worst = worst.max(((fk - ellip_k_deriv(m)?) / fk).abs()).max(((fe - ellip_e_deriv(m)?) / fe).abs());
    }
    s.below("dK/dm, dE/dm vs differences", "derivative formulas", worst, 1e-6);
    for e in [1e-3, 1e-6] {
        let (lhs, rhs) = k_log_asymptote(1.0 - e)?;
        s.below(format!("log asymptote of K at m = 1 - {e:e}"), "logarithmic bound on K", lhs, rhs);
    }
    s.below("AGM(1, √2)", "AGM", (agm(1.0, SQRT_2)? - 1.198_140_234_735_592_2).abs(), 1e-12);
    s.flag("E(1) = 1", "E(1)", ellip_e(1.0)? == 1.0);
    Ok(())
}

fn flow_suite(s: &mut Suite, cfg: &RunConfig) -> Result<()> {
    let opts = cfg.ode();
    s.below("period at α = 1/√2", "minimal period", (period_from_alpha(FRAC_1_SQRT_2)? - PI * SQRT_2).abs(), 1e-10);
    s.below(
        "L_α + 4 log(α/2) at α = 0.01",
        "period asymptote",
        (period_from_alpha(0.01)? + 4.0 * (0.005f64).ln()).abs(),
        0.02,
    );
    for l in [8.0, 16.0, 24.0] {
        let lv = level_from_period(l)?;
        s.below(format!("period round trip at L = {l}"), "period inversion", (period_from_alpha(lv.alpha)? - l).abs(), 1e-9);
    }
    let lv = level_from_period(16.0)?;
    let seed = lv.seed();
    let tr = integrate_flow_with(UnitVec::new(seed[0], seed[1], seed[2])?, 2.0 * lv.period, Direction::Forward, &opts)?;
    let (mut dn, mut dh): (f64, f64) = (0.0, 0.0);
    for i in 0..=4000 {
        let w = tr.eval(2.0 * lv.period * i as f64 / 4000.0);
        dn = dn.max((flow::norm3(w) - 1.0).abs());
        dh = dh.max((w[0] * w[1] - lv.alpha * lv.alpha).abs());
    }
    s.below("unit norm along flow, L = 16, T = 2L", "flow conservation", dn, 1e-9);
    s.below("xy = α² along flow, L = 16, T = 2L", "flow conservation", dh, 1e-9);
    let e = tr.eval(lv.period);
    let closure = flow::norm3([e[0] - seed[0], e[1] - seed[1], e[2] - seed[2]]);
    s.below("loop closure after one period", "periodicity", closure, 1e-7);

    let (mut speed, mut zadd): (f64, f64) = (0.0, 0.0);
    for v in [[2.0, 1.5, 0.7], [0.3, -2.0, 1.1], [-4.0, 0.5, -2.0]] {
        let path = exp_path_with(v, &opts)?;
        let r = flow::norm3(v);
        for i in 0..=50 {
            let (p, vel) = path.velocity(r * i as f64 / 50.0);
            speed = speed.max((metric_norm(p, vel) - 1.0).abs());
        }
        let fl = integrate_flow_with(UnitVec::normalize(v)?, r, Direction::Forward, &opts)?;
        let zint: f64 = fl
            .traj
            .mesh()
            .windows(2)
            .map(|w| integrate(|t| fl.eval(t)[2], w[0], w[1], 1e-14))
            .sum();
        zadd = zadd.max((path.end().z - zint).abs());
    }
    s.below("exp map unit speed", "geodesic speed", speed, 1e-9);
    s.below("z of E(V) = ∫ z of the flowline", "z additivity", zadd, 1e-8);
    let cl = cutlocus::cutlocus_checks(6.0, 20)?;
    s.below("partner coincidence at r = 6", "partners", cl.partner_residual, 1e-6);
    let (_, p) = flow::slice_shot(5.0)?;
    s.below("slice shot at r = 5 reaches 2 sinh(5/2)", "hyperbolic slice", (p.x - slice_reach(5.0)).abs(), 1e-4);
    Ok(())
}

fn symflow_suite(s: &mut Suite, cfg: &RunConfig) -> Result<()> {
    let opts = cfg.ode();
    let mut b_half = Vec::new();
    for l in [8.0, 12.0, 16.0, 20.0] {
        let lv = level_from_period(l)?;
        let r = identity_residuals_with(&lv, &opts)?;
        s.below(format!("ax - by = 2z, L = {l}"), "conserved combination", r.matei2, 1e-8);
        s.below(format!("transform integrals, L = {l}"), "integral identities", r.transform_x.max(r.transform_y), 1e-7);
        s.below(format!("b(ℓ)/a(ℓ) = y0/x0, L = {l}"), "reciprocity", r.reciprocity, 1e-8);
        s.below(format!("a(L) = 2 b(ℓ), L = {l}"), "doubling", r.doubling_rel, 1e-7);
        let sf = solve_symmetric_with(&lv, l, &opts)?;
        let mut dd: f64 = 0.0;
        for f in [0.25, 0.5, 0.75, 1.0] {
            dd = dd.max(doubling_residual(&sf, f * l, &opts)?);
        }
        s.below(format!("exp(t u_t) = (a/2, b/2, c̄), L = {l}"), "doubling", dd, 1e-5);
        b_half.push((l, sf.state(0.5 * l).b));
    }
    let b16 = b_half[2].1;
    s.inside("b(ℓ) at L = 16 in (1.8, 2.0)", "endpoint bound", b16, 1.8, 2.0);
    let b24 = solve_symmetric_with(&level_from_period(24.0)?, 12.0, &opts)?.state(12.0).b;
    s.below("|b(ℓ) - 2| at L = 24 below that at L = 16", "endpoint asymptotics", (b24 - 2.0).abs(), (b16 - 2.0).abs());
    let rows = symflow::endpoint_asymptotics(&[8.0, 12.0, 16.0, 20.0])?;
    s.flag("endpoint ratios trend to their limits", "endpoint asymptotics", symflow::trends_toward_limits(&rows));
    Ok(())
}

fn isochron_suite(s: &mut Suite, cfg: &RunConfig) -> Result<()> {
    let opts = cfg.ode();
    let l = 16.0;
    let lv = level_from_period(l)?;
    let vf = solve_variational_until(&lv, l, &opts)?;
    let h = 1e-4;
    let plus = solve_symmetric_with(&level_from_period(l + h)?, l, &opts)?;
    let minus = solve_symmetric_with(&level_from_period(l - h)?, l, &opts)?;
    let mut fd_err: f64 = 0.0;
    for t in [0.25 * l, 0.5 * l, l] {
        let (p, m, v) = (plus.state(t), minus.state(t), vf.state(t));
        let fd = [p.x - m.x, p.y - m.y, p.z - m.z, p.a - m.a, p.b - m.b].map(|d| d / (2.0 * h));
        let an = [v.dx, v.dy, v.dz, v.da, v.db];
        let scale = an.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let diff = fd.iter().zip(&an).fold(0.0f64, |a, (f, g)| a.max((f - g).abs()));
        fd_err = fd_err.max(diff / scale);
    }
    s.below("L-derivatives vs differences, L = 16", "variational system", fd_err, 1e-3);
    let grid = vf.grid(0.0, l, 4000);
    let m3 = grid.iter().map(|s| s.matei3().abs()).fold(0.0, f64::max);
    s.below("x ȧ/2 + y ḃ/2 = 0 on [0, L]", "slope identity", m3, 1e-7);
    let nice = vf
        .grid(0.5 * l, l, 2000)
        .iter()
        .filter_map(|s| s.nice_residual())
        .fold(0.0f64, |a, b| a.max(b.abs()));
    s.below("closed form of B on [L/2, L]", "closed form of B", nice, 1e-6);
    let c0 = grid[0].big_x() + grid[0].big_y();
    let xy = grid.iter().map(|s| (s.big_x() + s.big_y() - c0).abs()).fold(0.0, f64::max);
    s.below("X + Y constant", "X' = -Z, Y' = Z", xy, 1e-7);

    let rep = aux_report(&level_from_period(20.0)?)?;
    s.below("(X,Y,Z,B)(L) near (0, -1/2, -1, 1/2), L = 20", "aux asymptotics", rep.full.distance([0.0, -0.5, -1.0, 0.5]), 0.05);
    s.below("(X,Y,Z,B)(L/2) near (-1/2, 0, 1/2, -1/2), L = 20", "aux asymptotics", rep.half.distance([-0.5, 0.0, 0.5, -0.5]), 0.05);
    s.below("Y(0) = Y(L), L = 20", "Y symmetry", (rep.start.y - rep.full.y).abs(), 1e-6);
    s.below("X(L/2) = Y(0), L = 20", "Y symmetry", (rep.half.x - rep.start.y).abs(), 1e-6);

    let mut prev = f64::NEG_INFINITY;
    let mut increasing = true;
    for l in (12..=24).map(f64::from) {
        let vp = isochron::vanishing_point(&level_from_period(l)?)?;
        s.inside(format!("t_L in (L-1, L), L = {l}"), "vanishing point", vp.t_l, l - 1.0, l);
        s.flag(format!("single sign change of ḃ on [L/2, L], L = {l}"), "vanishing point", vp.changes_on_half.len() == 1 && vp.signs_ok);
        increasing &= vp.t_l > prev;
        prev = vp.t_l;
    }
    s.flag("t_L strictly increasing on 12..24", "monotonicity", increasing);
    for row in monotonicity_scan(&[16.0, 20.0, 24.0])? {
        s.inside(format!("dt_L/dL at L = {}", row.period), "monotonicity", row.dt_dl, 0.8, 1.2);
    }
    for c in isochron::variation_lemma_checks(&level_from_period(20.0)?)? {
        s.push(format!("{} at L = 20", c.name), "Y, Z, B variation", c.value, c.bound, c.pass);
    }
    for r in [6.0, 8.0, 10.0] {
        embedding_checks(s, r, cfg.grid)?;
    }
    Ok(())
}

fn embedding_checks(s: &mut Suite, r: f64, n: usize) -> Result<()> {
    let cusp = cusp_for_radius(r)?;
    s.inside(format!("cusp L* in (r, r+1), r = {r}"), "embedding", cusp.lstar, r, r + 1.0);
    s.below(format!("cusp a_r, r = {r}"), "cusp bounds", cusp.kappa.0, 2.5);
    s.below(format!("cusp b_r, r = {r}"), "cusp bounds", cusp.kappa.1, 1.5 * 0.5 * (2.0f64).exp() * (0.5 * r).exp());
    let curve = isochron_curve(r, r, 4.0 * r, n)?;
    let step = 3.0 * r / n as f64;
    let bad = curve
        .windows(2)
        .filter(|w| (w[0].period - cusp.lstar).abs() > step && (w[1].period - cusp.lstar).abs() > step)
        .filter(|w| {
            let (da, db) = (w[1].point.0 - w[0].point.0, w[1].point.1 - w[0].point.1);
            !(db / da < 0.0)
        })
        .count();
    s.below(format!("non-negative slopes of Υ_r off the cusp, r = {r}"), "embedding", bad as f64, 0.0);
    let tail: Vec<_> = curve.iter().filter(|p| p.period > 2.0 * r).collect();
    let monotone = |f: &dyn Fn(&isochron::UpsilonPoint) -> f64| {
        let d: Vec<f64> = tail.windows(2).map(|w| f(w[1]) - f(w[0])).collect();
        d.iter().all(|&x| x > 0.0) || d.iter().all(|&x| x < 0.0)
    };
    s.flag(format!("tail Υ_r(2r, 4r] monotone, r = {r}"), "tail", monotone(&|p| p.point.0) && monotone(&|p| p.point.1));
    Ok(())
}

fn spheres_suite(s: &mut Suite, cfg: &RunConfig) -> Result<()> {
    let slack = cfg.check_slack;
    for r in [8.0, 10.0] {
        let est = area::sphere_area_unchecked(r, cfg.mesh / 2)?;
        let (lo, hi) = area::area_bounds(r);
        s.above(format!("A_r above 4π(cosh r - 1), r = {r}"), "lower area bound", est.fine, lo);
        s.below(format!("A_r below 20π e^r, r = {r}"), "area bounds", est.fine, hi);
        s.below(format!("Richardson change of A_r, r = {r}"), "mesh convergence", est.rel_change, area::RICHARDSON_TOL);
    }
    s.below("dE frames vs differences, r = 8", "frame cross-check", area::frame_cross_check(8.0, 20)?, 1e-4);

    let mut z4 = Vec::new();
    for r in [6.0, 8.0, 10.0] {
        let mesh = spheres::mesh_sphere(r, cfg.mesh)?;
        let er = f64::exp(r);
        for plane in Plane::ALL {
            let ras = raster::project_mesh(&mesh, plane, cfg.raster)?;
            let name = plane.name();
            match plane {
                Plane::X | Plane::Y => {
                    if r == 8.0 {
                        let exact = 2.0 * PI * (r.cosh() - 1.0);
                        s.below(
                            format!("A_{name} vs 2π(cosh r - 1), r = {r}"),
                            "hyperbolic projection area",
                            (ras.covered_area() - exact).abs() / exact,
                            0.02,
                        );
                        let rho = raster::max_hyperbolic_radius(&mesh, plane).unwrap_or(f64::INFINITY);
                        s.below(format!("η_{name} samples inside H_r, r = {r}"), "hyperbolic disk", rho, r * (1.0 + 1e-9));
                    }
                    s.below(format!("N_{name}, r = {r}"), "hyperbolic multiplicity", ras.multiplicity as f64, 2.0);
                }
                Plane::Z => {
                    if r >= 8.0 {
                        s.push(format!("N_Z, r = {r}"), "Z multiplicity", ras.multiplicity as f64, 4.0, ras.multiplicity == 4);
                    }
                    if r == 10.0 {
                        s.below(format!("A_Z/e^r, r = {r}"), "Z projection area", ras.covered_area() / er, 16.0 * (1.0 + slack));
                        s.above(format!("A_Z/e^r lower check, r = {r}"), "Z projection area", ras.covered_area() / er, 0.4);
                    }
                    let a34: f64 = ras.areas_by_count.iter().filter(|(k, _)| **k == 3 || **k == 4).map(|(_, a)| a).sum();
                    z4.push((r, a34 / er));
                }
            }
        }
        if r >= 8.0 {
            let k = omega::OmegaConstants::relaxed(slack);
            let rep = omega::omega_containment(&mesh, k);
            s.below(format!("η_Z samples outside Ω_r, r = {r}"), "Ω_r containment", rep.outside as f64, 0.0);
            s.below(format!("max(a, b)/e^r, r = {r}"), "Ω_r containment", rep.max_extent, k.m);
            let (z, _) = omega::boundary_strip(&mesh);
            s.below(format!("E(∂S_r′) in Π_Z, r = {r}"), "perfect endpoints", z, 1e-8);
        }
    }
    s.below("(A_Z3 + A_Z4)/e^r at r = 8 below r = 6", "Z multiplicity areas", z4[1].1, z4[0].1);
    s.below(
        "Ω_r area/e^r, r = 10",
        "Ω_r area",
        omega::omega_region_area(10.0, omega::OmegaConstants::relaxed(0.0)) / f64::exp(10.0),
        4.0 * (1.0 + slack),
    );
    s.inside("b of distinguished images, L = 10", "distinguished vectors", omega::distinguished_strip(10.0, cfg.grid)?, 0.0, 2.0 * (1.0 + slack));

    let opt = bound::optimize_theta(&bound::BoundInputs::limiting())?;
    s.inside("θ*", "bound assembly", opt.theta, 0.55, 0.65);
    s.below("limiting bound at θ*", "bound assembly", opt.bound, 20.0 * PI);
    s.below(
        "limiting bound at θ = 0.6 vs 60.944",
        "bound assembly",
        (bound::combine_bound(&bound::BoundInputs::limiting(), 0.6, 0.0)? - 60.944).abs(),
        0.02,
    );
    for r in [5.0, 10.0] {
        let v = volume::volume_region_bound(r)?;
        s.below(format!("region volume / 72r²e^r, r = {r}"), "volume bound", v.region / v.closed_form, 1.0);
    }
    let cl = cutlocus::cutlocus_checks(6.0, 20)?;
    s.below("partner residual, r = 6", "partners", cl.partner_residual, 1e-6);
    s.below("perfect endpoints in Π_Z, r = 6", "perfect endpoints", cl.max_abs_z, 1e-7);
    s.below("holonomy spread of ab, r = 6", "holonomy", cl.holonomy_spread, 1e-6);
    s.below("σ(E(V)) σ(V) - 1, r = 6", "reciprocity", cl.reciprocity, 1e-6);
    let yy = yinyang::yinyang_curve(8.0, 50)?;
    s.below("yin-yang images vs Υ_r, r = 8", "yin-yang", yy.max_upsilon_gap(), 1e-5);
    s.below("yin-yang flowlines end in Π_Z, r = 8", "yin-yang", yy.max_end_z(), 1e-8);
    Ok(())
}
