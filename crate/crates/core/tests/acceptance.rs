//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2};
use std::time::Instant;

use solgeo::elliptic::{agm, ellip_e, ellip_e_deriv, ellip_k, ellip_k_deriv, k_log_asymptote};
use solgeo::flow::{
    exp_map, exp_path, integrate_flow, level_from_period, period_from_alpha, slice_shot, Direction, UnitVec,
};
use solgeo::isochron::{
    aux_report, cusp_for_radius, isochron_curve, monotonicity_scan, solve_variational, vanishing_point,
    variation_lemma_checks,
};
use solgeo::solcore::{metric_norm, Plane, SolPoint};
use solgeo::spheres::area::{area_bounds, sphere_area};
use solgeo::spheres::bound::{combine_bound, optimize_theta, BoundInputs};
use solgeo::spheres::cutlocus::cutlocus_checks;
use solgeo::spheres::omega::{omega_containment, OmegaConstants};
use solgeo::spheres::raster::{max_hyperbolic_radius, project_mesh};
use solgeo::spheres::volume::volume_region_bound;
use solgeo::spheres::mesh_sphere;
use solgeo::symflow::{doubling_residual, identity_residuals, solve_symmetric};
use solgeo::Result;

type Sub = (String, bool);

fn sub(name: impl Into<String>, ok: bool) -> Sub {
    (name.into(), ok)
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Trapezoid rule on a periodic smooth integrand over `[0, π/2]`.
fn trapezoid_quarter(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = FRAC_PI_2 / n as f64;
    let inner: f64 = (1..n).map(|i| f(i as f64 * h)).sum();
    h * (0.5 * f(0.0) + inner + 0.5 * f(FRAC_PI_2))
}

/// Simpson rule for the oracle integrals along flowlines.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn c1_elliptic() -> Result<Vec<Sub>> {
    let mut out = Vec::new();
    let (mut dk, mut de, mut dagm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..200 {
        let m = 0.99 * i as f64 / 199.0;
        let qk = trapezoid_quarter(|t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 4000);
        let qe = trapezoid_quarter(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 4000);
        dk = dk.max((ellip_k(m)? - qk).abs());
        de = de.max((ellip_e(m)? - qe).abs());
        dagm = dagm.max((FRAC_PI_2 / agm((1.0 - m).sqrt(), 1.0)? - qk).abs());
    }
    out.push(sub(format!("K vs quadrature {dk:.1e} <= 1e-10"), dk <= 1e-10));
    out.push(sub(format!("E vs quadrature {de:.1e} <= 1e-10"), de <= 1e-10));
    out.push(sub(format!("AGM identity {dagm:.1e} <= 1e-12"), dagm <= 1e-12));
    let oracle = [(agm(1.0, SQRT_2)?, 1.198_140_234_735_592_2), (ellip_k(0.5)?, 1.854_074_677_301_372), (ellip_e(0.5)?, 1.350_643_881_047_675_5)];
    out.push(sub("AGM(1,√2), K(0.5), E(0.5) frozen values", oracle.iter().all(|(a, b)| (a - b).abs() < 1e-13)));
    let mut worst: f64 = 0.0;
    for m in [0.05f64, 0.2, 0.4, 0.6, 0.8, 0.95] {
        let h = 1e-5 * m.min(1.0 - m);
        let fk = (ellip_k(m + h)? - ellip_k(m - h)?) / (2.0 * h);
        let fe = (ellip_e(m + h)? - ellip_e(m - h)?) / (2.0 * h);
        worst = worst.max(((fk - ellip_k_deriv(m)?) / fk).abs()).max(((fe - ellip_e_deriv(m)?) / fe).abs());
    }
    out.push(sub(format!("derivatives vs differences rel {worst:.1e} <= 1e-6"), worst <= 1e-6));
    for e in [1e-3, 1e-6] {
        let (lhs, rhs) = k_log_asymptote(1.0 - e)?;
        out.push(sub(format!("log bound at 1-{e:e}: {lhs:.2e} <= {rhs:.2e}"), lhs <= rhs));
    }
    Ok(out)
}

fn c2_period() -> Result<Vec<Sub>> {
    let p = period_from_alpha(FRAC_1_SQRT_2)?;
    let asy = (period_from_alpha(0.01)? + 4.0 * (0.005f64).ln()).abs();
    let mut out = vec![
        sub(format!("L(1/√2) - π√2 = {:.1e}", p - PI * SQRT_2), (p - PI * SQRT_2).abs() <= 1e-10),
        sub(format!("|L_α + 4 log(α/2)| at 0.01 = {asy:.1e} <= 0.02"), asy <= 0.02),
    ];
    for l in [8.0, 16.0, 24.0] {
        let d = (period_from_alpha(level_from_period(l)?.alpha)? - l).abs();
        out.push(sub(format!("round trip L={l}: {d:.1e}"), d <= 1e-9));
    }
    Ok(out)
}

fn c3_flow() -> Result<Vec<Sub>> {
    let lv = level_from_period(16.0)?;
    let s = lv.seed();
    let tr = integrate_flow(UnitVec::new(s[0], s[1], s[2])?, 2.0 * lv.period, Direction::Forward)?;
    let (mut dn, mut dh): (f64, f64) = (0.0, 0.0);
    for i in 0..=8000 {
        let w = tr.eval(2.0 * lv.period * i as f64 / 8000.0);
        dn = dn.max((norm(w) - 1.0).abs());
        dh = dh.max((w[0] * w[1] - lv.alpha * lv.alpha).abs());
    }
    let e = tr.eval(lv.period);
    let closure = norm([e[0] - s[0], e[1] - s[1], e[2] - s[2]]);
    Ok(vec![
        sub(format!("max | |v|-1 | = {dn:.1e} <= 1e-9"), dn <= 1e-9),
        sub(format!("max |xy - α²| = {dh:.1e} <= 1e-9"), dh <= 1e-9),
        sub(format!("closure {closure:.1e} <= 1e-7"), closure <= 1e-7),
    ])
}

fn c4_exp() -> Result<Vec<Sub>> {
    let (mut speed, mut zadd): (f64, f64) = (0.0, 0.0);
    for v in [[2.0, 1.5, 0.7], [0.3, -2.0, 1.1], [-4.0, 0.5, -2.0], [1.0, 1.0, 0.0]] {
        let path = exp_path(v)?;
        let r = norm(v);
        for i in 0..=100 {
            let (p, vel) = path.velocity(r * i as f64 / 100.0);
            speed = speed.max((metric_norm(p, vel) - 1.0).abs());
        }
        let fl = integrate_flow(UnitVec::normalize(v)?, r, Direction::Forward)?;
        let zint = simpson(|t| fl.eval(t)[2], 0.0, r, 20000);
        zadd = zadd.max((path.end().z - zint).abs());
    }
    let cl = cutlocus_checks(6.0, 20)?;
    let (_, p) = slice_shot(5.0)?;
    let reach = 2.0 * (2.5f64).sinh();
    Ok(vec![
        sub(format!("unit speed {speed:.1e} <= 1e-9"), speed <= 1e-9),
        sub(format!("z additivity {zadd:.1e} <= 1e-8"), zadd <= 1e-8),
        sub(format!("partners at r=6 {:.1e} <= 1e-6", cl.partner_residual), cl.partner_residual <= 1e-6),
        sub(format!("slice shot x = {:.6} vs {reach:.6}", p.x), (p.x - reach).abs() <= 1e-4),
    ])
}

fn c5_identities() -> Result<Vec<Sub>> {
    let mut out = Vec::new();
    let (mut m2, mut tr, mut rc, mut dbl, mut dd): (f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for l in [8.0, 12.0, 16.0, 20.0] {
        let lv = level_from_period(l)?;
        let r = identity_residuals(&lv)?;
        m2 = m2.max(r.matei2);
        tr = tr.max(r.transform_x).max(r.transform_y);
        rc = rc.max(r.reciprocity);
        dbl = dbl.max(r.doubling_rel);
        let sf = solve_symmetric(&lv, l)?;
        for f in [0.25, 0.5, 0.75, 1.0] {
            dd = dd.max(doubling_residual(&sf, f * l, &Default::default())?);
        }
    }
    out.push(sub(format!("ax - by = 2z {m2:.1e} <= 1e-8"), m2 <= 1e-8));
    out.push(sub(format!("transform integrals {tr:.1e} <= 1e-7"), tr <= 1e-7));
    out.push(sub(format!("reciprocity {rc:.1e} <= 1e-8"), rc <= 1e-8));
    out.push(sub(format!("a(L) = 2b(ℓ) rel {dbl:.1e} <= 1e-7"), dbl <= 1e-7));
    out.push(sub(format!("doubling vs exp map {dd:.1e} <= 1e-5"), dd <= 1e-5));
    let b = |l: f64| -> Result<f64> { Ok(solve_symmetric(&level_from_period(l)?, 0.5 * l)?.state(0.5 * l).b) };
    let (b16, b24) = (b(16.0)?, b(24.0)?);
    out.push(sub(format!("b(ℓ) at L=16 = {b16:.7} in (1.8, 2.0)"), b16 > 1.8 && b16 < 2.0));
    out.push(sub(format!("b(ℓ) at L=24 = {b24:.9} closer to 2"), (b24 - 2.0).abs() < (b16 - 2.0).abs()));
    Ok(out)
}

fn c6_variational() -> Result<Vec<Sub>> {
    let l = 16.0;
    let vf = solve_variational(&level_from_period(l)?)?;
    let h = 1e-4;
    let plus = solve_symmetric(&level_from_period(l + h)?, l)?;
    let minus = solve_symmetric(&level_from_period(l - h)?, l)?;
    let mut fd_err: f64 = 0.0;
    for t in [0.25 * l, 0.5 * l, l] {
        let (p, m, v) = (plus.state(t), minus.state(t), vf.state(t));
        let fd = [p.x - m.x, p.y - m.y, p.z - m.z, p.a - m.a, p.b - m.b].map(|d| d / (2.0 * h));
        let an = [v.dx, v.dy, v.dz, v.da, v.db];
        let scale = an.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        fd_err = fd_err.max(fd.iter().zip(&an).fold(0.0f64, |a, (f, g)| a.max((f - g).abs())) / scale);
    }
    let grid = vf.grid(0.0, l, 8000);
    let m3 = grid.iter().map(|s| s.matei3().abs()).fold(0.0, f64::max);
    let nice = vf.grid(0.5 * l, l, 4000).iter().filter_map(|s| s.nice_residual()).fold(0.0f64, |a, b| a.max(b.abs()));
    let c0 = grid[0].big_x() + grid[0].big_y();
    let xy = grid.iter().map(|s| (s.big_x() + s.big_y() - c0).abs()).fold(0.0, f64::max);
    Ok(vec![
        sub(format!("vs differences rel {fd_err:.1e} <= 1e-3"), fd_err <= 1e-3),
        sub(format!("x ȧ + y ḃ = 0: {m3:.1e} <= 1e-7"), m3 <= 1e-7),
        sub(format!("closed form of B {nice:.1e} <= 1e-6"), nice <= 1e-6),
        sub(format!("X + Y constant {xy:.1e} <= 1e-7"), xy <= 1e-7),
    ])
}

fn c7_asymptotics() -> Result<Vec<Sub>> {
    let r = aux_report(&level_from_period(20.0)?)?;
    let full = r.full.distance([0.0, -0.5, -1.0, 0.5]);
    let half = r.half.distance([-0.5, 0.0, 0.5, -0.5]);
    let ye = (r.start.y - r.full.y).abs();
    let ye2 = (r.half.x - r.start.y).abs();
    Ok(vec![
        sub(format!("(X,Y,Z,B)(L) gap {full:.1e} <= 0.05"), full <= 0.05),
        sub(format!("(X,Y,Z,B)(L/2) gap {half:.1e} <= 0.05"), half <= 0.05),
        sub(format!("Y(0) = Y(L): {ye:.1e}"), ye <= 1e-6),
        sub(format!("X(L/2) = Y(0): {ye2:.1e}"), ye2 <= 1e-6),
    ])
}

fn c8_vanishing() -> Result<Vec<Sub>> {
    let mut out = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    let (mut inside, mut unique, mut increasing) = (true, true, true);
    for l in (12..=24).map(f64::from) {
        let vp = vanishing_point(&level_from_period(l)?)?;
        inside &= vp.t_l > l - 1.0 && vp.t_l < l;
        unique &= vp.changes_on_half.len() == 1 && vp.signs_ok;
        increasing &= vp.t_l > prev;
        prev = vp.t_l;
    }
    out.push(sub("t_L in (L-1, L) for L = 12..24", inside));
    out.push(sub("single sign change of ḃ on [L/2, L]", unique));
    out.push(sub("t_L strictly increasing", increasing));
    let rows = monotonicity_scan(&[16.0, 18.0, 20.0, 22.0, 24.0])?;
    let ok = rows.iter().all(|r| r.dt_dl > 0.8 && r.dt_dl < 1.2);
    let span = rows.iter().map(|r| r.dt_dl).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    out.push(sub(format!("dt_L/dL in [{:.4}, {:.4}] ⊂ (0.8, 1.2)", span.0, span.1), ok));
    let checks = variation_lemma_checks(&level_from_period(20.0)?)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    out.push(sub(format!("Y/Z/B statements at L=20 ({} checks, failed {failed:?})", checks.len()), failed.is_empty()));
    Ok(out)
}

fn c9_embedding() -> Result<Vec<Sub>> {
    let mut out = Vec::new();
    for r in [6.0, 8.0, 10.0] {
        let c = match cusp_for_radius(r) {
            Ok(c) => c,
            Err(e) => {
                out.push(sub(format!("r={r}: {e}"), false));
                continue;
            }
        };
        out.push(sub(format!("r={r}: one cusp at L* = {:.4} in (r, r+1)", c.lstar), c.lstar > r && c.lstar < r + 1.0));
        let bb = 1.5 * 0.5 * (2.0f64).exp() * (0.5 * r).exp();
        out.push(sub(format!("r={r}: a_r = {:.3} < 2.5, b_r = {:.2} < {bb:.1}", c.kappa.0, c.kappa.1), c.kappa.0 < 2.5 && c.kappa.1 < bb));
        let n = 300;
        let curve = isochron_curve(r, r, 4.0 * r, n)?;
        let step = 3.0 * r / n as f64;
        let bad = curve
            .windows(2)
            .filter(|w| (w[0].period - c.lstar).abs() > step && (w[1].period - c.lstar).abs() > step)
            .filter(|w| !((w[1].point.1 - w[0].point.1) / (w[1].point.0 - w[0].point.0) < 0.0))
            .count();
        out.push(sub(format!("r={r}: slope negative off the cusp ({bad} bad pairs)"), bad == 0));
        let tail: Vec<_> = curve.iter().filter(|p| p.period > 2.0 * r).collect();
        let mono = |f: fn(&solgeo::isochron::UpsilonPoint) -> f64| {
            let d: Vec<f64> = tail.windows(2).map(|w| f(w[1]) - f(w[0])).collect();
            d.iter().all(|&x| x > 0.0) || d.iter().all(|&x| x < 0.0)
        };
        out.push(sub(format!("r={r}: tail (2r, 4r] monotone"), mono(|p| p.point.0) && mono(|p| p.point.1)));
    }
    Ok(out)
}

fn c10_projections() -> Result<Vec<Sub>> {
    let mut out = Vec::new();
    let mut z_small = Vec::new();
    for r in [6.0, 8.0, 10.0] {
        let mesh = mesh_sphere(r, 512)?;
        let er = f64::exp(r);
        let rz = project_mesh(&mesh, Plane::Z, 1024)?;
        z_small.push(rz.areas_by_count.iter().filter(|(k, _)| **k == 3 || **k == 4).map(|(_, a)| a).sum::<f64>() / er);
        if r == 8.0 {
            let exact = 2.0 * PI * (r.cosh() - 1.0);
            for plane in [Plane::X, Plane::Y] {
                let ras = project_mesh(&mesh, plane, 1024)?;
                let rel = (ras.covered_area() - exact) / exact;
                out.push(sub(format!("A_{} rel gap {rel:.2e} within 2%", plane.name()), rel.abs() <= 0.02));
                out.push(sub(format!("N_{} = {}", plane.name(), ras.multiplicity), ras.multiplicity == 2));
                let rho = max_hyperbolic_radius(&mesh, plane).unwrap_or(f64::INFINITY);
                out.push(sub(format!("η_{} samples within H_r (max ρ - r = {:.1e})", plane.name(), rho - r), rho <= r * (1.0 + 1e-9)));
            }
            out.push(sub(format!("N_Z = {}", rz.multiplicity), rz.multiplicity == 4));
            let om = omega_containment(&mesh, OmegaConstants::relaxed(0.1));
            out.push(sub(format!("Ω_r containment ({} of {} outside)", om.outside, om.samples), om.outside == 0));
        }
        if r == 10.0 {
            let q = rz.covered_area() / er;
            out.push(sub(format!("A_Z/e^r at r=10 = {q:.3} < 17.6"), q < 17.6));
        }
    }
    out.push(sub(
        format!("(A_Z3+A_Z4)/e^r: r=6 {:.4}, r=8 {:.4} decreasing", z_small[0], z_small[1]),
        z_small[1] < z_small[0],
    ));
    Ok(out)
}

fn c11_bound() -> Result<Vec<Sub>> {
    let mut out = Vec::new();
    let opt = optimize_theta(&BoundInputs::limiting())?;
    out.push(sub(format!("θ* = {:.6} in (0.55, 0.65)", opt.theta), opt.theta > 0.55 && opt.theta < 0.65));
    let b06 = combine_bound(&BoundInputs::limiting(), 0.6, 0.0)?;
    out.push(sub(format!("bound(0.6) = {b06:.4} = 60.944 ± 0.02"), (b06 - 60.944).abs() <= 0.02));
    out.push(sub(format!("bound* = {:.4} in 60.944 ± 0.02 and < 20π", opt.bound), (opt.bound - 60.944).abs() <= 0.02 && opt.bound < 20.0 * PI));
    for r in [8.0, 10.0] {
        let (lo, hi) = area_bounds(r);
        match sphere_area(r, 128) {
            Ok(a) => out.push(sub(
                format!("r={r}: {lo:.0} < A_r = {:.0} < {hi:.0}, Richardson {:.2e}", a.value(), a.rel_change),
                lo < a.value() && a.value() < hi,
            )),
            Err(e) => out.push(sub(format!("r={r}: {e}"), false)),
        }
    }
    for r in [5.0, 10.0] {
        let v = volume_region_bound(r)?;
        out.push(sub(format!("r={r}: region volume {:.4e} <= 72r²e^r = {:.4e}", v.region, v.closed_form), v.region <= v.closed_form));
    }
    Ok(out)
}

fn main() {
    // Sanity: the identity is fixed by the exponential map.
    assert_eq!(exp_map([0.0; 3]).map(|p| p == SolPoint::IDENTITY).ok(), Some(true));
    let criteria: [(&str, fn() -> Result<Vec<Sub>>); 11] = [
        ("elliptic oracle", c1_elliptic),
        ("period", c2_period),
        ("flow conservation", c3_flow),
        ("exponential map", c4_exp),
        ("symmetric identities", c5_identities),
        ("variational system", c6_variational),
        ("auxiliary asymptotics", c7_asymptotics),
        ("vanishing point and monotonicity", c8_vanishing),
        ("embedding", c9_embedding),
        ("projections", c10_projections),
        ("final bound", c11_bound),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let subs = f().unwrap_or_else(|e| vec![sub(format!("error: {e}"), false)]);
        let ok = subs.iter().all(|s| s.1);
        failed += (!ok) as usize;
        println!("criterion {:>2} {:<34} {}  ({:.1} s)", i + 1, name, if ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
        for (s, pass) in &subs {
            println!("      {} {s}", if *pass { "ok  " } else { "FAIL" });
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
