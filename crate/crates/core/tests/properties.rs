use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use proptest::prelude::*;
use solgeo::elliptic::{agm, ellip_e, ellip_k};
use solgeo::flow::{
    exp_map, integrate_flow, level_from_period, period_from_alpha, Direction, LoopLevel, UnitVec, MIN_PERIOD,
};
use solgeo::isochron::solve_variational;
use solgeo::solcore::{dl, inverse, metric_norm, mul, SolPoint, TangentVec};
use solgeo::symflow::solve_symmetric;

fn point() -> impl Strategy<Value = SolPoint> {
    (-10.0..10.0f64, -10.0..10.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| SolPoint::new(x, y, z))
}

fn close(a: SolPoint, b: SolPoint, tol: f64) -> bool {
    let s = 1.0 + b.x.abs().max(b.y.abs()).max(b.z.abs());
    (a.x - b.x).abs() <= tol * s && (a.y - b.y).abs() <= tol * s && (a.z - b.z).abs() <= tol * s
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn group_inverse(p in point()) {
        let e = mul(p, inverse(p).unwrap()).unwrap();
        prop_assert!(close(e, SolPoint::IDENTITY, 1e-14), "{e:?}");
        // The other order cancels terms of size |x| e^{|z|}.
        let e = mul(inverse(p).unwrap(), p).unwrap();
        prop_assert!(close(e, SolPoint::IDENTITY, 1e-14 * p.z.abs().exp()), "{e:?}");
    }

    #[test]
    fn group_associative(p in point(), q in point(), r in point()) {
        let a = mul(mul(p, q).unwrap(), r).unwrap();
        let b = mul(p, mul(q, r).unwrap()).unwrap();
        prop_assert!(close(a, b, 1e-11), "{a:?} vs {b:?}");
    }

    #[test]
    fn left_translation_is_isometry(g in point(), p in point(), u in -3.0..3.0f64, v in -3.0..3.0f64, w in -3.0..3.0f64) {
        let t = TangentVec::new(u, v, w);
        let n0 = metric_norm(p, t);
        let n1 = metric_norm(mul(g, p).unwrap(), dl(g, t).unwrap());
        prop_assert!((n0 - n1).abs() <= 1e-10 * (1.0 + n0));
        prop_assert!(n0 >= 0.0);
        prop_assert_eq!(n0 == 0.0, u == 0.0 && v == 0.0 && w == 0.0);
    }

    #[test]
    fn agm_symmetric_and_bracketed(a in 0.01..10.0f64, b in 0.01..10.0f64) {
        let g = agm(a, b).unwrap();
        prop_assert!((g - agm(b, a).unwrap()).abs() <= 1e-14 * g);
        prop_assert!(g >= (a * b).sqrt() * (1.0 - 1e-15) && g <= 0.5 * (a + b) * (1.0 + 1e-15));
    }

    #[test]
    fn elliptic_monotone(m1 in 0.0..0.999f64, m2 in 0.0..0.999f64) {
        prop_assume!(m1 < m2);
        let (k1, k2) = (ellip_k(m1).unwrap(), ellip_k(m2).unwrap());
        let (e1, e2) = (ellip_e(m1).unwrap(), ellip_e(m2).unwrap());
        prop_assert!(k1 < k2 && k1 >= FRAC_PI_2 * (1.0 - 1e-15));
        prop_assert!(e1 > e2 && e1 <= FRAC_PI_2 * (1.0 + 1e-15));
    }

    #[test]
    fn level_invariants(alpha in 0.01..0.707f64) {
        let lv = LoopLevel::from_alpha(alpha).unwrap();
        prop_assert!((lv.period - period_from_alpha(alpha).unwrap()).abs() <= 1e-10);
        prop_assert!((lv.y0 * (1.0 - lv.y0 * lv.y0).sqrt() - alpha * alpha).abs() <= 1e-12);
        prop_assert!(lv.period >= MIN_PERIOD * (1.0 - 1e-12));
        let back = level_from_period(lv.period).unwrap();
        prop_assert!((back.alpha - alpha).abs() <= 1e-9);
    }

    #[test]
    fn flow_conserves_norm_and_hamiltonian(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64, t in 0.5..20.0f64) {
        prop_assume!(x * x + y * y + z * z > 1e-2);
        let u = UnitVec::normalize([x, y, z]).unwrap();
        let v0 = u.to_array();
        for dir in [Direction::Forward, Direction::Backward] {
            let tr = integrate_flow(u, t, dir).unwrap();
            let v = tr.eval(t);
            prop_assert!(((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() - 1.0).abs() <= 1e-9);
            prop_assert!((v[0] * v[1] - v0[0] * v0[1]).abs() <= 1e-9);
        }
    }

    #[test]
    fn small_vectors_have_finite_images(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64, r in 0.1..6.0f64) {
        prop_assume!(x * x + y * y + z * z > 1e-2);
        let u = UnitVec::normalize([x, y, z]).unwrap().to_array();
        let p = exp_map(u.map(|c| r * c)).unwrap();
        prop_assert!(p.x.is_finite() && p.y.is_finite() && p.z.abs() <= r);
    }

    #[test]
    fn symmetric_identity_and_positivity(l in 6.0..24.0f64) {
        let sf = solve_symmetric(&level_from_period(l).unwrap(), l).unwrap();
        for i in 0..=200 {
            let s = sf.state(l * i as f64 / 200.0);
            prop_assert!((s.a * s.x - s.b * s.y - 2.0 * s.z).abs() <= 1e-8);
            prop_assert!(s.a >= -1e-12 && s.b >= -1e-12);
            if i > 0 {
                prop_assert!(s.a > 0.0 && s.b > 0.0);
            }
        }
    }

    #[test]
    fn a_increasing_on_first_half(l in 6.0..24.0f64) {
        let sf = solve_symmetric(&level_from_period(l).unwrap(), l).unwrap();
        let mut prev = 0.0;
        for i in 1..=200 {
            let a = sf.state(0.5 * l * i as f64 / 200.0).a;
            prop_assert!(a > prev);
            prev = a;
        }
    }

    #[test]
    fn crossing_at_most_once(l in 5.0..20.0f64, gap in 0.2..10.0f64) {
        let m = l + gap;
        let zl = solve_symmetric(&level_from_period(l).unwrap(), l).unwrap();
        let zm = solve_symmetric(&level_from_period(m).unwrap(), l).unwrap();
        let n = 4000;
        let mut changes = 0;
        let mut last = 0.0f64;
        for i in 1..n {
            let t = l * i as f64 / n as f64;
            let d = zm.state(t).z - zl.state(t).z;
            if d.abs() < 1e-10 {
                continue;
            }
            if last != 0.0 && d.signum() != last.signum() {
                changes += 1;
            }
            last = d;
        }
        prop_assert!(changes <= 1, "{changes} crossings for L={l}, M={m}");
    }

    #[test]
    fn z_solves_second_order_equation(l in 6.0..20.0f64) {
        let sf = solve_symmetric(&level_from_period(l).unwrap(), l).unwrap();
        let h = 1e-3;
        for i in 1..20 {
            let t = l * i as f64 / 20.0;
            let zpp = (sf.state(t + h).z - 2.0 * sf.state(t).z + sf.state(t - h).z) / (h * h);
            let z = sf.state(t).z;
            // z'' = -2z (x² + y²) on the unit sphere.
            prop_assert!((zpp - (-2.0 * z + 2.0 * z.powi(3))).abs() <= 1e-4, "t={t}");
        }
    }

    #[test]
    fn x_plus_y_constant(l in 10.0..22.0f64) {
        let vf = solve_variational(&level_from_period(l).unwrap()).unwrap();
        let g = vf.grid(0.0, l, 400);
        let c = g[0].big_x() + g[0].big_y();
        for s in &g {
            prop_assert!((s.big_x() + s.big_y() - c).abs() <= 1e-7);
            prop_assert!(s.matei3().abs() <= 1e-7);
        }
    }
}

#[test]
fn minimal_period_value() {
    assert!((MIN_PERIOD - PI * SQRT_2).abs() < 1e-15);
}
