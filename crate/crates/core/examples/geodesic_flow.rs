//! The structure field on the unit sphere: loop periods and conservation.

use solgeo::flow::{classify, integrate_flow, level_from_period, period_from_alpha, Direction, UnitVec};

pub fn run() -> solgeo::Result<()> {
    for alpha in [0.7, 0.5, 0.2, 0.05, 0.01] {
        println!("α = {alpha:<6} period L = {:.10}", period_from_alpha(alpha)?);
    }
    let lv = level_from_period(16.0)?;
    println!("L = 16: α = {:.12}, seed = {:?}", lv.alpha, lv.seed());
    let s = lv.seed();
    let tr = integrate_flow(UnitVec::new(s[0], s[1], s[2])?, lv.period, Direction::Forward)?;
    let mut drift: f64 = 0.0;
    for i in 0..=1000 {
        let v = tr.eval(lv.period * i as f64 / 1000.0);
        drift = drift.max((v[0] * v[1] - lv.alpha * lv.alpha).abs());
    }
    let end = tr.eval(lv.period);
    println!("max |xy - α²| over one loop: {drift:.2e}; returns to {end:?}");
    println!("class of 8·seed: {:?}", classify(s.map(|c| 8.0 * c)));
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
