//! The time t_L where ∂b/∂L vanishes, and how it moves with L.

use solgeo::flow::level_from_period;
use solgeo::isochron::{aux_report, monotonicity_scan, variation_lemma_checks};

pub fn run() -> solgeo::Result<()> {
    for row in monotonicity_scan(&[12.0, 16.0, 20.0, 24.0])? {
        println!("L = {:>4}: t_L = {:.8}, s_L = {:.8}, dt_L/dL = {:.6}", row.period, row.t_l, row.s_l, row.dt_dl);
    }
    let lv = level_from_period(20.0)?;
    let aux = aux_report(&lv)?;
    println!("(X, Y, Z) at L/2: ({:.5}, {:.5}, {:.5})", aux.half.x, aux.half.y, aux.half.z);
    for c in variation_lemma_checks(&lv)? {
        println!("{:<40} value {:.3e}, bound {:.3e} {}", c.name, c.value, c.bound, if c.pass { "ok" } else { "FAIL" });
    }
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
