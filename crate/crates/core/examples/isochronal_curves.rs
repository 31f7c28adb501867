//! Isochronal curves Υ_r and the cusp of each.

use solgeo::isochron::{cusp_for_radius, isochron_curve};

pub fn run() -> solgeo::Result<()> {
    for r in [6.0, 8.0, 10.0] {
        let c = cusp_for_radius(r)?;
        println!("r = {r}: cusp at L* = {:.6}, κ_r = ({:.4}, {:.4})", c.lstar, c.kappa.0, c.kappa.1);
    }
    let curve = isochron_curve(8.0, 8.0, 32.0, 12)?;
    println!("{:>8} {:>14} {:>14} {:>12}", "L", "a", "b", "slope");
    for p in &curve {
        println!("{:>8.3} {:>14.6} {:>14.6} {:>12.4e}", p.period, p.point.0, p.point.1, p.slope);
    }
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
