//! Area of the metric sphere S_r from the exponential-map mesh.

use solgeo::spheres::area::{area_bounds, sphere_area};

pub fn run() -> solgeo::Result<()> {
    for r in [5.0, 6.0, 8.0] {
        let a = sphere_area(r, 64)?;
        let (lo, hi) = area_bounds(r);
        println!(
            "r = {r}: area = {:.2} (coarse {:.2}, Richardson change {:.1e}); bounds ({lo:.1}, {hi:.1}); area/e^r = {:.4}",
            a.value(),
            a.coarse,
            a.rel_change,
            a.value() / r.exp()
        );
    }
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
