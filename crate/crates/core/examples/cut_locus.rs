//! Partners, the yin-yang curve and the cut locus in the plane z = 0.

use solgeo::flow::slice_shot;
use solgeo::spheres::cutlocus::cutlocus_checks;
use solgeo::spheres::yinyang::yinyang_curve;

pub fn run() -> solgeo::Result<()> {
    let (u, p) = slice_shot(5.0)?;
    println!("slice shot at r = 5: direction {:?} lands at {p:?}", u.to_array());
    let c = cutlocus_checks(8.0, 24)?;
    println!(
        "r = 8: partner residual {:.1e}, max |z| {:.1e}, holonomy spread {:.1e}, reciprocity {:.1e}",
        c.partner_residual, c.max_abs_z, c.holonomy_spread, c.reciprocity
    );
    let yy = yinyang_curve(8.0, 64)?;
    println!(
        "yin-yang at r = 8: {} samples, gap to Υ_r {:.1e}, end |z| {:.1e}, mirror crossings {}",
        yy.samples.len(),
        yy.max_upsilon_gap(),
        yy.max_end_z(),
        yy.mirror_crossings
    );
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
