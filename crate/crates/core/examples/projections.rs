//! Coordinate projections of S_r: covered area and multiplicity per plane.

use solgeo::solcore::Plane;
use solgeo::spheres::mesh_sphere;
use solgeo::spheres::omega::{omega_containment, OmegaConstants};
use solgeo::spheres::raster::project_mesh;

pub fn run() -> solgeo::Result<()> {
    let r = 6.0;
    let mesh = mesh_sphere(r, 128)?;
    let er = f64::exp(r);
    println!("hyperbolic disk area / e^r = {:.4}", 2.0 * std::f64::consts::PI * (r.cosh() - 1.0) / er);
    for plane in Plane::ALL {
        let ras = project_mesh(&mesh, plane, 256)?;
        let by_k: Vec<String> = ras.areas_by_count.iter().map(|(k, a)| format!("{k}:{:.4}", a / er)).collect();
        println!("Π_{}: covered/e^r = {:.4}, N = {}, by count [{}]", plane.name(), ras.covered_area() / er, ras.multiplicity, by_k.join(" "));
    }
    let om = omega_containment(&mesh, OmegaConstants::relaxed(0.1));
    println!("Ω_r: area/e^r = {:.4}, {} of {} samples outside", om.area_over_exp, om.outside, om.samples);
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
