//! Group law, left translation and the metric.

use solgeo::solcore::{dl, inverse, metric_norm, mul, project, Plane, SolPoint, TangentVec};

pub fn run() -> solgeo::Result<()> {
    let p = SolPoint::new(1.0, -2.0, 0.5);
    let q = SolPoint::new(0.3, 4.0, -1.25);
    let pq = mul(p, q)?;
    println!("p·q = {pq:?}");
    println!("p·p⁻¹ = {:?}", mul(p, inverse(p)?)?);
    let t = TangentVec::new(1.0, 1.0, 0.0);
    println!("|t| at q = {:.12}, |dL_p t| at p·q = {:.12}", metric_norm(q, t), metric_norm(pq, dl(p, t)?));
    for plane in Plane::ALL {
        println!("Π_{}(p·q) = {:?}", plane.name(), project(pq, plane));
    }
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
