//! Volume bound for the ball and the optimized combination of projection estimates.

use solgeo::spheres::bound::{combine_bound, optimize_theta, BoundInputs};
use solgeo::spheres::volume::volume_region_bound;

pub fn run() -> solgeo::Result<()> {
    for r in [5.0, 8.0, 12.0] {
        let v = volume_region_bound(r)?;
        println!("r = {r}: region {:.4e}, closed form {:.4e}", v.region, v.closed_form);
    }
    let lim = BoundInputs::limiting();
    for theta in [0.4, 0.5, 0.6, 0.7] {
        println!("θ = {theta}: bound = {:.6} e^r", combine_bound(&lim, theta, 0.0)?);
    }
    let opt = optimize_theta(&lim)?;
    println!("θ* = {:.10}, bound* = {:.10} e^r (20π = {:.6})", opt.theta, opt.bound, 20.0 * std::f64::consts::PI);
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
