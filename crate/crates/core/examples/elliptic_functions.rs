//! Complete elliptic integrals via the arithmetic-geometric mean.

use solgeo::elliptic::{agm, ellip_e, ellip_k, k_log_asymptote};

pub fn run() -> solgeo::Result<()> {
    println!("AGM(1, √2) = {:.16}", agm(1.0, 2f64.sqrt())?);
    println!("{:>6} {:>18} {:>18}", "m", "K(m)", "E(m)");
    for m in [0.0, 0.25, 0.5, 0.75, 0.9, 0.99] {
        println!("{m:>6} {:>18.15} {:>18.15}", ellip_k(m)?, ellip_e(m)?);
    }
    let (gap, bound) = k_log_asymptote(1.0 - 1e-6)?;
    println!("|K(m) - log(4/√(1-m))| at m = 1-1e-6: {gap:.3e} (bound {bound:.3e})");
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
