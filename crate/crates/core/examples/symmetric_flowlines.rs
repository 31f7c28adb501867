//! Symmetric flowlines and the identities they satisfy.

use solgeo::flow::level_from_period;
use solgeo::symflow::{doubling_residual, identity_residuals, solve_symmetric};

pub fn run() -> solgeo::Result<()> {
    for l in [8.0, 12.0, 16.0, 20.0, 24.0] {
        let lv = level_from_period(l)?;
        let sf = solve_symmetric(&lv, l)?;
        let mid = sf.state(0.5 * l);
        let end = sf.state(l);
        let res = identity_residuals(&lv)?;
        let dbl = doubling_residual(&sf, l, &Default::default())?;
        println!(
            "L = {l:>4}: b(ℓ) = {:.10}  a(L) = {:.10}  worst identity {:.1e}  doubling {:.1e}",
            mid.b,
            end.a,
            res.max_abs(),
            dbl
        );
    }
    Ok(())
}

fn main() -> solgeo::Result<()> {
    run()
}
