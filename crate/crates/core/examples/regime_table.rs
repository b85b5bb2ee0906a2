//! Localization edge and Lyapunov-regime triangle per register size, exact
//! against third-order series.
//!
//! Usage: `cargo run --example regime_table -- [L]`

use qsm_chaos::bounds::{lyapunov_region, BoundConstants, LambdaMethod};

fn main() -> qsm_chaos::Result<()> {
    let winding: u32 = std::env::args().nth(1).map_or(1, |s| s.parse().expect("L"));
    let c = BoundConstants::default();
    println!(
        "{:>3} {:>7} {:>8} {:>8} {:>8} {:>9} {:>7}",
        "n", "K_loc", "exact", "series3", "lambda*", "G0max", "area"
    );
    for n in 3..=14 {
        let r = lyapunov_region(n, winding, LambdaMethod::Exact, c)?;
        println!(
            "{n:>3} {:>7.4} {:>8.4} {:>8.4} {:>8.4} {:>9.4} {:>7.4}",
            r.k_loc.value,
            r.lambda_loc_exact,
            r.lambda_loc_series3,
            r.lambda_star,
            r.gamma0_max_at_corner,
            r.area
        );
    }
    Ok(())
}
