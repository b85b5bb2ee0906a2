//! Time-averaged momentum profile of the noiseless map and its exponential fit.
//!
//! Usage: `cargo run --release --example localization_profile -- [n] [K]`

use qsm_chaos::decay::{fit_localization_length, localization_length_theory};
use qsm_chaos::engine::time_averaged_momentum_distribution;
use qsm_chaos::state::centered_label;
use qsm_chaos::{Kick, MapParams};

fn main() -> qsm_chaos::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u32 = args.next().map_or(10, |s| s.parse().expect("n"));
    let kick: f64 = args.next().map_or(0.3, |s| s.parse().expect("K"));
    let p0 = 1;

    let params = MapParams::new(n, 1, Kick::Classical(kick))?;
    let ell = localization_length_theory(&params)?;
    let start = (2.0 * ell).ceil() as usize;
    let end = (4.0 * ell).ceil() as usize;
    println!(
        "N = {}, k = {:.3}, ell_theory = {ell:.1}",
        params.states, params.kick_quantum
    );
    println!("averaging over t in [{start}, {end}]");

    let profile = time_averaged_momentum_distribution(params, p0, start, end)?;
    let stride = (params.states / 32).max(1);
    for (i, p) in profile.iter().enumerate().step_by(stride) {
        println!("{:>6} {p:.3e}", centered_label(i, params.states));
    }
    match fit_localization_length(&profile, p0) {
        Ok(fit) => println!("ell_fit = {fit:.1} (ratio {:.2})", fit / ell),
        Err(e) => println!("no localization: {e}"),
    }
    Ok(())
}
