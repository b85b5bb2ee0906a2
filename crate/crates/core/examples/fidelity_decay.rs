//! Echo fidelity for the diffusive map at n = 12, K = 0.9.
//!
//! Usage: `cargo run --release --example fidelity_decay -- [sigma] [realizations]`

use qsm_chaos::classical::lyapunov_exponent;
use qsm_chaos::decay::DecayRates;
use qsm_chaos::engine::{echo_fidelity_trace, EchoConfig};
use qsm_chaos::{Kick, MapParams};

fn main() -> qsm_chaos::Result<()> {
    let mut args = std::env::args().skip(1);
    let sigma: f64 = args.next().map_or(20.0, |s| s.parse().expect("sigma"));
    let realizations: usize = args
        .next()
        .map_or(100, |s| s.parse().expect("realizations"));

    let params = MapParams::new(12, 1, Kick::Classical(0.9))?;
    let config = EchoConfig {
        sigma,
        realizations,
        ..Default::default()
    };
    let trace = echo_fidelity_trace(params, config)?;
    let rates = DecayRates::analyze(&trace.f_mean, params.states, false)?;

    println!("{:>3} {:>12} {:>10} {:>8}", "t", "f", "stderr", "gamma");
    for t in 0..trace.f_mean.len() {
        let g = rates.gamma_at(t).map_or("-".into(), |g| format!("{g:.4}"));
        println!(
            "{t:>3} {:>12.4e} {:>10.2e} {g:>8}",
            trace.f_mean[t], trace.f_stderr[t]
        );
    }
    println!(
        "lambda(K) = {:.4}",
        lyapunov_exponent(params.kick_classical)?
    );
    println!("Gamma0    = {:.4}", rates.gamma0.unwrap_or(f64::NAN));
    match &rates.fit {
        Ok(fit) => println!("fit gamma = {:.4} over t = {:?}", fit.gamma, fit.window),
        Err(why) => println!("no fit: {why}"),
    }
    Ok(())
}
