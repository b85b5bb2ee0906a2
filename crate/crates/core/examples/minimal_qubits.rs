//! Six qubits are the smallest register with a Lyapunov regime. This scans the
//! region size, then shows the echo at n = 6 just above the localization edge
//! (K = 0.6) and deep in the golden-rule regime (K = 2.9).
//!
//! Usage: `cargo run --release --example minimal_qubits -- [realizations]`

use qsm_chaos::bounds::{min_qubits, BoundConstants, LambdaMethod};
use qsm_chaos::classical::lyapunov_exponent;
use qsm_chaos::decay::DecayRates;
use qsm_chaos::engine::{echo_fidelity_trace, EchoConfig};
use qsm_chaos::{Kick, MapParams};

fn main() -> qsm_chaos::Result<()> {
    let realizations: usize = std::env::args()
        .nth(1)
        .map_or(400, |s| s.parse().expect("realizations"));

    for method in [LambdaMethod::Exact, LambdaMethod::Series3] {
        let m = min_qubits(1, method, BoundConstants::default())?;
        println!("{method:>8}: n_min = {:?}", m.n_min);
    }

    let reference = lyapunov_exponent(0.6)?;
    for kick in [0.6, 2.9] {
        let params = MapParams::new(6, 1, Kick::Classical(kick))?;
        let trace = echo_fidelity_trace(
            params,
            EchoConfig {
                sigma: 0.9,
                realizations,
                ..Default::default()
            },
        )?;
        let rates = DecayRates::analyze(&trace.f_mean, params.states, true)?;
        let gammas: Vec<String> = (0..6)
            .map(|t| rates.gamma_at(t).map_or("-".into(), |g| format!("{g:.3}")))
            .collect();
        println!(
            "K = {kick}: unfolded gamma(t) = [{}], lambda(K) = {:.3}, lambda(0.6) = {reference:.3}",
            gammas.join(", "),
            lyapunov_exponent(kick)?
        );
    }
    Ok(())
}
