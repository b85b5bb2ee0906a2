//! Cylinder diffusion of the classical map against the random-phase law
//! `D = (π²/3)(K² + ε²)`.
//!
//! Usage: `cargo run --release --example classical_diffusion -- [ensemble]`

use qsm_chaos::classical::{
    measure_diffusion, noisy_diffusion_coefficient, ChaosMetrics, DiffusionConfig,
};

fn main() -> qsm_chaos::Result<()> {
    let ensemble: usize = std::env::args()
        .nth(1)
        .map_or(100_000, |s| s.parse().expect("ensemble"));

    println!(
        "{:>5} {:>5} {:>10} {:>8} {:>10} {:>8}",
        "K", "eps", "D", "stderr", "theory", "lambda"
    );
    for kick in [-2.0, 0.5, 1.0, 2.0, 4.0] {
        for epsilon in [0.0, 1.0] {
            let d = measure_diffusion(DiffusionConfig {
                kick,
                epsilon,
                ensemble,
                steps: 100,
                seed: 1,
            })?;
            // the random-phase law only describes the chaotic side
            let (theory, lambda) = match ChaosMetrics::for_kick(kick) {
                Ok(m) => (
                    format!("{:.3}", noisy_diffusion_coefficient(kick, epsilon)),
                    format!("{:.4}", m.lyapunov),
                ),
                Err(_) => ("-".into(), "-".into()),
            };
            println!(
                "{kick:>5} {epsilon:>5} {:>10.3} {:>8.3} {theory:>10} {lambda:>8}",
                d.diffusion, d.diffusion_stderr
            );
        }
    }
    Ok(())
}
