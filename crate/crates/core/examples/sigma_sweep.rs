//! Initial and intermediate decay rates across noise strengths, with the
//! golden-rule projection `C σ²` anchored at the smallest σ.
//!
//! Usage: `cargo run --release --example sigma_sweep -- [n] [realizations]`

use qsm_chaos::runner::{cmd_sigma_sweep, ExperimentConfig};

fn main() -> qsm_chaos::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u32 = args.next().map_or(10, |s| s.parse().expect("n"));
    let realizations: usize = args
        .next()
        .map_or(200, |s| s.parse().expect("realizations"));

    let config = ExperimentConfig {
        n: Some(n),
        kick_classical: Some(0.9),
        sigma_grid: Some(vec![
            0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0,
        ]),
        realizations: Some(realizations),
        ..Default::default()
    };
    let (rows, report) = cmd_sigma_sweep(&config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{:>7} {:>9} {:>9} {:>9} {:>4} {:>10}",
        "sigma", "Gamma0", "gamma(2)", "fit", "pts", "C sigma^2"
    );
    let show = |x: Option<f64>| x.map_or("-".into(), |v| format!("{v:.4}"));
    for r in rows {
        println!(
            "{:>7} {:>9} {:>9} {:>9} {:>4} {:>10}",
            r.sigma,
            show(r.gamma0),
            show(r.gamma_at_t2),
            show(r.gamma_fit),
            r.fit_points,
            show(r.golden_rule)
        );
    }
    Ok(())
}
