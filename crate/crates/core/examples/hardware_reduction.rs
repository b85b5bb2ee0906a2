//! Error-reduction factors `r = a b c` for the shipped hardware profiles, plus
//! the gate-error conversions behind them.
//!
//! Usage: `cargo run --example hardware_reduction -- [profile.toml ...]`

use std::path::PathBuf;

use qsm_chaos::bounds::LambdaMethod;
use qsm_chaos::hardware::{epsilon_from_gamma0, infer_effective_error, load_profiles, round_sig};

fn main() -> qsm_chaos::Result<()> {
    let paths: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    let profiles = load_profiles(&paths)?;

    let e = epsilon_from_gamma0(1.4, 29.0)?;
    println!(
        "IBM-Q three-qubit CNOT error: {:.4} (linearized {:.4})",
        e.exact, e.linearized
    );
    println!(
        "IonQ effective error from 0.55 -> 0.35 over 10 gates: {:.4}",
        infer_effective_error(0.55, 0.35, 10, 0.025)?
    );

    for p in &profiles {
        println!("\n{}", p.name);
        println!("{:>3} {:>13} {:>13} {:>13} {:>13}", "n", "a", "b", "c", "r");
        for n in 6..=12 {
            let r = p.reduction_factor(n, LambdaMethod::Series3)?;
            let pair = |x: qsm_chaos::hardware::Range| {
                format!("{}-{}", round_sig(x.best, 2), round_sig(x.worst, 2))
            };
            println!(
                "{n:>3} {:>13} {:>13} {:>13} {:>13}",
                pair(r.a),
                pair(r.b),
                pair(r.c),
                pair(r.r)
            );
        }
    }
    Ok(())
}
