use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qsm_chaos::bounds::LambdaMethod;
use qsm_chaos::runner::{self, ExperimentConfig, Report};
use qsm_chaos::Result;

/// Noisy quantum sawtooth map experiments.
#[derive(Parser)]
#[command(name = "qsm", version)]
struct Cli {
    /// Run quick installation checks and exit.
    #[arg(long)]
    selftest: bool,
    /// Key-value TOML file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Echo fidelity trace for one noise strength.
    Fidelity(Common),
    /// Decay rates over a grid of noise strengths.
    SigmaSweep(Common),
    /// Lyapunov-regime triangle per qubit count.
    Regime(Common),
    /// Smallest qubit count with a nonempty Lyapunov regime.
    MinQubits(Common),
    /// Required gate-error reduction per hardware profile.
    Hardware(Common),
    /// Classical diffusion on the cylinder.
    Classical(Common),
}

#[derive(Args, Default)]
struct Common {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "L")]
    winding: Option<u32>,
    #[arg(long = "K", allow_hyphen_values = true)]
    kick_classical: Option<f64>,
    #[arg(long = "k", allow_hyphen_values = true)]
    kick_quantum: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Comma-separated noise strengths.
    #[arg(long, value_delimiter = ',')]
    sigma_grid: Option<Vec<f64>>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Initial momentum label.
    #[arg(long, allow_hyphen_values = true)]
    p0: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// exact or series3.
    #[arg(long)]
    method: Option<LambdaMethod>,
    #[arg(long)]
    unfold: bool,
    #[arg(long)]
    n_min: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    /// Hardware profile TOML; repeatable. Defaults to the shipped profiles.
    #[arg(long = "profile")]
    profiles: Vec<PathBuf>,
    /// Comma-separated classical kicks.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    kick_grid: Option<Vec<f64>>,
    /// Comma-separated classical noise strengths.
    #[arg(long, value_delimiter = ',')]
    epsilon_grid: Option<Vec<f64>>,
    /// Classical ensemble size.
    #[arg(long)]
    ensemble: Option<usize>,
}

impl From<Common> for ExperimentConfig {
    fn from(c: Common) -> Self {
        ExperimentConfig {
            n: c.n,
            winding: c.winding,
            kick_classical: c.kick_classical,
            kick_quantum: c.kick_quantum,
            sigma: c.sigma,
            sigma_grid: c.sigma_grid,
            steps: c.steps,
            realizations: c.realizations,
            seed: c.seed,
            p0: c.p0,
            out: c.out,
            method: c.method,
            unfold: c.unfold.then_some(true),
            n_min: c.n_min,
            n_max: c.n_max,
            profiles: (!c.profiles.is_empty()).then_some(c.profiles),
            kick_grid: c.kick_grid,
            epsilon_grid: c.epsilon_grid,
            ensemble: c.ensemble,
        }
    }
}

fn run(config: Option<PathBuf>, command: Command) -> Result<Report> {
    let base = match config {
        Some(path) => ExperimentConfig::from_file(&path)?,
        None => ExperimentConfig::default(),
    };
    let report = match command {
        Command::Fidelity(c) => runner::cmd_fidelity(&base.overlay(c.into()))?.2,
        Command::SigmaSweep(c) => runner::cmd_sigma_sweep(&base.overlay(c.into()))?.1,
        Command::Regime(c) => runner::cmd_regime(&base.overlay(c.into()))?.1,
        Command::MinQubits(c) => runner::cmd_min_qubits(&base.overlay(c.into()))?.1,
        Command::Hardware(c) => runner::cmd_hardware(&base.overlay(c.into()))?.1,
        Command::Classical(c) => runner::cmd_classical(&base.overlay(c.into()))?.1,
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.selftest {
        let mut ok = true;
        for (name, pass) in runner::selftest() {
            println!("{} {name}", if pass { "ok  " } else { "FAIL" });
            ok &= pass;
        }
        return if ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        };
    }
    let Some(command) = cli.command else {
        eprintln!("qsm: no subcommand given (see --help)");
        return ExitCode::from(2);
    };
    match run(cli.config, command) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", report.summary);
            for f in &report.files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qsm: {e}");
            ExitCode::from(if matches!(e, qsm_chaos::Error::Usage(_)) {
                2
            } else {
                1
            })
        }
    }
}
