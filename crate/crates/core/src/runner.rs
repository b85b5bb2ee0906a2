//! Experiment runner behind the `qsm` binary: resolves configuration, runs
//! sweeps and writes CSV tables with JSON sidecars.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundConstants, LambdaMethod, MinQubits, RegimeBounds};
use crate::classical::{self, DiffusionConfig, DiffusionSeries};
use crate::decay::{self, DecayRates};
use crate::engine::{self, EchoConfig, FidelityTrace};
use crate::error::{Error, Result};
use crate::hardware::{self, ReductionReport};
use crate::output::{fmt_f64, fmt_opt, write_with_sidecar};
use crate::params::{Kick, MapParams};

/// Every setting a command can take. Fields left unset fall back to
/// per-command defaults; a config file and command-line flags are merged with
/// [`ExperimentConfig::overlay`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Option<u32>,
    #[serde(rename = "L")]
    pub winding: Option<u32>,
    #[serde(rename = "K")]
    pub kick_classical: Option<f64>,
    #[serde(rename = "k")]
    pub kick_quantum: Option<f64>,
    pub sigma: Option<f64>,
    pub sigma_grid: Option<Vec<f64>>,
    pub steps: Option<usize>,
    pub realizations: Option<usize>,
    pub seed: Option<u64>,
    pub p0: Option<i64>,
    pub out: Option<PathBuf>,
    pub method: Option<LambdaMethod>,
    pub unfold: Option<bool>,
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
    pub profiles: Option<Vec<PathBuf>>,
    pub kick_grid: Option<Vec<f64>>,
    pub epsilon_grid: Option<Vec<f64>>,
    pub ensemble: Option<usize>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($f:ident),*) => {
        ExperimentConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ExperimentConfig {
    /// Reads a TOML key-value file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
    }

    /// Values set in `top` win over `self`.
    pub fn overlay(self, top: ExperimentConfig) -> ExperimentConfig {
        let base = self;
        overlay_fields!(base, top; n, winding, kick_classical, kick_quantum, sigma, sigma_grid,
            steps, realizations, seed, p0, out, method, unfold, n_min, n_max, profiles,
            kick_grid, epsilon_grid, ensemble)
    }

    fn map_params(&self) -> Result<MapParams> {
        let n = self
            .n
            .ok_or_else(|| Error::Usage("--n is required".into()))?;
        let kick = match (self.kick_classical, self.kick_quantum) {
            (Some(_), Some(_)) => {
                return Err(Error::Usage("give either --K or --k, not both".into()))
            }
            (Some(k), None) => Kick::Classical(k),
            (None, Some(k)) => Kick::Quantum(k),
            (None, None) => return Err(Error::Usage("one of --K or --k is required".into())),
        };
        MapParams::new(n, self.winding.unwrap_or(1), kick)
    }

    fn echo(&self, sigma: f64) -> EchoConfig {
        let d = EchoConfig::default();
        EchoConfig {
            sigma,
            steps: self.steps.unwrap_or(d.steps),
            realizations: self.realizations.unwrap_or(d.realizations),
            master_seed: self.seed.unwrap_or(d.master_seed),
            p0: self.p0.unwrap_or(d.p0),
        }
    }

    fn n_range(&self) -> Result<Vec<u32>> {
        let lo = self
            .n_min
            .or(self.n)
            .ok_or_else(|| Error::Usage("--n-min is required".into()))?;
        let hi = self.n_max.or(self.n).unwrap_or(lo);
        if lo > hi {
            return Err(Error::Usage(format!("empty qubit range {lo}..={hi}")));
        }
        Ok((lo..=hi).collect())
    }
}

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    /// Human-readable summary for the terminal.
    pub summary: String,
}

fn emit<C: Serialize>(
    report: &mut Report,
    out: Option<&Path>,
    csv: Vec<u8>,
    command: &str,
    config: &C,
) -> Result<()> {
    match out {
        Some(path) => {
            write_with_sidecar(path, &csv, command, config)?;
            report.files.push(path.to_path_buf());
        }
        None => report.summary.push_str(&String::from_utf8_lossy(&csv)),
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct FidelityRun<'a> {
    params: &'a MapParams,
    echo: &'a EchoConfig,
    unfold: bool,
}

/// Writes `t, f_mean, f_stderr, f_unfolded`.
pub fn fidelity_csv(trace: &FidelityTrace) -> Result<Vec<u8>> {
    let unfolded = decay::unfold(&trace.f_mean, trace.params.states)?;
    let mut s = String::from("t,f_mean,f_stderr,f_unfolded\n");
    for (t, ((f, se), u)) in trace
        .f_mean
        .iter()
        .zip(&trace.f_stderr)
        .zip(&unfolded)
        .enumerate()
    {
        let _ = writeln!(s, "{t},{},{},{}", fmt_f64(*f), fmt_f64(*se), fmt_opt(*u));
    }
    Ok(s.into_bytes())
}

/// Runs one echo experiment.
pub fn cmd_fidelity(cfg: &ExperimentConfig) -> Result<(FidelityTrace, DecayRates, Report)> {
    let params = cfg.map_params()?;
    let echo = cfg.echo(cfg.sigma.unwrap_or(0.0));
    let unfold = cfg.unfold.unwrap_or(false);
    let trace = engine::echo_fidelity_trace(params, echo)?;
    let rates = DecayRates::analyze(&trace.f_mean, params.states, unfold)?;

    let mut report = Report {
        warnings: params.warnings(),
        ..Default::default()
    };
    let run = FidelityRun {
        params: &params,
        echo: &echo,
        unfold,
    };
    emit(
        &mut report,
        cfg.out.as_deref(),
        fidelity_csv(&trace)?,
        "fidelity",
        &run,
    )?;
    let _ = writeln!(
        report.summary,
        "Gamma0 = {}, fitted gamma = {} ({} fit points), lambda(K) = {}",
        fmt_opt(rates.gamma0),
        fmt_opt(rates.gamma_fit()),
        rates.fit_points,
        fmt_f64(classical::lyapunov_exponent(params.kick_classical)?)
    );
    Ok((trace, rates, report))
}

/// One row of the noise sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub gamma0: Option<f64>,
    pub gamma_at_t2: Option<f64>,
    pub gamma_fit: Option<f64>,
    pub fit_points: usize,
    pub lambda_k: f64,
    /// `C σ²` with `C` taken from the smallest σ.
    pub golden_rule: Option<f64>,
    /// Standard error of `f(1)`, for judging `Γ₀` near saturation.
    pub f1_stderr: f64,
}

/// Sorted, deduplicated σ grid plus a warning if duplicates were dropped.
pub fn normalize_grid(grid: &[f64]) -> Result<(Vec<f64>, Option<String>)> {
    if grid.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::Usage(
            "sigma grid values must be finite and non-negative".into(),
        ));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    let warning = (g.len() != grid.len())
        .then(|| format!("dropped {} duplicate sigma value(s)", grid.len() - g.len()));
    if g.len() < 2 {
        return Err(Error::Usage(
            "a sigma sweep needs at least two distinct values".into(),
        ));
    }
    Ok((g, warning))
}

pub fn sweep_csv(rows: &[SweepRow]) -> Vec<u8> {
    let mut s =
        String::from("sigma,gamma0,gamma_at_t2,gamma_fit,fit_points,lambda_K,golden_rule\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt_f64(r.sigma),
            fmt_opt(r.gamma0),
            fmt_opt(r.gamma_at_t2),
            fmt_opt(r.gamma_fit),
            r.fit_points,
            fmt_f64(r.lambda_k),
            fmt_opt(r.golden_rule)
        );
    }
    s.into_bytes()
}

#[derive(Debug, Serialize)]
struct SweepRun<'a> {
    params: &'a MapParams,
    echo: &'a EchoConfig,
    sigma_grid: &'a [f64],
    unfold: bool,
}

/// Runs the echo over a σ grid. Every σ uses the same seed, so the
/// underlying standard-normal draws are shared across the grid.
pub fn cmd_sigma_sweep(cfg: &ExperimentConfig) -> Result<(Vec<SweepRow>, Report)> {
    let params = cfg.map_params()?;
    let grid = cfg
        .sigma_grid
        .as_deref()
        .ok_or_else(|| Error::Usage("--sigma-grid is required".into()))?;
    let (grid, dup_warning) = normalize_grid(grid)?;
    let unfold = cfg.unfold.unwrap_or(false);
    let lambda_k = classical::lyapunov_exponent(params.kick_classical)?;

    let mut rows = Vec::with_capacity(grid.len());
    for &sigma in &grid {
        let trace = engine::echo_fidelity_trace(params, cfg.echo(sigma))?;
        let rates = DecayRates::analyze(&trace.f_mean, params.states, unfold)?;
        rows.push(SweepRow {
            sigma,
            gamma0: rates.gamma0,
            gamma_at_t2: rates.gamma_at(2),
            gamma_fit: rates.gamma_fit(),
            fit_points: rates.fit_points,
            lambda_k,
            golden_rule: None,
            f1_stderr: trace.f_stderr[1],
        });
    }
    if let Some(first) = rows
        .iter()
        .find(|r| r.sigma > 0.0 && r.gamma0.is_some_and(|g| g > 0.0))
    {
        let c = decay::golden_rule_constant(first.sigma, first.gamma0.unwrap());
        for r in &mut rows {
            r.golden_rule = Some(c * r.sigma * r.sigma);
        }
    }

    let mut report = Report {
        warnings: params.warnings().into_iter().chain(dup_warning).collect(),
        ..Default::default()
    };
    for r in rows.iter().filter(|r| r.gamma_fit.is_none()) {
        report.warnings.push(format!(
            "sigma = {}: fit underconstrained ({} points)",
            r.sigma, r.fit_points
        ));
    }
    let echo = cfg.echo(f64::NAN);
    let run = SweepRun {
        params: &params,
        echo: &echo,
        sigma_grid: &grid,
        unfold,
    };
    emit(
        &mut report,
        cfg.out.as_deref(),
        sweep_csv(&rows),
        "sigma-sweep",
        &run,
    )?;
    Ok((rows, report))
}

#[derive(Debug, Serialize)]
struct RegimeRun<'a> {
    qubits: &'a [u32],
    winding: u32,
    method: LambdaMethod,
    constants: BoundConstants,
}

pub fn cmd_regime(cfg: &ExperimentConfig) -> Result<(Vec<RegimeBounds>, Report)> {
    let qubits = cfg.n_range()?;
    let winding = cfg.winding.unwrap_or(1);
    let method = cfg.method.unwrap_or_default();
    let constants = BoundConstants::default();
    let rows = qubits
        .iter()
        .map(|&n| bounds::lyapunov_region(n, winding, method, constants))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = Vec::new();
    bounds::write_regime_csv(&mut csv, &rows)?;
    let mut report = Report::default();
    let run = RegimeRun {
        qubits: &qubits,
        winding,
        method,
        constants,
    };
    emit(&mut report, cfg.out.as_deref(), csv, "regime", &run)?;
    Ok((rows, report))
}

pub fn cmd_min_qubits(cfg: &ExperimentConfig) -> Result<(MinQubits, Report)> {
    let winding = cfg.winding.unwrap_or(1);
    let method = cfg.method.unwrap_or_default();
    let result = bounds::min_qubits(winding, method, BoundConstants::default())?;
    let mut csv = String::from("n,nonempty\n");
    for (n, ok) in &result.table {
        let _ = writeln!(csv, "{n},{ok}");
    }
    let mut report = Report::default();
    #[derive(Serialize)]
    struct Run {
        winding: u32,
        method: LambdaMethod,
    }
    emit(
        &mut report,
        cfg.out.as_deref(),
        csv.into_bytes(),
        "min-qubits",
        &Run { winding, method },
    )?;
    let _ = match result.n_min {
        Some(n) => writeln!(report.summary, "n_min = {n} (L = {winding}, {method})"),
        None => writeln!(
            report.summary,
            "n_min > {} (L = {winding}, {method})",
            bounds::MAX_SCAN_QUBITS
        ),
    };
    Ok((result, report))
}

pub fn cmd_hardware(cfg: &ExperimentConfig) -> Result<(Vec<ReductionReport>, Report)> {
    let paths = cfg.profiles.clone().unwrap_or_default();
    let profiles = hardware::load_profiles(&paths)?;
    let qubits = match (cfg.n_min, cfg.n_max, cfg.n) {
        (None, None, None) => vec![6],
        _ => cfg.n_range()?,
    };
    let method = cfg.method.unwrap_or(LambdaMethod::Series3);
    let mut rows = Vec::new();
    for p in &profiles {
        for &n in &qubits {
            rows.push(p.reduction_factor(n, method)?);
        }
    }
    let mut csv = Vec::new();
    hardware::write_reduction_csv(&mut csv, &rows)?;
    let mut report = Report::default();
    #[derive(Serialize)]
    struct Run<'a> {
        profiles: &'a [hardware::HardwareProfile],
        qubits: &'a [u32],
        method: LambdaMethod,
    }
    let run = Run {
        profiles: &profiles,
        qubits: &qubits,
        method,
    };
    emit(&mut report, cfg.out.as_deref(), csv, "hardware", &run)?;
    for r in &rows {
        let _ = writeln!(
            report.summary,
            "{} n={}: r in [{}, {}]",
            r.profile,
            r.n,
            hardware::round_sig(r.r.best, 2),
            hardware::round_sig(r.r.worst, 2)
        );
    }
    Ok((rows, report))
}

/// Diffusion grid output: one summary row per `(K, ε)`. The random-phase
/// column is left empty for `K ≤ 0`.
pub fn diffusion_summary_csv(series: &[DiffusionSeries]) -> Vec<u8> {
    let mut s = String::from("K,epsilon,diffusion,diffusion_stderr,random_phase\n");
    for d in series {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_f64(d.config.kick),
            fmt_f64(d.config.epsilon),
            fmt_f64(d.diffusion),
            fmt_f64(d.diffusion_stderr),
            fmt_opt(
                (d.config.kick > 0.0).then(|| classical::noisy_diffusion_coefficient(
                    d.config.kick,
                    d.config.epsilon
                ))
            )
        );
    }
    s.into_bytes()
}

/// Measures cylinder diffusion over the `(K, ε)` grid. With `--out x.csv`
/// the summary goes to `x.csv` and each point's MSD series to `x_series_<i>.csv`.
pub fn cmd_classical(cfg: &ExperimentConfig) -> Result<(Vec<DiffusionSeries>, Report)> {
    let kicks = cfg
        .kick_grid
        .clone()
        .or_else(|| cfg.kick_classical.map(|k| vec![k]))
        .ok_or_else(|| Error::Usage("--K or --kick-grid is required".into()))?;
    let epsilons = cfg
        .epsilon_grid
        .clone()
        .or_else(|| cfg.sigma.map(|s| vec![s]))
        .unwrap_or_else(|| vec![0.0]);
    let mut series = Vec::new();
    for &kick in &kicks {
        for &epsilon in &epsilons {
            series.push(classical::measure_diffusion(DiffusionConfig {
                kick,
                epsilon,
                ensemble: cfg.ensemble.unwrap_or(100_000),
                steps: cfg.steps.unwrap_or(100),
                seed: cfg.seed.unwrap_or(1),
            })?);
        }
    }
    let mut report = Report::default();
    if let Some(out) = cfg.out.as_deref() {
        let stem = out.with_extension("");
        for (i, d) in series.iter().enumerate() {
            let path = PathBuf::from(format!("{}_series_{i}.csv", stem.display()));
            let mut csv = Vec::new();
            d.write_csv(&mut csv)?;
            write_with_sidecar(&path, &csv, "classical", &d.config)?;
            report.files.push(path);
        }
    }
    #[derive(Serialize)]
    struct Run<'a> {
        kicks: &'a [f64],
        epsilons: &'a [f64],
        ensemble: usize,
        steps: usize,
        seed: u64,
    }
    let run = Run {
        kicks: &kicks,
        epsilons: &epsilons,
        ensemble: cfg.ensemble.unwrap_or(100_000),
        steps: cfg.steps.unwrap_or(100),
        seed: cfg.seed.unwrap_or(1),
    };
    emit(
        &mut report,
        cfg.out.as_deref(),
        diffusion_summary_csv(&series),
        "classical",
        &run,
    )?;
    Ok((series, report))
}

/// Fast sanity checks of the closed forms and the engine.
pub fn selftest() -> Vec<(&'static str, bool)> {
    use crate::state::{Basis, CenteredFourier, QuantumState};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    let close = |a: Result<f64>, b: f64, tol: f64| a.map(|a| (a - b).abs() <= tol).unwrap_or(false);
    let c = BoundConstants::default();
    let mut checks = vec![
        (
            "lyapunov exponent at K = 1",
            close(
                classical::lyapunov_exponent(1.0),
                ((3.0 + 5f64.sqrt()) / 2.0).ln(),
                1e-12,
            ),
        ),
        (
            "diffusion coefficient at K = 2",
            close(
                classical::diffusion_coefficient(2.0),
                4.0 * PI * PI / 3.0,
                1e-12,
            ),
        ),
        (
            "K_loc at n = 6",
            close(bounds::k_loc(64, 1).map(|k| k.value), 0.59, 0.01),
        ),
        (
            "six qubits minimal",
            bounds::min_qubits(1, LambdaMethod::Exact, c)
                .map(|m| m.n_min == Some(6))
                .unwrap_or(false),
        ),
        (
            "gate error from decay rate",
            close(
                hardware::epsilon_from_gamma0(1.4, 29.0).map(|e| e.exact),
                0.047,
                1e-3,
            ),
        ),
        (
            "unfolding",
            decay::unfold(&[0.4], 4)
                .map(|u| (u[0].unwrap() - 0.2).abs() < 1e-15)
                .unwrap_or(false),
        ),
    ];
    let uniform = {
        let f = CenteredFourier::new(8);
        let amp = Complex64::new(1.0 / 8f64.sqrt(), 0.0);
        QuantumState::from_amplitudes(vec![amp; 8], Basis::Position)
            .map(|s| crate::state::momentum_distribution(&s, &f)[4] > 1.0 - 1e-12)
            .unwrap_or(false)
    };
    checks.push(("uniform position state has zero momentum", uniform));
    let echo = MapParams::new(4, 1, Kick::Classical(0.9))
        .and_then(|p| {
            engine::echo_fidelity_trace(
                p,
                EchoConfig {
                    steps: 5,
                    realizations: 2,
                    ..Default::default()
                },
            )
        })
        .map(|t| t.f_mean.iter().all(|&f| f == 1.0))
        .unwrap_or(false);
    checks.push(("noiseless echo is one", echo));
    checks
}
