//! Split-operator evolution of the quantum sawtooth map and the two-way
//! Loschmidt echo under Gaussian kick noise.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::MapParams;
use crate::state::{centered_label, momentum_distribution, Basis, CenteredFourier, QuantumState};
use crate::stats::mean_stderr;

/// Floquet propagator `U = U_kin U_pot` with
/// `U_pot = exp(i (k+ζ) (βq)²/2)` and `U_kin = exp(-i ħ p²/2)`.
#[derive(Debug, Clone)]
pub struct Propagator {
    params: MapParams,
    fourier: CenteredFourier,
    /// `(βq)²/2`, multiplied by the noisy kick each step.
    potential: Vec<f64>,
    kinetic: Vec<Complex64>,
}

impl Propagator {
    pub fn new(params: MapParams) -> Self {
        let n = params.states;
        let beta = params.beta();
        let potential = (0..n)
            .map(|j| {
                let x = beta * centered_label(j, n) as f64;
                0.5 * x * x
            })
            .collect();
        let kinetic = (0..n)
            .map(|a| {
                let p = centered_label(a, n) as f64;
                Complex64::cis(-0.5 * params.hbar * p * p)
            })
            .collect();
        Self {
            params,
            fourier: CenteredFourier::new(n),
            potential,
            kinetic,
        }
    }

    pub fn params(&self) -> &MapParams {
        &self.params
    }

    pub fn fourier(&self) -> &CenteredFourier {
        &self.fourier
    }

    /// One period with quantum kick `k + zeta`. Accepts either basis and
    /// leaves the state in the position basis.
    pub fn step(&self, state: &mut QuantumState, zeta: f64) -> Result<()> {
        self.check_len(state)?;
        if state.basis() == Basis::Momentum {
            state.to_position(&self.fourier)?;
        }
        self.apply_potential(state, self.params.kick_quantum + zeta, 1.0);
        state.to_momentum(&self.fourier)?;
        for (a, k) in state.amplitudes_mut().iter_mut().zip(&self.kinetic) {
            *a *= k;
        }
        state.to_position(&self.fourier)
    }

    /// Exact inverse of [`Propagator::step`] for the same `zeta`.
    pub fn inverse_step(&self, state: &mut QuantumState, zeta: f64) -> Result<()> {
        self.check_len(state)?;
        if state.basis() == Basis::Position {
            state.to_momentum(&self.fourier)?;
        }
        for (a, k) in state.amplitudes_mut().iter_mut().zip(&self.kinetic) {
            *a *= k.conj();
        }
        state.to_position(&self.fourier)?;
        self.apply_potential(state, self.params.kick_quantum + zeta, -1.0);
        Ok(())
    }

    fn apply_potential(&self, state: &mut QuantumState, kick: f64, sign: f64) {
        for (a, v) in state.amplitudes_mut().iter_mut().zip(&self.potential) {
            *a *= Complex64::cis(sign * kick * v);
        }
    }

    fn check_len(&self, state: &QuantumState) -> Result<()> {
        if state.len() == self.params.states {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "state has {} amplitudes, propagator expects {}",
                state.len(),
                self.params.states
            )))
        }
    }
}

/// Forward or backward branch of the two-way echo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Forward,
    Backward,
}

/// Source of the per-step kick noise `ζ_t ~ N(0, σ²)`.
///
/// Draws come from ChaCha20 seeded with `master_seed` on stream
/// `2 * realization + branch`, pushed through the ziggurat sampler of
/// `rand_distr::StandardNormal` and scaled by `σ`. Runs with the same seed but
/// different `σ` therefore share their standard-normal draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisePlan {
    pub sigma: f64,
    pub master_seed: u64,
    pub realization: u64,
    pub branch: Branch,
}

impl NoisePlan {
    pub fn kicks(&self) -> impl Iterator<Item = f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(self.master_seed);
        let stream = 2 * self.realization
            + match self.branch {
                Branch::Forward => 0,
                Branch::Backward => 1,
            };
        rng.set_stream(stream);
        let sigma = self.sigma;
        std::iter::repeat_with(move || {
            let z: f64 = StandardNormal.sample(&mut rng);
            sigma * z
        })
    }

    /// `ζ_1, …, ζ_steps`.
    pub fn draw(&self, steps: usize) -> Vec<f64> {
        self.kicks().take(steps).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EchoConfig {
    pub sigma: f64,
    pub steps: usize,
    pub realizations: usize,
    pub master_seed: u64,
    /// Centered momentum label of the initial eigenstate. The default is 1:
    /// `|0⟩` is a parity eigenstate, which confines the echo to the even
    /// sector and lifts the fidelity floor from `1/N` to `2/N`.
    pub p0: i64,
}

impl Default for EchoConfig {
    fn default() -> Self {
        Self {
            sigma: 0.0,
            steps: 12,
            realizations: 100,
            master_seed: 1,
            p0: 1,
        }
    }
}

/// Ensemble-averaged fidelity `f(t)`, `t = 0..=steps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityTrace {
    pub params: MapParams,
    pub config: EchoConfig,
    pub f_mean: Vec<f64>,
    pub f_stderr: Vec<f64>,
}

impl FidelityTrace {
    pub fn steps(&self) -> usize {
        self.f_mean.len() - 1
    }

    pub fn realizations(&self) -> usize {
        self.config.realizations
    }
}

/// Fidelity of a single realization: both branches start in `|p0⟩` and evolve
/// under independent noise; `f(t) = |⟨χ(t)|φ(t)⟩|²`, which equals the echo
/// `|⟨ψ|U_B^{-t} U_A^t|ψ⟩|²`.
pub fn echo_realization(
    prop: &Propagator,
    forward: &[f64],
    backward: &[f64],
    p0: i64,
) -> Result<Vec<f64>> {
    let steps = forward.len().min(backward.len());
    let mut f = Vec::with_capacity(steps + 1);
    f.push(1.0);
    if forward[..steps] == backward[..steps] {
        f.resize(steps + 1, 1.0);
        return Ok(f);
    }
    let mut phi = QuantumState::eigenstate(prop.params().states, p0, Basis::Momentum)?;
    phi.to_position(prop.fourier())?;
    let mut chi = phi.clone();
    for t in 0..steps {
        prop.step(&mut phi, forward[t])?;
        prop.step(&mut chi, backward[t])?;
        f.push(chi.inner(&phi)?.norm_sqr().min(1.0));
    }
    Ok(f)
}

/// Runs `realizations` independent echoes (in parallel) and averages them in
/// realization order, so the result does not depend on the thread schedule.
pub fn echo_fidelity_trace(params: MapParams, config: EchoConfig) -> Result<FidelityTrace> {
    if config.steps == 0 || config.realizations == 0 {
        return Err(Error::InvalidParams(
            "steps and realizations must be at least 1".into(),
        ));
    }
    if !(config.sigma >= 0.0) || !config.sigma.is_finite() {
        return Err(Error::InvalidParams(format!(
            "noise sigma must be finite and non-negative, got {}",
            config.sigma
        )));
    }
    let prop = Propagator::new(params);
    let runs: Vec<Vec<f64>> = (0..config.realizations as u64)
        .into_par_iter()
        .map(|r| {
            let plan = |branch| NoisePlan {
                sigma: config.sigma,
                master_seed: config.master_seed,
                realization: r,
                branch,
            };
            let fwd = plan(Branch::Forward).draw(config.steps);
            let bwd = plan(Branch::Backward).draw(config.steps);
            echo_realization(&prop, &fwd, &bwd, config.p0)
        })
        .collect::<Result<_>>()?;

    let mut f_mean = Vec::with_capacity(config.steps + 1);
    let mut f_stderr = Vec::with_capacity(config.steps + 1);
    let mut column = vec![0.0; runs.len()];
    for t in 0..=config.steps {
        for (c, run) in column.iter_mut().zip(&runs) {
            *c = run[t];
        }
        let (m, s) = mean_stderr(&column);
        f_mean.push(m.clamp(0.0, 1.0));
        f_stderr.push(s);
    }
    f_mean[0] = 1.0;
    Ok(FidelityTrace {
        params,
        config,
        f_mean,
        f_stderr,
    })
}

/// Noiseless evolution from `|p0⟩`, averaging `P_p` over steps
/// `start..=end`.
pub fn time_averaged_momentum_distribution(
    params: MapParams,
    p0: i64,
    start: usize,
    end: usize,
) -> Result<Vec<f64>> {
    if start > end {
        return Err(Error::InvalidParams(format!(
            "empty averaging window [{start}, {end}]"
        )));
    }
    let prop = Propagator::new(params);
    let mut state = QuantumState::eigenstate(params.states, p0, Basis::Momentum)?;
    state.to_position(prop.fourier())?;
    let mut acc = vec![0.0; params.states];
    let mut samples = 0usize;
    if start == 0 {
        let idx = crate::state::storage_index(p0, params.states).expect("validated above");
        acc[idx] = 1.0;
        samples = 1;
    }
    for t in 1..=end {
        prop.step(&mut state, 0.0)?;
        if t >= start {
            for (a, v) in acc
                .iter_mut()
                .zip(momentum_distribution(&state, prop.fourier()))
            {
                *a += v;
            }
            samples += 1;
        }
    }
    Ok(acc.into_iter().map(|a| a / samples as f64).collect())
}
