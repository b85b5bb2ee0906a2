//! The classical sawtooth map: iteration on the torus or cylinder, the closed
//! form chaos metrics, and ensemble diffusion under kick noise.

use std::f64::consts::PI;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::fmt_f64;
use crate::stats::linear_fit;

const TWO_PI: f64 = 2.0 * PI;

/// Maps `x` into `[-period/2, period/2)` via `x - period * floor(x/period + 1/2)`.
pub fn wrap(x: f64, period: f64) -> f64 {
    let half = 0.5 * period;
    let mut r = x - period * (x / period + 0.5).floor();
    // floor() can land one period off when x/period + 1/2 rounds across an integer
    if r >= half {
        r -= period;
    } else if r < -half {
        r += period;
    }
    r
}

/// Phase-space manifold the map lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Manifold {
    /// Action wrapped into `[-πL, πL)`.
    Torus { winding: u32 },
    /// Action unbounded; only the angle is wrapped.
    Cylinder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    /// Action `J`.
    pub action: f64,
    /// Angle `θ` in `[-π, π)`.
    pub angle: f64,
}

impl ClassicalState {
    pub fn new(action: f64, angle: f64) -> Self {
        Self { action, angle }
    }

    /// One period of the map with kick `kick + noise`.
    pub fn step(self, kick: f64, noise: f64, manifold: Manifold) -> Self {
        let mut action = self.action + (kick + noise) * self.angle;
        if let Manifold::Torus { winding } = manifold {
            action = wrap(action, TWO_PI * f64::from(winding));
        }
        let angle = wrap(self.angle + action, TWO_PI);
        Self { action, angle }
    }
}

/// Free-function form of [`ClassicalState::step`].
pub fn csm_step(
    state: ClassicalState,
    kick: f64,
    noise: f64,
    manifold: Manifold,
) -> ClassicalState {
    state.step(kick, noise, manifold)
}

/// Maximal Lyapunov exponent `ln[(2 + K + sqrt(K^2 + 4K)) / 2]` for `K > 0`.
pub fn lyapunov_exponent(kick: f64) -> Result<f64> {
    if !(kick > 0.0) {
        return Err(Error::Domain {
            quantity: "Lyapunov exponent",
            requirement: "K > 0",
            value: kick,
        });
    }
    // ln(1 + x) with x = (K + sqrt(K^2 + 4K)) / 2 keeps precision as K -> 0
    let x = 0.5 * (kick + (kick * kick + 4.0 * kick).sqrt());
    Ok(x.ln_1p())
}

/// Classical diffusion coefficient: `(π²/3) K²` for `K ≥ 1`, `3.3 K^{5/2}` below.
pub fn diffusion_coefficient(kick: f64) -> Result<f64> {
    if !(kick > 0.0) {
        return Err(Error::Domain {
            quantity: "diffusion coefficient",
            requirement: "K > 0",
            value: kick,
        });
    }
    Ok(if kick >= 1.0 {
        PI * PI / 3.0 * kick * kick
    } else {
        3.3 * kick.powf(2.5)
    })
}

/// Random-phase diffusion with Gaussian kick noise of standard deviation `epsilon`.
pub fn noisy_diffusion_coefficient(kick: f64, epsilon: f64) -> f64 {
    PI * PI / 3.0 * (kick * kick + epsilon * epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosMetrics {
    pub lyapunov: f64,
    pub diffusion: f64,
}

impl ChaosMetrics {
    pub fn for_kick(kick: f64) -> Result<Self> {
        Ok(Self {
            lyapunov: lyapunov_exponent(kick)?,
            diffusion: diffusion_coefficient(kick)?,
        })
    }
}

/// A set of independent trajectories. Member `i` draws its kick noise from its
/// own ChaCha8 stream `(seed, i)`, so the ensemble evolves identically however
/// it is partitioned.
#[derive(Debug, Clone)]
pub struct ClassicalEnsemble {
    pub states: Vec<ClassicalState>,
    pub seed: u64,
    first_index: u64,
    rngs: Vec<ChaCha8Rng>,
}

impl ClassicalEnsemble {
    /// Members `first_index..first_index + size` with `J = 0` and `θ` uniform
    /// on `[-π, π)`, the angle drawn from each member's own stream.
    pub fn uniform_angles(size: usize, seed: u64, first_index: u64) -> Self {
        let angle_dist = Uniform::new(-PI, PI).expect("valid range");
        let mut rngs = Vec::with_capacity(size);
        let mut states = Vec::with_capacity(size);
        for i in 0..size as u64 {
            let mut rng = member_rng(seed, first_index + i);
            let angle = wrap(angle_dist.sample(&mut rng), TWO_PI);
            states.push(ClassicalState::new(0.0, angle));
            rngs.push(rng);
        }
        Self {
            states,
            seed,
            first_index,
            rngs,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Index of the first member in the global numbering.
    pub fn first_index(&self) -> u64 {
        self.first_index
    }

    /// Advances every member one period; each draws fresh noise `N(0, ε²)`.
    pub fn advance(&mut self, kick: f64, epsilon: f64, manifold: Manifold) {
        for (state, rng) in self.states.iter_mut().zip(self.rngs.iter_mut()) {
            let noise = if epsilon > 0.0 {
                let z: f64 = StandardNormal.sample(rng);
                epsilon * z
            } else {
                0.0
            };
            *state = state.step(kick, noise, manifold);
        }
    }
}

fn member_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionConfig {
    pub kick: f64,
    pub epsilon: f64,
    pub ensemble: usize,
    pub steps: usize,
    pub seed: u64,
}

/// Mean squared action displacement series and the fitted diffusion rate.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionSeries {
    pub config: DiffusionConfig,
    /// `⟨(J_t - J_0)²⟩` for `t = 0..=steps`.
    pub msd_mean: Vec<f64>,
    pub msd_stderr: Vec<f64>,
    /// Least-squares slope of the MSD over `t ∈ [T/2, T]`.
    pub diffusion: f64,
    /// Standard error of `diffusion` from the spread of per-member slopes.
    pub diffusion_stderr: f64,
}

const CHUNK: usize = 1024;

/// Measures the diffusion rate of a cylinder ensemble started at `J = 0` with
/// uniform angles.
pub fn measure_diffusion(cfg: DiffusionConfig) -> Result<DiffusionSeries> {
    if cfg.ensemble < 100 {
        return Err(Error::InvalidParams(format!(
            "ensemble size {} is below 100",
            cfg.ensemble
        )));
    }
    if cfg.steps < 10 {
        return Err(Error::InvalidParams(format!(
            "{} steps is below the minimum of 10",
            cfg.steps
        )));
    }
    if !(cfg.epsilon >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "noise std-dev must be non-negative, got {}",
            cfg.epsilon
        )));
    }
    let steps = cfg.steps;
    let window: Vec<usize> = (steps / 2..=steps).collect();
    let mean_t = window.iter().sum::<usize>() as f64 / window.len() as f64;
    let sxx: f64 = window.iter().map(|&t| (t as f64 - mean_t).powi(2)).sum();
    // slope = Σ w_t msd(t), so the same weights give each member's own slope
    let mut weights = vec![0.0; steps + 1];
    for &t in &window {
        weights[t] = (t as f64 - mean_t) / sxx;
    }

    let chunks = cfg.ensemble.div_ceil(CHUNK);
    let partials: Vec<ChunkSums> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let size = CHUNK.min(cfg.ensemble - start);
            run_chunk(&cfg, &weights, start as u64, size)
        })
        .collect();

    let m = cfg.ensemble as f64;
    let mut sum = vec![0.0; steps + 1];
    let mut sum_sq = vec![0.0; steps + 1];
    let (mut slope_sum, mut slope_sq) = (0.0, 0.0);
    for p in &partials {
        for t in 0..=steps {
            sum[t] += p.sum[t];
            sum_sq[t] += p.sum_sq[t];
        }
        slope_sum += p.slope_sum;
        slope_sq += p.slope_sq;
    }
    let msd_mean: Vec<f64> = sum.iter().map(|s| s / m).collect();
    let msd_stderr: Vec<f64> = sum_sq
        .iter()
        .zip(&msd_mean)
        .map(|(sq, mean)| {
            let var = ((sq / m - mean * mean) * m / (m - 1.0)).max(0.0);
            (var / m).sqrt()
        })
        .collect();
    let x: Vec<f64> = window.iter().map(|&t| t as f64).collect();
    let y: Vec<f64> = window.iter().map(|&t| msd_mean[t]).collect();
    let fit = linear_fit(&x, &y).expect("window has at least 6 points");
    let slope_mean = slope_sum / m;
    let slope_var = ((slope_sq / m - slope_mean * slope_mean) * m / (m - 1.0)).max(0.0);

    Ok(DiffusionSeries {
        config: cfg,
        msd_mean,
        msd_stderr,
        diffusion: fit.slope,
        diffusion_stderr: (slope_var / m).sqrt(),
    })
}

struct ChunkSums {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    slope_sum: f64,
    slope_sq: f64,
}

fn run_chunk(cfg: &DiffusionConfig, weights: &[f64], first: u64, size: usize) -> ChunkSums {
    let steps = cfg.steps;
    let mut ens = ClassicalEnsemble::uniform_angles(size, cfg.seed, first);
    let start: Vec<f64> = ens.states.iter().map(|s| s.action).collect();
    let mut sum = vec![0.0; steps + 1];
    let mut sum_sq = vec![0.0; steps + 1];
    let mut member_slope = vec![0.0; size];
    for t in 1..=steps {
        ens.advance(cfg.kick, cfg.epsilon, Manifold::Cylinder);
        for (i, s) in ens.states.iter().enumerate() {
            let d2 = (s.action - start[i]).powi(2);
            sum[t] += d2;
            sum_sq[t] += d2 * d2;
            member_slope[i] += weights[t] * d2;
        }
    }
    ChunkSums {
        sum,
        sum_sq,
        slope_sum: member_slope.iter().sum(),
        slope_sq: member_slope.iter().map(|s| s * s).sum(),
    }
}

impl DiffusionSeries {
    /// Writes `t, msd_mean, msd_stderr` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,msd_mean,msd_stderr")?;
        for (t, (m, s)) in self.msd_mean.iter().zip(&self.msd_stderr).enumerate() {
            writeln!(w, "{},{},{}", t, fmt_f64(*m), fmt_f64(*s))?;
        }
        Ok(())
    }
}
