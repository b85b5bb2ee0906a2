//! Decay-rate and localization observables extracted from fidelity traces and
//! momentum distributions.

use std::f64::consts::PI;

use serde::Serialize;

use crate::classical::diffusion_coefficient;
use crate::error::{Error, Result};
use crate::params::MapParams;
use crate::state::centered_label;
use crate::stats::linear_fit;

/// `Γ₀ = -(ln f(1) - ln f(0))`.
pub fn initial_decay_rate(f: &[f64]) -> Result<f64> {
    if f.len() < 2 {
        return Err(Error::InvalidParams("trace needs f(0) and f(1)".into()));
    }
    if !(f[1] > 0.0) {
        return Err(Error::FidelityFloor { t: 1, value: f[1] });
    }
    if !(f[0] > 0.0) {
        return Err(Error::FidelityFloor { t: 0, value: f[0] });
    }
    Ok(-(f[1].ln() - f[0].ln()))
}

/// `γ(t) = -(ln f(t+1) - ln f(t))` for `t = 0..len-1`; pairs touching a
/// non-positive fidelity are `None`.
pub fn stepwise_rates(f: &[f64]) -> Vec<Option<f64>> {
    f.windows(2)
        .map(|w| (w[0] > 0.0 && w[1] > 0.0).then(|| -(w[1].ln() - w[0].ln())))
        .collect()
}

/// Stepwise rates over an optional series (as produced by [`unfold`]).
pub fn stepwise_rates_opt(f: &[Option<f64>]) -> Vec<Option<f64>> {
    f.windows(2)
        .map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) if a > 0.0 && b > 0.0 => Some(-(b.ln() - a.ln())),
            _ => None,
        })
        .collect()
}

/// Removes the uniform-mixing floor: `f' = N/(N-1) (f - 1/N)`. Values that
/// fall to zero or below become `None`.
pub fn unfold(f: &[f64], states: usize) -> Result<Vec<Option<f64>>> {
    if states < 2 {
        return Err(Error::InvalidParams(format!(
            "unfolding needs N >= 2, got {states}"
        )));
    }
    let n = states as f64;
    Ok(f.iter()
        .map(|&v| {
            let u = n / (n - 1.0) * (v - 1.0 / n);
            (u > 0.0).then_some(u)
        })
        .collect())
}

/// Exponential `f(t) = exp(-γ (t - t₀))` fitted to the intermediate regime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpFit {
    pub gamma: f64,
    /// `None` when `γ = 0`.
    pub t0: Option<f64>,
    /// Step indices used in the fit.
    pub window: Vec<usize>,
    pub rms_residual: f64,
}

/// Steps in the intermediate regime: `t ≥ 2` and `f(t) > 2/N`, judged on the
/// raw trace.
pub fn intermediate_window(f: &[f64], states: usize) -> Vec<usize> {
    let floor = 2.0 / states as f64;
    (2..f.len()).filter(|&t| f[t] > floor).collect()
}

/// Unweighted least squares of `ln f` against `t` over the intermediate
/// window. With `use_unfolded` the unfolded values are fitted on the same
/// window (points the unfolding clips are dropped).
pub fn fit_intermediate_rate(f: &[f64], states: usize, use_unfolded: bool) -> Result<ExpFit> {
    let window = intermediate_window(f, states);
    let values: Vec<Option<f64>> = if use_unfolded {
        unfold(f, states)?
    } else {
        f.iter().map(|&v| (v > 0.0).then_some(v)).collect()
    };
    let used: Vec<usize> = window
        .into_iter()
        .filter(|&t| values[t].is_some())
        .collect();
    if used.len() < 2 {
        return Err(Error::Underconstrained { points: used.len() });
    }
    let x: Vec<f64> = used.iter().map(|&t| t as f64).collect();
    let y: Vec<f64> = used.iter().map(|&t| values[t].unwrap().ln()).collect();
    let line = linear_fit(&x, &y).ok_or(Error::Underconstrained { points: used.len() })?;
    let gamma = -line.slope;
    Ok(ExpFit {
        gamma,
        t0: (gamma != 0.0).then(|| line.intercept / gamma),
        window: used,
        rms_residual: line.rms_residual,
    })
}

/// All rate observables for one trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRates {
    pub gamma0: Option<f64>,
    pub gamma_stepwise: Vec<Option<f64>>,
    /// `Err` carries the reason the fit could not be made.
    #[serde(skip)]
    pub fit: std::result::Result<ExpFit, String>,
    /// Number of points in the intermediate window.
    pub fit_points: usize,
}

impl DecayRates {
    pub fn analyze(f: &[f64], states: usize, use_unfolded: bool) -> Result<Self> {
        let unfolded = if use_unfolded {
            Some(unfold(f, states)?)
        } else {
            None
        };
        let gamma_stepwise = match &unfolded {
            Some(u) => stepwise_rates_opt(u),
            None => stepwise_rates(f),
        };
        let fit = fit_intermediate_rate(f, states, use_unfolded).map_err(|e| e.to_string());
        let fit_points = match &fit {
            Ok(fit) => fit.window.len(),
            Err(_) => intermediate_window(f, states).len(),
        };
        Ok(Self {
            gamma0: initial_decay_rate(f).ok(),
            gamma_stepwise,
            fit,
            fit_points,
        })
    }

    pub fn gamma_at(&self, t: usize) -> Option<f64> {
        self.gamma_stepwise.get(t).copied().flatten()
    }

    pub fn gamma_fit(&self) -> Option<f64> {
        self.fit.as_ref().ok().map(|f| f.gamma)
    }
}

/// Golden-rule constant `C = Γ₀ / σ²` from one measurement.
pub fn golden_rule_constant(sigma: f64, gamma0: f64) -> f64 {
    gamma0 / (sigma * sigma)
}

/// Localization length `ℓ ≈ D_K / ħ²`.
pub fn localization_length_theory(params: &MapParams) -> Result<f64> {
    let d = diffusion_coefficient(params.kick_classical)?;
    Ok(d / (params.hbar * params.hbar))
}

/// Same quantity written in the quantum kick: `(π²/3) k²` for `K ≥ 1`,
/// `3.3 k^{5/2} (2πL/N)^{1/2}` below.
pub fn localization_length_from_quantum_kick(params: &MapParams) -> Result<f64> {
    if !(params.kick_classical > 0.0) {
        return Err(Error::Domain {
            quantity: "localization length",
            requirement: "K > 0",
            value: params.kick_classical,
        });
    }
    let k = params.kick_quantum;
    Ok(if params.kick_classical >= 1.0 {
        PI * PI / 3.0 * k * k
    } else {
        3.3 * k.powf(2.5) * (2.0 * PI * f64::from(params.winding) / params.states as f64).sqrt()
    })
}

/// Minimum probability for a bin to enter the profile fit.
pub const PROFILE_FLOOR: f64 = 1e-6;

/// Fits `P_p ∝ exp(-2|p - p0|/ℓ)` by least squares on `ln P_p` over bins above
/// [`PROFILE_FLOOR`]; `probabilities` is indexed by storage position.
pub fn fit_localization_length(probabilities: &[f64], p0: i64) -> Result<f64> {
    let n = probabilities.len();
    let (x, y): (Vec<f64>, Vec<f64>) = probabilities
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > PROFILE_FLOOR)
        .map(|(i, &p)| ((centered_label(i, n) - p0).abs() as f64, p.ln()))
        .unzip();
    let line = linear_fit(&x, &y).ok_or(Error::Underconstrained { points: x.len() })?;
    // a flat profile can leave a rounding-level slope of either sign
    if line.slope > -1e-12 {
        return Err(Error::Delocalized { slope: line.slope });
    }
    Ok(-2.0 / line.slope)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalizationEstimate {
    pub ell_theory: f64,
    pub ell_fit: f64,
    /// Heisenberg time, `τ_H ≈ ℓ`.
    pub tau_h: f64,
}
