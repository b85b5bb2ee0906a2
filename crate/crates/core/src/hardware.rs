//! Per-gate error requirements for reaching the Lyapunov regime on named
//! hardware platforms.
//!
//! The required reduction in two-qubit gate error is the product
//! `r = a_decay · b_depth · c_crosstalk`: the drop in initial decay rate needed
//! to enter the regime, the growth in circuit depth, and the growth in
//! crosstalk, each relative to a measured reference run on `n_ref` qubits.
//! Platform constants live in TOML profiles (see `profiles/`).

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{gamma0_max, lambda_loc, lyapunov_region, BoundConstants, LambdaMethod};
use crate::error::{Error, Result};
use crate::output::fmt_f64;

/// Per-gate error implied by a one-step decay rate over `G` gate layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateError {
    /// `1 - exp(-Γ₀/G)`
    pub exact: f64,
    /// `Γ₀/G`
    pub linearized: f64,
}

/// Inverts `f(1) = exp(-Γ₀) = (1 - ε)^G` for `ε`.
pub fn epsilon_from_gamma0(gamma0: f64, gate_depth: f64) -> Result<GateError> {
    if !(gate_depth >= 1.0) {
        return Err(Error::Domain {
            quantity: "gate error",
            requirement: "G >= 1",
            value: gate_depth,
        });
    }
    if !(gamma0 >= 0.0) {
        return Err(Error::Domain {
            quantity: "gate error",
            requirement: "Γ₀ >= 0",
            value: gamma0,
        });
    }
    let x = gamma0 / gate_depth;
    Ok(GateError {
        exact: -(-x).exp_m1(),
        linearized: x,
    })
}

/// Effective per-gate error that explains a fidelity shortfall:
/// solves `f_pred / f_obs = ((1 - ε_reported) / (1 - ε))^gates`.
pub fn infer_effective_error(
    f_predicted: f64,
    f_observed: f64,
    gates: u32,
    eps_reported: f64,
) -> Result<f64> {
    if gates == 0 {
        return Err(Error::InvalidParams("gate count must be at least 1".into()));
    }
    if !(f_observed > 0.0 && f_predicted <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "fidelities must satisfy 0 < f_obs and f_pred <= 1, got {f_observed}, {f_predicted}"
        )));
    }
    if f_observed > f_predicted {
        return Err(Error::NoExcessError {
            predicted: f_predicted,
            observed: f_observed,
        });
    }
    let per_gate = (f_predicted / f_observed).powf(1.0 / f64::from(gates));
    Ok(1.0 - (1.0 - eps_reported) / per_gate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Best,
    Worst,
    /// Present-day hardware, used to estimate today's decay rate.
    Current,
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "best" => Ok(Self::Best),
            "worst" => Ok(Self::Worst),
            "current" => Ok(Self::Current),
            _ => Err(Error::UnknownScenario(s.to_string())),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Best => "best",
            Self::Worst => "worst",
            Self::Current => "current",
        })
    }
}

/// A best/worst pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub best: f64,
    pub worst: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Baseline {
    Single(f64),
    Range(Range),
}

impl Baseline {
    pub fn get(&self, scenario: Scenario) -> f64 {
        match (self, scenario) {
            (Baseline::Single(v), _) => *v,
            (Baseline::Range(r), Scenario::Worst) => r.worst,
            (Baseline::Range(r), _) => r.best,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parallelism {
    /// Depth equals gate count.
    #[default]
    None,
    /// Two-qubit gates run in pairs: depth divided by `n/2`.
    Pairs,
    /// Fully parallel: depth divided by `n`.
    Full,
}

/// Depth growth `b(n) = (n/n_ref)^exponent / (connectivity_gain · parallel(n))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DepthModel {
    pub exponent: f64,
    #[serde(default = "one")]
    pub connectivity_gain: f64,
    #[serde(default)]
    pub parallel: Parallelism,
}

fn one() -> f64 {
    1.0
}

impl DepthModel {
    pub fn factor(&self, n: u32, n_ref: u32) -> f64 {
        let nf = f64::from(n);
        let divisor = match self.parallel {
            Parallelism::None => 1.0,
            Parallelism::Pairs => nf / 2.0,
            Parallelism::Full => nf,
        };
        (nf / f64::from(n_ref)).powf(self.exponent) / (self.connectivity_gain * divisor)
    }
}

/// Crosstalk growth per gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CrosstalkModel {
    /// Independent of `n`.
    Constant { value: f64 },
    /// All-to-all chip of `n` qubits: `(n - 2) / ref_neighbors`.
    AllToAll { ref_neighbors: f64 },
}

impl CrosstalkModel {
    pub fn factor(&self, n: u32) -> f64 {
        match *self {
            CrosstalkModel::Constant { value } => value,
            CrosstalkModel::AllToAll { ref_neighbors } => (f64::from(n) - 2.0) / ref_neighbors,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerScenario<T> {
    pub best: T,
    pub worst: T,
    pub current: T,
}

impl<T: Copy> PerScenario<T> {
    pub fn get(&self, s: Scenario) -> T {
        match s {
            Scenario::Best => self.best,
            Scenario::Worst => self.worst,
            Scenario::Current => self.current,
        }
    }
}

/// Free-text description of a scenario's assumptions.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioNotes {
    #[serde(default)]
    pub connectivity: String,
    #[serde(default)]
    pub parallelization: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareProfile {
    pub name: String,
    /// Qubit count of the reference measurement.
    pub n_ref: u32,
    /// Initial decay rate measured (or estimated) at `n_ref`.
    pub gamma0_ref: Baseline,
    /// Vendor-reported two-qubit gate error.
    pub eps_reported: f64,
    /// Two-qubit gate depth of the reference circuit.
    pub gate_depth_ref: f64,
    #[serde(default = "default_winding")]
    pub winding: u32,
    pub gate_depth: PerScenario<DepthModel>,
    pub crosstalk: PerScenario<CrosstalkModel>,
    #[serde(default)]
    pub scenarios: Option<ScenarioDescriptions>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDescriptions {
    #[serde(default)]
    pub best: ScenarioNotes,
    #[serde(default)]
    pub worst: ScenarioNotes,
    #[serde(default)]
    pub current: ScenarioNotes,
}

fn default_winding() -> u32 {
    1
}

const IBM_Q: &str = include_str!("../profiles/ibmq.toml");
const IONQ: &str = include_str!("../profiles/ionq.toml");

impl HardwareProfile {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let profile: Self = toml::from_str(text).map_err(|e| Error::Profile {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        profile.validate().map_err(|message| Error::Profile {
            path: origin.to_path_buf(),
            message,
        })?;
        Ok(profile)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text, path)
    }

    pub fn ibm_q() -> Self {
        Self::parse(IBM_Q, Path::new("profiles/ibmq.toml")).expect("shipped profile parses")
    }

    pub fn ionq() -> Self {
        Self::parse(IONQ, Path::new("profiles/ionq.toml")).expect("shipped profile parses")
    }

    /// Both shipped profiles.
    pub fn builtin() -> Vec<Self> {
        vec![Self::ibm_q(), Self::ionq()]
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.n_ref < 2 {
            return Err(format!("n_ref must be at least 2, got {}", self.n_ref));
        }
        if !(self.gate_depth_ref >= 1.0) {
            return Err(format!(
                "gate_depth_ref must be >= 1, got {}",
                self.gate_depth_ref
            ));
        }
        for s in [Scenario::Best, Scenario::Worst, Scenario::Current] {
            if !(self.gamma0_ref.get(s) > 0.0) {
                return Err(format!("gamma0_ref ({s}) must be positive"));
            }
            let d = self.gate_depth.get(s);
            if !(d.exponent >= 0.0 && d.connectivity_gain > 0.0) {
                return Err(format!(
                    "gate_depth.{s} needs exponent >= 0 and connectivity_gain > 0"
                ));
            }
        }
        if self.winding == 0 {
            return Err("winding must be at least 1".into());
        }
        Ok(())
    }

    fn check_target(&self, n: u32) -> Result<()> {
        if n < self.n_ref {
            return Err(Error::InvalidParams(format!(
                "{}: target n = {n} is below the reference size {}",
                self.name, self.n_ref
            )));
        }
        Ok(())
    }

    /// Two-qubit gate depth `G(n)`.
    pub fn gate_depth_at(&self, n: u32, scenario: Scenario) -> Result<f64> {
        Ok(self.gate_depth_ref * self.b_depth(n, scenario)?)
    }

    /// Largest admissible initial decay rate at `n` qubits (the late-time-floor bound at the
    /// localization edge).
    pub fn gamma0_max(&self, n: u32, method: LambdaMethod) -> Result<f64> {
        let region = lyapunov_region(n, self.winding, method, BoundConstants::default())?;
        if region.is_empty() {
            return Err(Error::InvalidParams(format!(
                "the Lyapunov regime is empty at n = {n} ({method})"
            )));
        }
        let states = 1usize << n;
        let g = gamma0_max(
            states,
            lambda_loc(states, self.winding, method)?,
            BoundConstants::default(),
        );
        if !(g > 0.0) {
            return Err(Error::Domain {
                quantity: "a_decay",
                requirement: "Γ₀^max > 0",
                value: g,
            });
        }
        Ok(g)
    }

    /// Required drop of the initial decay rate, `Γ₀_ref / Γ₀^max(n)`.
    pub fn a_decay(&self, n: u32, scenario: Scenario, method: LambdaMethod) -> Result<f64> {
        self.check_target(n)?;
        Ok(self.gamma0_ref.get(scenario) / self.gamma0_max(n, method)?)
    }

    /// Growth of gate depth from `n_ref` to `n`; exactly 1 at `n_ref`.
    pub fn b_depth(&self, n: u32, scenario: Scenario) -> Result<f64> {
        self.check_target(n)?;
        if n == self.n_ref {
            return Ok(1.0);
        }
        Ok(self.gate_depth.get(scenario).factor(n, self.n_ref))
    }

    /// Growth of crosstalk error per gate from `n_ref` to `n`; exactly 1 at `n_ref`.
    pub fn c_crosstalk(&self, n: u32, scenario: Scenario) -> Result<f64> {
        self.check_target(n)?;
        if n == self.n_ref {
            return Ok(1.0);
        }
        Ok(self.crosstalk.get(scenario).factor(n))
    }

    pub fn reduction_factor(&self, n: u32, method: LambdaMethod) -> Result<ReductionReport> {
        let pair = |f: &dyn Fn(Scenario) -> Result<f64>| -> Result<Range> {
            Ok(Range {
                best: f(Scenario::Best)?,
                worst: f(Scenario::Worst)?,
            })
        };
        let a = pair(&|s| self.a_decay(n, s, method))?;
        let b = pair(&|s| self.b_depth(n, s))?;
        let c = pair(&|s| self.c_crosstalk(n, s))?;
        Ok(ReductionReport {
            profile: self.name.clone(),
            n,
            a,
            b,
            c,
            r: Range {
                best: a.best * b.best * c.best,
                worst: a.worst * b.worst * c.worst,
            },
        })
    }

    /// Present-day initial decay rate extrapolated to `n` qubits with the
    /// `current` depth and crosstalk models, for each baseline endpoint.
    pub fn current_gamma0_estimate(&self, n: u32) -> Result<Range> {
        let growth =
            self.b_depth(n, Scenario::Current)? * self.c_crosstalk(n, Scenario::Current)?;
        Ok(Range {
            best: self.gamma0_ref.get(Scenario::Best) * growth,
            worst: self.gamma0_ref.get(Scenario::Worst) * growth,
        })
    }
}

/// Required error-reduction factors for one profile and register size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub profile: String,
    pub n: u32,
    pub a: Range,
    pub b: Range,
    pub c: Range,
    pub r: Range,
}

/// Rounds to `digits` significant figures (presentation only).
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(digits - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

/// Writes `profile, n, a_best, a_worst, b_best, b_worst, c_best, c_worst, r_best, r_worst`.
pub fn write_reduction_csv<W: Write>(mut w: W, rows: &[ReductionReport]) -> std::io::Result<()> {
    writeln!(
        w,
        "profile,n,a_best,a_worst,b_best,b_worst,c_best,c_worst,r_best,r_worst"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.profile,
            r.n,
            fmt_f64(r.a.best),
            fmt_f64(r.a.worst),
            fmt_f64(r.b.best),
            fmt_f64(r.b.worst),
            fmt_f64(r.c.best),
            fmt_f64(r.c.worst),
            fmt_f64(r.r.best),
            fmt_f64(r.r.worst)
        )?;
    }
    Ok(())
}

/// Loads profiles from files, or the shipped ones when `paths` is empty.
pub fn load_profiles(paths: &[PathBuf]) -> Result<Vec<HardwareProfile>> {
    if paths.is_empty() {
        return Ok(HardwareProfile::builtin());
    }
    paths.iter().map(|p| HardwareProfile::load(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_examples() {
        let e = epsilon_from_gamma0(1.4, 29.0).unwrap();
        assert!((e.exact - 0.0471).abs() < 1e-4);
        assert!((e.linearized - 0.048).abs() < 5e-4);
        assert_eq!(epsilon_from_gamma0(0.0, 10.0).unwrap().exact, 0.0);
        let e = epsilon_from_gamma0(0.01, 100.0).unwrap();
        assert!((e.exact - e.linearized).abs() / e.exact < 0.01 / 100.0);
        assert!(epsilon_from_gamma0(1.0, 0.5).is_err());
    }

    #[test]
    fn inferred_error_examples() {
        let e = infer_effective_error(0.55, 0.35, 10, 0.025).unwrap();
        assert!((e - 0.068).abs() < 1e-3, "{e}");
        assert!((infer_effective_error(0.5, 0.5, 7, 0.025).unwrap() - 0.025).abs() < 1e-15);
        let e20 = infer_effective_error(0.55, 0.35, 20, 0.025).unwrap();
        assert!((e20 - 0.04679).abs() < 1e-5, "{e20}");
        assert!(matches!(
            infer_effective_error(0.35, 0.55, 10, 0.025),
            Err(Error::NoExcessError { .. })
        ));
    }

    #[test]
    fn ionq_baseline_matches_its_derivation() {
        let p = HardwareProfile::ionq();
        let eps = infer_effective_error(0.55, 0.35, 10, 0.025).unwrap();
        assert!((p.gamma0_ref.get(Scenario::Best) - 17.0 * eps).abs() < 1e-4);
        assert!((p.gamma0_ref.get(Scenario::Worst) - 17.0 * 5.0 * 0.025).abs() < 1e-12);
    }

    #[test]
    fn ibm_factors_at_six() {
        let p = HardwareProfile::ibm_q();
        let m = LambdaMethod::Series3;
        assert!((p.a_decay(6, Scenario::Best, m).unwrap() - 1.4 / 0.894).abs() < 0.01);
        assert_eq!(p.b_depth(6, Scenario::Worst).unwrap(), 8.0);
        assert!((p.b_depth(6, Scenario::Best).unwrap() - 4.0 / 5.1).abs() < 1e-12);
        assert_eq!(p.c_crosstalk(6, Scenario::Worst).unwrap(), 1.0);
        assert_eq!(p.c_crosstalk(6, Scenario::Best).unwrap(), 2.0);
        let cur = p.current_gamma0_estimate(6).unwrap();
        assert!((cur.best - 1.4 * 8.0 / 3.0).abs() < 1e-12);
        assert_eq!(p.current_gamma0_estimate(3).unwrap().best, 1.4);
    }

    #[test]
    fn ionq_factors_at_six() {
        let p = HardwareProfile::ionq();
        assert!((p.b_depth(6, Scenario::Best).unwrap() - 4.0 / 6.0).abs() < 1e-12);
        assert_eq!(p.b_depth(6, Scenario::Worst).unwrap(), 4.0);
        assert_eq!(p.c_crosstalk(6, Scenario::Best).unwrap(), 1.0);
        let a = p.a_decay(6, Scenario::Best, LambdaMethod::Series3).unwrap();
        assert!((a - 1.3).abs() < 0.01, "{a}");
        let cur = p.current_gamma0_estimate(3).unwrap();
        assert!((cur.best - 1.16).abs() < 0.005);
    }

    #[test]
    fn a_decay_needs_nonempty_regime() {
        let p = HardwareProfile::ibm_q();
        assert!(p.a_decay(5, Scenario::Best, LambdaMethod::Series3).is_err());
        assert!(p.a_decay(2, Scenario::Best, LambdaMethod::Series3).is_err());
    }

    #[test]
    fn scenario_names() {
        assert_eq!("Worst".parse::<Scenario>().unwrap(), Scenario::Worst);
        assert!(matches!(
            "typical".parse::<Scenario>(),
            Err(Error::UnknownScenario(_))
        ));
    }

    #[test]
    fn rounding_for_presentation() {
        assert_eq!(round_sig(2.4557, 2), 2.5);
        assert_eq!(round_sig(12.52, 2), 13.0);
        assert_eq!(round_sig(0.8629, 2), 0.86);
    }
}
