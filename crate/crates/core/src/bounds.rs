//! Closed-form bounds on observing Lyapunov-rate fidelity decay.
//!
//! Three conditions carve out a triangle in the `(λ, Γ₀)` plane:
//!
//! 1. golden-rule decay must be faster than the Lyapunov rate, `Γ₀ > λ`;
//! 2. the kick must exceed the localization threshold, `λ ≥ λ_loc`;
//! 3. early decay plus `t_lyap` Lyapunov steps must finish above the late-time
//!    floor `a_late/N`, `Γ₀ ≤ (ln(N/a_late) - t_lyap λ) / t_early`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classical::lyapunov_exponent;
use crate::error::{Error, Result};
use crate::output::fmt_f64;

/// Empirical constants of the late-time-floor bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    /// Late-time decay starts at `f = a_late / N`.
    pub a_late: f64,
    /// Lyapunov steps required for a clear signature.
    pub t_lyap: f64,
    /// Duration of the early-time regime.
    pub t_early: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self {
            a_late: 2.0,
            t_lyap: 2.0,
            t_early: 2.0,
        }
    }
}

/// How `λ_loc` is obtained from the localization threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaMethod {
    /// `λ(K_loc)` from the exact Lyapunov formula.
    #[default]
    Exact,
    /// Third-order expansion in `N^{-1/5}`.
    Series3,
}

impl FromStr for LambdaMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Self::Exact),
            "series3" | "series" => Ok(Self::Series3),
            other => Err(Error::Usage(format!(
                "unknown method `{other}` (expected exact or series3)"
            ))),
        }
    }
}

impl fmt::Display for LambdaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::Series3 => "series3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KLocBranch {
    /// `K > 1`: `4.16 L N^{-1/2}`.
    Diffusive,
    /// `0 < K < 1`: `3.12 L^{4/5} N^{-2/5}`.
    Cantori,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KLoc {
    pub value: f64,
    pub branch: KLocBranch,
    /// False when neither branch lands in its own range of validity.
    pub self_consistent: bool,
}

fn check_sizes(states: usize, winding: u32) -> Result<()> {
    if states < 4 {
        return Err(Error::InvalidParams(format!(
            "N must be at least 4, got {states}"
        )));
    }
    if winding == 0 {
        return Err(Error::InvalidParams("winding L must be at least 1".into()));
    }
    Ok(())
}

/// Classical kick below which the quantum map localizes.
pub fn k_loc(states: usize, winding: u32) -> Result<KLoc> {
    check_sizes(states, winding)?;
    let n = states as f64;
    let l = f64::from(winding);
    let diffusive = 4.16 * l / n.sqrt();
    if diffusive > 1.0 {
        return Ok(KLoc {
            value: diffusive,
            branch: KLocBranch::Diffusive,
            self_consistent: true,
        });
    }
    let cantori = 3.12 * l.powf(0.8) * n.powf(-0.4);
    Ok(KLoc {
        value: cantori,
        branch: KLocBranch::Cantori,
        self_consistent: cantori < 1.0,
    })
}

/// Third-order series `1.77 L^{2/5}N^{-1/5} - 0.23 L^{6/5}N^{-3/5} + 2.43 L^{8/5}N^{-4/5}`.
pub fn lambda_loc_series3(states: usize, winding: u32) -> f64 {
    let n = states as f64;
    let l = f64::from(winding);
    1.77 * l.powf(0.4) * n.powf(-0.2) - 0.23 * l.powf(1.2) * n.powf(-0.6)
        + 2.43 * l.powf(1.6) * n.powf(-0.8)
}

/// Lyapunov exponent at the localization threshold.
pub fn lambda_loc(states: usize, winding: u32, method: LambdaMethod) -> Result<f64> {
    check_sizes(states, winding)?;
    match method {
        LambdaMethod::Exact => lyapunov_exponent(k_loc(states, winding)?.value),
        LambdaMethod::Series3 => Ok(lambda_loc_series3(states, winding)),
    }
}

/// Upper bound on `Γ₀` from the late-time-floor bound; negative means unsatisfiable.
pub fn gamma0_max(states: usize, lambda: f64, c: BoundConstants) -> f64 {
    ((states as f64 / c.a_late).ln() - c.t_lyap * lambda) / c.t_early
}

/// Right corner of the triangle, where `Γ₀ = λ` meets the late-time-floor bound.
pub fn lambda_star(states: usize, c: BoundConstants) -> f64 {
    (states as f64 / c.a_late).ln() / (c.t_early + c.t_lyap)
}

/// The triangular Lyapunov regime for one system size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeBounds {
    pub qubits: u32,
    pub states: usize,
    pub winding: u32,
    pub method: LambdaMethod,
    pub constants: BoundConstants,
    pub k_loc: KLoc,
    pub lambda_loc_exact: f64,
    pub lambda_loc_series3: f64,
    /// `λ_loc` for the selected method.
    pub lambda_loc: f64,
    pub lambda_star: f64,
    /// Late-time-floor bound evaluated at `λ_loc`: the largest admissible `Γ₀`.
    pub gamma0_max_at_corner: f64,
    /// `(λ, Γ₀)` vertices: lower-left, upper-left, right. Empty when the
    /// region is empty.
    pub vertices: Vec<(f64, f64)>,
    pub area: f64,
}

impl RegimeBounds {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Whether `(λ, Γ₀)` satisfies all three bounds.
    pub fn contains(&self, lambda: f64, gamma0: f64) -> bool {
        lambda >= self.lambda_loc
            && gamma0 >= lambda
            && gamma0 <= gamma0_max(self.states, lambda, self.constants)
    }
}

pub fn lyapunov_region(
    qubits: u32,
    winding: u32,
    method: LambdaMethod,
    constants: BoundConstants,
) -> Result<RegimeBounds> {
    if !(2..=62).contains(&qubits) {
        return Err(Error::InvalidParams(format!(
            "qubit count must be in 2..=62, got {qubits}"
        )));
    }
    let states = 1usize << qubits;
    let kl = k_loc(states, winding)?;
    let exact = lyapunov_exponent(kl.value)?;
    let series = lambda_loc_series3(states, winding);
    let lambda_loc = match method {
        LambdaMethod::Exact => exact,
        LambdaMethod::Series3 => series,
    };
    let star = lambda_star(states, constants);
    let top = gamma0_max(states, lambda_loc, constants);
    let (vertices, area) = if lambda_loc < star {
        let v = vec![(lambda_loc, lambda_loc), (lambda_loc, top), (star, star)];
        (v, 0.5 * (top - lambda_loc) * (star - lambda_loc))
    } else {
        (Vec::new(), 0.0)
    };
    Ok(RegimeBounds {
        qubits,
        states,
        winding,
        method,
        constants,
        k_loc: kl,
        lambda_loc_exact: exact,
        lambda_loc_series3: series,
        lambda_loc,
        lambda_star: star,
        gamma0_max_at_corner: top,
        vertices,
        area,
    })
}

/// Largest qubit count scanned by [`min_qubits`].
pub const MAX_SCAN_QUBITS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinQubits {
    /// `None` when no size up to [`MAX_SCAN_QUBITS`] has a nonempty region.
    pub n_min: Option<u32>,
    /// `(n, nonempty)` for `n = 2..=20`.
    pub table: Vec<(u32, bool)>,
}

/// Smallest register with a nonempty Lyapunov regime.
pub fn min_qubits(
    winding: u32,
    method: LambdaMethod,
    constants: BoundConstants,
) -> Result<MinQubits> {
    let mut table = Vec::new();
    for n in 2..=MAX_SCAN_QUBITS {
        let region = lyapunov_region(n, winding, method, constants)?;
        table.push((n, !region.is_empty()));
    }
    let n_min = table.iter().find(|(_, ok)| *ok).map(|(n, _)| *n);
    Ok(MinQubits { n_min, table })
}

/// Writes the regime table
/// `n, K_loc, lambda_loc_exact, lambda_loc_series3, lambda_star, gamma0_max_at_corner, region_area, nonempty`.
pub fn write_regime_csv<W: Write>(mut w: W, rows: &[RegimeBounds]) -> std::io::Result<()> {
    writeln!(
        w,
        "n,K_loc,lambda_loc_exact,lambda_loc_series3,lambda_star,gamma0_max_at_corner,region_area,nonempty"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.qubits,
            fmt_f64(r.k_loc.value),
            fmt_f64(r.lambda_loc_exact),
            fmt_f64(r.lambda_loc_series3),
            fmt_f64(r.lambda_star),
            fmt_f64(r.gamma0_max_at_corner),
            fmt_f64(r.area),
            !r.is_empty()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: BoundConstants = BoundConstants {
        a_late: 2.0,
        t_lyap: 2.0,
        t_early: 2.0,
    };

    #[test]
    fn k_loc_examples() {
        let six = k_loc(64, 1).unwrap();
        assert_eq!(six.branch, KLocBranch::Cantori);
        assert!((six.value - 0.5911).abs() < 1e-4);
        let ten = k_loc(1024, 1).unwrap();
        assert!((ten.value - 0.195).abs() < 1e-12);
        let three = k_loc(8, 1).unwrap();
        assert_eq!(three.branch, KLocBranch::Diffusive);
        assert!((three.value - 4.16 / 8f64.sqrt()).abs() < 1e-12);
        assert!(k_loc(2, 1).is_err());
    }

    #[test]
    fn branch_choice_is_self_consistent_across_sizes() {
        for l in 1..=5 {
            for n in 2..=20 {
                let k = k_loc(1 << n, l).unwrap();
                assert!(k.self_consistent, "n={n} L={l}");
            }
        }
    }

    #[test]
    fn lambda_loc_examples() {
        let exact = lambda_loc(64, 1, LambdaMethod::Exact).unwrap();
        assert!((exact - 0.7511).abs() < 1e-4, "{exact}");
        let series = lambda_loc(64, 1, LambdaMethod::Series3).unwrap();
        assert!((series - 0.8387).abs() < 1e-4, "{series}");
    }

    #[test]
    fn gamma0_max_examples() {
        let lam = lyapunov_exponent(std::f64::consts::FRAC_PI_2).unwrap();
        assert!((gamma0_max(8, lam, C) + 0.49).abs() < 0.02);
        let g6 = gamma0_max(64, lambda_loc_series3(64, 1), C);
        assert!((g6 - 0.894).abs() < 1e-3, "{g6}");
        assert_eq!(gamma0_max(64, 0.0, C), 32f64.ln() / 2.0);
    }

    #[test]
    fn region_examples() {
        let six = lyapunov_region(6, 1, LambdaMethod::Exact, C).unwrap();
        assert!(!six.is_empty());
        assert!((six.lambda_star - 0.8664).abs() < 1e-4);
        assert!((six.area - 0.0133).abs() < 1e-3, "{}", six.area);
        assert!(lyapunov_region(5, 1, LambdaMethod::Exact, C)
            .unwrap()
            .is_empty());
        assert!(lyapunov_region(5, 1, LambdaMethod::Series3, C)
            .unwrap()
            .is_empty());
        assert!(lyapunov_region(3, 1, LambdaMethod::Exact, C)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn min_qubits_examples() {
        for m in [LambdaMethod::Exact, LambdaMethod::Series3] {
            assert_eq!(min_qubits(1, m, C).unwrap().n_min, Some(6));
        }
        let two = min_qubits(2, LambdaMethod::Exact, C)
            .unwrap()
            .n_min
            .unwrap();
        assert!(two > 6);
    }

    #[test]
    fn method_parses() {
        assert_eq!(
            "series3".parse::<LambdaMethod>().unwrap(),
            LambdaMethod::Series3
        );
        assert_eq!(
            "EXACT".parse::<LambdaMethod>().unwrap(),
            LambdaMethod::Exact
        );
        assert!("quadratic".parse::<LambdaMethod>().is_err());
    }
}
