use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported register; the state holds `2^n` amplitudes.
pub const MAX_QUBITS: u32 = 14;

/// Which of the two kick strengths is given; the other follows from `K = k ħ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Kick {
    /// Classical kick `K`.
    Classical(f64),
    /// Quantum kick `k`.
    Quantum(f64),
}

/// Parameters of the quantum sawtooth map on `n` qubits.
///
/// Planck's constant is fixed by the torus winding, `ħ = 2πL/N`, and the
/// classical and quantum kicks are tied by `K = k ħ`. When `K/L` is an integer
/// the propagator degenerates into a quantum cat map, which is flagged but
/// allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub qubits: u32,
    pub states: usize,
    pub winding: u32,
    pub hbar: f64,
    pub kick_classical: f64,
    pub kick_quantum: f64,
    pub cat_map: bool,
}

impl MapParams {
    pub fn new(qubits: u32, winding: u32, kick: Kick) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::InvalidParams(format!(
                "qubit count must be in 1..={MAX_QUBITS}, got {qubits}"
            )));
        }
        if winding == 0 {
            return Err(Error::InvalidParams("winding L must be at least 1".into()));
        }
        let states = 1usize << qubits;
        let hbar = 2.0 * PI * f64::from(winding) / states as f64;
        let (kick_classical, kick_quantum) = match kick {
            Kick::Classical(k) => (k, k / hbar),
            Kick::Quantum(k) => (k * hbar, k),
        };
        if !(kick_classical > 0.0) || !kick_classical.is_finite() {
            return Err(Error::InvalidParams(format!(
                "kick must be positive and finite, got K = {kick_classical}"
            )));
        }
        let ratio = kick_classical / f64::from(winding);
        let cat_map = (ratio - ratio.round()).abs() < 1e-9;
        Ok(Self {
            qubits,
            states,
            winding,
            hbar,
            kick_classical,
            kick_quantum,
            cat_map,
        })
    }

    /// Like [`MapParams::new`] but rejects an even winding, which lets `L/N`
    /// simplify and spoils the pseudorandom kick phases.
    pub fn new_strict(qubits: u32, winding: u32, kick: Kick) -> Result<Self> {
        if winding.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "even winding L = {winding} degrades the chaotic dynamics"
            )));
        }
        Self::new(qubits, winding, kick)
    }

    /// Angular grid spacing `β = 2π/N`.
    pub fn beta(&self) -> f64 {
        2.0 * PI / self.states as f64
    }

    /// Human-readable warnings about degenerate parameter choices.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.cat_map {
            w.push(format!(
                "K/L = {} is an integer: the map is a quantum cat map with periodic dynamics",
                self.kick_classical / f64::from(self.winding)
            ));
        }
        if self.winding.is_multiple_of(2) {
            w.push(format!(
                "even winding L = {} reduces kick-phase pseudorandomness",
                self.winding
            ));
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_qubits_quantum_kick() {
        let p = MapParams::new(3, 1, Kick::Quantum(2.0)).unwrap();
        assert_eq!(p.states, 8);
        assert!((p.hbar - PI / 4.0).abs() < 1e-15);
        assert!((p.kick_classical - PI / 2.0).abs() < 1e-15);
        assert!(!p.cat_map);
    }

    #[test]
    fn six_qubits_classical_kick() {
        let p = MapParams::new(6, 1, Kick::Classical(0.6)).unwrap();
        assert!((p.hbar - 0.098_174_770_424_681).abs() < 1e-12);
        assert!((p.kick_quantum - 6.111_549_814_728_616).abs() < 1e-9);
        assert_eq!(p.kick_classical, 0.6);
        assert!((p.kick_quantum * p.hbar - p.kick_classical).abs() < 1e-15);
    }

    #[test]
    fn cat_map_is_a_warning() {
        let p = MapParams::new(4, 1, Kick::Classical(2.0)).unwrap();
        assert!(p.cat_map);
        assert_eq!(p.warnings().len(), 1);
    }

    #[test]
    fn strict_mode_rejects_even_winding() {
        assert!(MapParams::new(4, 2, Kick::Classical(0.7)).is_ok());
        assert!(MapParams::new_strict(4, 2, Kick::Classical(0.7)).is_err());
        assert!(MapParams::new_strict(4, 3, Kick::Classical(0.7)).is_ok());
    }

    #[test]
    fn invalid_inputs() {
        assert!(MapParams::new(0, 1, Kick::Classical(1.0)).is_err());
        assert!(MapParams::new(15, 1, Kick::Classical(1.0)).is_err());
        assert!(MapParams::new(3, 0, Kick::Classical(1.0)).is_err());
        assert!(MapParams::new(3, 1, Kick::Quantum(-1.0)).is_err());
    }
}
