//! State vectors over the centered position/momentum bases and the unitary
//! transform between them.
//!
//! Indices are stored as `0..N` and represent the centered labels
//! `p, q = index - N/2 ∈ [-N/2, N/2)`. The transform convention is
//!
//! ```text
//! ⟨p|ψ⟩ = N^{-1/2} Σ_q exp(-2πi p q / N) ⟨q|ψ⟩
//! ```
//!
//! With `p = a - N/2`, `q = j - N/2` the kernel factors into
//! `exp(-2πi a j / N) (-1)^a (-1)^j (-1)^{N/2}`, so a standard FFT between two
//! sign flips realizes it.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Position,
    Momentum,
}

impl Basis {
    fn name(self) -> &'static str {
        match self {
            Basis::Position => "position",
            Basis::Momentum => "momentum",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Centered label of storage index `i` in a basis of size `n`.
pub fn centered_label(i: usize, n: usize) -> i64 {
    i as i64 - (n / 2) as i64
}

/// Storage index of centered label `label`, if it is in range.
pub fn storage_index(label: i64, n: usize) -> Option<usize> {
    let i = label + (n / 2) as i64;
    (0..n as i64).contains(&i).then_some(i as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    basis: Basis,
}

impl QuantumState {
    /// Wraps raw amplitudes. Normalization is the caller's responsibility;
    /// see [`QuantumState::normalized`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, basis: Basis) -> Result<Self> {
        let n = amplitudes.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidParams(format!(
                "state length must be a power of two >= 2, got {n}"
            )));
        }
        Ok(Self { amplitudes, basis })
    }

    /// Scales the amplitudes to unit norm.
    pub fn normalized(mut self) -> Self {
        let norm = self.norm_sqr().sqrt();
        for a in &mut self.amplitudes {
            *a /= norm;
        }
        self
    }

    /// The eigenstate with centered label `label` in `basis`.
    pub fn eigenstate(states: usize, label: i64, basis: Basis) -> Result<Self> {
        let idx = storage_index(label, states).ok_or_else(|| {
            Error::InvalidParams(format!(
                "label {label} outside [-{}, {})",
                states / 2,
                states / 2
            ))
        })?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); states];
        amplitudes[idx] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(amplitudes, basis)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`; both states must be in the same basis.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                expected: self.basis.name(),
                actual: other.basis.name(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Converts into the momentum basis.
    pub fn to_momentum(&mut self, fourier: &CenteredFourier) -> Result<()> {
        self.expect_basis(Basis::Position)?;
        fourier.forward(&mut self.amplitudes);
        self.basis = Basis::Momentum;
        Ok(())
    }

    /// Converts into the position basis.
    pub fn to_position(&mut self, fourier: &CenteredFourier) -> Result<()> {
        self.expect_basis(Basis::Momentum)?;
        fourier.inverse(&mut self.amplitudes);
        self.basis = Basis::Position;
        Ok(())
    }

    /// Returns the state in `basis`, transforming if needed.
    pub fn in_basis(&self, basis: Basis, fourier: &CenteredFourier) -> QuantumState {
        let mut s = self.clone();
        match (self.basis, basis) {
            (Basis::Position, Basis::Momentum) => fourier.forward(&mut s.amplitudes),
            (Basis::Momentum, Basis::Position) => fourier.inverse(&mut s.amplitudes),
            _ => {}
        }
        s.basis = basis;
        s
    }

    fn expect_basis(&self, expected: Basis) -> Result<()> {
        if self.basis == expected {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected: expected.name(),
                actual: self.basis.name(),
            })
        }
    }
}

/// Planned centered DFT pair for one basis size.
#[derive(Clone)]
pub struct CenteredFourier {
    states: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `(-1)^{N/2} / sqrt(N)`
    scale: f64,
}

impl fmt::Debug for CenteredFourier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CenteredFourier")
            .field("states", &self.states)
            .finish()
    }
}

impl CenteredFourier {
    pub fn new(states: usize) -> Self {
        let mut planner = FftPlanner::new();
        let sign = if (states / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        Self {
            states,
            forward: planner.plan_fft_forward(states),
            inverse: planner.plan_fft_inverse(states),
            scale: sign / (states as f64).sqrt(),
        }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    /// Position amplitudes → momentum amplitudes, in place.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.apply(buf, &*self.forward);
    }

    /// Momentum amplitudes → position amplitudes, in place.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.apply(buf, &*self.inverse);
    }

    fn apply(&self, buf: &mut [Complex64], fft: &dyn Fft<f64>) {
        assert_eq!(buf.len(), self.states, "buffer length does not match plan");
        flip_odd(buf);
        fft.process(buf);
        flip_odd(buf);
        for a in buf.iter_mut() {
            *a *= self.scale;
        }
    }
}

fn flip_odd(buf: &mut [Complex64]) {
    for a in buf.iter_mut().skip(1).step_by(2) {
        *a = -*a;
    }
}

/// `P_p = |⟨p|ψ⟩|²` indexed by storage position.
pub fn momentum_distribution(state: &QuantumState, fourier: &CenteredFourier) -> Vec<f64> {
    state
        .in_basis(Basis::Momentum, fourier)
        .amplitudes
        .iter()
        .map(|a| a.norm_sqr())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_centered() {
        assert_eq!(centered_label(0, 8), -4);
        assert_eq!(centered_label(7, 8), 3);
        assert_eq!(storage_index(0, 8), Some(4));
        assert_eq!(storage_index(4, 8), None);
        assert_eq!(storage_index(-4, 8), Some(0));
    }

    #[test]
    fn uniform_position_state_is_zero_momentum() {
        for states in [2, 4, 16] {
            let amp = Complex64::new(1.0 / (states as f64).sqrt(), 0.0);
            let mut s = QuantumState::from_amplitudes(vec![amp; states], Basis::Position).unwrap();
            s.to_momentum(&CenteredFourier::new(states)).unwrap();
            let zero = storage_index(0, states).unwrap();
            for (i, a) in s.amplitudes().iter().enumerate() {
                let expect = if i == zero { 1.0 } else { 0.0 };
                assert!(
                    (a - Complex64::new(expect, 0.0)).norm() < 1e-14,
                    "N={states} i={i}"
                );
            }
        }
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let f = CenteredFourier::new(4);
        let mut s = QuantumState::eigenstate(4, 0, Basis::Momentum).unwrap();
        assert!(matches!(
            s.to_momentum(&f),
            Err(Error::BasisMismatch { .. })
        ));
        let p = QuantumState::eigenstate(4, 0, Basis::Position).unwrap();
        assert!(s.inner(&p).is_err());
    }

    #[test]
    fn momentum_distribution_of_eigenstate() {
        let f = CenteredFourier::new(8);
        let s = QuantumState::eigenstate(8, 0, Basis::Momentum).unwrap();
        let p = momentum_distribution(&s, &f);
        assert_eq!(p[4], 1.0);
        assert_eq!(p.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(
            QuantumState::from_amplitudes(vec![Complex64::new(1.0, 0.0); 6], Basis::Position)
                .is_err()
        );
        assert!(QuantumState::eigenstate(8, 4, Basis::Momentum).is_err());
    }
}
