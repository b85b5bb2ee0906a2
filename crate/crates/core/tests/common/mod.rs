//! Dense-matrix oracle shared by the engine tests and the acceptance run.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qsm_chaos::state::centered_label;
use qsm_chaos::{Basis, MapParams, QuantumState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Matrix = Vec<Vec<Complex64>>;

pub fn random_state(states: usize, seed: u64) -> QuantumState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..states)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    QuantumState::from_amplitudes(amps, Basis::Position)
        .unwrap()
        .normalized()
}

/// `F[p][q] = exp(-2πi p q / N) / √N` on centered labels.
pub fn dft_matrix(states: usize) -> Matrix {
    let scale = 1.0 / (states as f64).sqrt();
    (0..states)
        .map(|a| {
            let p = centered_label(a, states) as f64;
            (0..states)
                .map(|j| {
                    let q = centered_label(j, states) as f64;
                    Complex64::cis(-2.0 * PI * p * q / states as f64) * scale
                })
                .collect()
        })
        .collect()
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn apply(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn adjoint(m: &Matrix) -> Matrix {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| m[j][i].conj()).collect())
        .collect()
}

fn diagonal(d: Vec<Complex64>) -> Matrix {
    let n = d.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        d[i]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

/// Dense `F† U_kin F U_pot` in the position basis.
pub fn dense_step(params: &MapParams, zeta: f64) -> Matrix {
    let n = params.states;
    let beta = 2.0 * PI / n as f64;
    let pot = diagonal(
        (0..n)
            .map(|j| {
                let x = beta * centered_label(j, n) as f64;
                Complex64::cis((params.kick_quantum + zeta) * x * x / 2.0)
            })
            .collect(),
    );
    let kin = diagonal(
        (0..n)
            .map(|a| {
                let p = centered_label(a, n) as f64;
                Complex64::cis(-params.hbar * p * p / 2.0)
            })
            .collect(),
    );
    let f = dft_matrix(n);
    matmul(&adjoint(&f), &matmul(&kin, &matmul(&f, &pot)))
}

pub fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
