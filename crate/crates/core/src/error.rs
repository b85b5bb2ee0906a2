use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulation and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{quantity} requires {requirement}, got {value}")]
    Domain {
        quantity: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("state is in the {actual} basis, expected {expected}")]
    BasisMismatch {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("fidelity f({t}) = {value} is not positive; unfold the trace or add realizations")]
    FidelityFloor { t: usize, value: f64 },

    #[error("fit is underconstrained: {points} qualifying point(s), need at least 2")]
    Underconstrained { points: usize },

    #[error("momentum profile is delocalized (log-slope {slope} >= 0, infinite length)")]
    Delocalized { slope: f64 },

    #[error(
        "no error inflation to infer: observed fidelity {observed} exceeds predicted {predicted}"
    )]
    NoExcessError { predicted: f64, observed: f64 },

    #[error("unknown scenario `{0}` (expected best, worst or current)")]
    UnknownScenario(String),

    #[error("profile {path}: {message}")]
    Profile { path: PathBuf, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
