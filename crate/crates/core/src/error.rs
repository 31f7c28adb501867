use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Error)]
pub enum SolError {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("overflow: |z| = {z} exceeds the supported range")]
    Overflow { z: f64 },

    #[error("integrator failed at t = {t} (h = {h}, {steps} steps): {reason}")]
    Integrator {
        t: f64,
        h: f64,
        steps: usize,
        reason: &'static str,
    },

    #[error("no sign change of {what} on [{lo}, {hi}]")]
    NoSignChange { what: &'static str, lo: f64, hi: f64 },

    #[error("{what}: expected exactly one sign change, found {count} at {locations:?}")]
    SignChanges {
        what: &'static str,
        count: usize,
        locations: Vec<f64>,
    },

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SolError>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> SolError {
    SolError::Domain {
        op,
        detail: detail.into(),
    }
}
