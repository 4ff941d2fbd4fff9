use num_complex::Complex64;
use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no sign change bracketing root {index} for p = {p}")]
    BracketFailure { index: usize, p: f64 },

    #[error("sigma has a pole at t = p (t = {t})")]
    PoleAtP { t: Complex64 },

    #[error("z = {z} lies within 1e-8 of a kernel pole (lambda = {lambda})")]
    NearPole { z: Complex64, lambda: f64 },

    #[error("eigenvalue table too short: {0}")]
    InsufficientTable(String),

    #[error("series diverges at z = {z} (requires z > 0)")]
    DivergesAtZero { z: f64 },

    #[error("series converges too slowly: {0}")]
    SlowConvergence(String),

    #[error("quadrature exceeded {limit} subdivisions (error estimate {error_estimate:e})")]
    MaxSubdivisions { limit: usize, error_estimate: f64 },

    #[error("principal-value pole at {location} is misdeclared: remainder still grows")]
    PoleMisdeclared { location: f64 },

    #[error("quadrature failure: {0}")]
    QuadFailure(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{formula}: growth bound {growth} violates threshold {threshold}")]
    HypothesisViolation { formula: String, growth: f64, threshold: f64 },

    #[error("{formula}: {reason}")]
    HypothesisUnmet { formula: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
