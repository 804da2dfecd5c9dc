//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh parameters: need m >= n >= 1, got n={n}, m={m}")]
    InvalidMeshParams { n: usize, m: usize },

    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("degenerate edge of length {length:e}")]
    DegenerateEdge { length: f64 },

    #[error("solver did not converge: relative residual {residual:e} after {iterations} iterations")]
    SolveDidNotConverge { residual: f64, iterations: usize },

    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("power iteration did not stabilize after {sweeps} sweeps (last Rayleigh change {change:e})")]
    EigenStagnation { sweeps: usize, change: f64 },

    #[error("flux normal jump {jump:e} at edge midpoint ({x}, {y}) exceeds conformity tolerance {tol:e}")]
    ConformityViolation { jump: f64, x: f64, y: f64, tol: f64 },

    #[error("triangle with reference point ({x}, {y}) does not fit any classification")]
    Unclassifiable { x: f64, y: f64 },

    #[error("witness gradient verification requires even n, got n={n}")]
    WitnessParity { n: usize },

    #[error("invalid study configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
