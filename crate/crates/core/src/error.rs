use thiserror::Error;

/// Errors raised by the field-theory kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("reality condition violated at mode {mode}: |u* - conj(u)| = {defect:e}")]
    RealityViolation { mode: usize, defect: f64 },

    #[error("input is not band-limited: {fraction:e} of its weight lies above the mode cutoff")]
    NotBandLimited { fraction: f64 },

    #[error("time step {dt} violates the stability bound dt * max(k0) < 2 (max k0 = {max_k0})")]
    Unstable { dt: f64, max_k0: f64 },

    #[error("wrong arity: expected {expected} tangent vectors, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("polynomial degree {degree} exceeds the bound {bound}")]
    DegreeOverflow { degree: u32, bound: u32 },

    #[error("internal consistency failure in {what}: {lhs:e} vs {rhs:e}")]
    Inconsistent { what: &'static str, lhs: f64, rhs: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
