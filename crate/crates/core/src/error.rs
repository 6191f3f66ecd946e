use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported root system type {series}{rank}")]
    UnsupportedType { series: char, rank: usize },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate orbit: lambda vanishes on the Cartan subalgebra, the orbit is a point")]
    DegenerateOrbit,

    #[error("lambda must be dominant (lambda(h_i) >= 0 for every simple coroot), got lambda(h_{index}) = {value}")]
    NonDominant { index: usize, value: String },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("Shapovalov pairing is degenerate at degree {degree}")]
    Singular { degree: String },

    #[error("B is cut off at height {have} but the product needs every degree up to height {need}")]
    Cutoff { have: u32, need: u32 },

    #[error("coefficient has a pole at t = 0: {0}")]
    Pole(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
