use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size must be at least 2 on each axis, got {0}x{1}")]
    GridTooSmall(usize, usize),

    #[error("signal has {got} samples but grid expects {expected}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("grids differ: {0}")]
    GridMismatch(String),

    #[error("Fourier window ({l1}, {l2}) aliases on a {n1}x{n2} grid")]
    Aliasing { l1: usize, l2: usize, n1: usize, n2: usize },

    #[error("scale must be positive and finite, got {0}")]
    InvalidScale(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature rule must have at least one panel and one node")]
    EmptyQuadrature,

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("matrix [[{m}, {n}], [{p}, {q}]] has determinant {det}, expected 1")]
    NotUnimodular { m: i64, n: i64, p: i64, q: i64, det: i128 },

    #[error("integer overflow in modular arithmetic")]
    Overflow,

    #[error("zero index (0, 0) has no orbit representative")]
    ZeroIndex,

    #[error("modular resampling needs a square grid, got {0}x{1}")]
    NonSquareGrid(usize, usize),

    #[error("wavelet is not supported on the diagonal")]
    NonDiagonal,

    #[error("frame bound {value:.3e} at index ({n1}, {n2}) is below the floor {floor:.3e}")]
    BelowFloor { n1: i64, n2: i64, value: f64, floor: f64 },

    #[error("coefficients do not match the parameter grid: {0}")]
    IncompatibleCoefficients(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
