//! Crate-wide error type.
//!
//! Variants split into two families: validation errors (bad shapes, bad
//! parameters, unparseable input) and numerical failures (eigensolver did
//! not converge, defective operator, quadratic form lost realness). The CLI
//! maps the families to distinct exit codes via [`Error::is_numerical`].

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: relative deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary: deviation {deviation:.3e}")]
    NotUnitary { deviation: f64 },
    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("eigenvalue {value:.3e} below the PSD clamp threshold")]
    NegativeEigenvalue { value: f64 },
    #[error("negative fractional order {order} not supported for Laplacians")]
    NegativeOrder { order: f64 },
    #[error("dense result {rows} x {cols} exceeds the materialization cap {cap}")]
    SizeOverflow { rows: usize, cols: usize, cap: usize },
    #[error("dimension mismatch in {context}: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        context: &'static str,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("operation requires an undirected graph")]
    NotUndirected,
    #[error("size {got} below minimum {min}")]
    TooSmall { min: usize, got: usize },
    #[error("all points coincide; cannot build a geometric graph")]
    DegenerateGeometry,
    #[error("adjacency is defective or near-defective: eigenvector condition {cond:.3e} exceeds {cap:.1e}")]
    Defective { cond: f64, cap: f64 },
    #[error("spectral denoising requires a Laplacian-flavor transform")]
    FlavorMismatch,
    #[error("quadratic form has imaginary residual {residual:.3e} beyond tolerance")]
    NonRealQuadraticForm { residual: f64 },
    #[error("signal is identically zero; SNR is undefined")]
    ZeroSignal,
    #[error("noise density {density} outside (0, 1]")]
    BadDensity { density: f64 },
    #[error("window length {window} does not fit signal length {len}")]
    WindowTooLarge { window: usize, len: usize },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("{got} distinct labels exceed the permutation-search limit of 8")]
    TooManyLabels { got: usize },
    #[error("windowed sequences disagree on window geometry")]
    GeometryMismatch,
    #[error("{path}:{line}: {msg}")]
    ParseError {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to rejected
    /// input. Drives the CLI exit-code split (3 vs 2).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure(_)
                | Error::Defective { .. }
                | Error::NonRealQuadraticForm { .. }
        )
    }
}
