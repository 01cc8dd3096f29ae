use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Error, Debug)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{function}: pole at non-positive integer argument {argument}")]
    Pole { function: &'static str, argument: f64 },

    #[error("{function}: no convergence within {max_iter} iterations")]
    NonConvergence {
        function: &'static str,
        max_iter: usize,
    },

    #[error("{context}: imaginary residue {imag:e} exceeds {tol:e} of real part {real:e}")]
    ImaginaryResidue {
        context: &'static str,
        real: f64,
        imag: f64,
        tol: f64,
    },

    #[error("AR polynomial has (near-)repeated roots, separation {separation:e}")]
    RepeatedRoot { separation: f64 },

    #[error("AR polynomial is not stationary: inverse root modulus {modulus}")]
    NonStationary { modulus: f64 },

    #[error("Levinson recursion broke down at order {order}: innovation variance {variance:e}")]
    LevinsonBreakdown { order: usize, variance: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("autocovariance sequence too short: need lags 0..={needed}, have 0..={have}")]
    InsufficientLags { needed: usize, have: usize },

    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("circulant embedding failed: eigenvalue {min_eigenvalue:e} below tolerance")]
    CirculantEmbedding { min_eigenvalue: f64 },

    #[error("{context}: quadrature did not converge")]
    Quadrature { context: &'static str },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
