//! Autocovariance structures for long/short-memory Gaussian processes,
//! exact path simulation, Durbin-Levinson risk forecasts and violation-ratio
//! backtesting.

pub mod acvf;
pub mod error;
pub mod farima;
pub mod kernels;
pub mod quad;
pub mod specfun;

pub use acvf::AcvfSequence;
pub use error::{Error, Result};
pub use farima::FarimaSpec;
pub use kernels::{FgnParams, Fou2Params, MixedParams};
pub use specfun::Tolerances;
