//! Scalar special functions: log-gamma, (incomplete) beta, the Gauss
//! hypergeometric series F(a,1;c;z), Pochhammer ratios and the standard
//! normal distribution.  Everything here is a pure function of its
//! arguments.

mod beta;
mod gamma;
mod hyp;
mod normal;

pub use beta::{beta, inc_beta_lower, inc_beta_lower_ln};
pub use gamma::{ln_gamma, ln_gamma_sign, pochhammer_ratio};
pub use hyp::hyp2f1_unit;
pub use normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile};

use crate::error::{Error, Result};

/// Convergence controls for the iterative evaluations (continued fractions,
/// power series).  The defaults leave ample headroom for the 1e-6 agreement
/// checks made further downstream.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel_tol: 1e-12,
            max_iter: 500,
        }
    }
}

impl Tolerances {
    pub fn new(rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::Domain(format!(
                "Tolerances.rel_tol must be > 0, got {rel_tol}"
            )));
        }
        if max_iter < 1 {
            return Err(Error::Domain(
                "Tolerances.max_iter must be >= 1".to_string(),
            ));
        }
        Ok(Tolerances { rel_tol, max_iter })
    }
}

/// True when `x` is a non-positive integer (a pole of the gamma function).
pub(crate) fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor() && x.is_finite()
}
