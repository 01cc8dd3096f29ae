//! Autocovariance sequences on an equidistant grid.

use crate::error::{Error, Result};

/// Autocovariance values for lags 0..=L on a grid with step `dt`.
/// Values are immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct AcvfSequence {
    dt: f64,
    values: Vec<f64>,
}

impl AcvfSequence {
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Domain(format!(
                "AcvfSequence.dt must be positive, got {dt}"
            )));
        }
        if values.is_empty() {
            return Err(Error::Domain(
                "AcvfSequence.values must not be empty".to_string(),
            ));
        }
        if !(values[0] > 0.0) {
            return Err(Error::Domain(format!(
                "AcvfSequence.values[0] must be positive, got {}",
                values[0]
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "AcvfSequence contains a non-finite value {bad}"
            )));
        }
        Ok(AcvfSequence { dt, values })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Greatest available lag L.
    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// gamma_k for 0 <= k <= L.
    pub fn get(&self, lag: usize) -> Result<f64> {
        self.values.get(lag).copied().ok_or(Error::InsufficientLags {
            needed: lag,
            have: self.max_lag(),
        })
    }

    /// gamma at a signed lag, using gamma(-k) = gamma(k).
    pub fn get_signed(&self, lag: i64) -> Result<f64> {
        self.get(lag.unsigned_abs() as usize)
    }

    pub fn require_max_lag(&self, needed: usize) -> Result<()> {
        if needed > self.max_lag() {
            Err(Error::InsufficientLags {
                needed,
                have: self.max_lag(),
            })
        } else {
            Ok(())
        }
    }
}
