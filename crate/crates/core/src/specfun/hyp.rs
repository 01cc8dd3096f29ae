//! Gauss hypergeometric series with unit numerator parameter,
//! F(a, 1; c; z) = sum_n (a)_n / (c)_n z^n, for |z| < 1.  The argument may
//! be complex because stationary AR polynomials can have complex inverse
//! roots.

use super::{is_non_positive_integer, Tolerances};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// F(a, 1; c; z) by direct power series with Kahan-compensated summation.
pub fn hyp2f1_unit(a: f64, c: f64, z: Complex64, tol: &Tolerances) -> Result<Complex64> {
    if is_non_positive_integer(c) {
        return Err(Error::Pole {
            function: "hyp2f1_unit",
            argument: c,
        });
    }
    if z.norm() >= 1.0 {
        return Err(Error::NonConvergence {
            function: "hyp2f1_unit",
            max_iter: 0,
        });
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut small_streak = 0u32;
    for n in 0..tol.max_iter {
        let nf = n as f64;
        term *= z * ((a + nf) / (c + nf));
        // Kahan step
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.norm() <= tol.rel_tol * sum.norm() {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::NonConvergence {
        function: "hyp2f1_unit",
        max_iter: tol.max_iter,
    })
}
