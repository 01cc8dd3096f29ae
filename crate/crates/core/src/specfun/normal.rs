//! Standard normal density, distribution function and quantile.
//!
//! The cdf goes through erfc (series for small arguments, Lentz continued
//! fraction for the tail); the quantile is Acklam's rational approximation
//! polished by Halley steps against our own cdf.

use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn std_normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// erfc(z) for z >= 0.
fn erfc_nonneg(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z < 2.0 {
        // erf(z) = 2/sqrt(pi) * sum (-1)^n z^(2n+1) / (n! (2n+1))
        let mut term = z;
        let mut sum = z;
        let z2 = z * z;
        let mut n = 0u32;
        loop {
            n += 1;
            term *= -z2 / n as f64;
            let add = term / (2 * n + 1) as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs().max(1e-300) || n > 200 {
                break;
            }
        }
        1.0 - sum * 2.0 / std::f64::consts::PI.sqrt()
    } else {
        // continued fraction erfc(z) = e^{-z^2}/sqrt(pi) / (z + 1/2/(z + 1/(z + 3/2/(z + ...))))
        const TINY: f64 = 1e-290;
        let mut c = f64::MAX;
        let mut d = z;
        let mut h = 1.0 / z;
        for k in 1..200 {
            let a = k as f64 / 2.0;
            d = z + a / d;
            if d.abs() < TINY {
                d = TINY;
            }
            c = z + a / c;
            if c.abs() < TINY {
                c = TINY;
            }
            let del = c / d;
            h *= del;
            if (del - 1.0).abs() < 1e-17 {
                break;
            }
        }
        (-z * z).exp() / std::f64::consts::PI.sqrt() * h
    }
}

/// Phi(x), absolute error below 1e-13.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x < 0.0 {
        0.5 * erfc_nonneg(-x / SQRT_2)
    } else {
        1.0 - 0.5 * erfc_nonneg(x / SQRT_2)
    }
}

// Acklam's inverse normal cdf coefficients.
const ACKLAM_A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.383577518672690e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const ACKLAM_B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const ACKLAM_C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const ACKLAM_D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];

fn acklam(p: f64) -> f64 {
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((ACKLAM_C[0] * q + ACKLAM_C[1]) * q + ACKLAM_C[2]) * q + ACKLAM_C[3]) * q
            + ACKLAM_C[4])
            * q
            + ACKLAM_C[5])
            / ((((ACKLAM_D[0] * q + ACKLAM_D[1]) * q + ACKLAM_D[2]) * q + ACKLAM_D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((ACKLAM_A[0] * r + ACKLAM_A[1]) * r + ACKLAM_A[2]) * r + ACKLAM_A[3]) * r
            + ACKLAM_A[4])
            * r
            + ACKLAM_A[5])
            * q
            / (((((ACKLAM_B[0] * r + ACKLAM_B[1]) * r + ACKLAM_B[2]) * r + ACKLAM_B[3]) * r
                + ACKLAM_B[4])
                * r
                + 1.0)
    } else {
        -acklam(1.0 - p)
    }
}

/// Phi^{-1}(p) for p in (0, 1); inverts `std_normal_cdf` to well below 1e-10.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "std_normal_quantile: p must lie in (0, 1), got {p}"
        )));
    }
    let mut x = acklam(p);
    // Halley refinement against the cdf
    for _ in 0..2 {
        let pdf = std_normal_pdf(x);
        if pdf <= 0.0 || !pdf.is_finite() {
            break;
        }
        let err = std_normal_cdf(x) - p;
        let u = err / pdf;
        x -= u / (1.0 + 0.5 * x * u).max(0.5);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cdf_symmetry_at_zero() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(1.0) + std_normal_cdf(-1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quantile_round_trip() {
        let x = std_normal_quantile(std_normal_cdf(1.7)).unwrap();
        assert!((x - 1.7).abs() < 1e-10);
    }

    #[test]
    fn cdf_against_quadrature_oracle() {
        // integrate the density on [0, x] with fine Simpson panels
        let simpson = |x: f64| {
            let n = 4000usize;
            let h = x / n as f64;
            let mut s = std_normal_pdf(0.0) + std_normal_pdf(x);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * std_normal_pdf(i as f64 * h);
            }
            0.5 + s * h / 3.0
        };
        for &x in &[0.31, 1.0, 1.959963984540054, 3.2] {
            let got = std_normal_cdf(x);
            let expect = simpson(x);
            assert!((got - expect).abs() < 1e-12, "x={x}: {got} vs {expect}");
        }
        assert!((std_normal_cdf(1.959963984540054) - 0.975).abs() < 1e-12);
    }

    #[test]
    fn tails_are_sane() {
        assert!((std_normal_cdf(-6.0) - 9.865876450376946e-10).abs() < 1e-18);
        let q = std_normal_quantile(1e-12).unwrap();
        assert!((std_normal_cdf(q) - 1e-12).abs() < 1e-16);
    }

    #[test]
    fn quantile_domain() {
        assert!(std_normal_quantile(0.0).is_err());
        assert!(std_normal_quantile(1.0).is_err());
        assert!(std_normal_quantile(-0.5).is_err());
    }

    proptest! {
        #[test]
        fn quantile_cdf_identity(x in -6.0f64..6.0) {
            let back = std_normal_quantile(std_normal_cdf(x)).unwrap();
            // rounding p = Phi(x) to an f64 near 1 loses information worth
            // ulp(1)/pdf(x) in x; the identity can only hold up to that
            let representation_limit = 2.0 * f64::EPSILON / std_normal_pdf(x);
            prop_assert!((back - x).abs() < 1e-10 + representation_limit);
        }
    }
}
