//! Numerical integration helpers: adaptive Simpson for smooth integrands
//! and a tanh-sinh rule for integrable endpoint singularities.

use crate::error::{Error, Result};

struct SimpsonState<'a, F> {
    f: &'a F,
    evals: usize,
    max_evals: usize,
}

fn simpson_recurse<F: Fn(f64) -> f64>(
    st: &mut SimpsonState<'_, F>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    context: &'static str,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = (st.f)(lm);
    let frm = (st.f)(rm);
    st.evals += 2;
    if st.evals > st.max_evals {
        return Err(Error::Quadrature { context });
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 {
        return Err(Error::Quadrature { context });
    }
    if delta.abs() <= 15.0 * tol || (b - a).abs() < 1e-300 {
        return Ok(left + right + delta / 15.0);
    }
    let l = simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, context)?;
    let r = simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, context)?;
    Ok(l + r)
}

/// Adaptive Simpson quadrature of `f` over [a, b].  Stops once the local
/// Richardson error estimate drops below `abs_tol + rel_tol * |estimate|`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    context: &'static str,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    if !(fa.is_finite() && fm.is_finite() && fb.is_finite()) {
        return Err(Error::Quadrature { context });
    }
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let tol = abs_tol.max(rel_tol * whole.abs()).max(1e-306);
    let mut st = SimpsonState {
        f: &f,
        evals: 3,
        max_evals: 4_000_000,
    };
    simpson_recurse(&mut st, a, b, fa, fm, fb, whole, tol, 60, context)
}

/// tanh-sinh (double exponential) quadrature over (a, a + length).
///
/// The integrand receives `(x, da, db)` where `da` and `db` are the distances
/// from `x` to the left and right endpoints, computed without cancellation.
/// Integrands with endpoint power singularities must build the singular
/// factors from those distances rather than from `x` itself.
pub fn tanh_sinh_len<F: Fn(f64, f64, f64) -> f64>(
    f: F,
    a: f64,
    length: f64,
    rel_tol: f64,
    context: &'static str,
) -> Result<f64> {
    if length == 0.0 {
        return Ok(0.0);
    }
    if !(length > 0.0) {
        return Err(Error::Quadrature { context });
    }
    let half = 0.5 * length;
    let eval = |x: f64, da: f64, db: f64| -> Result<f64> {
        let v = f(x, da, db);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Quadrature { context })
        }
    };

    // node at t = tanh(u), u = pi/2 sinh(kh); offset from the nearer
    // endpoint is length/(exp(2u)+1), exact for large u
    let mut prev: Option<f64> = None;
    let mut h = 1.0f64;
    for _level in 0..12 {
        let mut sum = std::f64::consts::FRAC_PI_2 * eval(a + half, half, half)?;
        let mut k = 1usize;
        let mut negligible = 0u32;
        loop {
            let u = std::f64::consts::FRAC_PI_2 * (k as f64 * h).sinh();
            if u > 350.0 {
                break;
            }
            let w = std::f64::consts::FRAC_PI_2 * (k as f64 * h).cosh() / u.cosh().powi(2);
            let offset = length / ((2.0 * u).exp() + 1.0);
            if offset == 0.0 {
                break;
            }
            let far = length - offset;
            let term = w * (eval(a + offset, offset, far)? + eval(a + far, far, offset)?);
            sum += term;
            if term.abs() <= 1e-16 * sum.abs().max(1e-300) {
                negligible += 1;
                if negligible >= 3 {
                    break;
                }
            } else {
                negligible = 0;
            }
            k += 1;
            if k > 20_000 {
                return Err(Error::Quadrature { context });
            }
        }
        let estimate = sum * h * half;
        if let Some(p) = prev {
            if (estimate - p).abs() <= rel_tol * estimate.abs().max(1e-300) {
                return Ok(estimate);
            }
        }
        prev = Some(estimate);
        h *= 0.5;
    }
    Err(Error::Quadrature { context })
}

/// tanh-sinh quadrature over (a, b); see [`tanh_sinh_len`].
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    context: &'static str,
) -> Result<f64> {
    tanh_sinh_len(f, a, b - a, rel_tol, context)
}
