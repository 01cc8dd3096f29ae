//! FARIMA(p, d, q) processes and three independent autocovariance engines:
//! the root/hypergeometric closed form, truncated MA convolution, and
//! spectral integration.
//!
//! Polynomial conventions follow
//!   Phi(L) = 1 - phi_1 L - ... - phi_p L^p,
//!   Theta(L) = 1 - theta_1 L - ... - theta_q L^q,
//! so users of plus-sign MA software must negate their theta.  Inverse AR
//! roots rho_j (zeros of z^p Phi(1/z)) keep stationarity as |rho_j| < 1.

use crate::acvf::AcvfSequence;
use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;
use crate::specfun::{hyp2f1_unit, ln_gamma, pochhammer_ratio, Tolerances};
use num_complex::Complex64;

const ROOT_SEPARATION_MIN: f64 = 1e-8;
const STATIONARITY_MARGIN: f64 = 1e-9;

/// FARIMA(p, d, q) specification.
#[derive(Clone, Debug, PartialEq)]
pub struct FarimaSpec {
    pub d: f64,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub sigma2_eps: f64,
    pub mu: f64,
}

impl FarimaSpec {
    pub fn new(d: f64, ar: Vec<f64>, ma: Vec<f64>, sigma2_eps: f64, mu: f64) -> Result<Self> {
        if !(d > -0.5 && d < 0.5) {
            return Err(Error::Domain(format!(
                "farima.d must lie in (-1/2, 1/2), got {d}"
            )));
        }
        if !(sigma2_eps > 0.0) {
            return Err(Error::Domain(format!(
                "farima.sigma2_eps must be positive, got {sigma2_eps}"
            )));
        }
        let spec = FarimaSpec {
            d,
            ar,
            ma,
            sigma2_eps,
            mu,
        };
        if !spec.ar.is_empty() {
            let roots = ar_roots(&spec.ar)?;
            let worst = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
            if worst >= 1.0 - STATIONARITY_MARGIN {
                return Err(Error::NonStationary { modulus: worst });
            }
        }
        Ok(spec)
    }

    pub fn p(&self) -> usize {
        self.ar.len()
    }

    pub fn q(&self) -> usize {
        self.ma.len()
    }

    /// MA polynomial coefficients (1, -theta_1, ..., -theta_q).
    fn ma_poly(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(self.q() + 1);
        c.push(1.0);
        c.extend(self.ma.iter().map(|t| -t));
        c
    }

    /// Autocovariance via the closed-form engine (with degenerate-case
    /// dispatch); the route of choice for production use.
    pub fn acvf(&self, max_lag: usize) -> Result<AcvfSequence> {
        acvf_sowell(self, max_lag)
    }
}

/// Inverse AR roots via companion-matrix eigenvalues, Newton-polished and
/// sorted by (re, im) for determinism.
pub fn ar_roots(ar: &[f64]) -> Result<Vec<Complex64>> {
    if ar.is_empty() {
        return Err(Error::Domain(
            "ar_roots: empty AR coefficient sequence".to_string(),
        ));
    }
    if ar.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("ar_roots: non-finite coefficient".to_string()));
    }
    if ar[ar.len() - 1] == 0.0 {
        return Err(Error::Domain(
            "ar_roots: leading (highest-order) AR coefficient is zero; drop it".to_string(),
        ));
    }
    let p = ar.len();
    // companion matrix of z^p - phi_1 z^{p-1} - ... - phi_p
    let companion = nalgebra::DMatrix::from_fn(p, p, |r, c| {
        if r == 0 {
            ar[c]
        } else if r == c + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex64> = companion
        .complex_eigenvalues()
        .iter()
        .map(|e| Complex64::new(e.re, e.im))
        .collect();

    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(1.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &c in ar {
            dv = dv * z + v;
            v = v * z - c;
        }
        (v, dv)
    };
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = eval(*r);
            if dv.norm() > 0.0 {
                let step = v / dv;
                if step.norm() < 0.5 {
                    *r -= step;
                }
            }
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn check_distinct_roots(roots: &[Complex64]) -> Result<()> {
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let sep = (roots[i] - roots[j]).norm();
            if sep < ROOT_SEPARATION_MIN {
                return Err(Error::RepeatedRoot { separation: sep });
            }
        }
    }
    Ok(())
}

/// Impulse-response coefficients of Phi^{-1}(L) (1-L)^{-d} Theta(L);
/// coefficient 0 is 1.
pub fn ma_coefficients(spec: &FarimaSpec, n_terms: usize) -> Result<Vec<f64>> {
    if n_terms == 0 {
        return Err(Error::Domain("ma_coefficients: n_terms must be >= 1".to_string()));
    }
    // weights of (1-L)^{-d}
    let mut psi = vec![0.0; n_terms];
    psi[0] = 1.0;
    for j in 1..n_terms {
        psi[j] = psi[j - 1] * (j as f64 - 1.0 + spec.d) / j as f64;
    }
    // convolve with the MA polynomial (minus-sign convention)
    if !spec.ma.is_empty() {
        let pi = psi.clone();
        for j in 0..n_terms {
            for (i, &theta) in spec.ma.iter().enumerate() {
                if j > i {
                    psi[j] -= theta * pi[j - i - 1];
                }
            }
        }
    }
    // AR recursion
    for j in 1..n_terms {
        for (i, &phi) in spec.ar.iter().enumerate() {
            if j > i {
                psi[j] += phi * psi[j - i - 1];
            }
        }
    }
    Ok(psi)
}

/// Truncated MA-convolution estimate gamma_k = sigma^2 sum_j psi_j psi_{j+k},
/// plus a hyperbolic-tail estimate for the mass beyond `n_terms`; also
/// returns the largest tail correction applied (a bound on what plain
/// truncation would have missed).
pub fn acvf_ma_truncated_detail(
    spec: &FarimaSpec,
    max_lag: usize,
    n_terms: usize,
) -> Result<(AcvfSequence, f64)> {
    if n_terms < 8 * (max_lag + 1) {
        return Err(Error::Domain(format!(
            "acvf_ma_truncated: n_terms {n_terms} too small for max_lag {max_lag}"
        )));
    }
    let psi = ma_coefficients(spec, n_terms)?;
    let mut values = Vec::with_capacity(max_lag + 1);
    let mut worst_tail: f64 = 0.0;
    // empirical amplitude of the hyperbolic tail psi_j ~ A j^{d-1}
    let amp = if spec.d != 0.0 {
        psi[n_terms - 1] * ((n_terms - 1) as f64).powf(1.0 - spec.d)
    } else {
        0.0
    };
    for k in 0..=max_lag {
        let mut sum = 0.0;
        for j in 0..(n_terms - k) {
            sum += psi[j] * psi[j + k];
        }
        let tail = if spec.d != 0.0 {
            let m = (n_terms - k) as f64 - 0.5;
            let ratio = k as f64 / m;
            let mut series = 0.0;
            let mut binom = 1.0;
            for i in 0..8 {
                series += binom * ratio.powi(i as i32) / (i as f64 + 1.0 - 2.0 * spec.d);
                binom *= (spec.d - 1.0 - i as f64) / (i as f64 + 1.0);
            }
            amp * amp * m.powf(2.0 * spec.d - 1.0) * series
        } else {
            0.0
        };
        worst_tail = worst_tail.max(tail.abs() * spec.sigma2_eps);
        values.push(spec.sigma2_eps * (sum + tail));
    }
    Ok((AcvfSequence::new(1.0, values)?, worst_tail))
}

pub fn acvf_ma_truncated(spec: &FarimaSpec, max_lag: usize, n_terms: usize) -> Result<AcvfSequence> {
    Ok(acvf_ma_truncated_detail(spec, max_lag, n_terms)?.0)
}

fn transfer_sq(coeffs_neg: &[f64], omega: f64) -> f64 {
    // |1 - c_1 e^{-i w} - ... - c_n e^{-i n w}|^2
    let z = Complex64::from_polar(1.0, -omega);
    let mut acc = Complex64::new(1.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    for &c in coeffs_neg {
        zn *= z;
        acc -= c * zn;
    }
    acc.norm_sqr()
}

/// Spectral density of the FARIMA process at frequency omega.
fn spectrum(spec: &FarimaSpec, omega: f64) -> f64 {
    let frac = (2.0 * (0.5 * omega).sin()).powf(-2.0 * spec.d);
    spec.sigma2_eps / (2.0 * std::f64::consts::PI) * transfer_sq(&spec.ma, omega)
        / transfer_sq(&spec.ar, omega)
        * frac
}

/// One autocovariance by per-lag quadrature of the spectrum,
/// gamma_k = 2 int_0^pi f(w) cos(k w) dw, with the omega = 0 singularity
/// (d > 0) flattened by the substitution w = u^{2/(1-2d)}.
pub fn acvf_spectral_lag(spec: &FarimaSpec, k: usize, abs_tol: f64) -> Result<f64> {
    let integral = if spec.d > 0.0 {
        let pexp = 2.0 / (1.0 - 2.0 * spec.d);
        let upper = std::f64::consts::PI.powf(1.0 / pexp);
        adaptive_simpson(
            |u| {
                let omega = u.powf(pexp);
                if omega <= 0.0 {
                    return 0.0;
                }
                spectrum(spec, omega) * (k as f64 * omega).cos() * pexp * u.powf(pexp - 1.0)
            },
            0.0,
            upper,
            1e-10,
            0.5 * abs_tol,
            "acvf_spectral",
        )?
    } else {
        adaptive_simpson(
            |omega| {
                if omega <= 0.0 {
                    // finite limit: (2 sin(w/2))^{-2d} -> 0 for d < 0, 1 for d = 0
                    return if spec.d < 0.0 {
                        0.0
                    } else {
                        spectrum_flat_limit(spec)
                    };
                }
                spectrum(spec, omega) * (k as f64 * omega).cos()
            },
            0.0,
            std::f64::consts::PI,
            1e-10,
            0.5 * abs_tol,
            "acvf_spectral",
        )?
    };
    Ok(2.0 * integral)
}

fn spectrum_flat_limit(spec: &FarimaSpec) -> f64 {
    spec.sigma2_eps / (2.0 * std::f64::consts::PI) * transfer_sq(&spec.ma, 0.0)
        / transfer_sq(&spec.ar, 0.0)
}

/// Spectral-integration engine for lags 0..=max_lag.
pub fn acvf_spectral(spec: &FarimaSpec, max_lag: usize) -> Result<AcvfSequence> {
    let gamma0 = acvf_spectral_lag(spec, 0, 0.0_f64.max(1e-300))?;
    let abs_tol = 1e-9 * gamma0.abs();
    let mut values = vec![gamma0];
    for k in 1..=max_lag {
        values.push(acvf_spectral_lag(spec, k, abs_tol)?);
    }
    AcvfSequence::new(1.0, values)
}

/// Per-spec quantities entering the closed-form engine.
#[derive(Clone, Debug)]
pub struct SowellIntermediates {
    /// Inverse AR roots rho_j, pairwise distinct.
    pub roots: Vec<Complex64>,
    /// psi_l = sum_s c_s c_{s-|l|} for the MA polynomial coefficients c
    /// (c_0 = 1), stored for l = 0..=q.
    pub psi: Vec<f64>,
    /// Partial-fraction weights zeta_j.
    pub zeta: Vec<Complex64>,
}

impl SowellIntermediates {
    pub fn new(spec: &FarimaSpec) -> Result<Self> {
        let roots = ar_roots(&spec.ar)?;
        check_distinct_roots(&roots)?;
        let c = spec.ma_poly();
        let q = spec.q();
        let psi = (0..=q)
            .map(|l| (l..=q).map(|s| c[s] * c[s - l]).sum())
            .collect();
        let mut zeta = Vec::with_capacity(roots.len());
        for (j, &rho_j) in roots.iter().enumerate() {
            let mut denom = rho_j;
            for &rho_i in &roots {
                denom *= 1.0 - rho_i * rho_j;
            }
            for (m, &rho_m) in roots.iter().enumerate() {
                if m != j {
                    denom *= rho_j - rho_m;
                }
            }
            if denom.norm() == 0.0 {
                return Err(Error::RepeatedRoot { separation: 0.0 });
            }
            zeta.push(denom.inv());
        }
        Ok(SowellIntermediates { roots, psi, zeta })
    }
}

/// Hypergeometric kernel
/// C(d, h, rho) = Gamma(1-2d)/Gamma(1-d)^2 (d)_h/(1-d)_h
///                [ rho^{2p} F(d+h,1;1-d+h;rho) + F(d-h,1;1-d-h;rho) - 1 ].
pub fn sowell_c(d: f64, h: i64, rho: Complex64, p: usize, tol: &Tolerances) -> Result<Complex64> {
    let leading = (ln_gamma(1.0 - 2.0 * d)? - 2.0 * ln_gamma(1.0 - d)?).exp();
    let poch = pochhammer_ratio(d, h)?;
    let hf = h as f64;
    let f1 = hyp2f1_unit(d + hf, 1.0 - d + hf, rho, tol)?;
    let f2 = hyp2f1_unit(d - hf, 1.0 - d - hf, rho, tol)?;
    let bracket = rho.powu(2 * p as u32) * f1 + f2 - 1.0;
    Ok(leading * poch * bracket)
}

fn series_tolerances(roots: &[Complex64]) -> Tolerances {
    let max_mod = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let needed = if max_mod > 0.0 && max_mod < 1.0 {
        ((-37.0) / max_mod.ln()).ceil() as usize + 64
    } else {
        500
    };
    Tolerances {
        rel_tol: 1e-13,
        max_iter: needed.max(500),
    }
}

/// Closed-form autocovariance engine.  Dispatches the degenerate cases:
/// d = 0 goes through the exact ARMA route, p = 0 through the fractional
/// noise convolved with the MA correlation weights.
pub fn acvf_sowell(spec: &FarimaSpec, max_lag: usize) -> Result<AcvfSequence> {
    if spec.d == 0.0 {
        return arma_acvf(spec, max_lag);
    }
    if spec.p() == 0 {
        return fractional_ma_acvf(spec, max_lag);
    }
    let inter = SowellIntermediates::new(spec)?;
    let tol = series_tolerances(&inter.roots);
    let p = spec.p();
    let q = spec.q() as i64;
    let mut values = Vec::with_capacity(max_lag + 1);
    let mut gamma0_scale = 0.0f64;
    for lag in 0..=max_lag as i64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in -q..=q {
            let psi_l = inter.psi[l.unsigned_abs() as usize];
            if psi_l == 0.0 {
                continue;
            }
            for (j, &rho_j) in inter.roots.iter().enumerate() {
                let c = sowell_c(spec.d, p as i64 + l - lag, rho_j, p, &tol)?;
                acc += psi_l * inter.zeta[j] * c;
            }
        }
        let value = spec.sigma2_eps * acc.re;
        let imag = spec.sigma2_eps * acc.im;
        if lag == 0 {
            gamma0_scale = value.abs();
        }
        if imag.abs() > 1e-8 * value.abs().max(gamma0_scale) {
            return Err(Error::ImaginaryResidue {
                context: "acvf_sowell",
                real: value,
                imag,
                tol: 1e-8,
            });
        }
        values.push(value);
    }
    AcvfSequence::new(1.0, values)
}

/// Exact ARMA autocovariance (d = 0): psi-weight convolution with the
/// geometric tail beyond the truncation point summed in closed form from a
/// modal fit psi_j = sum_m c_m rho_m^j.
fn arma_acvf(spec: &FarimaSpec, max_lag: usize) -> Result<AcvfSequence> {
    let q = spec.q();
    if spec.p() == 0 {
        // pure MA: finite convolution
        let c = spec.ma_poly();
        let values = (0..=max_lag)
            .map(|k| {
                spec.sigma2_eps
                    * if k <= q {
                        (k..=q).map(|s| c[s] * c[s - k]).sum::<f64>()
                    } else {
                        0.0
                    }
            })
            .collect();
        return AcvfSequence::new(1.0, values);
    }
    let roots = ar_roots(&spec.ar)?;
    check_distinct_roots(&roots)?;
    let p = spec.p();
    let n_terms = max_lag + q + p + 64;
    let psi = ma_coefficients(spec, n_terms)?;

    // fit modal coefficients on the last p impulse-response values
    let base = n_terms - p;
    let mut matrix = vec![vec![Complex64::new(0.0, 0.0); p]; p];
    let mut rhs = vec![Complex64::new(0.0, 0.0); p];
    for (row, rhs_v) in rhs.iter_mut().enumerate() {
        let j = base + row;
        for (col, &rho) in roots.iter().enumerate() {
            matrix[row][col] = rho.powu(j as u32);
        }
        *rhs_v = Complex64::new(psi[j], 0.0);
    }
    let modal = solve_complex(matrix, rhs)?;

    let tail_start = n_terms as u32;
    let gamma_tail = |k: usize| -> Complex64 {
        let mut t = Complex64::new(0.0, 0.0);
        for (m1, &c1) in modal.iter().enumerate() {
            for (m2, &c2) in modal.iter().enumerate() {
                let prod = roots[m1] * roots[m2];
                t += c1 * c2 * roots[m2].powu(k as u32) * prod.powu(tail_start)
                    / (Complex64::new(1.0, 0.0) - prod);
            }
        }
        t
    };

    let mut values = Vec::with_capacity(max_lag + 1);
    let mut gamma0_scale = 0.0f64;
    for k in 0..=max_lag {
        let mut sum = 0.0;
        for j in 0..(n_terms - k) {
            sum += psi[j] * psi[j + k];
        }
        let tail = gamma_tail(k);
        let value = spec.sigma2_eps * (sum + tail.re);
        if k == 0 {
            gamma0_scale = value.abs();
        }
        if (spec.sigma2_eps * tail.im).abs() > 1e-8 * gamma0_scale {
            return Err(Error::ImaginaryResidue {
                context: "arma_acvf tail",
                real: value,
                imag: spec.sigma2_eps * tail.im,
                tol: 1e-8,
            });
        }
        values.push(value);
    }
    AcvfSequence::new(1.0, values)
}

/// p = 0, d != 0: fractional-noise autocovariance (in Pochhammer-ratio form)
/// convolved with the MA correlation weights over l in [-q, q].
fn fractional_ma_acvf(spec: &FarimaSpec, max_lag: usize) -> Result<AcvfSequence> {
    let q = spec.q() as i64;
    let c = spec.ma_poly();
    let psi: Vec<f64> = (0..=q as usize)
        .map(|l| (l..=q as usize).map(|s| c[s] * c[s - l]).sum())
        .collect();
    let base = (ln_gamma(1.0 - 2.0 * spec.d)? - 2.0 * ln_gamma(1.0 - spec.d)?).exp();
    let frac = |m: i64| -> Result<f64> { Ok(base * pochhammer_ratio(spec.d, m.abs())?) };
    let mut values = Vec::with_capacity(max_lag + 1);
    for k in 0..=max_lag as i64 {
        let mut acc = 0.0;
        for l in -q..=q {
            acc += psi[l.unsigned_abs() as usize] * frac(k - l)?;
        }
        values.push(spec.sigma2_eps * acc);
    }
    AcvfSequence::new(1.0, values)
}

fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[pivot][col].norm() < 1e-300 {
            return Err(Error::RepeatedRoot { separation: 0.0 });
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
            let v = b[col];
            b[row] -= factor * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Fractional order N of the m-aggregated FARIMA(p, d, q):
/// N = p + d + 1 + (q - p - d - 1)/m.
pub fn aggregated_order(p: usize, d: f64, q: usize, m_agg: usize) -> f64 {
    let (p, q, m) = (p as f64, q as f64, m_agg as f64);
    p + d + 1.0 + (q - p - d - 1.0) / m
}
