//! Autocovariance of the second-kind fractional OU process.
//!
//! The production route is the incomplete-beta closed form
//!
//!   Q(tau) = H^{-2(g-1)H} H (2H-1) e^{-g tau}
//!            [ H^{2gH}/(gH) B(a, b) + int_H^{a_tau} m^{2gH-1} B(H/m; a, b) dm ]
//!
//! with a = (g-1)H + 1, b = 2H - 1 and a_tau = H e^{tau/H}.  Substituting
//! m = H e^{u/H} turns the integral into int_0^tau of a smooth positive
//! integrand, which is accumulated segment by segment in log space so that
//! long-lag tables neither overflow nor repeat work.
//!
//! `fou2_acvf_oracle` integrates the underlying double-integral kernel
//! directly (after the same variable changes) and exists to cross-check the
//! closed form; it is far slower and meant for tests.

use super::Fou2Params;
use crate::error::{Error, Result};
use crate::quad::{adaptive_simpson, tanh_sinh};
use crate::specfun::{beta, inc_beta_lower_ln, Tolerances};

fn log_add_exp(x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return y;
    }
    if y == f64::NEG_INFINITY {
        return x;
    }
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    hi + (lo - hi).exp().ln_1p()
}

struct ClosedForm {
    gamma: f64,
    dt: f64,
    prefactor: f64, // H^{-2(g-1)H} H (2H-1)
    ln_k0: f64,     // ln( H^{2gH}/(gH) B(a,b) )
    ln_scale: f64,  // ln( H^{2gH} / H ), integrand scale after substitution
    a: f64,
    b: f64,
    inv_h: f64,
    tol: Tolerances,
}

impl ClosedForm {
    fn new(p: &Fou2Params) -> Result<Self> {
        let h = p.hurst;
        let g = p.gamma;
        let a = (g - 1.0) * h + 1.0;
        let b = 2.0 * h - 1.0;
        if !(b > 0.0) {
            return Err(Error::Domain(format!(
                "fou2 requires hurst > 1/2, got {h}"
            )));
        }
        let ln_h = h.ln();
        let full_beta = beta(a, b)?;
        Ok(ClosedForm {
            gamma: g,
            dt: p.dt,
            prefactor: (-2.0 * (g - 1.0) * h * ln_h).exp() * h * (2.0 * h - 1.0),
            ln_k0: 2.0 * g * h * ln_h - (g * h).ln() + full_beta.ln(),
            ln_scale: 2.0 * g * h * ln_h - ln_h,
            a,
            b,
            inv_h: 1.0 / h,
            tol: Tolerances::default(),
        })
    }

    /// ln of the substituted integrand at time offset u.  Once e^{-u/H}
    /// underflows, the incomplete beta is replaced by its exact small-x
    /// leading term x^a / a.
    fn ln_integrand(&self, u: f64) -> f64 {
        let ln_x = -u * self.inv_h;
        if ln_x < -690.0 {
            return self.ln_scale + 2.0 * self.gamma * u + self.a * ln_x - self.a.ln();
        }
        match inc_beta_lower_ln(ln_x.exp(), self.a, self.b, &self.tol) {
            Ok(ln_b) => self.ln_scale + 2.0 * self.gamma * u + ln_b,
            Err(_) => f64::NAN,
        }
    }

    /// Q values at lags 0..=max_lag, accumulating the integral cumulatively.
    ///
    /// The first segment carries a u^{2H-1} derivative cusp at u = 0 and is
    /// handled by the tanh-sinh rule; later segments are analytic.
    fn q_values(&self, max_lag: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(max_lag + 1);
        out.push(self.prefactor * self.ln_k0.exp());
        let mut ln_integral = f64::NEG_INFINITY;
        for m in 1..=max_lag {
            let u0 = (m - 1) as f64 * self.dt;
            let u1 = m as f64 * self.dt;
            let shift = self.ln_integrand(u0).max(self.ln_integrand(u1));
            if !shift.is_finite() {
                return Err(Error::Quadrature {
                    context: "fou2_acvf integrand",
                });
            }
            let seg = if m == 1 {
                tanh_sinh(
                    |u, _, _| (self.ln_integrand(u) - shift).exp(),
                    u0,
                    u1,
                    1e-11,
                    "fou2_acvf",
                )?
            } else {
                adaptive_simpson(
                    |u| (self.ln_integrand(u) - shift).exp(),
                    u0,
                    u1,
                    1e-11,
                    0.0,
                    "fou2_acvf",
                )?
            };
            if !(seg > 0.0) {
                return Err(Error::Quadrature {
                    context: "fou2_acvf segment",
                });
            }
            ln_integral = log_add_exp(ln_integral, shift + seg.ln());
            let tau = u1;
            let val = self.prefactor
                * (-self.gamma * tau + log_add_exp(self.ln_k0, ln_integral)).exp();
            out.push(val);
        }
        Ok(out)
    }
}

/// Q(m dt): autocovariance of the fOU2 level process at grid lag m.
pub fn fou2_acvf(p: &Fou2Params, m: usize) -> Result<f64> {
    Ok(fou2_acvf_seq(p, m)?[m])
}

/// Q(0), ..., Q(max_lag dt).
pub fn fou2_acvf_seq(p: &Fou2Params, max_lag: usize) -> Result<Vec<f64>> {
    ClosedForm::new(p)?.q_values(max_lag)
}

/// Increment-process autocovariance
/// C(m) = 2 Q(m) - Q(m-1) - Q(m+1), with C(0) = 2 (Q(0) - Q(1)).
pub fn fou2_increment_acvf(p: &Fou2Params, m: usize) -> Result<f64> {
    let q = fou2_acvf_seq(p, m + 1)?;
    Ok(increment_from_q(&q, m))
}

pub fn fou2_increment_acvf_seq(p: &Fou2Params, max_lag: usize) -> Result<Vec<f64>> {
    let q = fou2_acvf_seq(p, max_lag + 1)?;
    Ok((0..=max_lag).map(|m| increment_from_q(&q, m)).collect())
}

fn increment_from_q(q: &[f64], m: usize) -> f64 {
    if m == 0 {
        2.0 * (q[0] - q[1])
    } else {
        2.0 * q[m] - q[m - 1] - q[m + 1]
    }
}

/// Direct 2-D quadrature of the level-covariance kernel at times (t, s).
///
/// After the substitutions m = H e^{u/H}, n = H e^{v/H} and theta = n/m the
/// kernel becomes m^{2gH-1} theta^{(g-1)H} |1-theta|^{2H-2} over
/// { 0 < m < a_t, 0 < theta < a_s/m }, and every endpoint singularity is an
/// integrable power handled by the tanh-sinh rule.  Slow; test use only.
pub fn fou2_acvf_oracle(p: &Fou2Params, t: f64, s: f64) -> Result<f64> {
    let (t, s) = if t >= s { (t, s) } else { (s, t) };
    if !(s >= 0.0) {
        return Err(Error::Domain(format!(
            "fou2_acvf_oracle: times must be nonnegative, got ({t}, {s})"
        )));
    }
    let h = p.hurst;
    let g = p.gamma;
    let a_t = h * (t / h).exp();
    let a_s = h * (s / h).exp();
    let pw_m = 2.0 * g * h - 1.0; // outer power of m
    let pw_th = (g - 1.0) * h; // theta power
    let pw_om = 2.0 * h - 2.0; // |1 - theta| power
    let inner_tol = 1e-9;

    // int_0^1 theta^A (1-theta)^B dtheta, shared by every m < a_s
    let unit_piece = tanh_sinh(
        |_x, da, db| da.powf(pw_th) * db.powf(pw_om),
        0.0,
        1.0,
        inner_tol,
        "fou2_oracle unit piece",
    )?;

    // int_1^{1+len} theta^A (theta-1)^B dtheta
    let upper_piece = |len: f64| -> Result<f64> {
        if !(len > 0.0) {
            return Ok(0.0);
        }
        crate::quad::tanh_sinh_len(
            |x, da, _db| x.powf(pw_th) * da.powf(pw_om),
            1.0,
            len,
            inner_tol,
            "fou2_oracle upper piece",
        )
    };

    // int_0^r theta^A (1-theta)^B dtheta for r < 1, with 1-r supplied exactly
    let partial_piece = |r: f64, one_minus_r: f64| -> Result<f64> {
        tanh_sinh(
            |_x, da, db| da.powf(pw_th) * (one_minus_r + db).powf(pw_om),
            0.0,
            r,
            inner_tol,
            "fou2_oracle partial piece",
        )
    };

    // m in (0, a_s): inner = unit piece + upper piece with length a_s/m - 1 = db/m
    let square = tanh_sinh(
        |_m, da, db| {
            let m_eff = da;
            if m_eff <= 0.0 {
                return 0.0;
            }
            let inner = match upper_piece(db / m_eff) {
                Ok(v) => unit_piece + v,
                Err(_) => return f64::NAN,
            };
            let w = m_eff.powf(pw_m);
            if w == 0.0 {
                0.0
            } else {
                w * inner
            }
        },
        0.0,
        a_s,
        1e-8,
        "fou2_oracle outer square",
    )?;

    // m in (a_s, a_t): inner integral capped at r = a_s/m < 1, where
    // 1 - r = (m - a_s)/m comes from the exact left offset
    let strip = if a_t > a_s {
        tanh_sinh(
            |m, da, _db| {
                let m_eff = a_s + da;
                let r = a_s / m_eff;
                let one_minus_r = da / m_eff;
                if !(r > 0.0) {
                    return 0.0;
                }
                match partial_piece(r, one_minus_r) {
                    Ok(v) => m.powf(pw_m) * v,
                    Err(_) => f64::NAN,
                }
            },
            a_s,
            a_t,
            1e-8,
            "fou2_oracle outer strip",
        )?
    } else {
        0.0
    };

    let c2 = (-2.0 * (g - 1.0) * h * h.ln()).exp() * h * (2.0 * h - 1.0);
    Ok(c2 * (-g * (t + s)).exp() * (square + strip))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(h: f64, g: f64, dt: f64) -> Fou2Params {
        Fou2Params::new(h, g, dt).unwrap()
    }

    #[test]
    fn lag_zero_closed_form() {
        // Q(0) = H^{2H} (2H-1)/g B((g-1)H + 1, 2H - 1)
        for &(h, g) in &[(0.9, 0.3), (0.6, 1.5), (0.75, 0.1)] {
            let p = params(h, g, 0.5);
            let expect = h.powf(2.0 * h) * (2.0 * h - 1.0) / g
                * beta((g - 1.0) * h + 1.0, 2.0 * h - 1.0).unwrap();
            let got = fou2_acvf(&p, 0).unwrap();
            assert!(
                ((got - expect) / expect).abs() < 1e-12,
                "h={h} g={g}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn rejects_low_hurst() {
        assert!(Fou2Params::new(0.5, 0.3, 1.0).is_err());
        assert!(Fou2Params::new(0.5 + 1e-9, 0.3, 1.0).is_err());
    }

    #[test]
    fn closed_form_matches_2d_oracle() {
        let p = params(0.9, 0.3, 0.5);
        let q = fou2_acvf_seq(&p, 6).unwrap();
        for m in [0usize, 1, 3, 6] {
            let tau = m as f64 * p.dt;
            // shift both times away from zero; the process is stationary
            let oracle = fou2_acvf_oracle(&p, 1.0 + tau, 1.0).unwrap();
            assert!(
                ((q[m] - oracle) / oracle).abs() < 1e-5,
                "m={m}: closed {} vs oracle {oracle}",
                q[m]
            );
        }
    }

    #[test]
    fn oracle_is_symmetric_and_stationary() {
        let p = params(0.75, 0.6, 0.5);
        let a = fou2_acvf_oracle(&p, 1.7, 0.4).unwrap();
        let b = fou2_acvf_oracle(&p, 0.4, 1.7).unwrap();
        assert!(((a - b) / a).abs() < 1e-7);
        let shifted: Vec<f64> = [0.0, 0.8, 2.0]
            .iter()
            .map(|&c| fou2_acvf_oracle(&p, 1.3 + c, 0.4 + c).unwrap())
            .collect();
        for w in shifted.windows(2) {
            assert!(
                ((w[0] - w[1]) / w[0]).abs() < 2e-5,
                "stationarity: {shifted:?}"
            );
        }
    }

    #[test]
    fn oracle_diagonal_matches_lag_zero() {
        let p = params(0.8, 0.7, 0.25);
        let q0 = fou2_acvf(&p, 0).unwrap();
        let oracle = fou2_acvf_oracle(&p, 0.9, 0.9).unwrap();
        assert!(((q0 - oracle) / q0).abs() < 1e-5, "{q0} vs {oracle}");
    }

    #[test]
    fn increment_lag_zero_identity() {
        let p = params(0.9, 0.3, 1.0);
        let q = fou2_acvf_seq(&p, 1).unwrap();
        let c0 = fou2_increment_acvf(&p, 0).unwrap();
        assert_eq!(c0, 2.0 * (q[0] - q[1]));
        assert!(c0 > 0.0);
    }

    #[test]
    fn increment_has_exponential_envelope() {
        // |C(m)| <= A exp(-c m) with fitted c > 0 over m in [5, 40]
        let p = params(0.9, 0.3, 1.0);
        let c = fou2_increment_acvf_seq(&p, 40).unwrap();
        let pts: Vec<(f64, f64)> = (5..=40)
            .map(|m| (m as f64, c[m].abs().max(1e-300).ln()))
            .collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(slope < 0.0, "fitted decay rate must be positive, slope {slope}");
    }

    #[test]
    fn increment_matches_oracle_second_difference() {
        // C(m) = 2Q(m) - Q(m-1) - Q(m+1) recomputed from 2-D oracle values
        let p = params(0.9, 0.3, 1.0);
        let c = fou2_increment_acvf_seq(&p, 2).unwrap();
        let oq = |m: usize| fou2_acvf_oracle(&p, 2.0 + m as f64 * p.dt, 2.0).unwrap();
        let (q0, q1, q2, q3) = (oq(0), oq(1), oq(2), oq(3));
        let c1 = 2.0 * q1 - q0 - q2;
        let c2 = 2.0 * q2 - q1 - q3;
        assert!((c[1] - c1).abs() <= 2e-4 * q0, "C(1): {} vs {c1}", c[1]);
        assert!((c[2] - c2).abs() <= 2e-4 * q0, "C(2): {} vs {c2}", c[2]);
    }

    #[test]
    fn seq_matches_pointwise_evaluation() {
        let p = params(0.7, 1.1, 0.3);
        let seq = fou2_acvf_seq(&p, 12).unwrap();
        for m in [0usize, 4, 12] {
            let single = fou2_acvf(&p, m).unwrap();
            assert!(((seq[m] - single) / single).abs() < 1e-12);
        }
    }

    #[test]
    fn long_lag_table_stays_finite() {
        let p = params(0.8, 1.5, 1.0);
        let q = fou2_acvf_seq(&p, 600).unwrap();
        assert!(q.iter().all(|v| v.is_finite()));
        assert!(q[600] > 0.0 && q[600] < q[0]);
    }
}
