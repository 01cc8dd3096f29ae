//! Closed-form autocovariance kernels: fractional Gaussian noise, the
//! Doob-transform OU process, the second-kind fractional OU process and its
//! increments, the mixed Gaussian noise built from all three, and temporal
//! aggregation of a base kernel.

mod fou2;

pub use fou2::{fou2_acvf, fou2_acvf_oracle, fou2_acvf_seq, fou2_increment_acvf, fou2_increment_acvf_seq};

use crate::acvf::AcvfSequence;
use crate::error::{Error, Result};

/// Hurst range accepted for the second-kind fractional OU process.  The
/// lower bound keeps the beta argument 2H - 1 away from its pole.
pub const FOU2_HURST_MIN: f64 = 0.5 + 1e-6;
pub const FOU2_HURST_MAX: f64 = 1.0 - 1e-9;

/// Fractional Gaussian noise: Hurst exponent and the variance of a single
/// increment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FgnParams {
    pub hurst: f64,
    pub sigma2: f64,
}

impl FgnParams {
    pub fn new(hurst: f64, sigma2: f64) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::Domain(format!(
                "fgn.hurst must lie in (0, 1), got {hurst}"
            )));
        }
        if !(sigma2 > 0.0) {
            return Err(Error::Domain(format!(
                "fgn.sigma2 must be positive, got {sigma2}"
            )));
        }
        Ok(FgnParams { hurst, sigma2 })
    }
}

/// Second-kind fractional OU process on an equidistant grid with step `dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fou2Params {
    pub hurst: f64,
    pub gamma: f64,
    pub dt: f64,
}

impl Fou2Params {
    pub fn new(hurst: f64, gamma: f64, dt: f64) -> Result<Self> {
        if !(hurst >= FOU2_HURST_MIN && hurst <= FOU2_HURST_MAX) {
            return Err(Error::Domain(format!(
                "fou2.hurst must lie in ({FOU2_HURST_MIN}, {FOU2_HURST_MAX}), got {hurst}"
            )));
        }
        if !(gamma > 0.0) {
            return Err(Error::Domain(format!(
                "fou2.gamma must be positive, got {gamma}"
            )));
        }
        if !(dt > 0.0) {
            return Err(Error::Domain(format!("fou2.dt must be positive, got {dt}")));
        }
        Ok(Fou2Params { hurst, gamma, dt })
    }
}

/// Mixed fractional Gaussian noise: Brownian variance rate, an fGn component
/// whose increment variance is pinned to dt^(2H), and an fOU2 component on
/// the same grid.  The two Hurst exponents may differ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedParams {
    pub sigma2_bm: f64,
    pub fgn: FgnParams,
    pub fou2: Fou2Params,
    pub horizon_t: f64,
    pub grid_n: usize,
}

impl MixedParams {
    pub fn new(
        sigma2_bm: f64,
        hurst_fgn: f64,
        hurst_fou2: f64,
        gamma: f64,
        horizon_t: f64,
        grid_n: usize,
    ) -> Result<Self> {
        if !(sigma2_bm >= 0.0) {
            return Err(Error::Domain(format!(
                "mixed.sigma2_bm must be nonnegative, got {sigma2_bm}"
            )));
        }
        if !(hurst_fgn > 0.5) {
            return Err(Error::Domain(format!(
                "mixed.hurst must exceed 1/2, got {hurst_fgn}"
            )));
        }
        if !(horizon_t > 0.0) {
            return Err(Error::Domain(format!(
                "mixed.horizon_t must be positive, got {horizon_t}"
            )));
        }
        if grid_n == 0 {
            return Err(Error::Domain("mixed.grid_n must be positive".to_string()));
        }
        let dt = horizon_t / grid_n as f64;
        let fgn = FgnParams::new(hurst_fgn, dt.powf(2.0 * hurst_fgn))?;
        let fou2 = Fou2Params::new(hurst_fou2, gamma, dt)?;
        Ok(MixedParams {
            sigma2_bm,
            fgn,
            fou2,
            horizon_t,
            grid_n,
        })
    }

    pub fn dt(&self) -> f64 {
        self.horizon_t / self.grid_n as f64
    }

    /// Same parameters with a different mean-reversion rate.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        MixedParams::new(
            self.sigma2_bm,
            self.fgn.hurst,
            self.fou2.hurst,
            gamma,
            self.horizon_t,
            self.grid_n,
        )
    }
}

/// gamma_k = sigma^2/2 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
pub fn fgn_acvf(p: &FgnParams, k: usize) -> f64 {
    let two_h = 2.0 * p.hurst;
    let kf = k as f64;
    0.5 * p.sigma2 * ((kf + 1.0).powf(two_h) - 2.0 * kf.powf(two_h) + (kf - 1.0).abs().powf(two_h))
}

pub fn fgn_acvf_seq(p: &FgnParams, max_lag: usize) -> AcvfSequence {
    let values = (0..=max_lag).map(|k| fgn_acvf(p, k)).collect();
    AcvfSequence::new(1.0, values).expect("fgn variance is positive")
}

/// Stationary covariance at lag tau of the Doob transform
/// X_t = e^{-alpha t} B^H(a_t) with a_t = (H/alpha) e^{alpha t / H}.
///
/// Written as
///   1/2 (H/alpha)^{2H} [ e^{-alpha tau} + e^{alpha tau} (1 - (1 - e^{-alpha tau / H})^{2H}) ]
/// which follows from the fBm covariance, reduces to e^{-alpha tau}/(2 alpha)
/// at H = 1/2, and stays stable for large lags.
pub fn doob_ou_cov(hurst: f64, alpha: f64, tau: f64) -> Result<f64> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::Domain(format!(
            "doob_ou_cov: hurst must lie in (0, 1), got {hurst}"
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!(
            "doob_ou_cov: alpha must be positive, got {alpha}"
        )));
    }
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!(
            "doob_ou_cov: tau must be nonnegative, got {tau}"
        )));
    }
    let scale = 0.5 * (hurst / alpha).powf(2.0 * hurst);
    let x = (-alpha * tau / hurst).exp();
    // 1 - (1 - x)^{2H} without cancellation
    let bracket = -(2.0 * hurst * (-x).ln_1p()).exp_m1();
    Ok(scale * ((-alpha * tau).exp() + (alpha * tau).exp() * bracket))
}

/// Mixed-noise autocovariance at lag k.  The Brownian part contributes only
/// at lag zero; the fGn and fOU2-increment parts add under independence.
pub fn mixed_acvf(p: &MixedParams, k: usize) -> Result<f64> {
    let bm = if k == 0 { p.sigma2_bm * p.dt() } else { 0.0 };
    Ok(bm + fgn_acvf(&p.fgn, k) + fou2_increment_acvf(&p.fou2, k)?)
}

pub fn mixed_acvf_seq(p: &MixedParams, max_lag: usize) -> Result<AcvfSequence> {
    let incr = fou2_increment_acvf_seq(&p.fou2, max_lag)?;
    let values = (0..=max_lag)
        .map(|k| {
            let bm = if k == 0 { p.sigma2_bm * p.dt() } else { 0.0 };
            bm + fgn_acvf(&p.fgn, k) + incr[k]
        })
        .collect();
    AcvfSequence::new(p.dt(), values)
}

/// Covariance at aggregate lag j of nonoverlapping m-sums of the base
/// process: sum_{i=-(m-1)}^{m-1} (m - |i|) gamma(j m + i).
pub fn aggregated_acvf(base: &AcvfSequence, m_agg: usize, j: usize) -> Result<f64> {
    if m_agg == 0 {
        return Err(Error::Domain("aggregation order must be >= 1".to_string()));
    }
    let m = m_agg as i64;
    let j = j as i64;
    base.require_max_lag((j * m + m - 1) as usize)?;
    let mut sum = 0.0;
    for i in -(m - 1)..=(m - 1) {
        sum += (m - i.abs()) as f64 * base.get_signed(j * m + i)?;
    }
    Ok(sum)
}

pub fn aggregated_acvf_seq(
    base: &AcvfSequence,
    m_agg: usize,
    max_lag: usize,
) -> Result<AcvfSequence> {
    let values: Result<Vec<f64>> = (0..=max_lag).map(|j| aggregated_acvf(base, m_agg, j)).collect();
    AcvfSequence::new(base.dt() * m_agg as f64, values?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fgn_brownian_increments_are_independent() {
        let p = FgnParams::new(0.5, 1.0).unwrap();
        assert_eq!(fgn_acvf(&p, 3), 0.0);
        assert_eq!(fgn_acvf(&p, 1), 0.0);
    }

    #[test]
    fn fgn_lag_zero_is_sigma2() {
        for &(h, s2) in &[(0.2, 0.7), (0.5, 2.0), (0.9, 1.3)] {
            let p = FgnParams::new(h, s2).unwrap();
            assert!((fgn_acvf(&p, 0) - s2).abs() < 1e-14);
        }
    }

    /// fBm covariance from the defining identity, used to expand
    /// E[(B_{k+1}-B_k)(B_1-B_0)] independently of the closed form.
    fn fbm_cov(t: f64, s: f64, h: f64) -> f64 {
        0.5 * (t.abs().powf(2.0 * h) + s.abs().powf(2.0 * h) - (t - s).abs().powf(2.0 * h))
    }

    #[test]
    fn fgn_matches_fbm_expansion_oracle() {
        let h = 0.9;
        let p = FgnParams::new(h, 1.0).unwrap();
        let expect = (2f64.powf(1.8) - 2.0) / 2.0;
        let got = fgn_acvf(&p, 1);
        assert!((got - expect).abs() < 1e-14);
        for k in 0..12usize {
            let kf = k as f64;
            let oracle =
                fbm_cov(kf + 1.0, 1.0, h) - fbm_cov(kf + 1.0, 0.0, h) - fbm_cov(kf, 1.0, h)
                    + fbm_cov(kf, 0.0, h);
            assert!(
                (fgn_acvf(&p, k) - oracle).abs() < 1e-12,
                "lag {k}: {} vs {oracle}",
                fgn_acvf(&p, k)
            );
        }
    }

    #[test]
    fn fgn_positive_under_long_memory() {
        let p = FgnParams::new(0.7, 1.0).unwrap();
        for k in 1..=10_000usize {
            assert!(fgn_acvf(&p, k) > 0.0, "lag {k}");
        }
    }

    #[test]
    fn fgn_hyperbolic_asymptote() {
        let h = 0.7;
        let p = FgnParams::new(h, 1.0).unwrap();
        let k = 1000.0f64;
        let asymptote = h * (2.0 * h - 1.0) * k.powf(2.0 * h - 2.0);
        let ratio = fgn_acvf(&p, 1000) / asymptote;
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn doob_variance_at_lag_zero() {
        for &(h, a) in &[(0.6, 0.5), (0.9, 0.3), (0.3, 2.0)] {
            let got = doob_ou_cov(h, a, 0.0).unwrap();
            let expect = (h / a).powf(2.0 * h);
            assert!(((got - expect) / expect).abs() < 1e-14);
        }
    }

    #[test]
    fn doob_reduces_to_classical_ou() {
        let alpha = 0.7;
        for &tau in &[0.0, 0.4, 1.3, 5.0] {
            let got = doob_ou_cov(0.5, alpha, tau).unwrap();
            let expect = (-alpha * tau).exp() / (2.0 * alpha);
            assert!(((got - expect) / expect).abs() < 1e-12, "tau={tau}");
        }
    }

    #[test]
    fn doob_matches_direct_transform_oracle() {
        // E[X_t X_s] = e^{-alpha(t+s)} Cov(B^H(a_t), B^H(a_s))
        let fbm_cov = |t: f64, s: f64, h: f64| {
            0.5 * (t.powf(2.0 * h) + s.powf(2.0 * h) - (t - s).abs().powf(2.0 * h))
        };
        for &(h, alpha) in &[(0.7, 0.4), (0.85, 1.2), (0.55, 0.1)] {
            for &tau in &[0.1, 0.9, 2.5] {
                let s = 0.8;
                let t = s + tau;
                let a = |u: f64| (h / alpha) * (alpha * u / h).exp();
                let oracle = (-(alpha) * (t + s)).exp() * fbm_cov(a(t), a(s), h);
                let got = doob_ou_cov(h, alpha, tau).unwrap();
                assert!(
                    ((got - oracle) / oracle).abs() < 1e-10,
                    "h={h} alpha={alpha} tau={tau}: {got} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn mixed_additivity_identity() {
        let p = MixedParams::new(0.8, 0.75, 0.75, 0.4, 64.0, 64).unwrap();
        let incr = fou2_increment_acvf_seq(&p.fou2, 12).unwrap();
        for k in 1..=12usize {
            let mixed = mixed_acvf(&p, k).unwrap();
            let fgn = fgn_acvf(&p.fgn, k);
            assert_eq!(mixed - fgn, incr[k]);
        }
    }

    #[test]
    fn mixed_variance_is_sum_of_components() {
        let p = MixedParams::new(1.3, 0.8, 0.7, 0.5, 32.0, 128).unwrap();
        let dt = p.dt();
        let q = fou2_acvf_seq(&p.fou2, 1).unwrap();
        let expect = 1.3 * dt + dt.powf(1.6) + 2.0 * (q[0] - q[1]);
        let got = mixed_acvf(&p, 0).unwrap();
        assert!(((got - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn mixed_with_negligible_extras_is_fgn() {
        // sigma_bm = 0 and a strongly mean-reverting fOU2 leave the fGn part
        let p = MixedParams::new(0.0, 0.8, 0.8, 9.5, 16.0, 16).unwrap();
        let q0 = fou2_acvf(&p.fou2, 0).unwrap();
        for k in 1..=8usize {
            let mixed = mixed_acvf(&p, k).unwrap();
            let fgn = fgn_acvf(&p.fgn, k);
            assert!(
                (mixed - fgn).abs() <= 2.0 * q0,
                "fOU2 remainder should be bounded by its variance scale"
            );
        }
    }

    #[test]
    fn aggregation_identity_and_white_noise() {
        let base = AcvfSequence::new(1.0, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        // m = 1 is the identity
        for j in 0..4usize {
            assert_eq!(aggregated_acvf(&base, 1, j).unwrap(), base.get(j).unwrap());
        }
        // white noise, m = 3: variance 3 at j = 0, zero beyond
        assert_eq!(aggregated_acvf(&base, 3, 0).unwrap(), 3.0);
        assert_eq!(aggregated_acvf(&base, 3, 1).unwrap(), 0.0);
    }

    #[test]
    fn aggregation_requires_enough_lags() {
        let base = AcvfSequence::new(1.0, vec![1.0, 0.5]).unwrap();
        assert!(matches!(
            aggregated_acvf(&base, 3, 1),
            Err(Error::InsufficientLags { .. })
        ));
    }

    #[test]
    fn params_reject_bad_values() {
        assert!(FgnParams::new(1.0, 1.0).is_err());
        assert!(FgnParams::new(0.5, 0.0).is_err());
        assert!(Fou2Params::new(0.5, 1.0, 1.0).is_err());
        assert!(Fou2Params::new(0.7, 0.0, 1.0).is_err());
        assert!(MixedParams::new(-0.1, 0.8, 0.8, 1.0, 1.0, 8).is_err());
        assert!(MixedParams::new(0.1, 0.5, 0.8, 1.0, 1.0, 8).is_err());
    }
}
