//! Energy detector over an unfaded (AWGN) channel.
//!
//! Under H0 the decision statistic is central chi-square with 2u degrees of
//! freedom; under H1 it is noncentral with noncentrality 2γ. Everything here
//! takes γ in linear units.

use std::fmt;

use crate::average::EvalPolicy;
use crate::error::{domain, Error, Result};
use crate::quad;
use crate::specfun::{self, ln_gamma, poisson_ln_pmf, FunctionAccuracy};

/// Time-bandwidth product of the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    u: f64,
    is_integer: bool,
}

impl DetectorConfig {
    pub fn new(u: f64) -> Result<Self> {
        if !(u > 0.0) || !u.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "time-bandwidth product u = {u} must be positive"
            )));
        }
        Ok(Self {
            u,
            is_integer: (u - u.round()).abs() < 1e-12,
        })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn is_integer(&self) -> bool {
        self.is_integer
    }

    /// `Some(n)` when u is an integer.
    pub fn integer_u(&self) -> Option<usize> {
        self.is_integer.then(|| self.u.round() as usize)
    }
}

/// How a [`MetricValue`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedInteger,
    ClosedSeries,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedInteger => "closed_integer",
            Method::ClosedSeries => "closed_series",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A probability together with how it was computed and how far it may be off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub value: f64,
    pub method: Method,
    /// Series terms or quadrature intervals consumed.
    pub terms_used: usize,
    pub est_error: f64,
}

impl MetricValue {
    pub(crate) fn new(value: f64, method: Method, terms_used: usize, est_error: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            method,
            terms_used,
            est_error: est_error.abs(),
        }
    }

    /// `1 − value`, keeping the provenance.
    pub fn complement(self) -> Self {
        Self {
            value: 1.0 - self.value,
            ..self
        }
    }
}

fn check_gamma(func: &'static str, gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(domain(
            func,
            format!("SNR {gamma} must be finite and non-negative"),
        ));
    }
    Ok(())
}

/// Probability of false alarm Γ(u, λ/2)/Γ(u).
pub fn pf(cfg: &DetectorConfig, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(domain(
            "pf",
            format!("threshold {lambda} must be non-negative"),
        ));
    }
    specfun::reg_upper_gamma(cfg.u, 0.5 * lambda)
}

/// Probability of detection Q_u(√(2γ), √λ).
pub fn pd(cfg: &DetectorConfig, gamma: f64, lambda: f64) -> Result<f64> {
    check_gamma("pd", gamma)?;
    if !(lambda >= 0.0) {
        return Err(domain(
            "pd",
            format!("threshold {lambda} must be non-negative"),
        ));
    }
    specfun::marcum_q(cfg.u, (2.0 * gamma).sqrt(), lambda.sqrt())
}

/// H0 density of the statistic, f0(λ) = −∂P_f/∂λ.
fn h0_density(u: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return match u.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => f64::INFINITY,
            Some(std::cmp::Ordering::Equal) => 0.5,
            _ => 0.0,
        };
    }
    let s = 0.5 * lambda;
    0.5 * ((u - 1.0) * s.ln() - s - ln_gamma(u).unwrap_or(f64::INFINITY)).exp()
}

/// Threshold λ with `pf(cfg, λ) = pf_target`, found by Newton steps kept
/// inside a shrinking bracket.
pub fn threshold_for_pf(cfg: &DetectorConfig, pf_target: f64) -> Result<f64> {
    if !(pf_target > 0.0 && pf_target < 1.0) {
        return Err(domain(
            "threshold_for_pf",
            format!("target {pf_target} must lie in (0, 1)"),
        ));
    }
    let u = cfg.u;
    let mut lo = 0.0;
    let mut hi = 2.0 * u + 10.0;
    while pf(cfg, hi)? > pf_target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Convergence {
                func: "threshold_for_pf",
                terms: 0,
            });
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..300 {
        let diff = pf(cfg, x)? - pf_target;
        if diff.abs() <= 1e-13 * pf_target.min(1.0 - pf_target) {
            return Ok(x);
        }
        if diff > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope = h0_density(u, x);
        let newton = x + diff / slope;
        x = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(x);
        }
    }
    Err(Error::Convergence {
        func: "threshold_for_pf",
        terms: 300,
    })
}

/// AUC over AWGN. Integer u uses the finite Laguerre sum, any other u the
/// Poisson-weighted incomplete-beta series.
pub fn auc_awgn(cfg: &DetectorConfig, gamma: f64) -> Result<MetricValue> {
    auc_awgn_with(cfg, gamma, &EvalPolicy::default())
}

pub fn auc_awgn_with(cfg: &DetectorConfig, gamma: f64, policy: &EvalPolicy) -> Result<MetricValue> {
    check_gamma("auc_awgn", gamma)?;
    match cfg.integer_u() {
        Some(n) => {
            let s = laguerre_complement(n, gamma, n as f64 - 1.0);
            let err = 4.0 * (n as f64 + 1.0) * f64::EPSILON * s.max(f64::EPSILON);
            Ok(MetricValue::new(1.0 - s, Method::ClosedInteger, n, err))
        }
        None => auc_awgn_series(cfg, gamma, policy),
    }
}

/// The real-u series, usable for integer u too.
pub fn auc_awgn_series(
    cfg: &DetectorConfig,
    gamma: f64,
    policy: &EvalPolicy,
) -> Result<MetricValue> {
    check_gamma("auc_awgn_series", gamma)?;
    let acc = FunctionAccuracy::default();
    let u = cfg.u;
    let mut sum = 0.0;
    let mut small = 0;
    for k in 0..policy.max_terms {
        let ln_w = poisson_ln_pmf(k as u64, gamma);
        let e = half_beta_tail(u, k as f64, &acc)?;
        let term = ln_w.exp() * e;
        sum += term;
        if term <= policy.rel_tol * sum {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 3 {
            // Remaining terms weigh at most e_k times the Poisson tail mass.
            // At very high SNR both factors underflow long before the mode.
            let rest = if gamma == 0.0 || e == 0.0 {
                0.0
            } else {
                e * acc.reg_lower_gamma(k as f64 + 1.0, gamma)?
            };
            if rest <= policy.rel_tol * sum || rest < f64::MIN_POSITIVE {
                return Ok(MetricValue::new(
                    1.0 - sum,
                    Method::ClosedSeries,
                    k + 1,
                    rest + 1e-15,
                ));
            }
        }
    }
    Err(Error::Convergence {
        func: "auc_awgn_series",
        terms: policy.max_terms,
    })
}

/// I_{1/2}(u + k, u): probability that a Gamma(u + k) variate falls below an
/// independent Gamma(u) one, i.e. that the H1 statistic with k Poisson
/// increments loses to the H0 statistic.
pub(crate) fn half_beta_tail(u: f64, k: f64, acc: &FunctionAccuracy) -> Result<f64> {
    let a = u + k;
    let ln_pref =
        -(a + u) * std::f64::consts::LN_2 + ln_gamma(a + u)? - ln_gamma(a + 1.0)? - ln_gamma(u)?;
    Ok(ln_pref.exp() * acc.gauss_2f1(1.0, a + u, a + 1.0, 0.5)?)
}

/// Σ_{l<n} L_l^α(−γ/2) 2^{−(l+n)} e^{−γ/2}, the complement of the integer-u
/// AUC when α = n − 1.
pub(crate) fn laguerre_complement(n: usize, gamma: f64, alpha: f64) -> f64 {
    let x = -0.5 * gamma;
    // m_l = L_l(x) / 2^l, rescaled as needed to stay finite.
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sum = 0.0;
    let mut ln_scale = 0.0;
    for l in 0..n {
        sum += cur;
        let lf = l as f64;
        let next =
            ((2.0 * lf + 1.0 + alpha - x) * 0.5 * cur - (lf + alpha) * 0.25 * prev) / (lf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > 1e280 {
            prev *= 1e-280;
            cur *= 1e-280;
            sum *= 1e-280;
            ln_scale += 280.0 * std::f64::consts::LN_10;
        }
    }
    sum * (ln_scale + x - n as f64 * std::f64::consts::LN_2).exp()
}

/// Readings of the confluent-hypergeometric AUC expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypergeometricReading {
    /// e^{−γ} prefactor on the second sum, regularized terms for l < 0.
    Corrected,
    /// Argument +γ/2, no prefactor, terms with l < 0 dropped.
    AsPrinted,
    /// As printed but with argument −γ/2.
    NegatedArgument,
}

/// Integer-u AUC through the ₁F₁ form; must agree with [`auc_awgn`].
pub fn auc_awgn_1f1_variant(cfg: &DetectorConfig, gamma: f64) -> Result<MetricValue> {
    auc_awgn_1f1_reading(cfg, gamma, HypergeometricReading::Corrected)
}

pub fn auc_awgn_1f1_reading(
    cfg: &DetectorConfig,
    gamma: f64,
    reading: HypergeometricReading,
) -> Result<MetricValue> {
    check_gamma("auc_awgn_1f1_variant", gamma)?;
    let n = cfg.integer_u().ok_or_else(|| {
        domain(
            "auc_awgn_1f1_variant",
            format!("u = {} is not an integer", cfg.u),
        )
    })?;
    let u = n as f64;
    let acc = FunctionAccuracy::default();
    let x = 0.5 * gamma;
    let ln2 = std::f64::consts::LN_2;

    let mut first = 0.0;
    for l in 0..n {
        first += if l == 0 {
            (-x).exp()
        } else {
            (l as f64 * x.ln() - ln_gamma(l as f64 + 1.0)? - x).exp()
        };
    }

    let arg = match reading {
        HypergeometricReading::NegatedArgument => -x,
        _ => x,
    };
    let mut second = 0.0;
    for l in 0..n {
        let lf = l as f64;
        let coef =
            specfun::pochhammer(u, l as i64)? * (-ln_gamma(lf + 1.0)? - (u + lf) * ln2).exp();
        second += coef * acc.kummer_1f1(u + lf, 1.0 + lf, arg)?;
    }
    if reading == HypergeometricReading::Corrected {
        // For l = −j the regularized ₁F₁ collapses to x^j/j! · ₁F₁(u; 1+j; x).
        for j in 1..n {
            let jf = j as f64;
            let ln_coef = if x == 0.0 {
                f64::NEG_INFINITY
            } else {
                jf * x.ln() - ln_gamma(jf + 1.0)? - (u - jf) * ln2
            };
            second += ln_coef.exp() * acc.kummer_1f1(u, 1.0 + jf, x)?;
        }
        second *= (-gamma).exp();
    }
    if !second.is_finite() {
        return Err(Error::Overflow {
            func: "auc_awgn_1f1_variant",
        });
    }
    let value = 1.0 - first + second;
    let err = 16.0 * n as f64 * f64::EPSILON * (1.0 + second.abs());
    // Readings other than the corrected one can leave [0, 1]; keep the raw value.
    Ok(MetricValue {
        value,
        method: Method::ClosedInteger,
        terms_used: 2 * n,
        est_error: err,
    })
}

/// CAUC = 1 − AUC.
pub fn cauc_awgn(cfg: &DetectorConfig, gamma: f64) -> Result<MetricValue> {
    auc_awgn(cfg, gamma).map(MetricValue::complement)
}

/// AUC by integrating P_d against the H0 density of the threshold.
pub fn auc_quadrature(
    cfg: &DetectorConfig,
    gamma: f64,
    policy: &EvalPolicy,
) -> Result<MetricValue> {
    check_gamma("auc_quadrature", gamma)?;
    let u = cfg.u;
    let acc = FunctionAccuracy::default();
    let ln_gu1 = ln_gamma(u + 1.0)?;
    let ln_gu = ln_gamma(u)?;
    let a = (2.0 * gamma).sqrt();
    // P_d as a function of s = λ/2.
    let pd_at = |s: f64| acc.marcum_q(u, a, (2.0 * s).sqrt());

    // Body s ∈ [0, u]. For u < 1 substitute v = s^u to remove the s^{u−1} pole.
    let body = if u < 1.0 {
        quad::integrate(
            |v: f64| {
                let s = v.powf(1.0 / u);
                Ok(pd_at(s)? * (-s - ln_gu1).exp())
            },
            0.0,
            u.powf(u),
            &[],
            policy.rel_tol,
            0.1 * policy.rel_tol,
            policy.quad_levels,
        )?
    } else if cfg.is_integer() {
        quad::integrate(
            |s: f64| {
                if s == 0.0 {
                    return Ok(if u == 1.0 { 1.0 } else { 0.0 });
                }
                Ok(pd_at(s)? * ((u - 1.0) * s.ln() - s - ln_gu).exp())
            },
            0.0,
            u,
            &[],
            policy.rel_tol,
            0.1 * policy.rel_tol,
            policy.quad_levels,
        )?
    } else {
        // Fractional powers of s at the origin become powers of w² with s = w².
        quad::integrate(
            |w: f64| {
                if w == 0.0 {
                    return Ok(0.0);
                }
                let s = w * w;
                Ok(2.0 * pd_at(s)? * ((2.0 * u - 1.0) * w.ln() - s - ln_gu).exp())
            },
            0.0,
            u.sqrt(),
            &[],
            policy.rel_tol,
            0.1 * policy.rel_tol,
            policy.quad_levels,
        )?
    };

    // Tail s = u + c·t/(1 − t), c = u + γ, which puts the P_d knee near t = 1/2.
    let c = u + gamma;
    let tail = quad::integrate(
        |t: f64| {
            if t >= 1.0 {
                return Ok(0.0);
            }
            let s = u + c * t / (1.0 - t);
            let jac = c / ((1.0 - t) * (1.0 - t));
            let dens = ((u - 1.0) * s.ln() - s - ln_gu).exp();
            if dens == 0.0 {
                return Ok(0.0);
            }
            Ok(pd_at(s)? * dens * jac)
        },
        0.0,
        1.0,
        &[0.5],
        policy.rel_tol,
        0.1 * policy.rel_tol,
        policy.quad_levels,
    )?;

    Ok(MetricValue::new(
        body.value + tail.value,
        Method::Quadrature,
        body.intervals + tail.intervals,
        body.abs_error + tail.abs_error,
    ))
}

/// `n_points` thresholds with P_f evenly spaced over [0, 1], as `(pf, λ)`.
/// The endpoints are λ = ∞ and λ = 0.
pub fn roc_thresholds(cfg: &DetectorConfig, n_points: usize) -> Result<Vec<(f64, f64)>> {
    if n_points < 2 {
        return Err(domain(
            "roc_points",
            format!("need at least 2 points, got {n_points}"),
        ));
    }
    let last = (n_points - 1) as f64;
    (0..n_points)
        .map(|i| {
            let p = i as f64 / last;
            let lambda = match i {
                0 => f64::INFINITY,
                _ if i == n_points - 1 => 0.0,
                _ => threshold_for_pf(cfg, p)?,
            };
            Ok((p, lambda))
        })
        .collect()
}

/// ROC samples `(pf, pd)` ordered by increasing P_f.
pub fn roc_points_awgn(
    cfg: &DetectorConfig,
    gamma: f64,
    n_points: usize,
) -> Result<Vec<(f64, f64)>> {
    check_gamma("roc_points_awgn", gamma)?;
    roc_thresholds(cfg, n_points)?
        .into_iter()
        .map(|(p, lambda)| Ok((p, pd(cfg, gamma, lambda)?)))
        .collect()
}

/// Trapezoid area under a sampled curve.
pub fn trapezoid_area(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[1].1 + w[0].1))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(u: f64) -> DetectorConfig {
        DetectorConfig::new(u).unwrap()
    }

    #[test]
    fn config_flags_integers() {
        assert!(cfg(3.0).is_integer());
        assert!(cfg(3.0 + 1e-13).is_integer());
        assert!(!cfg(2.5).is_integer());
        assert!(DetectorConfig::new(0.0).is_err());
        assert!(DetectorConfig::new(f64::NAN).is_err());
    }

    #[test]
    fn laguerre_complement_u1() {
        for &g in &[0.0, 1.0, 7.5] {
            let s = laguerre_complement(1, g, 0.0);
            assert!((s - 0.5 * (-0.5 * g).exp()).abs() < 1e-16);
        }
    }

    #[test]
    fn laguerre_complement_survives_huge_snr() {
        let s = laguerre_complement(40, 5000.0, 39.0);
        assert!(s.is_finite() && (0.0..1e-300).contains(&s));
    }

    #[test]
    fn half_beta_tail_symmetric_case() {
        let acc = FunctionAccuracy::new(1e-15, 10_000).unwrap();
        for &u in &[0.3, 1.0, 2.5, 7.0] {
            assert!((half_beta_tail(u, 0.0, &acc).unwrap() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn threshold_inverts_pf() {
        let c = cfg(1.0);
        let lam = threshold_for_pf(&c, 0.5).unwrap();
        assert!((lam - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!(threshold_for_pf(&c, 0.0).is_err());
        assert!(threshold_for_pf(&c, 1.0).is_err());
    }

    #[test]
    fn h0_density_matches_difference_quotient() {
        let c = cfg(2.5);
        let (lam, h) = (3.7, 1e-5);
        let fd = (pf(&c, lam - h).unwrap() - pf(&c, lam + h).unwrap()) / (2.0 * h);
        assert!((fd - h0_density(2.5, lam)).abs() < 1e-9);
    }
}
