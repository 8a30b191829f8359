//! Detector metrics averaged over Hoyt fading.
//!
//! Closed forms come in two flavours: a finite double sum for integer u and a
//! Poisson-mixture series for any real u. Quadrature against the SNR density
//! is kept alongside as the reference.

use crate::detector::{self, half_beta_tail, DetectorConfig, Method, MetricValue};
use crate::error::{Error, Result};
use crate::hoyt::HoytFading;
use crate::quad;
use crate::specfun::{binomial, FunctionAccuracy};

/// Truncation and refinement limits for the averaged metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub quad_levels: u32,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_terms: 5_000,
            quad_levels: 20,
        }
    }
}

impl EvalPolicy {
    pub fn new(rel_tol: f64, max_terms: usize, quad_levels: u32) -> Result<Self> {
        let p = Self {
            rel_tol,
            max_terms,
            quad_levels,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol {} must lie in (0, 1)",
                self.rel_tol
            )));
        }
        if self.max_terms < 50 {
            return Err(Error::InvalidConfig(format!(
                "max_terms {} is below 50",
                self.max_terms
            )));
        }
        if self.quad_levels < 5 {
            return Err(Error::InvalidConfig(format!(
                "quad_levels {} is below 5",
                self.quad_levels
            )));
        }
        Ok(())
    }
}

/// Average AUC in closed form: the double sum for integer u, the series otherwise.
pub fn avg_auc_closed(
    cfg: &DetectorConfig,
    f: &HoytFading,
    policy: &EvalPolicy,
) -> Result<MetricValue> {
    match cfg.integer_u() {
        Some(n) => {
            let (s, terms) = integer_sum(n, f, IntegerForm::CORRECTED)?;
            let err = terms as f64 * 1e-14 * s + f64::EPSILON;
            Ok(MetricValue::new(1.0 - s, Method::ClosedInteger, terms, err))
        }
        None => avg_auc_series(cfg, f, policy),
    }
}

/// Average CAUC, the exact complement of [`avg_auc_closed`].
pub fn avg_cauc_closed(
    cfg: &DetectorConfig,
    f: &HoytFading,
    policy: &EvalPolicy,
) -> Result<MetricValue> {
    avg_auc_closed(cfg, f, policy).map(MetricValue::complement)
}

/// Real-u series, usable for integer u too.
///
/// Written as Ā = 1 − Σ_l e_l m_l where e_l = I_{1/2}(u + l, u) and m_l is
/// the fading average of the Poisson weight e^{−γ}γ^l/l!. The m_l sum to one
/// and e_l decreases, which gives a rigorous truncation bound.
pub fn avg_auc_series(
    cfg: &DetectorConfig,
    f: &HoytFading,
    policy: &EvalPolicy,
) -> Result<MetricValue> {
    let acc = FunctionAccuracy::default();
    let weights = PoissonAverage::new(f);
    let mut sum = 0.0;
    let mut mass = 0.0;
    let mut small = 0;
    for l in 0..policy.max_terms {
        let e = half_beta_tail(cfg.u(), l as f64, &acc)?;
        let m = weights.weight(l, &acc)?;
        let term = e * m;
        sum += term;
        mass += m;
        small = if term <= policy.rel_tol * sum {
            small + 1
        } else {
            0
        };
        if small >= 3 {
            let rest = e * (1.0 - mass).max(0.0);
            if rest <= policy.rel_tol * sum {
                return Ok(MetricValue::new(
                    1.0 - sum,
                    Method::ClosedSeries,
                    l + 1,
                    rest + 1e-15,
                ));
            }
        }
    }
    Err(Error::Convergence {
        func: "avg_auc_series",
        terms: policy.max_terms,
    })
}

/// m_l = E[e^{−γ}γ^l/l!] under Hoyt fading,
/// 2q(1+q²)(4q²γ̄)^l / D^{l+1} · ₂F₁((l+1)/2, l/2+1; 1; ((1−q⁴)/D)²)
/// with D = 4q²γ̄ + (1+q²)².
pub(crate) struct PoissonAverage {
    ln_lead: f64,
    ln_ratio: f64,
    z: f64,
}

impl PoissonAverage {
    pub(crate) fn new(f: &HoytFading) -> Self {
        Self::with_scale(f, 4.0)
    }

    /// Same family with D = c·q²γ̄ + (1+q²)²; c = 2 gives the e^{−γ/2} averages.
    fn with_scale(f: &HoytFading, c: f64) -> Self {
        let (q, gb) = (f.q(), f.gamma_bar());
        let q2 = q * q;
        let d = c * q2 * gb + (1.0 + q2) * (1.0 + q2);
        let z = ((1.0 - q2 * q2) / d).powi(2);
        debug_assert!((0.0..1.0).contains(&z));
        Self {
            ln_lead: (2.0 * q * (1.0 + q2) / d).ln(),
            ln_ratio: (c * q2 * gb / d).ln(),
            z,
        }
    }

    pub(crate) fn weight(&self, l: usize, acc: &FunctionAccuracy) -> Result<f64> {
        let lf = l as f64;
        let ln_pref = self.ln_lead + if l == 0 { 0.0 } else { lf * self.ln_ratio };
        if ln_pref < -745.0 {
            return Ok(0.0);
        }
        Ok(ln_pref.exp() * acc.gauss_2f1(0.5 * (lf + 1.0), 0.5 * lf + 1.0, 1.0, self.z)?)
    }
}

/// Variants of the integer-u double sum. The corrected form uses binomial
/// top l + u − 1 and carries the (1 + q²) factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct IntegerForm {
    pub binomial_top_extra: u32,
    pub one_plus_q2: bool,
}

impl IntegerForm {
    pub(crate) const CORRECTED: Self = Self {
        binomial_top_extra: 0,
        one_plus_q2: true,
    };
}

/// Σ_{l<n} Σ_{i≤l} C(l+n−1, l−i) (1+q²) q^{1+2i} 2^{i+1−l−n} γ̄^i / D^{i+1} · ₂F₁(…)
/// with D = 2q²γ̄ + (1+q²)²; returns the sum and the number of terms.
///
/// Each term is a Laguerre coefficient times 2^{−(l+n)} times the fading
/// average of e^{−γ/2}(γ/2)^i/i!, i.e. the Poisson-average family at scale 2.
pub(crate) fn integer_sum(n: usize, f: &HoytFading, form: IntegerForm) -> Result<(f64, usize)> {
    let acc = FunctionAccuracy::default();
    let avg = PoissonAverage::with_scale(f, 2.0);
    let q2 = f.q() * f.q();
    // The averages above already carry (1+q²); the other variant drops it.
    let factor = if form.one_plus_q2 {
        1.0
    } else {
        1.0 / (1.0 + q2)
    };
    let weights: Vec<f64> = (0..n).map(|i| avg.weight(i, &acc)).collect::<Result<_>>()?;
    let mut sum = 0.0;
    let mut terms = 0;
    for l in 0..n {
        let top = (l + n - 1) as f64 + form.binomial_top_extra as f64;
        let scale = (-((l + n) as f64) * std::f64::consts::LN_2).exp();
        for (i, w) in weights.iter().enumerate().take(l + 1) {
            sum += binomial(top, (l - i) as u64)? * scale * w * factor;
            terms += 1;
        }
    }
    Ok((sum, terms))
}

/// Average AUC by quadrature of A(γ) against the Hoyt SNR density.
pub fn avg_auc_quadrature(
    cfg: &DetectorConfig,
    f: &HoytFading,
    policy: &EvalPolicy,
) -> Result<MetricValue> {
    let q = fading_quadrature(f, policy, &[], |g| {
        Ok(detector::auc_awgn_with(cfg, g, policy)?.value)
    })?;
    Ok(MetricValue::new(
        q.value,
        Method::Quadrature,
        q.intervals,
        q.abs_error,
    ))
}

/// Average P_d at threshold λ by quadrature.
pub fn avg_pd_quadrature(
    cfg: &DetectorConfig,
    f: &HoytFading,
    lambda: f64,
    policy: &EvalPolicy,
) -> Result<MetricValue> {
    if !(lambda >= 0.0) {
        return Err(crate::error::domain(
            "avg_pd_quadrature",
            format!("threshold {lambda} must be non-negative"),
        ));
    }
    if lambda == 0.0 {
        return Ok(MetricValue::new(1.0, Method::Quadrature, 0, 0.0));
    }
    if lambda.is_infinite() {
        return Ok(MetricValue::new(0.0, Method::Quadrature, 0, 0.0));
    }
    // P_d switches from ≈0 to ≈1 around γ ≈ λ/2 − u.
    let knee = (0.5 * lambda - cfg.u()).max(0.0);
    let q = fading_quadrature(f, policy, &[knee], |g| detector::pd(cfg, g, lambda))?;
    Ok(MetricValue::new(
        q.value,
        Method::Quadrature,
        q.intervals,
        q.abs_error,
    ))
}

/// ∫₀^∞ h(γ) p(γ) dγ for h bounded by one, on γ = γ̄ t/(1 − t).
fn fading_quadrature<H>(
    f: &HoytFading,
    policy: &EvalPolicy,
    extra: &[f64],
    mut h: H,
) -> Result<quad::Quadrature>
where
    H: FnMut(f64) -> Result<f64>,
{
    let gb = f.gamma_bar();
    let q2 = f.q() * f.q();
    let to_t = |g: f64| g / (gb + g);
    let mut breaks: Vec<f64> = [q2 * gb, 4.0 * q2 * gb, gb]
        .iter()
        .map(|&g| to_t(g))
        .collect();
    breaks.extend(extra.iter().filter(|&&g| g > 0.0).map(|&g| to_t(g)));
    quad::integrate(
        |t: f64| {
            if t >= 1.0 {
                return Ok(0.0);
            }
            let g = gb * t / (1.0 - t);
            let w = f.snr_pdf(g)? * gb / ((1.0 - t) * (1.0 - t));
            // h ≤ 1, so such a weight cannot move the result.
            if w < 1e-18 {
                return Ok(0.0);
            }
            Ok(h(g)? * w)
        },
        0.0,
        1.0,
        &breaks,
        policy.rel_tol,
        0.1 * policy.rel_tol,
        policy.quad_levels,
    )
}

/// The closed forms exactly as typeset, kept for the errata report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrintedVariant {
    /// Integer-u double sum without the (1 + q²) factor.
    Theorem1Printed,
    /// Real-u series with γ̄ to the first power in every term.
    Theorem2Printed,
}

pub fn avg_auc_paper_printed(
    cfg: &DetectorConfig,
    f: &HoytFading,
    policy: &EvalPolicy,
    variant: PrintedVariant,
) -> Result<MetricValue> {
    match variant {
        PrintedVariant::Theorem1Printed => {
            let n = cfg.integer_u().ok_or_else(|| {
                crate::error::domain(
                    "avg_auc_paper_printed",
                    format!("u = {} is not an integer", cfg.u()),
                )
            })?;
            let form = IntegerForm {
                binomial_top_extra: 0,
                one_plus_q2: false,
            };
            let (s, terms) = integer_sum(n, f, form)?;
            Ok(raw(1.0 - s, Method::ClosedInteger, terms))
        }
        PrintedVariant::Theorem2Printed => {
            let (v, terms) = series_with_linear_snr(cfg, f, policy)?;
            Ok(raw(v, Method::ClosedSeries, terms))
        }
    }
}

/// Diagnostic values are returned unclamped.
fn raw(value: f64, method: Method, terms_used: usize) -> MetricValue {
    MetricValue {
        value,
        method,
        terms_used,
        est_error: 0.0,
    }
}

/// Σ_l (1 − e_l) m_l γ̄^{1−l}: the direct real-u series with γ̄^l replaced by γ̄.
fn series_with_linear_snr(
    cfg: &DetectorConfig,
    f: &HoytFading,
    policy: &EvalPolicy,
) -> Result<(f64, usize)> {
    let acc = FunctionAccuracy::default();
    let weights = PoissonAverage::new(f);
    let ln_gb = f.gamma_bar().ln();
    let mut sum = 0.0;
    let mut small = 0;
    for l in 0..policy.max_terms {
        let c = 1.0 - half_beta_tail(cfg.u(), l as f64, &acc)?;
        let m = weights.weight(l, &acc)?;
        let term = c * m * ((1.0 - l as f64) * ln_gb).exp();
        sum += term;
        small = if term.abs() <= policy.rel_tol * sum.abs() {
            small + 1
        } else {
            0
        };
        if small >= 3 {
            return Ok((sum, l + 1));
        }
    }
    Err(Error::Convergence {
        func: "avg_auc_paper_printed",
        terms: policy.max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_validation() {
        assert!(EvalPolicy::default().validate().is_ok());
        assert!(EvalPolicy::new(0.0, 100, 10).is_err());
        assert!(EvalPolicy::new(1e-8, 10, 10).is_err());
        assert!(EvalPolicy::new(1e-8, 100, 2).is_err());
    }

    #[test]
    fn poisson_average_of_zero_is_mgf() {
        let f = HoytFading::new(0.3, 7.0).unwrap();
        let m0 = PoissonAverage::new(&f)
            .weight(0, &FunctionAccuracy::default())
            .unwrap();
        assert!((m0 - f.snr_mgf(-1.0).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn rayleigh_poisson_averages_are_geometric() {
        // With exponential γ the Poisson mixture is geometric with ratio γ̄/(1+γ̄).
        let f = HoytFading::new(1.0, 3.0).unwrap();
        let avg = PoissonAverage::new(&f);
        for l in 0..6 {
            let want = 0.25 * 0.75f64.powi(l as i32);
            assert!((avg.weight(l, &FunctionAccuracy::default()).unwrap() - want).abs() < 1e-15);
        }
    }
}
