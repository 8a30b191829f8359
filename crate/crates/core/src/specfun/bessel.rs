//! Modified Bessel function of the first kind, non-negative order.

use std::f64::consts::PI;

use super::{FunctionAccuracy, SmallTermCounter};
use crate::error::{domain, Error, Result};

fn check_args(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(domain(
            "bessel_i",
            format!("order {nu} must be non-negative"),
        ));
    }
    if !(x >= 0.0) {
        return Err(domain("bessel_i", format!("x = {x} must be non-negative")));
    }
    Ok(())
}

/// e^{−x} I_ν(x). Never overflows.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    bessel_i_scaled_with(nu, x, &FunctionAccuracy::default())
}

/// I_ν(x). Returns [`Error::Overflow`] when the value exceeds `f64::MAX`.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    let scaled = bessel_i_scaled(nu, x)?;
    if scaled == 0.0 {
        return Ok(0.0);
    }
    let ln = scaled.ln() + x;
    if ln >= f64::MAX.ln() {
        return Err(Error::Overflow { func: "bessel_i" });
    }
    Ok(scaled * x.exp())
}

pub(crate) fn bessel_i_scaled_with(nu: f64, x: f64, acc: &FunctionAccuracy) -> Result<f64> {
    check_args(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x > 50.0 + nu * nu {
        if let Some(v) = scaled_asymptotic(nu, x) {
            return Ok(v);
        }
    }
    scaled_series(nu, x, acc)
}

/// Ascending series Σ (x/2)^{2k+ν} / (k! Γ(k+ν+1)), accumulated relative to a
/// running log offset so that neither e^{x} nor e^{−x} is formed explicitly.
fn scaled_series(nu: f64, x: f64, acc: &FunctionAccuracy) -> Result<f64> {
    let half = 0.5 * x;
    let q = half * half;
    let mut ln_offset = nu * half.ln() - super::ln_gamma(nu + 1.0)?;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut stop = SmallTermCounter::default();
    for k in 0..acc.max_terms {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (kf + 1.0 + nu));
        sum += term;
        if term > 1e200 {
            ln_offset += term.ln();
            sum /= term;
            term = 1.0;
        }
        if stop.observe(term, sum, acc.rel_tol * 0.01) {
            return Ok(sum * (ln_offset - x).exp());
        }
    }
    Err(Error::Convergence {
        func: "bessel_i series",
        terms: acc.max_terms,
    })
}

/// Large-argument expansion of e^{−x} I_ν(x); `None` if the terms stop
/// decreasing before reaching double precision.
fn scaled_asymptotic(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            return None;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return Some(sum / (2.0 * PI * x).sqrt());
        }
    }
    None
}
