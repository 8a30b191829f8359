//! Generalized Marcum Q function of real order.
//!
//! Q_m(a, b) = Σ_k Pois(k; a²/2) · Q(m + k, b²/2): the noncentral chi-square
//! tail written as a Poisson mixture of central ones. The sum is taken outward
//! from the Poisson mode in both directions.

use super::gamma::reg_gamma_pair;
use super::{poisson_ln_pmf, FunctionAccuracy};
use crate::error::{domain, Error, Result};

pub fn marcum_q(m: f64, a: f64, b: f64) -> Result<f64> {
    marcum_q_with(m, a, b, &FunctionAccuracy::default())
}

pub(crate) fn marcum_q_with(m: f64, a: f64, b: f64, acc: &FunctionAccuracy) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(domain("marcum_q", format!("order {m} must be positive")));
    }
    if !(a >= 0.0) || !(b >= 0.0) {
        return Err(domain(
            "marcum_q",
            format!("a = {a}, b = {b} must be non-negative"),
        ));
    }
    if b == 0.0 {
        return Ok(1.0);
    }
    if b.is_infinite() {
        return Ok(0.0);
    }
    let lam = 0.5 * a * a;
    let x = 0.5 * b * b;
    if lam == 0.0 {
        return acc.reg_upper_gamma(m, x);
    }

    // Sum whichever of the upper/lower mixtures is the smaller quantity.
    let upper = x > m + lam;
    let component = |k: u64| -> Result<f64> {
        let (p, q) = reg_gamma_pair(m + k as f64, x, acc)?;
        Ok(if upper { q } else { p })
    };

    // Accuracy is wanted on the returned value, which is 1 − sum for the lower mixture.
    let target = |sum: f64| if upper { sum } else { 1.0 - sum };

    let k0 = lam.floor() as u64;
    let w0 = poisson_ln_pmf(k0, lam).exp();
    let mut sum = w0 * component(k0)?;
    let mut used = 1usize;

    // Upward: Poisson tail beyond k is at most w_k · lam / (k + 1 − lam).
    let mut w = w0;
    let mut k = k0;
    loop {
        k += 1;
        w *= lam / k as f64;
        let g = component(k)?;
        sum += w * g;
        used += 1;
        let tail = w * lam / (k as f64 + 1.0 - lam);
        if tail <= acc.rel_tol * target(sum) || (tail == 0.0 && sum == 0.0) {
            break;
        }
        if used >= acc.max_terms {
            return Err(Error::Convergence {
                func: "marcum_q",
                terms: used,
            });
        }
    }

    // Downward: the remaining Poisson mass below k is at most w_k · k / (lam − k).
    let mut w = w0;
    let mut k = k0;
    while k > 0 {
        w *= k as f64 / lam;
        k -= 1;
        let g = component(k)?;
        sum += w * g;
        used += 1;
        let g_bound = if upper { g } else { 1.0 };
        let below = if k == 0 {
            0.0
        } else {
            w * k as f64 / (lam - k as f64).max(1e-300)
        };
        if below * g_bound <= acc.rel_tol * target(sum) || (w == 0.0 && sum > 0.0) {
            break;
        }
        if used >= acc.max_terms {
            return Err(Error::Convergence {
                func: "marcum_q",
                terms: used,
            });
        }
    }

    let q = if upper { sum } else { 1.0 - sum };
    Ok(q.clamp(0.0, 1.0))
}
