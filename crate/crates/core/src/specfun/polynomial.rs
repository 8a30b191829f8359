use super::gamma_ratio;
use crate::error::{domain, Result};

/// Generalized Laguerre polynomial L_n^α(x) by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Pochhammer symbol (a)_n = Γ(a + n)/Γ(a) for any integer n.
///
/// Negative n gives 1/((a−1)(a−2)…(a−|n|)), which is undefined when one of
/// those factors vanishes.
pub fn pochhammer(a: f64, n: i64) -> Result<f64> {
    if n >= 0 {
        return Ok((0..n).map(|k| a + k as f64).product());
    }
    let mut den = 1.0;
    for j in 1..=(-n) {
        let f = a - j as f64;
        if f == 0.0 {
            return Err(domain("pochhammer", format!("({a})_{n} hits a pole of Γ")));
        }
        den *= f;
    }
    Ok(1.0 / den)
}

/// Binomial coefficient C(top, k) for real `top`.
pub fn binomial(top: f64, k: u64) -> Result<f64> {
    if !top.is_finite() {
        return Err(domain("binomial", format!("top = {top}")));
    }
    if k <= 64 {
        let mut acc = 1.0;
        for j in 0..k {
            acc *= (top - j as f64) / (j + 1) as f64;
        }
        return Ok(acc);
    }
    // Γ(top+1) / (Γ(k+1) Γ(top−k+1)); a pole of Γ(top+1) at negative integer
    // top is handled by the product route above for any practical k.
    gamma_ratio(&[top + 1.0], &[k as f64 + 1.0, top - k as f64 + 1.0])
}
