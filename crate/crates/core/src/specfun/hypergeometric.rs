//! Confluent (₁F₁) and Gauss (₂F₁) hypergeometric functions for real arguments.

use super::{digamma, gamma_ratio, is_nonpositive_integer, FunctionAccuracy, SmallTermCounter};
use crate::error::{domain, Error, Result};

/// Kummer's function ₁F₁(a; b; x).
pub fn kummer_1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    kummer_1f1_with(a, b, x, &FunctionAccuracy::default())
}

pub(crate) fn kummer_1f1_with(a: f64, b: f64, x: f64, acc: &FunctionAccuracy) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(domain(
            "kummer_1f1",
            format!("b = {b} is a non-positive integer"),
        ));
    }
    if x == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    if x < 0.0 && !is_nonpositive_integer(a) {
        // ₁F₁(a; b; x) = eˣ ₁F₁(b − a; b; −x)
        return Ok(x.exp() * kummer_series(b - a, b, -x, acc)?);
    }
    kummer_series(a, b, x, acc)
}

fn kummer_series(a: f64, b: f64, x: f64, acc: &FunctionAccuracy) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut stop = SmallTermCounter::default();
    for n in 0..acc.max_terms {
        let nf = n as f64;
        term *= (a + nf) * x / ((b + nf) * (nf + 1.0));
        sum += term;
        if term == 0.0 || stop.observe(term, sum, acc.rel_tol) {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        func: "kummer_1f1",
        terms: acc.max_terms,
    })
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) on 0 ≤ z < 1.
///
/// The power series is used for z ≤ ½ and for terminating cases. Above ½ the
/// function is continued through 1 − z; when c − a − b is an integer the
/// logarithmic form of that connection formula is used.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    gauss_2f1_with(a, b, c, z, &FunctionAccuracy::default())
}

pub(crate) fn gauss_2f1_with(
    a: f64,
    b: f64,
    c: f64,
    z: f64,
    acc: &FunctionAccuracy,
) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain("gauss_2f1", format!("z = {z} outside [0, 1)")));
    }
    if is_nonpositive_integer(c) {
        return Err(domain(
            "gauss_2f1",
            format!("c = {c} is a non-positive integer"),
        ));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if z <= 0.5 || is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return gauss_series(a, b, c, z, acc);
    }

    let w = 1.0 - z;
    let m = c - a - b;
    let n = m.round();
    if m == n {
        return if n >= 0.0 {
            degenerate_nonneg(a, b, n as usize, w, acc)
        } else {
            degenerate_neg(a, b, (-n) as usize, w, acc)
        };
    }
    if (m - n).abs() < 1e-6 {
        // The connection coefficients cancel catastrophically this close to
        // the logarithmic case; the direct series is still exact, only slower.
        return gauss_series(a, b, c, z, acc);
    }

    let first = gamma_ratio(&[c, m], &[c - a, c - b])?;
    let first = if first == 0.0 {
        0.0
    } else {
        first * gauss_series(a, b, 1.0 - m, w, acc)?
    };
    let second_coef = gamma_ratio(&[c, -m], &[a, b])?;
    let second = if second_coef == 0.0 {
        0.0
    } else {
        // Fold w^m into the coefficient before multiplying by the series so
        // that a huge power and a tiny ratio do not overflow separately.
        let ln_mag = second_coef.abs().ln() + m * w.ln();
        let coef = second_coef.signum() * ln_mag.exp();
        coef * gauss_series(c - a, c - b, 1.0 + m, w, acc)?
    };
    let value = first + second;
    if !value.is_finite() {
        return Err(Error::Overflow { func: "gauss_2f1" });
    }
    Ok(value)
}

fn gauss_series(a: f64, b: f64, c: f64, z: f64, acc: &FunctionAccuracy) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut stop = SmallTermCounter::default();
    for n in 0..acc.max_terms {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term == 0.0 || stop.observe(term, sum, acc.rel_tol) {
            if !sum.is_finite() {
                return Err(Error::Overflow { func: "gauss_2f1" });
            }
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        func: "gauss_2f1",
        terms: acc.max_terms,
    })
}

/// c = a + b + n, n ≥ 0, with w = 1 − z.
fn degenerate_nonneg(a: f64, b: f64, n: usize, w: f64, acc: &FunctionAccuracy) -> Result<f64> {
    let c = a + b + n as f64;
    let nf = n as f64;

    // Finite part: Γ(c)Γ(n)/(Γ(a+n)Γ(b+n)) Σ_{k<n} (a)_k (b)_k / (k! (1−n)_k) w^k
    let mut finite = 0.0;
    if n > 0 {
        let coef = gamma_ratio(&[c, nf], &[a + nf, b + nf])?;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..n - 1 {
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((kf + 1.0) * (1.0 - nf + kf)) * w;
            sum += term;
        }
        finite = coef * sum;
    }

    // Logarithmic part:
    // −Γ(c)/(Γ(a)Γ(b)) (−w)^n Σ_k (a+n)_k (b+n)_k / (k! (k+n)!) w^k
    //     · [ln w − ψ(k+1) − ψ(k+n+1) + ψ(a+k+n) + ψ(b+k+n)]
    let coef = gamma_ratio(&[c], &[a, b, nf + 1.0])?;
    if coef == 0.0 {
        return Ok(finite);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let lw = w.ln();
    let mut pow = 1.0; // (a+n)_k (b+n)_k n! / (k! (k+n)!) w^k
    let mut sum = 0.0;
    let mut stop = SmallTermCounter::default();
    for k in 0..acc.max_terms {
        let kf = k as f64;
        let bracket = lw - digamma(kf + 1.0) - digamma(kf + nf + 1.0)
            + digamma(a + kf + nf)
            + digamma(b + kf + nf);
        let term = pow * bracket;
        sum += term;
        if stop.observe(term, sum, acc.rel_tol) {
            return Ok(finite - coef * sign * w.powi(n as i32) * sum);
        }
        pow *= (a + nf + kf) * (b + nf + kf) / ((kf + 1.0) * (kf + nf + 1.0)) * w;
    }
    Err(Error::Convergence {
        func: "gauss_2f1 logarithmic case",
        terms: acc.max_terms,
    })
}

/// c = a + b − n, n ≥ 1, with w = 1 − z.
fn degenerate_neg(a: f64, b: f64, n: usize, w: f64, acc: &FunctionAccuracy) -> Result<f64> {
    let nf = n as f64;
    let c = a + b - nf;

    // Γ(c)Γ(n)/(Γ(a)Γ(b)) w^{−n} Σ_{k<n} (a−n)_k (b−n)_k / (k! (1−n)_k) w^k
    let coef = gamma_ratio(&[c, nf], &[a, b])?;
    let mut term = 1.0;
    let mut fsum = 1.0;
    for k in 0..n - 1 {
        let kf = k as f64;
        term *= (a - nf + kf) * (b - nf + kf) / ((kf + 1.0) * (1.0 - nf + kf)) * w;
        fsum += term;
    }
    let finite = coef * fsum * w.powi(-(n as i32));

    // −(−1)^n Γ(c)/(Γ(a−n)Γ(b−n)) Σ_k (a)_k (b)_k / (k! (k+n)!) w^k
    //     · [ln w − ψ(k+1) − ψ(k+n+1) + ψ(a+k) + ψ(b+k)]
    let coef = gamma_ratio(&[c], &[a - nf, b - nf, nf + 1.0])?;
    if coef == 0.0 {
        return Ok(finite);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let lw = w.ln();
    let mut pow = 1.0;
    let mut sum = 0.0;
    let mut stop = SmallTermCounter::default();
    for k in 0..acc.max_terms {
        let kf = k as f64;
        let bracket =
            lw - digamma(kf + 1.0) - digamma(kf + nf + 1.0) + digamma(a + kf) + digamma(b + kf);
        let term = pow * bracket;
        sum += term;
        if stop.observe(term, sum, acc.rel_tol) {
            return Ok(finite - sign * coef * sum);
        }
        pow *= (a + kf) * (b + kf) / ((kf + 1.0) * (kf + nf + 1.0)) * w;
    }
    Err(Error::Convergence {
        func: "gauss_2f1 logarithmic case",
        terms: acc.max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kummer_trivial_identities() {
        assert_eq!(kummer_1f1(2.3, 1.1, 0.0).unwrap(), 1.0);
        for &a in &[0.5, 1.0, 2.7] {
            for &x in &[-20.0, -3.5, -0.1, 0.4, 7.0, 20.0] {
                let got = kummer_1f1(a, a, x).unwrap();
                let want = f64::exp(x);
                assert!((got - want).abs() <= 1e-12 * want, "a={a} x={x}");
            }
        }
    }

    #[test]
    fn kummer_closed_form_for_small_parameters() {
        // ₁F₁(2; 3; x) = 2 (1 + eˣ (x − 1)) / x²
        for &x in &[-1.0, -6.0, 2.0] {
            let want = 2.0 * (1.0 + f64::exp(x) * (x - 1.0)) / (x * x);
            let got = kummer_1f1(2.0, 3.0, x).unwrap();
            assert!(
                (got - want).abs() < 1e-14 * want.abs(),
                "x={x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn kummer_rejects_pole_in_b() {
        assert!(kummer_1f1(1.0, -2.0, 1.0).is_err());
        assert!(kummer_1f1(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn gauss_binomial_identity() {
        for i in 0..=99 {
            let z = i as f64 / 100.0;
            let got = gauss_2f1(0.5, 1.0, 1.0, z).unwrap() * (1.0 - z).sqrt();
            assert!((got - 1.0).abs() < 1e-12, "z = {z}: {got}");
        }
        assert!((gauss_2f1(0.5, 1.0, 1.0, 0.75).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn gauss_log_identity_degenerate_zero() {
        // ₂F₁(1, 1; 2; z) = −ln(1 − z)/z, c − a − b = 0
        for &z in &[0.3f64, 0.6, 0.75, 0.9, 0.99] {
            let want = -(1.0 - z).ln() / z;
            let got = gauss_2f1(1.0, 1.0, 2.0, z).unwrap();
            assert!((got - want).abs() < 1e-13 * want, "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn gauss_degenerate_positive_integer_gap() {
        // ₂F₁(1, 1; 3; z) = 2[(1−z)ln(1−z) + z]/z², c − a − b = 1
        for &z in &[0.55f64, 0.8, 0.97] {
            let l = (1.0 - z).ln();
            let want = 2.0 * ((1.0 - z) * l + z) / (z * z);
            let got = gauss_2f1(1.0, 1.0, 3.0, z).unwrap();
            assert!((got - want).abs() < 1e-13 * want, "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn gauss_degenerate_negative_integer_gap() {
        // ₂F₁(1, 2; 2; z) = 1/(1−z), c − a − b = −1
        for &z in &[0.6, 0.9, 0.99] {
            let want = 1.0 / (1.0 - z);
            let got = gauss_2f1(1.0, 2.0, 2.0, z).unwrap();
            assert!((got - want).abs() < 1e-12 * want, "z={z}: {got} vs {want}");
        }
        // ₂F₁(2, 2; 2; z) = (1−z)^{−2}, c − a − b = −2
        let z: f64 = 0.8;
        let got = gauss_2f1(2.0, 2.0, 2.0, z).unwrap();
        assert!((got - 25.0).abs() < 1e-11, "{got}");
    }

    #[test]
    fn gauss_terminating_polynomial() {
        // ₂F₁(−2, b; c; z) = 1 − 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (1.5, 2.5, 0.9);
        let want = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert!((gauss_2f1(-2.0, b, c, z).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn gauss_domain_checks() {
        assert!(gauss_2f1(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(gauss_2f1(1.0, 1.0, 1.0, -0.1).is_err());
        assert!(gauss_2f1(1.0, 1.0, -1.0, 0.2).is_err());
    }
}
