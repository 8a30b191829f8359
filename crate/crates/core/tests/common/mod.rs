//! Reference computations shared by the integration tests. Nothing here calls
//! into the crate's own series, transforms or adaptive quadrature.

#![allow(dead_code)]

use statrs::function::gamma::ln_gamma;
use std::f64::consts::FRAC_PI_2;

/// Double-exponential (tanh-sinh) rule on [a, b]. Endpoint singularities
/// are tolerated because the nodes never touch the endpoints.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    // Distance of each node from the nearer endpoint, in units of `half`.
    let node = |t: f64| {
        let s = FRAC_PI_2 * t.sinh();
        let w = FRAC_PI_2 * t.cosh() / (s.cosh() * s.cosh());
        (2.0 / (1.0 + (2.0 * s.abs()).exp()), w)
    };
    let eval = |t: f64| {
        let (d, w) = node(t);
        if d == 0.0 || w == 0.0 {
            return 0.0;
        }
        let x = if t >= 0.0 { b - half * d } else { a + half * d };
        w * f(x)
    };
    let t_max = 6.5;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1.0;
    while k * h <= t_max {
        sum += eval(k * h) + eval(-k * h);
        k += 1.0;
    }
    let mut estimate = half * h * sum;
    for _ in 0..10 {
        h *= 0.5;
        let mut k = 1.0;
        while k * h <= t_max {
            sum += eval(k * h) + eval(-k * h);
            k += 2.0;
        }
        let next = half * h * sum;
        if (next - estimate).abs() <= tol * next.abs().max(1e-300) {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// ∫ over [breaks[0], ∞) split at the remaining breakpoints; the last piece
/// is mapped to a finite interval by x = b + s·t/(1 − t) with s = b.max(1).
pub fn half_line<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> f64 {
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += tanh_sinh(&f, w[0], w[1], tol);
    }
    let b = *breaks.last().expect("at least one breakpoint");
    let s = b.max(1.0);
    total
        + tanh_sinh(
            |t| {
                let x = b + s * t / (1.0 - t);
                if !x.is_finite() {
                    return 0.0;
                }
                f(x) * s / ((1.0 - t) * (1.0 - t))
            },
            0.0,
            1.0,
            tol,
        )
}

pub fn poisson(k: usize, mean: f64) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (-mean + k as f64 * mean.ln() - ln_gamma(k as f64 + 1.0)).exp()
}

/// Miss probabilities f_k = P(G_u > G_{u+k}) for unit-scale gamma variates,
/// from f_0 = 1/2 and f_{k+1} = f_k − 2^{−(2u+k)} Γ(2u+k)/(Γ(u)Γ(u+k+1)).
pub fn miss_ladder(u: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut f: f64 = 0.5;
    let mut t =
        (-2.0 * u * std::f64::consts::LN_2 + ln_gamma(2.0 * u) - ln_gamma(u) - ln_gamma(u + 1.0))
            .exp();
    for k in 0..n {
        out.push(f.max(0.0));
        f -= t;
        let kf = k as f64;
        t *= (2.0 * u + kf) / (2.0 * (u + kf + 1.0));
    }
    out
}

/// Unfaded AUC as the Poisson mixture Σ_k P(K = k) (1 − f_k), K ~ Poisson(γ).
pub fn awgn_auc(u: f64, gamma: f64) -> f64 {
    let n = (gamma + 40.0 * gamma.sqrt() + 200.0) as usize;
    let miss = miss_ladder(u, n);
    1.0 - miss
        .iter()
        .enumerate()
        .map(|(k, f)| poisson(k, gamma) * f)
        .sum::<f64>()
}

/// Hoyt-averaged AUC. The averaged Poisson weights are the Taylor coefficients
/// of E[e^{(z−1)γ}], a product of two (1 − c z)^{−1/2} factors, so they follow
/// from a convolution of binomial series.
pub fn hoyt_auc(u: f64, q: f64, gamma_bar: f64) -> f64 {
    let w1 = gamma_bar / (1.0 + q * q);
    let w2 = q * q * w1;
    let (c1, c2) = (2.0 * w1 / (1.0 + 2.0 * w1), 2.0 * w2 / (1.0 + 2.0 * w2));
    let pre = 1.0 / ((1.0 + 2.0 * w1) * (1.0 + 2.0 * w2)).sqrt();
    let n = 400;
    let miss = miss_ladder(u, n);
    let (mut a, mut b) = (vec![1.0], vec![1.0]);
    let mut loss = 0.0;
    let mut mass = 0.0;
    for (k, &f) in miss.iter().enumerate() {
        if k > 0 {
            let kf = k as f64;
            a.push(a[k - 1] * (kf - 0.5) / kf * c1);
            b.push(b[k - 1] * (kf - 0.5) / kf * c2);
        }
        let p = pre * (0..=k).map(|j| a[j] * b[k - j]).sum::<f64>();
        mass += p;
        loss += p * f;
        if f * (1.0 - mass).max(0.0) < 1e-18 {
            break;
        }
    }
    1.0 - loss
}

/// u = 1 average through the moment generating function: 1 − ½ M(−½).
pub fn hoyt_auc_u1(q: f64, gamma_bar: f64) -> f64 {
    let t = q * gamma_bar / (1.0 + q * q);
    1.0 - 0.5 / (1.0 + gamma_bar + t * t).sqrt()
}

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
