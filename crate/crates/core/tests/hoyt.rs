mod common;

use hoyt_ed::hoyt::db_to_linear;
use hoyt_ed::HoytFading;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QS: [f64; 6] = [0.05, 0.1, 0.3, 0.5, 0.75, 1.0];
const GBS: [f64; 4] = [0.1, 1.0, 10.0, 100.0];

fn breaks(f: &HoytFading) -> Vec<f64> {
    let (q2, gb) = (f.q() * f.q(), f.gamma_bar());
    vec![0.0, 0.5 * q2 * gb, 4.0 * q2 * gb, gb, 5.0 * gb, 20.0 * gb]
}

fn integrate_pdf(f: &HoytFading, g: impl Fn(f64) -> f64) -> f64 {
    common::half_line(|x| g(x) * f.snr_pdf(x).unwrap(), &breaks(f), 1e-13)
}

/// I₀ by its power series, for moderate arguments.
fn i0(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= (x / 2.0) * (x / 2.0) / (k as f64 * k as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

#[test]
fn parameter_validation() {
    assert!(HoytFading::new(0.0, 1.0).is_err());
    assert!(HoytFading::new(-0.3, 1.0).is_err());
    assert!(HoytFading::new(1.0 + 1e-9, 1.0).is_err());
    assert!(HoytFading::new(0.5, 0.0).is_err());
    assert!(HoytFading::new(0.5, f64::INFINITY).is_err());
    assert!(HoytFading::new(1.0, 1e-6).is_ok());
}

#[test]
fn decibel_views() {
    let f = HoytFading::from_db(0.3, 20.0).unwrap();
    assert!((f.gamma_bar() - 100.0).abs() < 1e-11);
    assert!((f.gamma_bar_db() - 20.0).abs() < 1e-12);
    assert!((db_to_linear(-5.0) - 0.31622776601683794).abs() < 1e-15);
}

#[test]
fn component_powers_split_the_average() {
    let f = HoytFading::new(0.4, 7.0).unwrap();
    let (a, b) = f.component_powers();
    assert!((a + b - 7.0).abs() < 1e-14);
    assert!((b / a - 0.16).abs() < 1e-14);
}

#[test]
fn pdf_direct_formula() {
    let (q, gb, g): (f64, f64, f64) = (0.5, 1.0, 1.0);
    let q2 = q * q;
    let want = (1.0 + q2) / (2.0 * q * gb)
        * (-(1.0 + q2) * (1.0 + q2) * g / (4.0 * q2 * gb)).exp()
        * i0((1.0 - q2 * q2) * g / (4.0 * q2 * gb));
    let got = HoytFading::new(q, gb).unwrap().snr_pdf(g).unwrap();
    assert!((got - want).abs() < 1e-14 * want);
    assert!(HoytFading::new(q, gb).unwrap().snr_pdf(-1.0).is_err());
}

#[test]
fn pdf_survives_large_bessel_arguments() {
    // the I₀ argument here is about 2.5e5
    let f = HoytFading::new(0.01, 1.0).unwrap();
    let v = f.snr_pdf(10.0).unwrap();
    assert!(v.is_finite() && v > 0.0);
}

#[test]
fn pdf_matches_histogram_of_draws() {
    let f = HoytFading::new(0.5, 1.0).unwrap();
    let n = 2_000_000;
    let draws = f.sample_snr(&mut ChaCha8Rng::seed_from_u64(11), n);
    let (lo, hi) = (0.95, 1.05);
    let p_hat = draws.iter().filter(|&&g| g >= lo && g < hi).count() as f64 / n as f64;
    let p = common::tanh_sinh(|x| f.snr_pdf(x).unwrap(), lo, hi, 1e-13);
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((p_hat - p).abs() < 4.0 * se, "{p_hat} vs {p} (se {se})");
}

#[test]
fn pdf_normalization_and_mean() {
    for &q in &QS {
        for &gb in &GBS {
            let f = HoytFading::new(q, gb).unwrap();
            let mass = integrate_pdf(&f, |_| 1.0);
            assert!((mass - 1.0).abs() < 1e-10, "q={q} gb={gb}: {mass}");
            let mean = integrate_pdf(&f, |x| x);
            assert!((mean - gb).abs() < 1e-8 * gb, "q={q} gb={gb}: {mean}");
        }
    }
}

#[test]
fn cdf_matches_pdf_integral() {
    for &q in &QS {
        for &gb in &GBS {
            let f = HoytFading::new(q, gb).unwrap();
            for &t in &[0.01, 0.1, 0.5, 1.0, 2.0, 5.0] {
                let g = t * gb;
                let want = {
                    let mut pts: Vec<f64> = breaks(&f).into_iter().filter(|&b| b < g).collect();
                    pts.push(g);
                    pts.windows(2)
                        .map(|w| common::tanh_sinh(|x| f.snr_pdf(x).unwrap(), w[0], w[1], 1e-13))
                        .sum::<f64>()
                };
                let got = f.snr_cdf(g).unwrap();
                assert!(
                    (got - want).abs() < 1e-8,
                    "q={q} gb={gb} g={g}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn cdf_limits_and_monotonicity() {
    let f = HoytFading::new(0.3, 2.0).unwrap();
    assert_eq!(f.snr_cdf(0.0).unwrap(), 0.0);
    assert_eq!(f.snr_cdf(f64::INFINITY).unwrap(), 1.0);
    assert!(f.snr_cdf(1e4).unwrap() > 1.0 - 1e-12);
    let mut prev = 0.0;
    for i in 1..400 {
        let v = f.snr_cdf(0.05 * i as f64).unwrap();
        assert!(v >= prev);
        prev = v;
    }
    assert!(f.snr_cdf(-0.1).is_err());
}

#[test]
fn cdf_is_continuous_across_the_rayleigh_switch() {
    let near = HoytFading::new(1.0 - 2e-6, 3.0).unwrap();
    let inside = HoytFading::new(1.0 - 5e-7, 3.0).unwrap();
    for &g in &[0.5, 3.0, 9.0] {
        assert!((near.snr_cdf(g).unwrap() - inside.snr_cdf(g).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn mgf_examples() {
    let f = HoytFading::new(0.5, 10.0).unwrap();
    assert_eq!(f.snr_mgf(0.0).unwrap(), 1.0);
    assert!((f.snr_mgf(-0.5).unwrap() - 27f64.powf(-0.5)).abs() < 1e-15);
    let h = 1e-6;
    let slope = (f.snr_mgf(h).unwrap() - f.snr_mgf(-h).unwrap()) / (2.0 * h);
    assert!((slope - 10.0).abs() < 1e-6);
    assert!(f.snr_mgf(0.2).is_err());
}

#[test]
fn mgf_matches_pdf_integral() {
    for &q in &QS {
        for &gb in &GBS {
            let f = HoytFading::new(q, gb).unwrap();
            for &s in &[-2.0f64, -1.0, -0.5, -0.1] {
                let want = integrate_pdf(&f, |x| (s * x).exp());
                assert!(
                    (f.snr_mgf(s).unwrap() - want).abs() < 1e-8,
                    "q={q} gb={gb} s={s}"
                );
            }
        }
    }
}

#[test]
fn rayleigh_reductions() {
    for &gb in &GBS {
        let f = HoytFading::new(1.0, gb).unwrap();
        for &g in &[0.0, 0.3 * gb, gb, 4.0 * gb] {
            let pdf = (-g / gb).exp() / gb;
            assert!((f.snr_pdf(g).unwrap() - pdf).abs() < 1e-12 * pdf);
            assert!((f.snr_cdf(g).unwrap() - (1.0 - (-g / gb).exp())).abs() < 1e-12);
        }
        for &s in &[-2.0, -0.5, 0.1 / gb] {
            assert!((f.snr_mgf(s).unwrap() - 1.0 / (1.0 - s * gb)).abs() < 1e-12);
        }
    }
}

#[test]
fn sampled_moments() {
    for &q in &[0.1, 0.5, 1.0] {
        let gb = 3.0;
        let f = HoytFading::new(q, gb).unwrap();
        let n = 1_000_000;
        let x = f.sample_snr(&mut ChaCha8Rng::seed_from_u64(2024), n);
        let nf = n as f64;
        let m1 = x.iter().sum::<f64>() / nf;
        let m2 = x.iter().map(|g| g * g).sum::<f64>() / nf;
        let m4 = x.iter().map(|g| g.powi(4)).sum::<f64>() / nf;
        let se1 = ((m2 - m1 * m1) / nf).sqrt();
        let se2 = ((m4 - m2 * m2) / nf).sqrt();
        let q2 = q * q;
        let want2 = gb * gb * (3.0 - 4.0 * q2 / ((1.0 + q2) * (1.0 + q2)));
        assert!((m1 - gb).abs() < 4.0 * se1, "q={q}: mean {m1}");
        assert!(
            (m2 - want2).abs() < 4.0 * se2,
            "q={q}: second moment {m2} vs {want2}"
        );
    }
}

#[test]
fn rayleigh_draws_pass_kolmogorov_smirnov() {
    let gb = 2.0;
    let f = HoytFading::new(1.0, gb).unwrap();
    let n = 1_000_000;
    let mut x = f.sample_snr(&mut ChaCha8Rng::seed_from_u64(77), n);
    x.sort_by(f64::total_cmp);
    let nf = n as f64;
    let d = x
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let c = 1.0 - (-g / gb).exp();
            (c - i as f64 / nf).abs().max((i as f64 + 1.0) / nf - c)
        })
        .fold(0.0, f64::max);
    // 1% critical value of the Kolmogorov distribution
    assert!(d * nf.sqrt() < 1.628, "D·√n = {}", d * nf.sqrt());
}

#[test]
fn draws_are_reproducible_and_nonnegative() {
    let f = HoytFading::new(0.2, 5.0).unwrap();
    let a = f.sample_snr(&mut ChaCha8Rng::seed_from_u64(5), 1000);
    let b = f.sample_snr(&mut ChaCha8Rng::seed_from_u64(5), 1000);
    assert_eq!(a, b);
    assert!(a.iter().all(|&g| g >= 0.0));
    let c = f.sample_snr(&mut ChaCha8Rng::seed_from_u64(6), 1000);
    assert_ne!(a, c);
}
