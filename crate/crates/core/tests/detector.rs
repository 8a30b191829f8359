mod common;

use hoyt_ed::detector::{auc_awgn_1f1_reading, roc_thresholds, trapezoid_area};
use hoyt_ed::{
    auc_awgn, auc_awgn_1f1_variant, auc_awgn_series, auc_quadrature, cauc_awgn, pd, pf,
    roc_points_awgn, threshold_for_pf, DetectorConfig, EvalPolicy, HypergeometricReading, Method,
};
use proptest::prelude::*;

fn cfg(u: f64) -> DetectorConfig {
    DetectorConfig::new(u).unwrap()
}

#[test]
fn config_validation_and_integer_flag() {
    assert!(DetectorConfig::new(0.0).is_err());
    assert!(DetectorConfig::new(-2.0).is_err());
    assert!(DetectorConfig::new(f64::NAN).is_err());
    assert!(cfg(5.0).is_integer());
    assert_eq!(cfg(5.0).integer_u(), Some(5));
    assert!(cfg(3.0 + 1e-13).is_integer());
    assert!(!cfg(3.0 + 1e-9).is_integer());
    assert_eq!(cfg(2.5).integer_u(), None);
}

#[test]
fn false_alarm_examples() {
    for &u in &[0.4, 1.0, 5.0] {
        assert_eq!(pf(&cfg(u), 0.0).unwrap(), 1.0);
    }
    assert!((pf(&cfg(1.0), 2.0 * 2f64.ln()).unwrap() - 0.5).abs() < 1e-15);
    // e^{−5} Σ_{k<5} 5^k/k!
    assert!((pf(&cfg(5.0), 10.0).unwrap() - 0.44049328506521241144).abs() < 1e-14);
    assert!(pf(&cfg(2.0), -1.0).is_err());
}

#[test]
fn false_alarm_strictly_decreasing() {
    let c = cfg(2.5);
    let mut prev = pf(&c, 0.0).unwrap();
    for i in 1..200 {
        let v = pf(&c, 0.25 * i as f64).unwrap();
        assert!(v < prev);
        prev = v;
    }
}

#[test]
fn detection_examples() {
    let c = cfg(3.0);
    assert_eq!(pd(&c, 4.0, 0.0).unwrap(), 1.0);
    for &lam in &[0.5, 3.0, 11.0] {
        assert!((pd(&c, 0.0, lam).unwrap() - pf(&c, lam).unwrap()).abs() < 1e-14);
    }
    // Q_1(2, 1)
    assert!((pd(&cfg(1.0), 2.0, 1.0).unwrap() - 0.91810769636940600391).abs() < 1e-13);
    assert!(pd(&c, -1.0, 1.0).is_err());
    assert!(pd(&c, 1.0, -1.0).is_err());
}

#[test]
fn detection_monotone_in_snr_and_threshold() {
    let c = cfg(4.0);
    for &lam in &[2.0, 8.0, 20.0] {
        let mut prev = 0.0;
        for i in 0..60 {
            let v = pd(&c, 0.5 * i as f64, lam).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
    let mut prev = 1.0;
    for i in 0..80 {
        let v = pd(&c, 6.0, 0.5 * i as f64).unwrap();
        assert!(v <= prev);
        prev = v;
    }
}

#[test]
fn threshold_examples() {
    assert!((threshold_for_pf(&cfg(1.0), 0.5).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-12);
    assert!((threshold_for_pf(&cfg(5.0), 0.44049328506521241144).unwrap() - 10.0).abs() < 1e-9);
    let c = cfg(2.5);
    let lam = threshold_for_pf(&c, 0.01).unwrap();
    assert!((pf(&c, lam).unwrap() - 0.01).abs() < 1e-10);
    assert!(threshold_for_pf(&c, 0.0).is_err());
    assert!(threshold_for_pf(&c, 1.0).is_err());
    assert!(threshold_for_pf(&c, f64::NAN).is_err());
}

#[test]
fn threshold_round_trips_over_a_wide_range() {
    for &u in &[0.3, 1.0, 2.5, 7.3, 20.0] {
        let c = cfg(u);
        for &p in &[1e-9, 1e-4, 0.01, 0.3, 0.5, 0.9, 0.999, 1.0 - 1e-9] {
            let lam = threshold_for_pf(&c, p).unwrap();
            assert!((pf(&c, lam).unwrap() - p).abs() < 1e-10, "u={u} p={p}");
        }
    }
}

#[test]
fn auc_reference_values() {
    // 40-digit Poisson mixture of regularized incomplete beta functions
    for &(u, g, want) in &[
        (5.0, 10.0, 0.97742557454383548219),
        (2.5, 5.0, 0.92241982723397827564),
        (7.3, 20.0, 0.99880471412738251271),
        (0.5, 2.0, 0.85507231321903910502),
        (1.5, 0.5, 0.59610348689166089758),
        (3.0, 1.0, 0.63750316040612143042),
    ] {
        let got = auc_awgn(&cfg(u), g).unwrap().value;
        assert!((got - want).abs() < 1e-12, "u={u} g={g}: {got} vs {want}");
    }
}

#[test]
fn auc_u1_identity() {
    for &g in &[0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
        let got = auc_awgn(&cfg(1.0), g).unwrap().value;
        assert!((got - (1.0 - 0.5 * (-g / 2.0f64).exp())).abs() < 1e-12);
    }
}

#[test]
fn auc_is_half_without_signal() {
    for &u in &[1.0, 2.0, 5.0, 2.5, 7.3] {
        assert!((auc_awgn(&cfg(u), 0.0).unwrap().value - 0.5).abs() < 1e-12);
    }
}

#[test]
fn auc_against_poisson_ladder() {
    for &u in &[0.3, 1.0, 2.0, 3.0, 5.0, 1.5, 2.5, 7.3, 12.0] {
        for &g in &[0.0, 0.1, 0.5, 2.0, 7.0, 15.0, 40.0, 90.0] {
            let got = auc_awgn(&cfg(u), g).unwrap().value;
            let want = common::awgn_auc(u, g);
            assert!((got - want).abs() < 1e-11, "u={u} g={g}: {got} vs {want}");
        }
    }
}

#[test]
fn auc_against_threshold_integral() {
    // A = ∫ P_d(λ) f₀(λ) dλ with the χ²_{2u} density f₀, integrated by tanh-sinh
    for &(u, g) in &[(1.0, 2.0), (2.5, 5.0), (5.0, 10.0), (0.6, 1.3)] {
        let c = cfg(u);
        let ln_norm = u * 2f64.ln() + statrs::function::gamma::ln_gamma(u);
        let f =
            |lam: f64| pd(&c, g, lam).unwrap() * ((u - 1.0) * lam.ln() - lam / 2.0 - ln_norm).exp();
        let want = common::half_line(f, &[0.0, 2.0 * u, 2.0 * u + 2.0 * g + 10.0], 1e-12);
        let got = auc_awgn(&c, g).unwrap().value;
        assert!((got - want).abs() < 1e-9, "u={u} g={g}: {got} vs {want}");
    }
}

#[test]
fn auc_nondecreasing_in_snr() {
    for &u in &[1.0, 2.5, 5.0, 7.3] {
        let c = cfg(u);
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = auc_awgn(&c, 0.5 * i as f64).unwrap().value;
            assert!(v >= prev, "u={u} at {}", 0.5 * i as f64);
            prev = v;
        }
    }
}

#[test]
fn auc_method_tags_and_errors() {
    let m = auc_awgn(&cfg(4.0), 3.0).unwrap();
    assert_eq!(m.method, Method::ClosedInteger);
    assert_eq!(m.terms_used, 4);
    let m = auc_awgn(&cfg(4.5), 3.0).unwrap();
    assert_eq!(m.method, Method::ClosedSeries);
    assert!(m.terms_used > 0 && m.est_error >= 0.0);
    assert!(auc_awgn(&cfg(2.0), -0.1).is_err());
    assert!(
        auc_awgn(&cfg(2.0), f64::INFINITY).is_err()
            || auc_awgn(&cfg(2.0), f64::INFINITY).unwrap().value == 1.0
    );
}

#[test]
fn integer_forms_agree() {
    let policy = EvalPolicy::default();
    for n in 1..=8 {
        let c = cfg(n as f64);
        for &g in &[0.0, 0.3, 1.0, 4.0, 12.0, 30.0, 70.0] {
            let lag = auc_awgn(&c, g).unwrap().value;
            let hyp = auc_awgn_1f1_variant(&c, g).unwrap().value;
            let ser = auc_awgn_series(&c, g, &policy).unwrap().value;
            assert!((lag - hyp).abs() < 1e-10, "u={n} g={g}: {lag} vs {hyp}");
            assert!((lag - ser).abs() < 1e-8, "u={n} g={g}: {lag} vs {ser}");
        }
    }
}

#[test]
fn hypergeometric_form_examples() {
    for &g in &[0.0, 1.0, 3.0, 9.0] {
        let v = auc_awgn_1f1_variant(&cfg(1.0), g).unwrap().value;
        assert!((v - (1.0 - 0.5 * (-g / 2.0f64).exp())).abs() < 1e-13);
    }
    assert!((auc_awgn_1f1_variant(&cfg(3.0), 0.0).unwrap().value - 0.5).abs() < 1e-14);
    assert!(auc_awgn_1f1_variant(&cfg(2.5), 1.0).is_err());
}

#[test]
fn printed_hypergeometric_reading_leaves_the_unit_interval() {
    let printed = auc_awgn_1f1_reading(&cfg(1.0), 2.0, HypergeometricReading::AsPrinted)
        .unwrap()
        .value;
    assert!(printed > 1.0, "{printed}");
    let negated = auc_awgn_1f1_reading(&cfg(3.0), 4.0, HypergeometricReading::NegatedArgument)
        .unwrap()
        .value;
    let truth = auc_awgn(&cfg(3.0), 4.0).unwrap().value;
    assert!(
        (negated - truth).abs() > 1e-3,
        "negating the argument alone is not enough beyond u = 1"
    );
}

#[test]
fn cauc_is_the_exact_complement() {
    for &u in &[1.0, 2.5, 6.0] {
        for &g in &[0.0, 1.0, 10.0] {
            let a = auc_awgn(&cfg(u), g).unwrap();
            let c = cauc_awgn(&cfg(u), g).unwrap();
            assert_eq!(a.value + c.value, 1.0);
        }
    }
    assert!((cauc_awgn(&cfg(1.0), 2.0).unwrap().value - 0.5 * (-1.0f64).exp()).abs() < 1e-15);
    assert_eq!(cauc_awgn(&cfg(4.0), 0.0).unwrap().value, 0.5);
    assert!(cauc_awgn(&cfg(2.0), 80.0).unwrap().value < 1e-12);
}

#[test]
fn quadrature_examples() {
    let p = EvalPolicy::default();
    let v = auc_quadrature(&cfg(1.0), 2.0, &p).unwrap();
    assert!((v.value - (1.0 - 0.5 * (-1.0f64).exp())).abs() < 1e-9);
    assert_eq!(v.method, Method::Quadrature);
    for &u in &[0.4, 1.0, 1.5, 3.0, 7.3] {
        assert!((auc_quadrature(&cfg(u), 0.0, &p).unwrap().value - 0.5).abs() < 1e-10);
    }
    let v = auc_quadrature(&cfg(2.5), 5.0, &p).unwrap().value;
    assert!((v - 0.92241982723397827564).abs() < 1e-9);
}

#[test]
fn quadrature_matches_closed_forms() {
    let p = EvalPolicy::default();
    for &u in &[1.0, 2.0, 5.0, 1.5, 2.5, 7.3] {
        for &g in &[0.0, 0.5, 2.0, 10.0, 50.0] {
            let q = auc_quadrature(&cfg(u), g, &p).unwrap().value;
            let c = auc_awgn(&cfg(u), g).unwrap().value;
            assert!((q - c).abs() < 1e-8, "u={u} g={g}");
        }
    }
}

#[test]
fn quadrature_depth_cap_is_an_error() {
    let p = EvalPolicy::new(1e-10, 5_000, 5).unwrap();
    assert!(auc_quadrature(&cfg(0.3), 40.0, &p).is_err());
}

#[test]
fn roc_without_signal_is_the_diagonal() {
    for (f, d) in roc_points_awgn(&cfg(3.0), 0.0, 50).unwrap() {
        assert!((f - d).abs() < 1e-12);
    }
}

#[test]
fn roc_area_and_shape() {
    let pts = roc_points_awgn(&cfg(1.0), 2.0, 100).unwrap();
    assert_eq!(pts.len(), 100);
    assert!((trapezoid_area(&pts) - 0.8161).abs() < 0.005);
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    assert!(first.0 < 1e-12 && last.0 > 1.0 - 1e-12);
    assert_eq!(last.1, 1.0);
    for w in pts.windows(2) {
        assert!(w[1].0 >= w[0].0 && w[1].1 >= w[0].1);
    }
    for &(f, d) in &pts {
        assert!(d >= f - 1e-12);
    }
    assert!(roc_points_awgn(&cfg(1.0), 2.0, 1).is_err());
}

#[test]
fn roc_thresholds_are_evenly_spaced_in_pf() {
    let t = roc_thresholds(&cfg(2.5), 11).unwrap();
    for (i, &(p, lam)) in t.iter().enumerate() {
        assert!((p - i as f64 / 10.0).abs() < 1e-12);
        if i > 0 && i < 10 {
            assert!((pf(&cfg(2.5), lam).unwrap() - p).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn auc_lies_between_half_and_one(u in 0.1f64..30.0, g in 0.0f64..200.0) {
        let v = auc_awgn(&cfg(u), g).unwrap().value;
        prop_assert!((0.5..=1.0).contains(&v));
    }

    #[test]
    fn auc_matches_ladder_for_random_inputs(u in 0.2f64..15.0, g in 0.0f64..60.0) {
        let got = auc_awgn(&cfg(u), g).unwrap().value;
        prop_assert!((got - common::awgn_auc(u, g)).abs() < 1e-10);
    }

    #[test]
    fn roc_points_are_monotone(u in 0.3f64..10.0, g in 0.0f64..30.0) {
        let pts = roc_points_awgn(&cfg(u), g, 33).unwrap();
        for w in pts.windows(2) {
            prop_assert!(w[1].1 >= w[0].1 - 1e-14);
        }
    }
}
