//! Self-checks runnable from the command line.
//!
//! Each suite evaluates invariants over fixed grids and reports the worst
//! deviation against its tolerance. The `errata` suite compares alternative
//! transcriptions of the closed forms with quadrature references.

use std::io::{self, Write};

use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::average::{self, EvalPolicy, IntegerForm, PrintedVariant};
use crate::detector::{self, DetectorConfig, HypergeometricReading};
use crate::error::Result;
use crate::hoyt::{self, db_to_linear, HoytFading};
use crate::montecarlo::{self, Hypothesis, McConfig, SnrModel};
use crate::quad;
use crate::specfun;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Specfun,
    Detector,
    Hoyt,
    Average,
    Mc,
    Errata,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Detector => "detector",
            Suite::Hoyt => "hoyt",
            Suite::Average => "average",
            Suite::Mc => "mc",
            Suite::Errata => "errata",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Draws per hypothesis in the mc suite.
    pub trials: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// One alternative transcription evaluated at one grid point.
#[derive(Debug, Clone)]
pub struct ErrataRow {
    pub formula: &'static str,
    pub variant: &'static str,
    pub u: f64,
    pub q: f64,
    /// Average SNR in dB, or the AWGN SNR in dB for the unfaded formulas.
    pub snr_db: f64,
    pub reference: f64,
    pub value: f64,
}

impl ErrataRow {
    pub fn rel_dev(&self) -> f64 {
        (self.value - self.reference) / self.reference
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub errata: Vec<ErrataRow>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn write_table<W: Write>(&self, out: &mut W) -> io::Result<()> {
        if !self.errata.is_empty() {
            writeln!(
                out,
                "{:<20} {:<24} {:>5} {:>5} {:>7} {:>22} {:>22} {:>12}",
                "formula", "variant", "u", "q", "snr_db", "reference", "value", "rel_dev"
            )?;
            for r in &self.errata {
                writeln!(
                    out,
                    "{:<20} {:<24} {:>5} {:>5} {:>7} {:>22.15e} {:>22.15e} {:>12.3e}",
                    r.formula,
                    r.variant,
                    r.u,
                    r.q,
                    r.snr_db,
                    r.reference,
                    r.value,
                    r.rel_dev()
                )?;
            }
            writeln!(out)?;
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "[{tag}] {:<9} {:<34} {}", c.suite, c.name, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        writeln!(out, "{} checks, {} failed", self.checks.len(), failed)
    }
}

struct Recorder {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Self {
            suite: suite.name(),
            checks: Vec::new(),
        }
    }

    /// Records `max |deviation| ≤ tol`; an evaluation error fails the check.
    fn within(&mut self, name: &str, tol: f64, dev: Result<f64>) {
        let (passed, detail) = match dev {
            Ok(d) => (d <= tol, format!("max dev {d:.3e} (tol {tol:.0e})")),
            Err(e) => (false, format!("error: {e}")),
        };
        self.push(name, passed, detail);
    }

    fn holds(&mut self, name: &str, ok: Result<bool>, what: &str) {
        let (passed, detail) = match ok {
            Ok(b) => (b, what.to_string()),
            Err(e) => (false, format!("error: {e}")),
        };
        self.push(name, passed, detail);
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

fn max_over<I>(items: I) -> Result<f64>
where
    I: IntoIterator<Item = Result<f64>>,
{
    let mut m: f64 = 0.0;
    for x in items {
        let x = x?;
        if x.is_nan() {
            return Ok(f64::INFINITY);
        }
        m = m.max(x);
    }
    Ok(m)
}

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

pub fn run_suite(suite: Suite, opts: &Options) -> Report {
    let mut report = Report::default();
    let order = [
        Suite::Specfun,
        Suite::Detector,
        Suite::Hoyt,
        Suite::Average,
        Suite::Mc,
        Suite::Errata,
    ];
    for s in order {
        if suite != Suite::All && suite != s {
            continue;
        }
        let mut rec = Recorder::new(s);
        match s {
            Suite::Specfun => specfun_suite(&mut rec),
            Suite::Detector => detector_suite(&mut rec),
            Suite::Hoyt => hoyt_suite(&mut rec, opts),
            Suite::Average => average_suite(&mut rec),
            Suite::Mc => mc_suite(&mut rec, opts),
            Suite::Errata => {
                let rows = errata_rows();
                errata_checks(&mut rec, &rows);
                if let Ok(rows) = rows {
                    report.errata = rows;
                }
            }
            Suite::All => unreachable!(),
        }
        report.checks.extend(rec.checks);
    }
    report
}

fn specfun_suite(rec: &mut Recorder) {
    rec.holds(
        "upper_gamma_monotone",
        (|| {
            for &a in &[0.3, 1.0, 2.5, 5.0, 12.0] {
                let mut prev = specfun::reg_upper_gamma(a, 0.0)?;
                if prev != 1.0 {
                    return Ok(false);
                }
                for x in grid(0.25, 60.0, 0.25) {
                    let v = specfun::reg_upper_gamma(a, x)?;
                    if v > prev {
                        return Ok(false);
                    }
                    prev = v;
                }
                if specfun::reg_upper_gamma(a, 1e4)? > 1e-300 {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
        "Q(a,0)=1, nonincreasing, Q(a,1e4)=0",
    );
    rec.within(
        "marcum_order_recurrence",
        1e-10,
        max_over([0.5, 1.0, 2.0, 4.0].iter().flat_map(|&a| {
            [0.5, 1.0, 2.0, 4.0].iter().flat_map(move |&b| {
                (1..6).map(move |m| {
                    let mf = m as f64;
                    let upper = specfun::marcum_q(mf + 1.0, a, b)?;
                    let lhs = upper - specfun::marcum_q(mf, a, b)?;
                    let rhs = (b / a).powi(m)
                        * (-(a * a + b * b) / 2.0).exp()
                        * specfun::bessel_i(mf, a * b)?;
                    // The difference of two values near 1 carries a rounding floor of
                    // a few ulps of Q. Scaling by at least 1e-5·Q allows about 4 ulps.
                    Ok((lhs - rhs).abs() / rhs.abs().max(1e-5 * upper))
                })
            })
        })),
    );
    rec.within(
        "marcum_zero_noncentrality",
        1e-12,
        max_over([0.5, 1.0, 2.5, 5.0].iter().flat_map(|&u| {
            [0.1, 1.0, 5.0, 20.0].iter().map(move |&l: &f64| {
                Ok(
                    (specfun::marcum_q(u, 0.0, l.sqrt())? - specfun::reg_upper_gamma(u, l / 2.0)?)
                        .abs(),
                )
            })
        })),
    );
    rec.within(
        "gauss_2f1_binomial",
        1e-12,
        max_over(
            grid(0.0, 0.9, 0.1)
                .into_iter()
                .chain([0.95, 0.99])
                .map(|z| {
                    Ok((specfun::gauss_2f1(0.5, 1.0, 1.0, z)? * (1.0 - z).sqrt() - 1.0).abs())
                }),
        ),
    );
    rec.within(
        "kummer_1f1_exponential",
        1e-12,
        max_over([0.5, 1.0, 2.7].iter().flat_map(|&a| {
            grid(-20.0, 20.0, 1.0)
                .into_iter()
                .map(move |x| Ok((specfun::kummer_1f1(a, a, x)? / x.exp() - 1.0).abs()))
        })),
    );
    rec.within(
        "laguerre_explicit_sum",
        1e-10,
        max_over((0..=12).flat_map(|n| {
            [0.0, 1.0, 5.0, 2.5].iter().flat_map(move |&alpha| {
                grid(-10.0, 10.0, 2.5).into_iter().map(move |x| {
                    let mut explicit = 0.0;
                    let mut fact = 1.0;
                    for m in 0..=n {
                        if m > 0 {
                            fact *= m as f64;
                        }
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        explicit += sign
                            * specfun::binomial(n as f64 + alpha, (n - m) as u64)?
                            * x.powi(m as i32)
                            / fact;
                    }
                    Ok((specfun::laguerre(n, alpha, x) - explicit).abs() / explicit.abs().max(1.0))
                })
            })
        })),
    );
}

fn detector_suite(rec: &mut Recorder) {
    let policy = EvalPolicy::default();
    let cfg = |u: f64| DetectorConfig::new(u).expect("valid u");
    rec.within(
        "u1_identity",
        1e-12,
        max_over(
            [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0]
                .iter()
                .map(|&g: &f64| {
                    Ok(
                        (detector::auc_awgn(&cfg(1.0), g)?.value - (1.0 - 0.5 * (-g / 2.0).exp()))
                            .abs(),
                    )
                }),
        ),
    );
    rec.within(
        "zero_snr_is_half",
        1e-12,
        max_over(
            [1.0, 2.0, 5.0, 2.5, 7.3]
                .iter()
                .map(|&u| Ok((detector::auc_awgn(&cfg(u), 0.0)?.value - 0.5).abs())),
        ),
    );
    rec.holds(
        "auc_nondecreasing_in_snr",
        (|| {
            for &u in &[1.0, 2.5, 5.0, 7.3] {
                let mut prev = 0.0;
                for g in grid(0.0, 50.0, 0.5) {
                    let v = detector::auc_awgn(&cfg(u), g)?.value;
                    if v < prev {
                        return Ok(false);
                    }
                    prev = v;
                }
            }
            Ok(true)
        })(),
        "u in {1, 2.5, 5, 7.3}, snr 0..50",
    );
    let snrs = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
    rec.within(
        "integer_forms_agree",
        1e-8,
        max_over((1..=5).flat_map(|n| {
            let c = cfg(n as f64);
            snrs.iter().map(move |&g| {
                let lag = detector::auc_awgn(&c, g)?.value;
                let hyp = detector::auc_awgn_1f1_variant(&c, g)?.value;
                let ser = detector::auc_awgn_series(&c, g, &EvalPolicy::default())?.value;
                Ok((lag - hyp).abs().max((lag - ser).abs()))
            })
        })),
    );
    rec.within(
        "closed_vs_quadrature",
        1e-8,
        max_over([1.0, 2.0, 5.0, 1.5, 2.5, 7.3].iter().flat_map(|&u| {
            let c = cfg(u);
            [0.0, 0.5, 2.0, 10.0, 50.0].iter().map(move |&g| {
                Ok((detector::auc_awgn(&c, g)?.value
                    - detector::auc_quadrature(&c, g, &policy)?.value)
                    .abs())
            })
        })),
    );
    rec.within(
        "threshold_roundtrip",
        1e-10,
        max_over([1.0, 2.5, 5.0].iter().flat_map(|&u| {
            [1e-6, 0.01, 0.3, 0.9, 0.999].iter().map(move |&p| {
                let c = cfg(u);
                Ok((detector::pf(&c, detector::threshold_for_pf(&c, p)?)? - p).abs())
            })
        })),
    );
    rec.holds(
        "roc_is_monotone",
        (|| {
            for &(u, g) in &[(2.5, 3.0), (5.0, 10.0)] {
                let pts = detector::roc_points_awgn(&cfg(u), g, 60)?;
                if pts.windows(2).any(|w| w[1].1 < w[0].1 || w[1].0 <= w[0].0) {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
        "pd nondecreasing along increasing pf",
    );
}

/// ∫₀^∞ h(γ) dγ on γ = s·t/(1 − t) with breakpoints at the given γ values.
fn half_line<H>(scale: f64, at: &[f64], mut h: H) -> Result<f64>
where
    H: FnMut(f64) -> Result<f64>,
{
    let breaks: Vec<f64> = at.iter().map(|&g| g / (scale + g)).collect();
    let q = quad::integrate(
        |t: f64| {
            if t >= 1.0 {
                return Ok(0.0);
            }
            let g = scale * t / (1.0 - t);
            Ok(h(g)? * scale / ((1.0 - t) * (1.0 - t)))
        },
        0.0,
        1.0,
        &breaks,
        1e-13,
        1e-15,
        40,
    )?;
    Ok(q.value)
}

fn hoyt_suite(rec: &mut Recorder, opts: &Options) {
    let qs = [0.05, 0.1, 0.3, 0.5, 0.75, 1.0];
    let gbs = [0.1, 1.0, 10.0, 100.0];
    let cases = || {
        qs.iter().flat_map(|&q| {
            gbs.iter()
                .map(move |&g| HoytFading::new(q, g).expect("valid"))
        })
    };
    let bp = |f: &HoytFading| {
        let q2 = f.q() * f.q();
        vec![q2 * f.gamma_bar(), f.gamma_bar()]
    };
    rec.within(
        "pdf_normalization",
        1e-10,
        max_over(
            cases().map(|f| Ok((half_line(f.gamma_bar(), &bp(&f), |g| f.snr_pdf(g))? - 1.0).abs())),
        ),
    );
    rec.within(
        "pdf_mean",
        1e-8,
        max_over(cases().map(|f| {
            let m = half_line(f.gamma_bar(), &bp(&f), |g| Ok(g * f.snr_pdf(g)?))?;
            Ok((m / f.gamma_bar() - 1.0).abs())
        })),
    );
    rec.within(
        "cdf_matches_pdf_integral",
        1e-8,
        max_over(cases().flat_map(|f| {
            [0.1, 0.5, 1.0, 2.0, 5.0].iter().map(move |&k| {
                let x = k * f.gamma_bar();
                let q = quad::integrate(|g| f.snr_pdf(g), 0.0, x, &[], 1e-13, 1e-15, 40)?;
                Ok((f.snr_cdf(x)? - q.value).abs())
            })
        })),
    );
    rec.within(
        "mgf_matches_pdf_integral",
        1e-8,
        max_over(cases().flat_map(|f| {
            [-2.0, -1.0, -0.5, -0.1].iter().map(move |&s: &f64| {
                let v = half_line(
                    f.gamma_bar(),
                    &bp(&f),
                    |g| Ok((s * g).exp() * f.snr_pdf(g)?),
                )?;
                Ok((f.snr_mgf(s)? - v).abs())
            })
        })),
    );
    rec.within(
        "rayleigh_reductions",
        1e-12,
        max_over(gbs.iter().flat_map(|&gb| {
            let f = HoytFading::new(1.0, gb).expect("valid");
            [0.0, 0.3, 1.0, 4.0].iter().map(move |&k| {
                let g = k * gb;
                let pdf = (f.snr_pdf(g)? - (-g / gb).exp() / gb).abs() * gb;
                let cdf = (f.snr_cdf(g)? - (1.0 - (-g / gb).exp())).abs();
                let s = -k / gb;
                let mgf = (f.snr_mgf(s)? - 1.0 / (1.0 - s * gb)).abs();
                Ok(pdf.max(cdf).max(mgf))
            })
        })),
    );
    let n = opts.trials.max(10_000);
    let mut worst: f64 = 0.0;
    for (i, &q) in [0.1, 0.5, 1.0].iter().enumerate() {
        let f = HoytFading::new(q, 2.0).expect("valid");
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
        let draws = f.sample_snr(&mut rng, n);
        let m2: Vec<f64> = draws.iter().map(|g| g * g).collect();
        let mean = m2.iter().sum::<f64>() / n as f64;
        let var = m2.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0);
        let want = 4.0 * (3.0 - 4.0 * q * q / ((1.0 + q * q) * (1.0 + q * q)));
        worst = worst.max((mean - want).abs() / (var / n as f64).sqrt());
    }
    rec.within("sampled_second_moment_z", 4.0, Ok(worst));
}

const DB_GRID: [f64; 8] = [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0];
const Q_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.75, 1.0];

fn average_suite(rec: &mut Recorder) {
    let policy = EvalPolicy::default();
    let points = || {
        Q_GRID.iter().flat_map(|&q| {
            DB_GRID
                .iter()
                .map(move |&db| HoytFading::from_db(q, db).expect("valid"))
        })
    };
    let one = DetectorConfig::new(1.0).expect("valid");
    rec.within(
        "u1_mgf_identity",
        1e-10,
        max_over(points().map(|f| {
            let (q, gb) = (f.q(), f.gamma_bar());
            let want = 1.0 - 0.5 * (1.0 + gb + (q * gb / (1.0 + q * q)).powi(2)).powf(-0.5);
            Ok((average::avg_auc_closed(&one, &f, &policy)?.value - want).abs())
        })),
    );
    rec.within(
        "closed_vs_quadrature",
        1e-8,
        max_over(
            [1.0, 2.0, 3.0, 4.0, 5.0, 1.5, 2.5, 7.3]
                .iter()
                .flat_map(|&u| {
                    let c = DetectorConfig::new(u).expect("valid");
                    points().map(move |f| {
                        Ok((average::avg_auc_closed(&c, &f, &policy)?.value
                            - average::avg_auc_quadrature(&c, &f, &policy)?.value)
                            .abs())
                    })
                }),
        ),
    );
    rec.within(
        "integer_vs_series",
        1e-8,
        max_over((1..=5).flat_map(|n| {
            let c = DetectorConfig::new(n as f64).expect("valid");
            points().map(move |f| {
                Ok((average::avg_auc_closed(&c, &f, &policy)?.value
                    - average::avg_auc_series(&c, &f, &policy)?.value)
                    .abs())
            })
        })),
    );
    rec.holds(
        "nondecreasing_in_snr",
        (|| {
            for &u in &[1.0, 2.5, 5.0] {
                let c = DetectorConfig::new(u)?;
                for &q in &Q_GRID {
                    let mut prev = 0.0;
                    for &db in &DB_GRID {
                        let v = average::avg_auc_closed(&c, &HoytFading::from_db(q, db)?, &policy)?
                            .value;
                        if v < prev {
                            return Ok(false);
                        }
                        prev = v;
                    }
                }
            }
            Ok(true)
        })(),
        "u in {1, 2.5, 5} over the q/snr grid",
    );
    rec.holds(
        "auc_plus_cauc_is_one",
        (|| {
            for &u in &[1.0, 2.5, 5.0] {
                let c = DetectorConfig::new(u)?;
                for f in points() {
                    let a = average::avg_auc_closed(&c, &f, &policy)?.value;
                    let b = average::avg_cauc_closed(&c, &f, &policy)?.value;
                    if a + b != 1.0 {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })(),
        "exact in floating point",
    );
    rec.within(
        "rayleigh_exponential_average",
        1e-9,
        max_over([1.0, 3.0, 5.0, 2.5].iter().flat_map(|&u| {
            let c = DetectorConfig::new(u).expect("valid");
            DB_GRID.iter().map(move |&db| {
                let gb = db_to_linear(db);
                let r = half_line(gb, &[gb], |g| {
                    Ok(detector::auc_awgn(&c, g)?.value * (-g / gb).exp() / gb)
                })?;
                Ok(
                    (average::avg_auc_closed(&c, &HoytFading::new(1.0, gb)?, &policy)?.value - r)
                        .abs(),
                )
            })
        })),
    );
}

fn mc_suite(rec: &mut Recorder, opts: &Options) {
    let policy = EvalPolicy::default();
    let mc = |k: u64| McConfig::new(opts.trials, opts.seed.wrapping_add(k));
    let mut k = 0u64;
    let mut z_fixed: f64 = 0.0;
    let fixed: Result<()> = (|| {
        for &(u, g) in &[(1.0, 0.0), (1.0, 2.0), (5.0, 10.0), (2.5, 3.0)] {
            let c = DetectorConfig::new(u)?;
            let est = montecarlo::estimate_auc(&c, &SnrModel::Fixed(g), &mc(k))?;
            k += 1;
            let want = detector::auc_quadrature(&c, g, &policy)?.value;
            z_fixed = z_fixed.max((est.value - want).abs() / est.std_error);
        }
        Ok(())
    })();
    rec.within("fixed_snr_closure_z", 3.0, fixed.map(|_| z_fixed));

    let mut z_hoyt: f64 = 0.0;
    let hoyt_res: Result<()> = (|| {
        let c = DetectorConfig::new(5.0)?;
        for &q in &[0.1, 0.5, 1.0] {
            for &db in &[0.0, 10.0, 20.0] {
                let f = HoytFading::from_db(q, db)?;
                let est = montecarlo::estimate_auc(&c, &SnrModel::Hoyt(f), &mc(k))?;
                k += 1;
                let want = average::avg_auc_closed(&c, &f, &policy)?.value;
                z_hoyt = z_hoyt.max((est.value - want).abs() / est.std_error);
            }
        }
        Ok(())
    })();
    rec.within("hoyt_closure_z", 3.0, hoyt_res.map(|_| z_hoyt));

    // Empirical exceedance against P_f and P_d, and the statistic means.
    let n = opts.trials.clamp(10_000, 1_000_000);
    let mut z_tail: f64 = 0.0;
    let mut z_mean: f64 = 0.0;
    let tails: Result<()> = (|| {
        for (i, &(u, g, lambda)) in [
            (2.5, 0.0, 6.0),
            (2.5, 3.0, 9.0),
            (5.0, 4.0, 14.0),
            (1.0, 2.0, 1.0),
        ]
        .iter()
        .enumerate()
        {
            let c = DetectorConfig::new(u)?;
            let hyp = if g == 0.0 {
                Hypothesis::H0
            } else {
                Hypothesis::H1
            };
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (0xD1CE + i as u64));
            let ys: Vec<f64> = (0..n)
                .map(|_| montecarlo::sample_statistic(&c, g, hyp, &mut rng))
                .collect();
            let p = detector::pd(&c, g, lambda)?;
            let hits = ys.iter().filter(|&&y| y > lambda).count() as f64 / n as f64;
            z_tail = z_tail.max((hits - p).abs() / (p * (1.0 - p) / n as f64).sqrt());
            let mean = ys.iter().sum::<f64>() / n as f64;
            // Var = 4u + 8γ for the noncentral chi-square with 2u dof.
            let sd = ((4.0 * u + 8.0 * g) / n as f64).sqrt();
            z_mean = z_mean.max((mean - (2.0 * u + 2.0 * g)).abs() / sd);
        }
        Ok(())
    })();
    let tails = tails.map(|_| (z_tail, z_mean));
    rec.within("exceedance_vs_pf_pd_z", 4.0, tails.clone().map(|t| t.0));
    rec.within("statistic_mean_z", 4.0, tails.map(|t| t.1));
}

fn awgn_reference(u: f64, g: f64) -> Result<f64> {
    detector::auc_quadrature(&DetectorConfig::new(u)?, g, &EvalPolicy::default()).map(|m| m.value)
}

/// Printed-versus-corrected deviations for every adjudicated transcription.
pub fn errata_rows() -> Result<Vec<ErrataRow>> {
    let policy = EvalPolicy::default();
    let mut rows = Vec::new();
    let lin_db = |g: f64| 10.0 * g.log10();

    // Confluent-hypergeometric AUC form and the Laguerre order, unfaded.
    for &u in &[1.0, 2.0, 3.0, 5.0] {
        let c = DetectorConfig::new(u)?;
        for &g in &[1.0, 5.0, 10.0] {
            let reference = awgn_reference(u, g)?;
            for (variant, reading) in [
                ("printed(+g/2)", HypergeometricReading::AsPrinted),
                ("negated(-g/2)", HypergeometricReading::NegatedArgument),
                ("corrected", HypergeometricReading::Corrected),
            ] {
                rows.push(ErrataRow {
                    formula: "awgn_1f1_form",
                    variant,
                    u,
                    q: f64::NAN,
                    snr_db: lin_db(g),
                    reference,
                    value: detector::auc_awgn_1f1_reading(&c, g, reading)?.value,
                });
            }
            let n = u as usize;
            for (variant, alpha) in [("printed(order u)", u), ("corrected(order u-1)", u - 1.0)] {
                rows.push(ErrataRow {
                    formula: "awgn_laguerre_order",
                    variant,
                    u,
                    q: f64::NAN,
                    snr_db: lin_db(g),
                    reference,
                    value: 1.0 - detector::laguerre_complement(n, g, alpha),
                });
            }
        }
    }

    // Integer-u and real-u fading averages.
    for &q in &[0.1, 0.5] {
        for &db in &[0.0, 10.0, 20.0] {
            let f = HoytFading::from_db(q, db)?;
            for &u in &[2.0, 3.0, 5.0] {
                let c = DetectorConfig::new(u)?;
                let reference = average::avg_auc_quadrature(&c, &f, &policy)?.value;
                let n = u as usize;
                let alternative = IntegerForm {
                    binomial_top_extra: 1,
                    one_plus_q2: true,
                };
                let corrected = 1.0 - average::integer_sum(n, &f, IntegerForm::CORRECTED)?.0;
                let printed = average::avg_auc_paper_printed(
                    &c,
                    &f,
                    &policy,
                    PrintedVariant::Theorem1Printed,
                )?
                .value;
                for (formula, variant, value) in [
                    ("theorem1_binomial", "printed(l+u-1)", corrected),
                    (
                        "theorem1_binomial",
                        "alternative(l+u)",
                        1.0 - average::integer_sum(n, &f, alternative)?.0,
                    ),
                    ("theorem1_factor", "printed(no 1+q^2)", printed),
                    ("theorem1_factor", "corrected(1+q^2)", corrected),
                ] {
                    rows.push(ErrataRow {
                        formula,
                        variant,
                        u,
                        q,
                        snr_db: db,
                        reference,
                        value,
                    });
                }
            }
            for &u in &[1.5, 2.5, 5.0] {
                let c = DetectorConfig::new(u)?;
                let reference = average::avg_auc_quadrature(&c, &f, &policy)?.value;
                rows.push(ErrataRow {
                    formula: "theorem2_exponent",
                    variant: "printed(gbar^1)",
                    u,
                    q,
                    snr_db: db,
                    reference,
                    value: average::avg_auc_paper_printed(
                        &c,
                        &f,
                        &policy,
                        PrintedVariant::Theorem2Printed,
                    )?
                    .value,
                });
                rows.push(ErrataRow {
                    formula: "theorem2_exponent",
                    variant: "corrected(gbar^l)",
                    u,
                    q,
                    snr_db: db,
                    reference,
                    value: average::avg_auc_series(&c, &f, &policy)?.value,
                });
            }
        }
    }

    // Hoyt CDF arguments, referenced to the integrated density.
    for &q in &[0.1, 0.5, 0.9] {
        let gb = 1.0;
        let f = HoytFading::new(q, gb)?;
        for &x in &[0.5, 1.0, 3.0] {
            let reference = quad::integrate(|g| f.snr_pdf(g), 0.0, x, &[], 1e-13, 1e-15, 40)?.value;
            let q4 = q.powi(4);
            let small_p = ((1.0 - q4) * (1.0 - q) * x / (8.0 * q * (1.0 + q) * gb)).sqrt();
            let big_p = ((1.0 + q4) * (1.0 + q) * x / (8.0 * q * (1.0 - q) * gb)).sqrt();
            let big_s = ((1.0 - q4) * (1.0 + q) * x / (8.0 * q * (1.0 - q) * gb)).sqrt();
            let diff = |a: f64, b: f64| -> Result<f64> {
                Ok(specfun::marcum_q(1.0, a, b)? - specfun::marcum_q(1.0, b, a)?)
            };
            let (a, b) = hoyt::cdf_arguments(q, gb, x);
            for (variant, value) in [
                ("printed", diff(small_p, big_p)?),
                ("symmetric(1-q^4)", diff(big_s, small_p)?),
                ("corrected", diff(a, b)?),
            ] {
                rows.push(ErrataRow {
                    formula: "hoyt_cdf_arguments",
                    variant,
                    u: f64::NAN,
                    q,
                    snr_db: lin_db(x / gb),
                    reference,
                    value,
                });
            }
        }
    }
    Ok(rows)
}

fn errata_checks(rec: &mut Recorder, rows: &Result<Vec<ErrataRow>>) {
    let rows = match rows {
        Ok(r) => r,
        Err(e) => {
            rec.push("errata_table", false, format!("error: {e}"));
            return;
        }
    };
    rec.push(
        "errata_table_nonempty",
        !rows.is_empty(),
        format!("{} rows", rows.len()),
    );
    let adopted = [
        "corrected",
        "corrected(order u-1)",
        "printed(l+u-1)",
        "corrected(1+q^2)",
        "corrected(gbar^l)",
    ];
    for formula in [
        "awgn_1f1_form",
        "awgn_laguerre_order",
        "theorem1_binomial",
        "theorem1_factor",
        "theorem2_exponent",
        "hoyt_cdf_arguments",
    ] {
        let tol = 1e-8;
        let worst_adopted = rows
            .iter()
            .filter(|r| r.formula == formula && adopted.contains(&r.variant))
            .map(|r| (r.value - r.reference).abs())
            .fold(0.0, f64::max);
        let worst_other = rows
            .iter()
            .filter(|r| r.formula == formula && !adopted.contains(&r.variant))
            .map(|r| r.rel_dev().abs())
            .fold(0.0, f64::max);
        rec.push(
            &format!("{formula}_adopted"),
            worst_adopted <= tol,
            format!(
                "adopted max |dev| {worst_adopted:.2e}; rejected max |rel dev| {worst_other:.2e}"
            ),
        );
    }
}
