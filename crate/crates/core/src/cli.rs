//! Command-line front end: CSV sweeps, single points, average ROC curves and
//! the validation suites.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::average::{self, EvalPolicy};
use crate::detector::{self, DetectorConfig, Method};
use crate::error::{Error, Result};
use crate::hoyt::{db_to_linear, HoytFading};
use crate::montecarlo::{self, Hypothesis, McConfig, SnrModel};
use crate::validation::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const CSV_HEADER: &str = "snr_db,q,u,metric,method,value,est_error";
const ROC_HEADER: &str = "snr_db,q,u,lambda,pf,pd,est_error";

#[derive(Debug, Parser)]
#[command(
    name = "hoyt-ed",
    version,
    about = "Energy-detection AUC over Hoyt (Nakagami-q) fading"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one metric at one operating point.
    Point(PointArgs),
    /// Sweep average SNR for each q and write one CSV row per point.
    Sweep(SweepArgs),
    /// Average ROC curve (P_f, mean P_d) at one average SNR.
    Roc(RocArgs),
    /// Run a validation suite and print a pass/fail table.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Auc,
    Cauc,
    Pd,
    Pf,
    /// Trapezoid area under the average ROC curve.
    Roc,
}

impl Metric {
    fn name(self) -> &'static str {
        match self {
            Metric::Auc => "auc",
            Metric::Cauc => "cauc",
            Metric::Pd => "pd",
            Metric::Pf => "pf",
            Metric::Roc => "roc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Series,
    Quadrature,
    Mc,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Time-bandwidth product.
    #[arg(long, default_value_t = 5.0)]
    pub u: f64,
    /// Comma-separated Hoyt q values in (0, 1].
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    pub q: Vec<f64>,
    /// Relative tolerance for series truncation and quadrature.
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Monte-Carlo draws per hypothesis.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: usize,
    /// Monte-Carlo master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long, value_enum, default_value_t = Metric::Auc)]
    pub metric: Metric,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    /// Average SNR in dB; `-inf` means no signal.
    #[arg(long, allow_hyphen_values = true, default_value = "10")]
    pub snr_db: String,
    /// Energy threshold, required for pd and pf.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Points on the ROC curve for `--metric roc`.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = Metric::Auc)]
    pub metric: Metric,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    /// `start:stop:step` in dB, or a single value.
    #[arg(long, allow_hyphen_values = true, default_value = "-5:30:1")]
    pub snr_db: String,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RocArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "10")]
    pub snr_db: String,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Monte-Carlo draws per hypothesis for the mc suite.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub snr_db: f64,
    pub q: f64,
    pub u: f64,
    pub metric: &'static str,
    pub method: &'static str,
    pub value: f64,
    pub est_error: f64,
}

impl CurveRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            fmt_float(self.snr_db),
            fmt_float(self.q),
            fmt_float(self.u),
            self.metric,
            self.method,
            fmt_float(self.value),
            fmt_float(self.est_error)
        )
    }
}

/// 17 significant digits; `nan`, `inf` and `-inf` spelled out.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Parses `start:stop:step` or a single value. The stop value is included when
/// it lies on the grid (up to rounding).
pub fn parse_snr_range(spec: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> std::result::Result<f64, String> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse `{s}` as a number of dB"))
    };
    match parts.as_slice() {
        [single] => {
            let v = num(single)?;
            if v.is_nan() || v == f64::INFINITY {
                return Err(format!("invalid SNR `{single}`"));
            }
            Ok(vec![v])
        }
        [start, stop, step] => {
            let (a, b, h) = (num(start)?, num(stop)?, num(step)?);
            if !(a.is_finite() && b.is_finite() && h.is_finite()) || h <= 0.0 {
                return Err("SNR range needs finite start/stop and a positive step".to_string());
            }
            if b < a {
                return Err("SNR range stop lies below start".to_string());
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            if n > 1_000_000 {
                return Err("SNR range has too many points".to_string());
            }
            Ok((0..=n).map(|i| a + i as f64 * h).collect())
        }
        _ => Err(format!(
            "SNR spec `{spec}` is neither a value nor start:stop:step"
        )),
    }
}

fn check_common(c: &CommonArgs) -> std::result::Result<EvalPolicy, String> {
    if !(c.u > 0.0) || !c.u.is_finite() {
        return Err(format!("--u must be positive, got {}", c.u));
    }
    if c.q.is_empty() {
        return Err("--q needs at least one value".to_string());
    }
    if let Some(bad) = c.q.iter().find(|&&q| !(q > 0.0 && q <= 1.0)) {
        return Err(format!("--q values must lie in (0, 1], got {bad}"));
    }
    if c.trials < 2 {
        return Err("--trials must be at least 2".to_string());
    }
    let policy = EvalPolicy {
        rel_tol: c.rel_tol,
        ..EvalPolicy::default()
    };
    policy.validate().map_err(|e| e.to_string())?;
    Ok(policy)
}

/// Everything needed to evaluate rows independently of each other.
struct Evaluator {
    cfg: DetectorConfig,
    policy: EvalPolicy,
    metric: Metric,
    lambda: Option<f64>,
    points: usize,
    trials: usize,
    seed: u64,
}

impl Evaluator {
    fn methods(&self, method: MethodArg) -> std::result::Result<Vec<MethodArg>, String> {
        use MethodArg::*;
        let supported: &[MethodArg] = match self.metric {
            Metric::Auc | Metric::Cauc => &[Closed, Series, Quadrature, Mc],
            Metric::Pd => &[Quadrature, Mc],
            Metric::Pf => &[Closed, Mc],
            Metric::Roc => &[Quadrature],
        };
        if method == All {
            return Ok(supported.to_vec());
        }
        if !supported.contains(&method) {
            return Err(format!(
                "metric {} does not support method {:?}",
                self.metric.name(),
                method
            ));
        }
        Ok(vec![method])
    }

    /// Seed for row `index`, mixed so that neighbouring rows get unrelated streams.
    fn row_seed(&self, index: usize) -> u64 {
        let mut z = self.seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn mc(&self, index: usize) -> McConfig {
        McConfig {
            trials: self.trials,
            master_seed: self.row_seed(index),
            ..McConfig::default()
        }
    }

    /// Returns (value, method name, est_error).
    fn eval(
        &self,
        method: MethodArg,
        q: f64,
        snr_db: f64,
        index: usize,
    ) -> Result<(f64, &'static str, f64)> {
        let gamma_bar = if snr_db == f64::NEG_INFINITY {
            0.0
        } else {
            db_to_linear(snr_db)
        };
        let closed_name = if self.cfg.is_integer() {
            Method::ClosedInteger.name()
        } else {
            Method::ClosedSeries.name()
        };
        let name = |m: MethodArg| match m {
            MethodArg::Closed => closed_name,
            MethodArg::Series => Method::ClosedSeries.name(),
            MethodArg::Quadrature => Method::Quadrature.name(),
            MethodArg::Mc | MethodArg::All => Method::MonteCarlo.name(),
        };
        let need_lambda = || {
            self.lambda.ok_or_else(|| {
                Error::InvalidConfig("--lambda is required for pd and pf".to_string())
            })
        };

        if self.metric == Metric::Pf {
            let lambda = need_lambda()?;
            if method == MethodArg::Mc {
                return self.mc_exceedance(Hypothesis::H0, None, lambda, index);
            }
            return Ok((detector::pf(&self.cfg, lambda)?, closed_name, 0.0));
        }

        if gamma_bar == 0.0 {
            // No signal: H1 and H0 coincide.
            let v = match self.metric {
                Metric::Pd => detector::pf(&self.cfg, need_lambda()?)?,
                _ => 0.5,
            };
            if method == MethodArg::Mc {
                return match self.metric {
                    Metric::Pd => self.mc_exceedance(Hypothesis::H1, None, need_lambda()?, index),
                    _ => {
                        let est = montecarlo::estimate_auc(
                            &self.cfg,
                            &SnrModel::Fixed(0.0),
                            &self.mc(index),
                        )?;
                        Ok((est.value, name(method), est.std_error))
                    }
                };
            }
            return Ok((v, name(method), 0.0));
        }

        let f = HoytFading::new(q, gamma_bar)?;
        let cauc = self.metric == Metric::Cauc;
        let flip = |v: f64| if cauc { 1.0 - v } else { v };
        match (self.metric, method) {
            (Metric::Auc | Metric::Cauc, MethodArg::Closed) => {
                let m = average::avg_auc_closed(&self.cfg, &f, &self.policy)?;
                Ok((flip(m.value), m.method.name(), m.est_error))
            }
            (Metric::Auc | Metric::Cauc, MethodArg::Series) => {
                let m = average::avg_auc_series(&self.cfg, &f, &self.policy)?;
                Ok((flip(m.value), m.method.name(), m.est_error))
            }
            (Metric::Auc | Metric::Cauc, MethodArg::Quadrature) => {
                let m = average::avg_auc_quadrature(&self.cfg, &f, &self.policy)?;
                Ok((flip(m.value), m.method.name(), m.est_error))
            }
            (Metric::Auc | Metric::Cauc, MethodArg::Mc) => {
                let est = montecarlo::estimate_auc(&self.cfg, &SnrModel::Hoyt(f), &self.mc(index))?;
                Ok((flip(est.value), name(method), est.std_error))
            }
            (Metric::Pd, MethodArg::Quadrature) => {
                let m = average::avg_pd_quadrature(&self.cfg, &f, need_lambda()?, &self.policy)?;
                Ok((m.value, m.method.name(), m.est_error))
            }
            (Metric::Pd, MethodArg::Mc) => {
                self.mc_exceedance(Hypothesis::H1, Some(f), need_lambda()?, index)
            }
            (Metric::Roc, _) => {
                let curve = self.average_roc(&f)?;
                let area =
                    detector::trapezoid_area(&curve.iter().map(|r| (r.1, r.2)).collect::<Vec<_>>());
                let err: f64 = curve.iter().map(|r| r.3).fold(0.0, f64::max);
                Ok((area.clamp(0.0, 1.0), name(method), err))
            }
            _ => Err(Error::InvalidConfig(format!(
                "metric {} does not support this method",
                self.metric.name()
            ))),
        }
    }

    /// Rows `(λ, pf, mean pd, est_error)`.
    fn average_roc(&self, f: &HoytFading) -> Result<Vec<(f64, f64, f64, f64)>> {
        detector::roc_thresholds(&self.cfg, self.points)?
            .into_par_iter()
            .map(|(p, lambda)| {
                let m = average::avg_pd_quadrature(&self.cfg, f, lambda, &self.policy)?;
                Ok((lambda, p, m.value, m.est_error))
            })
            .collect()
    }

    fn mc_exceedance(
        &self,
        hyp: Hypothesis,
        fading: Option<HoytFading>,
        lambda: f64,
        index: usize,
    ) -> Result<(f64, &'static str, f64)> {
        let mc = self.mc(index);
        let n_batches = mc.trials.div_ceil(mc.batch_size);
        let hits: Vec<usize> = (0..n_batches)
            .into_par_iter()
            .map(|b| {
                let len = mc.batch_size.min(mc.trials - b * mc.batch_size);
                let mut rng = mc.batch_rng(b as u64);
                (0..len)
                    .filter(|_| {
                        let g = fading.map_or(0.0, |f| f.draw(&mut rng));
                        montecarlo::sample_statistic(&self.cfg, g, hyp, &mut rng) > lambda
                    })
                    .count()
            })
            .collect();
        let n = mc.trials as f64;
        let p = hits.iter().sum::<usize>() as f64 / n;
        Ok((p, Method::MonteCarlo.name(), (p * (1.0 - p) / n).sqrt()))
    }
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Point(a) => curve_command(
            a.metric, a.method, &a.snr_db, a.lambda, a.points, &a.common, true,
        ),
        Command::Sweep(a) => curve_command(
            a.metric, a.method, &a.snr_db, a.lambda, a.points, &a.common, false,
        ),
        Command::Roc(a) => roc_command(&a),
        Command::Validate(a) => return validate_command(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Usage(s)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn curve_command(
    metric: Metric,
    method: MethodArg,
    snr_spec: &str,
    lambda: Option<f64>,
    points: usize,
    common: &CommonArgs,
    single: bool,
) -> std::result::Result<i32, CliError> {
    let policy = check_common(common)?;
    let snrs = parse_snr_range(snr_spec)?;
    if single && (snrs.len() != 1 || common.q.len() != 1) {
        return Err("point takes a single --snr-db and a single --q"
            .to_string()
            .into());
    }
    if matches!(metric, Metric::Pd | Metric::Pf) && lambda.is_none() {
        return Err(format!("--lambda is required for --metric {}", metric.name()).into());
    }
    if let Some(l) = lambda {
        if !(l >= 0.0) {
            return Err(format!("--lambda must be non-negative, got {l}").into());
        }
    }
    if metric == Metric::Roc && points < 2 {
        return Err("--points must be at least 2".to_string().into());
    }
    let ev = Evaluator {
        cfg: DetectorConfig::new(common.u).map_err(|e| e.to_string())?,
        policy,
        metric,
        lambda,
        points,
        trials: common.trials,
        seed: common.seed,
    };
    let methods = ev.methods(method)?;

    // q outer, SNR ascending, methods in fixed order.
    let mut jobs = Vec::new();
    for &q in &common.q {
        for &s in &snrs {
            jobs.push((q, s));
        }
    }
    let results: Vec<Vec<(CurveRow, Option<Error>)>> = jobs
        .par_iter()
        .enumerate()
        .map(|(index, &(q, s))| {
            methods
                .iter()
                .map(|&m| {
                    let mut row = CurveRow {
                        snr_db: s,
                        q,
                        u: common.u,
                        metric: metric.name(),
                        method: "",
                        value: f64::NAN,
                        est_error: 1.0,
                    };
                    match ev.eval(m, q, s, index) {
                        Ok((v, name, err)) => {
                            row.value = v;
                            row.method = name;
                            row.est_error = err;
                            (row, None)
                        }
                        Err(e) => {
                            row.method = method_label(m, &ev.cfg);
                            (row, Some(e))
                        }
                    }
                })
                .collect()
        })
        .collect();

    let mut out = open_out(&common.out)?;
    writeln!(out, "{CSV_HEADER}")?;
    let mut code = EXIT_OK;
    for (row, err) in results.into_iter().flatten() {
        if let Some(e) = err {
            if matches!(e, Error::InvalidConfig(_) | Error::Domain { .. }) {
                return Err(e.to_string().into());
            }
            eprintln!(
                "warning: snr_db={} q={} method={}: {e}",
                fmt_float(row.snr_db),
                fmt_float(row.q),
                row.method
            );
            code = EXIT_NUMERICAL;
        }
        writeln!(out, "{}", row.to_csv())?;
    }
    out.flush()?;
    Ok(code)
}

fn method_label(m: MethodArg, cfg: &DetectorConfig) -> &'static str {
    match m {
        MethodArg::Closed if cfg.is_integer() => Method::ClosedInteger.name(),
        MethodArg::Closed | MethodArg::Series => Method::ClosedSeries.name(),
        MethodArg::Quadrature => Method::Quadrature.name(),
        MethodArg::Mc | MethodArg::All => Method::MonteCarlo.name(),
    }
}

fn roc_command(a: &RocArgs) -> std::result::Result<i32, CliError> {
    let policy = check_common(&a.common)?;
    let snrs = parse_snr_range(&a.snr_db)?;
    if a.points < 2 {
        return Err("--points must be at least 2".to_string().into());
    }
    let cfg = DetectorConfig::new(a.common.u).map_err(|e| e.to_string())?;
    let ev = Evaluator {
        cfg,
        policy,
        metric: Metric::Roc,
        lambda: None,
        points: a.points,
        trials: a.common.trials,
        seed: a.common.seed,
    };
    let mut out = open_out(&a.common.out)?;
    writeln!(out, "{ROC_HEADER}")?;
    let mut code = EXIT_OK;
    for &q in &a.common.q {
        for &s in &snrs {
            let rows = if s == f64::NEG_INFINITY {
                detector::roc_thresholds(&cfg, a.points)
                    .map(|t| t.into_iter().map(|(p, l)| (l, p, p, 0.0)).collect())
            } else {
                HoytFading::new(q, db_to_linear(s)).and_then(|f| ev.average_roc(&f))
            };
            match rows {
                Ok(rows) => {
                    for (lambda, pf, pd, err) in rows {
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{}",
                            fmt_float(s),
                            fmt_float(q),
                            fmt_float(a.common.u),
                            fmt_float(lambda),
                            fmt_float(pf),
                            fmt_float(pd),
                            fmt_float(err)
                        )?;
                    }
                }
                Err(e @ (Error::InvalidConfig(_) | Error::Domain { .. })) => {
                    return Err(e.to_string().into())
                }
                Err(e) => {
                    eprintln!("warning: snr_db={} q={}: {e}", fmt_float(s), fmt_float(q));
                    code = EXIT_NUMERICAL;
                }
            }
        }
    }
    out.flush()?;
    Ok(code)
}

fn validate_command(a: &ValidateArgs) -> i32 {
    if a.trials < 2 {
        eprintln!("error: --trials must be at least 2");
        return EXIT_USAGE;
    }
    let opts = validation::Options {
        trials: a.trials,
        seed: a.seed,
    };
    let report = validation::run_suite(a.suite, &opts);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let _ = report.write_table(&mut out);
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    }
}
