//! Monte-Carlo reference for the AUC.
//!
//! Decision statistics are drawn directly from their chi-square laws and the
//! AUC is estimated by the Mann–Whitney statistic within fixed-size batches.
//! Each batch owns a ChaCha stream selected by its index, so the result does
//! not depend on how batches are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use rayon::prelude::*;

use crate::detector::DetectorConfig;
use crate::error::{Error, Result};
use crate::hoyt::HoytFading;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    /// Draws per hypothesis.
    pub trials: usize,
    pub master_seed: u64,
    pub batch_size: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            master_seed: 0,
            batch_size: 65_536,
        }
    }
}

impl McConfig {
    pub fn new(trials: usize, master_seed: u64) -> Self {
        Self {
            trials,
            master_seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 2 || self.batch_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "trials ({}) and batch_size ({}) must both be at least 2",
                self.trials, self.batch_size
            )));
        }
        Ok(())
    }

    /// Generator for batch `index`.
    pub fn batch_rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(index);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    H0,
    H1,
}

/// SNR seen by the H1 statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnrModel {
    Fixed(f64),
    /// A fresh Hoyt draw for every H1 trial.
    Hoyt(HoytFading),
}

/// One draw of the energy statistic: 2·Gamma(u) under H0, and under H1
/// 2·Gamma(u + K) with K ~ Poisson(γ), i.e. noncentral chi-square with
/// noncentrality 2γ.
pub fn sample_statistic<R: Rng + ?Sized>(
    cfg: &DetectorConfig,
    gamma: f64,
    hypothesis: Hypothesis,
    rng: &mut R,
) -> f64 {
    let extra = match hypothesis {
        Hypothesis::H1 if gamma > 0.0 => Poisson::new(gamma).expect("positive mean").sample(rng),
        _ => 0.0,
    };
    2.0 * Gamma::new(cfg.u() + extra, 1.0)
        .expect("positive shape")
        .sample(rng)
}

/// Rank-statistic AUC estimate with a DeLong standard error.
pub fn estimate_auc(cfg: &DetectorConfig, snr: &SnrModel, mc: &McConfig) -> Result<McEstimate> {
    mc.validate()?;
    if let SnrModel::Fixed(g) = snr {
        if !(*g >= 0.0) || !g.is_finite() {
            return Err(crate::error::domain(
                "estimate_auc",
                format!("SNR {g} must be finite and non-negative"),
            ));
        }
    }
    let n_batches = mc.trials.div_ceil(mc.batch_size);
    let batches: Vec<(f64, f64, usize)> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let len = mc.batch_size.min(mc.trials - b * mc.batch_size);
            let mut rng = mc.batch_rng(b as u64);
            let h0: Vec<f64> = (0..len)
                .map(|_| sample_statistic(cfg, 0.0, Hypothesis::H0, &mut rng))
                .collect();
            let h1: Vec<f64> = (0..len)
                .map(|_| {
                    let g = match snr {
                        SnrModel::Fixed(g) => *g,
                        SnrModel::Hoyt(f) => f.draw(&mut rng),
                    };
                    sample_statistic(cfg, g, Hypothesis::H1, &mut rng)
                })
                .collect();
            let (auc, var) = mann_whitney(h0, h1);
            (auc, var, len)
        })
        .collect();

    // Sequential reduction in batch order keeps the result bit-stable.
    let total = mc.trials as f64;
    let mut value = 0.0;
    let mut var = 0.0;
    for &(auc, v, len) in &batches {
        let w = len as f64 / total;
        value += w * auc;
        var += w * w * v;
    }
    Ok(McEstimate {
        value,
        std_error: var.sqrt(),
        trials: mc.trials,
    })
}

/// P(y1 > y0) + ½P(y1 = y0) over all pairs, and its DeLong variance.
pub(crate) fn mann_whitney(mut h0: Vec<f64>, mut h1: Vec<f64>) -> (f64, f64) {
    h0.sort_by(f64::total_cmp);
    h1.sort_by(f64::total_cmp);
    let (m, n) = (h1.len() as f64, h0.len() as f64);
    // Placement of each H1 value among H0 values, and vice versa.
    let place = |sorted: &[f64], x: f64| -> f64 {
        let below = sorted.partition_point(|&v| v < x);
        let upto = sorted.partition_point(|&v| v <= x);
        below as f64 + 0.5 * (upto - below) as f64
    };
    let v10: Vec<f64> = h1.iter().map(|&x| place(&h0, x) / n).collect();
    let v01: Vec<f64> = h0.iter().map(|&y| 1.0 - place(&h1, y) / m).collect();
    let auc = v10.iter().sum::<f64>() / m;
    let sample_var = |v: &[f64]| {
        let k = v.len() as f64;
        v.iter().map(|x| (x - auc) * (x - auc)).sum::<f64>() / (k - 1.0)
    };
    (auc, sample_var(&v10) / m + sample_var(&v01) / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mann_whitney_small_cases() {
        let (a, _) = mann_whitney(vec![1.0, 2.0], vec![3.0, 4.0]);
        assert_eq!(a, 1.0);
        let (a, _) = mann_whitney(vec![3.0, 4.0], vec![1.0, 2.0]);
        assert_eq!(a, 0.0);
        let (a, _) = mann_whitney(vec![1.0, 2.0], vec![1.0, 2.0]);
        assert_eq!(a, 0.5);
        // 3 of 4 pairs ordered, one tie
        let (a, _) = mann_whitney(vec![1.0, 2.0], vec![2.0, 3.0]);
        assert!((a - 0.875).abs() < 1e-15);
    }

    #[test]
    fn batch_streams_differ() {
        let mc = McConfig::new(10, 5);
        let a: u64 = mc.batch_rng(0).random();
        let b: u64 = mc.batch_rng(1).random();
        assert_ne!(a, b);
        let again: u64 = mc.batch_rng(0).random();
        assert_eq!(a, again);
    }

    #[test]
    fn uneven_last_batch() {
        let cfg = DetectorConfig::new(2.0).unwrap();
        let mc = McConfig {
            trials: 1000,
            master_seed: 3,
            batch_size: 300,
        };
        let est = estimate_auc(&cfg, &SnrModel::Fixed(1.0), &mc).unwrap();
        assert_eq!(est.trials, 1000);
        assert!(est.value > 0.5 && est.value < 1.0);
        assert!(est.std_error > 0.0);
    }

    #[test]
    fn rejects_tiny_configs() {
        let cfg = DetectorConfig::new(2.0).unwrap();
        let mc = McConfig::new(1, 0);
        assert!(estimate_auc(&cfg, &SnrModel::Fixed(1.0), &mc).is_err());
    }
}
