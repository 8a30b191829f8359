//! Energy-detection performance over Nakagami-q (Hoyt) fading.
//!
//! The crate computes the area under the ROC curve (AUC) and its complement
//! for an energy detector with time-bandwidth product `u`, both for a fixed
//! SNR and averaged over Hoyt fading. Closed forms are cross-checked against
//! adaptive quadrature and a Monte-Carlo simulator of the decision statistic.
//!
//! ```
//! use hoyt_ed::{DetectorConfig, EvalPolicy, HoytFading, avg_auc_closed};
//!
//! let cfg = DetectorConfig::new(1.0).unwrap();
//! let fading = HoytFading::new(0.5, 10.0).unwrap();
//! let auc = avg_auc_closed(&cfg, &fading, &EvalPolicy::default()).unwrap();
//! assert!((auc.value - (1.0 - 0.5 / 27f64.sqrt())).abs() < 1e-12);
//! ```

pub mod average;
pub mod cli;
pub mod detector;
pub mod error;
pub mod hoyt;
pub mod montecarlo;
mod quad;
pub mod specfun;
pub mod validation;

pub use average::{
    avg_auc_closed, avg_auc_paper_printed, avg_auc_quadrature, avg_auc_series, avg_cauc_closed,
    avg_pd_quadrature, EvalPolicy, PrintedVariant,
};
pub use detector::{
    auc_awgn, auc_awgn_1f1_variant, auc_awgn_series, auc_quadrature, cauc_awgn, pd, pf,
    roc_points_awgn, threshold_for_pf, DetectorConfig, HypergeometricReading, Method, MetricValue,
};
pub use error::{Error, Result};
pub use hoyt::HoytFading;
pub use montecarlo::{estimate_auc, sample_statistic, Hypothesis, McConfig, McEstimate, SnrModel};
