//! Nakagami-q (Hoyt) fading: the instantaneous SNR is Ω₁X² + Ω₂Y² with X, Y
//! standard normal and Ω₂/Ω₁ = q².

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};
use crate::specfun::{self, FunctionAccuracy};

/// Below this distance from q = 1 the CDF switches to the exponential form.
const RAYLEIGH_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoytFading {
    q: f64,
    gamma_bar: f64,
}

impl HoytFading {
    pub fn new(q: f64, gamma_bar: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "fading parameter q = {q} must lie in (0, 1]"
            )));
        }
        if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "average SNR {gamma_bar} must be positive and finite"
            )));
        }
        Ok(Self { q, gamma_bar })
    }

    pub fn from_db(q: f64, gamma_bar_db: f64) -> Result<Self> {
        Self::new(q, db_to_linear(gamma_bar_db))
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }

    pub fn gamma_bar_db(&self) -> f64 {
        10.0 * self.gamma_bar.log10()
    }

    /// Powers of the in-phase and quadrature components, summing to γ̄.
    pub fn component_powers(&self) -> (f64, f64) {
        let q2 = self.q * self.q;
        let strong = self.gamma_bar / (1.0 + q2);
        (strong, q2 * strong)
    }

    /// SNR density.
    pub fn snr_pdf(&self, gamma: f64) -> Result<f64> {
        if !(gamma >= 0.0) {
            return Err(domain(
                "snr_pdf",
                format!("SNR {gamma} must be non-negative"),
            ));
        }
        let (q, gb) = (self.q, self.gamma_bar);
        let q2 = q * q;
        let z = (1.0 - q2 * q2) * gamma / (4.0 * q2 * gb);
        // exp(−(1+q²)²γ/(4q²γ̄)) I₀(z) = exp(−(1+q²)γ/(2γ̄)) · e^{−z} I₀(z)
        let i0 = specfun::bessel_i_scaled(0.0, z)?;
        Ok((1.0 + q2) / (2.0 * q * gb) * (-(1.0 + q2) * gamma / (2.0 * gb)).exp() * i0)
    }

    /// SNR distribution function as a difference of first-order Marcum Q functions.
    pub fn snr_cdf(&self, gamma: f64) -> Result<f64> {
        if !(gamma >= 0.0) {
            return Err(domain(
                "snr_cdf",
                format!("SNR {gamma} must be non-negative"),
            ));
        }
        if gamma.is_infinite() {
            return Ok(1.0);
        }
        let (q, gb) = (self.q, self.gamma_bar);
        if 1.0 - q < RAYLEIGH_CUTOFF {
            return Ok(-(-gamma / gb).exp_m1());
        }
        let (a, b) = cdf_arguments(q, gb, gamma);
        let acc = FunctionAccuracy::default();
        let v = acc.marcum_q(1.0, a, b)? - acc.marcum_q(1.0, b, a)?;
        Ok(v.clamp(0.0, 1.0))
    }

    /// Moment generating function E[e^{sγ}].
    pub fn snr_mgf(&self, s: f64) -> Result<f64> {
        let (q, gb) = (self.q, self.gamma_bar);
        let t = 2.0 * s * gb * q / (1.0 + q * q);
        let radicand = 1.0 - 2.0 * s * gb + t * t;
        // Both factors (1 − 2sΩ_i) must be positive, not just their product.
        let (w1, w2) = self.component_powers();
        if !(radicand > 0.0) || 1.0 - 2.0 * s * w1 <= 0.0 || 1.0 - 2.0 * s * w2 <= 0.0 {
            return Err(domain(
                "snr_mgf",
                format!("s = {s} is outside the region of convergence"),
            ));
        }
        Ok(radicand.powf(-0.5))
    }

    /// One SNR draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (w1, w2) = self.component_powers();
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        w1 * x * x + w2 * y * y
    }

    /// `n` SNR draws.
    pub fn sample_snr<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// Marcum arguments (α, β) with α ≥ β so that F(γ) = Q₁(α, β) − Q₁(β, α).
pub(crate) fn cdf_arguments(q: f64, gamma_bar: f64, gamma: f64) -> (f64, f64) {
    let q2 = q * q;
    let base = (1.0 + q2) * gamma / (4.0 * q2 * gamma_bar);
    (
        ((1.0 + q) * (1.0 + q) * base).sqrt(),
        ((1.0 - q) * (1.0 - q) * base).sqrt(),
    )
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
