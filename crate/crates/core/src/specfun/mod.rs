//! Special functions needed by the detector and fading formulas.
//!
//! Everything here is real-valued and evaluated in `f64`. Series routines stop
//! once two consecutive terms are both below `rel_tol` times the running sum,
//! and fail with [`Error::Convergence`](crate::Error::Convergence) when
//! `max_terms` is exhausted first.

mod bessel;
mod gamma;
mod hypergeometric;
mod marcum;
mod polynomial;

pub use bessel::{bessel_i, bessel_i_scaled};
pub use gamma::{
    digamma, gamma, ln_gamma, ln_gamma_signed, reg_lower_gamma, reg_upper_gamma, rgamma,
};
pub use hypergeometric::{gauss_2f1, kummer_1f1};
pub use marcum::marcum_q;
pub use polynomial::{binomial, laguerre, pochhammer};

pub(crate) use gamma::{gamma_ratio, poisson_ln_pmf};

use crate::error::{Error, Result};

/// Truncation controls for the series-based special functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionAccuracy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for FunctionAccuracy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            max_terms: 10_000,
        }
    }
}

impl FunctionAccuracy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        let acc = Self { rel_tol, max_terms };
        acc.validate()?;
        Ok(acc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-6) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must lie in (0, 1e-6), got {}",
                self.rel_tol
            )));
        }
        if self.max_terms < 100 {
            return Err(Error::InvalidConfig(format!(
                "max_terms must be at least 100, got {}",
                self.max_terms
            )));
        }
        Ok(())
    }

    pub fn reg_upper_gamma(&self, a: f64, x: f64) -> Result<f64> {
        gamma::reg_gamma_pair(a, x, self).map(|(_, q)| q)
    }

    pub fn reg_lower_gamma(&self, a: f64, x: f64) -> Result<f64> {
        gamma::reg_gamma_pair(a, x, self).map(|(p, _)| p)
    }

    pub fn bessel_i_scaled(&self, nu: f64, x: f64) -> Result<f64> {
        bessel::bessel_i_scaled_with(nu, x, self)
    }

    pub fn marcum_q(&self, m: f64, a: f64, b: f64) -> Result<f64> {
        marcum::marcum_q_with(m, a, b, self)
    }

    pub fn kummer_1f1(&self, a: f64, b: f64, x: f64) -> Result<f64> {
        hypergeometric::kummer_1f1_with(a, b, x, self)
    }

    pub fn gauss_2f1(&self, a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
        hypergeometric::gauss_2f1_with(a, b, c, z, self)
    }
}

/// Series stopping rule: two consecutive small terms.
#[derive(Debug, Default)]
pub(crate) struct SmallTermCounter {
    run: u32,
}

impl SmallTermCounter {
    pub(crate) fn observe(&mut self, term: f64, sum: f64, rel_tol: f64) -> bool {
        if term.abs() <= rel_tol * sum.abs() {
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.run >= 2
    }
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}
