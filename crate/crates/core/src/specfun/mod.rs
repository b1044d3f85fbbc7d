//! Real-argument special functions used by the bound-state and scattering
//! formulas: Gamma, Bessel J/Y/I/K of real (fractional) order with their
//! derivatives, and Kummer's confluent hypergeometric function ₁F₁.
//!
//! Every routine takes an explicit [`Accuracy`]; there is no global state.
//!
//! Algorithm map (switchover constants are fixed and listed here):
//!
//! | function | x < 2                | 2 ≤ x < `ASYMPTOTIC_MIN_X`   | x ≥ `ASYMPTOTIC_MIN_X` and x ≥ 1.5ν² |
//! |----------|----------------------|------------------------------|---------------------------------------|
//! | J, Y     | Temme series + CF1   | Steed CF1 + CF2              | Hankel expansion                      |
//! | I, K     | Temme series + CF1   | Steed CF1 + CF2 (Thompson–Barnett) | large-argument expansion        |
//!
//! Orders above 1/2 are reached by recurrence from the reduced order
//! μ ∈ [−1/2, 1/2], so integer orders need no special treatment.

mod bessel;
mod gamma;
mod kummer;

pub use bessel::{
    bessel_deriv, bessel_i, bessel_i_scaled, bessel_j, bessel_k, bessel_k_scaled, bessel_y,
    BesselKind, ASYMPTOTIC_MIN_X, MAX_ORDER,
};
pub use gamma::{gamma, sin_pi};
pub use kummer::kummer_1f1;
pub(crate) use bessel::ik_log_derivs;
#[cfg(test)]
pub(crate) use bessel::ik_product;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("gamma function has a pole at x = {0}")]
    GammaPole(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("requested accuracy {target:e} not reached in {function} after {terms} terms")]
    AccuracyNotReached {
        function: &'static str,
        target: f64,
        terms: usize,
    },
    #[error("1F1 lower parameter b = {0} is zero or a negative integer")]
    InvalidB(f64),
    #[error("{0} overflows double precision at this argument")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

/// Accuracy request shared by all special-function routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub target_relative_error: f64,
    /// Cutoff for power series and asymptotic sums.
    pub max_terms: usize,
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            target_relative_error: 1e-12,
            max_terms: 500,
        }
    }
}

impl Accuracy {
    pub fn new(target_relative_error: f64, max_terms: usize) -> Result<Self> {
        let acc = Self {
            target_relative_error,
            max_terms,
        };
        acc.validate()?;
        Ok(acc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_relative_error > 0.0 && self.target_relative_error.is_finite()) {
            return Err(SpecFunError::InvalidArgument(format!(
                "target relative error must be positive, got {}",
                self.target_relative_error
            )));
        }
        if self.max_terms == 0 {
            return Err(SpecFunError::InvalidArgument(
                "max_terms must be at least 1".into(),
            ));
        }
        Ok(())
    }
}
