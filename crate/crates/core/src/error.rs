use thiserror::Error;

use crate::specfun::SpecFunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("effective angular momentum j = {0:e} is degenerate (|j| <= 1e-12)")]
    DegenerateJ(f64),
    #[error("channel with |j| = {0} has no self-adjoint extension family (needs 0 < |j| < 1)")]
    NotExtensionChannel(f64),
    #[error("mu has a pole here (denominator {0:e})")]
    PoleOfMu(f64),
    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("S-matrix pole lies outside the representable kappa range")]
    PoleOutOfRange,
}

pub type Result<T> = std::result::Result<T, Error>;
