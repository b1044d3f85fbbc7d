//! Spin-1/2 Aharonov–Bohm problem on a conical background.
//!
//! The crate computes, per angular-momentum channel, the effective angular
//! momentum and its self-adjointness regime, the extension parameter fixed by
//! a finite-radius flux core, bound-state energies from several independent
//! routes, phase shifts and the S-matrix, and numerical oracles that
//! cross-check all of them.
//!
//! ```
//! use conical_ab::model::{Spin, SystemParams};
//! use conical_ab::spectrum::{energy_bg, energy_ks, lambda_from_physics};
//!
//! let params = SystemParams::new(0.8, 0.2, Spin::Up, 1.0, 1.0).unwrap();
//! let lambda = lambda_from_physics(&params, 0.5).unwrap();
//! let ks = energy_ks(&params, 0.5).unwrap().unwrap();
//! let bg = energy_bg(lambda, 0.5, 1.0).unwrap().unwrap();
//! assert!((ks.energy + 24.5).abs() < 1e-12);
//! assert!((bg.energy - ks.energy).abs() < 1e-12);
//! ```

pub mod error;
pub mod model;
pub mod roots;
pub mod routes;
pub mod scattering;
pub mod specfun;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
