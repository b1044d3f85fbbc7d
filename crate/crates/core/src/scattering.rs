//! Scattering sector: phase shifts and per-channel S-matrix.
//!
//! In an extension channel the regular solution J_{|j|}(kr) mixes with the
//! irregular Y_{|j|}(kr) as f = C (J − μ Y), with
//!
//! ```text
//! μ = λ k^{2|j|} Γ(1−|j|) sin(π|j|) / (λ k^{2|j|} Γ(1−|j|) cos(π|j|) + 4^{|j|} Γ(1+|j|))
//! ```
//!
//! The phase shift is δ = Δ_m + arctan μ with Δ_m = (π/2)(|m| − |m + flux|)
//! and S = e^{2iδ}. Channels with |j| ≥ 1, and the degenerate j = 0
//! channel, keep only the regular solution: μ = 0 and S = e^{2iΔ_m}.
//!
//! θ = arctan μ is taken on the principal branch. Where μ changes sign
//! through its pole δ jumps by π but S is continuous, so consistency checks
//! are made on S.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::model::{classify, Channel, HalfInteger, Regime, SystemParams};
use crate::specfun::{gamma, sin_pi};
use crate::spectrum::{extension_order, lambda_from_physics, ExtensionParameter};
use crate::{Error, Result};

/// Normalisation convention of [`amplitude`], recorded in CLI headers.
pub const AMPLITUDE_CONVENTION: &str =
    "f(phi) = exp(-i*pi/4)/sqrt(2*pi*k) * sum_n (S_n - 1) exp(i*n*phi)";

const MU_POLE_FLOOR: f64 = 1e-300;

fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("wavenumber k must be positive and finite, got {k}")))
    }
}

/// Where the extension parameter of each channel comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaSource {
    /// λ_j fixed by the core radius and flux.
    Physical,
    /// One value for every extension channel.
    Fixed(ExtensionParameter),
}

impl LambdaSource {
    /// λ for an extension channel, `None` for regular or degenerate ones.
    pub fn resolve(&self, params: &SystemParams, channel: &Channel) -> Result<Option<ExtensionParameter>> {
        if channel.regime() != Regime::ExtensionRequired {
            return Ok(None);
        }
        match self {
            LambdaSource::Physical => lambda_from_physics(params, channel.j).map(Some),
            LambdaSource::Fixed(l) => Ok(Some(*l)),
        }
    }
}

/// Aharonov–Bohm phase Δ_m = (π/2)(|m| − |m + flux|).
pub fn delta_m(m: HalfInteger, flux: f64) -> f64 {
    let m = m.value();
    0.5 * PI * (m.abs() - (m + flux).abs())
}

/// (λ k^{2ν} Γ(1−ν), 4^ν Γ(1+ν)) for finite λ.
fn mixing_terms(lambda: f64, nu: f64, k: f64) -> Result<(f64, f64)> {
    let a = lambda * k.powf(2.0 * nu) * gamma(1.0 - nu)?;
    let b = 4f64.powf(nu) * gamma(1.0 + nu)?;
    Ok((a, b))
}

/// Mixing ratio μ of irregular to regular solution.
pub fn mu(lambda: ExtensionParameter, j: f64, k: f64) -> Result<f64> {
    let nu = extension_order(j)?;
    check_k(k)?;
    let (s, c) = (sin_pi(nu), cos_pi(nu));
    let (num, den) = match lambda {
        ExtensionParameter::Finite(l) => {
            let (a, b) = mixing_terms(l, nu, k)?;
            (a * s, a * c + b)
        }
        ExtensionParameter::Infinite => (s, c),
    };
    if den.abs() < MU_POLE_FLOOR {
        return Err(Error::PoleOfMu(den));
    }
    Ok(num / den)
}

fn check_channel_j(j: f64) -> Result<()> {
    if j.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("j must be finite, got {j}")))
    }
}

/// δ = Δ_m + arctan μ (μ = 0 outside extension channels).
pub fn phase_shift(lambda: ExtensionParameter, j: f64, m: HalfInteger, flux: f64, k: f64) -> Result<f64> {
    check_channel_j(j)?;
    check_k(k)?;
    let theta = match classify(j) {
        Regime::ExtensionRequired => mu(lambda, j, k)?.atan(),
        _ => 0.0,
    };
    Ok(delta_m(m, flux) + theta)
}

/// Per-channel S-matrix element.
pub fn s_matrix(lambda: ExtensionParameter, j: f64, m: HalfInteger, flux: f64, k: f64) -> Result<Complex64> {
    check_channel_j(j)?;
    check_k(k)?;
    let ab = Complex64::from_polar(1.0, 2.0 * delta_m(m, flux));
    if classify(j) != Regime::ExtensionRequired {
        return Ok(ab);
    }
    let nu = j.abs();
    match lambda {
        ExtensionParameter::Infinite => Ok(ab * Complex64::from_polar(1.0, 2.0 * PI * nu)),
        ExtensionParameter::Finite(l) => {
            let (a, b) = mixing_terms(l, nu, k)?;
            let phase = Complex64::new(cos_pi(nu), sin_pi(nu));
            let num = a * phase + b;
            let den = a * phase.conj() + b;
            Ok(ab * num / den)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringResult {
    pub k: f64,
    pub delta_m: f64,
    pub mu: f64,
    pub theta: f64,
    pub delta: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub s_value: Complex64,
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

/// Full scattering data for one channel. `lambda` is ignored outside
/// extension channels.
pub fn scatter_channel(
    lambda: Option<ExtensionParameter>,
    channel: &Channel,
    flux: f64,
    k: f64,
) -> Result<ScatteringResult> {
    check_k(k)?;
    let dm = delta_m(channel.m, flux);
    let lambda = lambda.unwrap_or(ExtensionParameter::DIRICHLET);
    let mu = match channel.regime() {
        Regime::ExtensionRequired => mu(lambda, channel.j, k)?,
        _ => 0.0,
    };
    let theta = mu.atan();
    Ok(ScatteringResult {
        k,
        delta_m: dm,
        mu,
        theta,
        delta: dm + theta,
        s_value: s_matrix(lambda, channel.j, channel.m, flux, k)?,
    })
}

/// Angular scattering amplitude from a truncated partial-wave sum.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeProfile {
    pub k: f64,
    pub angles: Vec<f64>,
    pub amplitude: Vec<Complex64>,
    /// |f|²
    pub dcs: Vec<f64>,
    pub n_min: i64,
    pub n_max: i64,
    /// Largest |S_n − 1|/√(2πk) among the two edge channels; the partial
    /// waves of the pure flux problem do not decay with |n|, so this is
    /// reported rather than driven to zero.
    pub truncation_tail: f64,
}

pub fn amplitude(
    params: &SystemParams,
    lambdas: &LambdaSource,
    k: f64,
    angles: &[f64],
    n_min: i64,
    n_max: i64,
) -> Result<AmplitudeProfile> {
    check_k(k)?;
    if n_min > n_max {
        return Err(Error::InvalidParams(format!(
            "n_min ({n_min}) must not exceed n_max ({n_max})"
        )));
    }
    let mut weights = Vec::with_capacity((n_max - n_min + 1) as usize);
    for n in n_min..=n_max {
        let channel = Channel::new(params, n);
        let lambda = lambdas.resolve(params, &channel)?;
        let s = s_matrix(
            lambda.unwrap_or(ExtensionParameter::DIRICHLET),
            channel.j,
            channel.m,
            params.flux,
            k,
        )?;
        weights.push((n, s - 1.0));
    }
    let norm = Complex64::from_polar(1.0 / (2.0 * PI * k).sqrt(), -PI / 4.0);
    let amplitude: Vec<Complex64> = angles
        .iter()
        .map(|&phi| {
            // fixed ascending-n order
            let sum = weights
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &(n, w)| {
                    acc + w * Complex64::from_polar(1.0, n as f64 * phi)
                });
            norm * sum
        })
        .collect();
    let dcs = amplitude.iter().map(|f| f.norm_sqr()).collect();
    let edge = |i: usize| weights.get(i).map_or(0.0, |(_, w)| w.norm());
    let truncation_tail = edge(0).max(edge(weights.len() - 1)) * norm.norm();
    Ok(AmplitudeProfile {
        k,
        angles: angles.to_vec(),
        amplitude,
        dcs,
        n_min,
        n_max,
        truncation_tail,
    })
}
