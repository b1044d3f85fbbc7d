//! Bound-state sector of an extension channel (0 < |j| < 1).
//!
//! Two closed forms give the single bound state of a channel:
//!
//! * zero-energy log-derivative matching at the core radius r0,
//!   `E = −(2/(M r0²)) [Γ(1+|j|)/Γ(1−|j|) · (1+ξ)/(1−ξ)]^{1/|j|}`;
//! * the boundary-condition family at the origin with parameter λ,
//!   `E = −(2/M) [−Γ(1+|j|)/(λ Γ(1−|j|))]^{1/|j|}`;
//!
//! with ξ = flux/(α|j|) + |j|/2. Equating them fixes
//! `1/λ = −r0^{−2|j|} (1+ξ)/(1−ξ)`.
//!
//! Either bracket may be non-positive, in which case there is no real
//! negative energy and the routines return `Ok(None)`.

use serde::{Deserialize, Serialize};

use crate::model::{classify, Regime, SystemParams, DEGENERACY_TOL};
use crate::specfun::{gamma, kummer_1f1, Accuracy};
use crate::{Error, Result};

/// Self-adjoint extension parameter λ of one channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ExtensionParameter {
    Finite(f64),
    Infinite,
}

impl ExtensionParameter {
    /// λ = 0: Dirichlet (regular) boundary condition.
    pub const DIRICHLET: ExtensionParameter = ExtensionParameter::Finite(0.0);
}

impl std::fmt::Display for ExtensionParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtensionParameter::Finite(v) => write!(f, "{v}"),
            ExtensionParameter::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for ExtensionParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinite") {
            return Ok(ExtensionParameter::Infinite);
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(ExtensionParameter::Finite(v)),
            _ => Err(Error::InvalidParams(format!(
                "extension parameter must be a finite number or \"inf\", got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundState {
    pub energy: f64,
    /// κ = √(−2ME)
    pub kappa: f64,
}

impl BoundState {
    pub fn from_energy(energy: f64, mass: f64) -> Self {
        Self {
            energy,
            kappa: (-2.0 * mass * energy).sqrt(),
        }
    }

    pub fn from_kappa(kappa: f64, mass: f64) -> Self {
        Self {
            energy: -kappa * kappa / (2.0 * mass),
            kappa,
        }
    }
}

/// |j| of an extension channel, or the reason the channel is not one.
pub(crate) fn extension_order(j: f64) -> Result<f64> {
    match classify(j) {
        Regime::ExtensionRequired => Ok(j.abs()),
        Regime::Degenerate => Err(Error::DegenerateJ(j)),
        Regime::EssentiallySelfAdjoint => Err(Error::NotExtensionChannel(j.abs())),
    }
}

/// Γ(1+ν)/Γ(1−ν).
pub(crate) fn gamma_ratio(nu: f64) -> Result<f64> {
    Ok(gamma(1.0 + nu)? / gamma(1.0 - nu)?)
}

/// ξ = flux/(α|j|) + |j|/2; the physical ratio is (1+ξ)/(1−ξ).
pub fn flux_ratio(j: f64, alpha: f64, flux: f64) -> Result<f64> {
    let nu = j.abs();
    if nu <= DEGENERACY_TOL {
        return Err(Error::DegenerateJ(j));
    }
    Ok(flux / (alpha * nu) + nu / 2.0)
}

/// λ_j fixed by the core radius, cone parameter and flux.
///
/// ξ = −1 gives λ = ∞; ξ = 1 gives λ = 0 (regular solution only).
pub fn lambda_from_physics(params: &SystemParams, j: f64) -> Result<ExtensionParameter> {
    let nu = extension_order(j)?;
    let xi = flux_ratio(j, params.alpha, params.flux)?;
    if 1.0 + xi == 0.0 {
        return Ok(ExtensionParameter::Infinite);
    }
    let lambda = -params.core_radius.powf(2.0 * nu) * (1.0 - xi) / (1.0 + xi);
    Ok(ExtensionParameter::Finite(lambda))
}

/// Bound state from zero-energy log-derivative matching at r0.
pub fn energy_ks(params: &SystemParams, j: f64) -> Result<Option<BoundState>> {
    let nu = extension_order(j)?;
    let xi = flux_ratio(j, params.alpha, params.flux)?;
    let bracket = gamma_ratio(nu)? * (1.0 + xi) / (1.0 - xi);
    if !(bracket > 0.0 && bracket.is_finite()) {
        return Ok(None);
    }
    let r0 = params.core_radius;
    let energy = -2.0 / (params.mass * r0 * r0) * bracket.powf(1.0 / nu);
    Ok(Some(BoundState::from_energy(energy, params.mass)))
}

/// Bound state of the boundary-condition family with parameter λ.
///
/// Only λ < 0 binds. λ = 0 and λ = ∞ both give no bound state.
pub fn energy_bg(lambda: ExtensionParameter, j: f64, mass: f64) -> Result<Option<BoundState>> {
    let nu = extension_order(j)?;
    let lambda = match lambda {
        ExtensionParameter::Finite(l) if l < 0.0 => l,
        _ => return Ok(None),
    };
    let bracket = -gamma_ratio(nu)? / lambda;
    if !bracket.is_finite() {
        return Ok(None);
    }
    let energy = -2.0 / mass * bracket.powf(1.0 / nu);
    Ok(Some(BoundState::from_energy(energy, mass)))
}

/// Bound-state radial function in the confluent-hypergeometric basis.
///
/// With ρ = 2κr,
/// `f(r) = A e^{ρ/2} ρ^{|j|} ₁F₁(½+|j|; 1+2|j|; −ρ) + B e^{ρ/2} ρ^{−|j|} ₁F₁(½−|j|; 1−2|j|; −ρ)`.
/// The powers act on |ρ′| = 2κr, the branch on which the decay condition
/// B = −16^{|j|} Γ(1+|j|)/Γ(1−|j|) A holds; f is then proportional to K_{|j|}(κr).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundWavefunction {
    pub j: f64,
    pub kappa: f64,
    pub coeff_a: f64,
    pub coeff_b: f64,
}

/// B/A forced by decay at infinity.
pub fn decay_coefficient_ratio(j: f64) -> Result<f64> {
    let nu = extension_order(j)?;
    Ok(-16f64.powf(nu) * gamma_ratio(nu)?)
}

/// B/A from the boundary condition at the origin, λ (2κ)^{2|j|}.
pub fn boundary_coefficient_ratio(lambda: f64, j: f64, kappa: f64) -> Result<f64> {
    let nu = extension_order(j)?;
    Ok(lambda * (2.0 * kappa).powf(2.0 * nu))
}

pub fn bound_wavefunction(j: f64, state: BoundState, coeff_a: f64) -> Result<BoundWavefunction> {
    if coeff_a == 0.0 || !coeff_a.is_finite() {
        return Err(Error::InvalidParams(format!(
            "coefficient A must be non-zero and finite, got {coeff_a}"
        )));
    }
    let ratio = decay_coefficient_ratio(j)?;
    Ok(BoundWavefunction {
        j,
        kappa: state.kappa,
        coeff_a,
        coeff_b: ratio * coeff_a,
    })
}

impl BoundWavefunction {
    pub fn eval(&self, r: f64, acc: &Accuracy) -> Result<f64> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParams(format!("radius must be positive, got {r}")));
        }
        let nu = self.j.abs();
        let rho = 2.0 * self.kappa * r;
        let growth = (0.5 * rho).exp();
        let regular = growth * rho.powf(nu) * kummer_1f1(0.5 + nu, 1.0 + 2.0 * nu, -rho, acc)?;
        let b = 1.0 - 2.0 * nu;
        let f_irr = if b.abs() < 1e-12 {
            // ₁F₁(a; 2a; x) → (1 + eˣ)/2 as a → 0
            0.5 * (1.0 + (-rho).exp())
        } else {
            kummer_1f1(0.5 - nu, b, -rho, acc)?
        };
        let irregular = growth * rho.powf(-nu) * f_irr;
        Ok(self.coeff_a * regular + self.coeff_b * irregular)
    }
}
