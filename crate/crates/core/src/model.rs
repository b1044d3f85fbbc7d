//! Physical configuration and per-channel bookkeeping.
//!
//! The upper spinor component carries angular dependence e^{i(m−s/2)φ} with
//! half-integer total angular momentum m = n + 1/2. The radial problem in a
//! channel depends on the effective angular momentum
//!
//! ```text
//! j = (1/α) (m − s/2 − flux + (1 − α)/2)
//! ```
//!
//! and the radial operator needs a self-adjoint extension exactly when
//! 0 < |j| < 1.
//!
//! `flux` is the flux parameter with the charge absorbed. The same number is
//! used verbatim in the bound-state and extension-parameter formulas; whether
//! those should instead carry the spin sign of the Zeeman term is left open.
//! The cone parameter α may be any positive number: α < 1 is a deficit, α > 1
//! an excess, α = 1 flat space.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// |j| at or below this is treated as j = 0.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    /// s = ±1, twice the spin projection.
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }
}

impl TryFrom<i64> for Spin {
    type Error = Error;

    fn try_from(s: i64) -> Result<Self> {
        match s {
            1 => Ok(Spin::Up),
            -1 => Ok(Spin::Down),
            other => Err(Error::InvalidParams(format!("spin must be +1 or -1, got {other}"))),
        }
    }
}

/// Physical configuration (natural units, ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub alpha: f64,
    pub flux: f64,
    pub spin: Spin,
    pub mass: f64,
    /// Flux-core radius r0.
    pub core_radius: f64,
}

impl SystemParams {
    pub fn new(alpha: f64, flux: f64, spin: Spin, mass: f64, core_radius: f64) -> Result<Self> {
        let p = Self {
            alpha,
            flux,
            spin,
            mass,
            core_radius,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("alpha", self.alpha)?;
        positive("mass", self.mass)?;
        positive("r0", self.core_radius)?;
        if !self.flux.is_finite() {
            return Err(Error::InvalidParams(format!("flux must be finite, got {}", self.flux)));
        }
        Ok(())
    }

    pub fn with_core_radius(self, core_radius: f64) -> Result<Self> {
        Self::new(self.alpha, self.flux, self.spin, self.mass, core_radius)
    }
}

impl Serialize for SystemParams {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SystemParams", 5)?;
        st.serialize_field("alpha", &self.alpha)?;
        st.serialize_field("flux", &self.flux)?;
        st.serialize_field("spin", &(self.spin.sign() as i64))?;
        st.serialize_field("mass", &self.mass)?;
        st.serialize_field("r0", &self.core_radius)?;
        st.end()
    }
}

/// Half-integer m = n + 1/2, stored through n so it is always exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub fn from_n(n: i64) -> Self {
        Self(n)
    }

    pub fn n(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 + 0.5
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// |j| ≥ 1: only the regular solution is admissible.
    EssentiallySelfAdjoint,
    /// 0 < |j| < 1: one-parameter family of extensions.
    ExtensionRequired,
    /// j = 0 within [`DEGENERACY_TOL`].
    Degenerate,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::EssentiallySelfAdjoint => "essentially_self_adjoint",
            Regime::ExtensionRequired => "extension_required",
            Regime::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Channel {
    pub n: i64,
    pub m: HalfInteger,
    pub j: f64,
}

impl Channel {
    pub fn new(params: &SystemParams, n: i64) -> Self {
        Self {
            n,
            m: HalfInteger::from_n(n),
            j: effective_j(params, n),
        }
    }

    pub fn regime(&self) -> Regime {
        classify(self.j)
    }
}

pub fn effective_j(params: &SystemParams, n: i64) -> f64 {
    let m = HalfInteger::from_n(n).value();
    (m - params.spin.sign() / 2.0 - params.flux + (1.0 - params.alpha) / 2.0) / params.alpha
}

pub fn classify(j: f64) -> Regime {
    let a = j.abs();
    if a <= DEGENERACY_TOL {
        Regime::Degenerate
    } else if a < 1.0 {
        Regime::ExtensionRequired
    } else {
        Regime::EssentiallySelfAdjoint
    }
}

/// Channels n_min..=n_max in ascending order.
pub fn channels(params: &SystemParams, n_min: i64, n_max: i64) -> Result<Vec<(Channel, Regime)>> {
    if n_min > n_max {
        return Err(Error::InvalidParams(format!(
            "n_min ({n_min}) must not exceed n_max ({n_max})"
        )));
    }
    Ok((n_min..=n_max)
        .map(|n| {
            let c = Channel::new(params, n);
            (c, c.regime())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(alpha: f64, flux: f64, spin: Spin) -> SystemParams {
        SystemParams::new(alpha, flux, spin, 1.0, 1.0).unwrap()
    }

    #[test]
    fn effective_j_examples() {
        assert_eq!(effective_j(&params(1.0, 0.0, Spin::Up), 2), 2.0);
        assert!((effective_j(&params(0.5, 0.1, Spin::Up), 0) - 0.3).abs() < 1e-15);
        assert!((effective_j(&params(0.8, -0.15, Spin::Down), -1) - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(0.3), Regime::ExtensionRequired);
        assert_eq!(classify(2.0), Regime::EssentiallySelfAdjoint);
        assert_eq!(classify(1.0), Regime::EssentiallySelfAdjoint);
        assert_eq!(classify(0.0), Regime::Degenerate);
        assert_eq!(classify(5e-13), Regime::Degenerate);
    }

    #[test]
    fn channel_lists() {
        let flat = channels(&params(1.0, 0.0, Spin::Up), -1, 1).unwrap();
        let js: Vec<f64> = flat.iter().map(|(c, _)| c.j).collect();
        assert_eq!(js, vec![-1.0, 0.0, 1.0]);
        assert_eq!(flat[1].1, Regime::Degenerate);

        let quarter = channels(&params(1.0, 0.25, Spin::Up), 0, 0).unwrap();
        assert_eq!(quarter[0].0.j, -0.25);
        assert_eq!(quarter[0].1, Regime::ExtensionRequired);

        let cone = channels(&params(0.9, 0.3, Spin::Down), -2, 2).unwrap();
        assert_eq!(cone.len(), 5);
        for (i, (c, r)) in cone.iter().enumerate() {
            let n = i as i64 - 2;
            assert_eq!(c.n, n);
            assert_eq!(c.m.value(), n as f64 + 0.5);
            // (m + 1/2 − 0.3 + 0.05)/0.9 = (n + 0.75)/0.9
            assert!((c.j - (n as f64 + 0.75) / 0.9).abs() < 1e-14);
            assert_eq!(*r, classify(c.j));
        }
        assert_eq!(cone[2].1, Regime::ExtensionRequired);
        assert_eq!(cone[3].1, Regime::EssentiallySelfAdjoint);

        assert!(channels(&params(1.0, 0.0, Spin::Up), 2, 1).is_err());
    }

    #[test]
    fn invalid_params() {
        assert!(SystemParams::new(0.0, 0.0, Spin::Up, 1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, 0.0, Spin::Up, -1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, 0.0, Spin::Up, 1.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, f64::NAN, Spin::Up, 1.0, 1.0).is_err());
        assert!(Spin::try_from(0).is_err());
        assert_eq!(Spin::try_from(-1).unwrap(), Spin::Down);
    }

    proptest! {
        #[test]
        fn flux_shift_covariance(alpha in 0.2f64..2.0, flux in -2.0f64..2.0, n in -20i64..20, up in any::<bool>()) {
            let spin = if up { Spin::Up } else { Spin::Down };
            let p = params(alpha, flux, spin);
            let shifted = params(alpha, flux + 1.0, spin);
            // identical up to the rounding of flux + 1
            let a = effective_j(&p, n);
            let b = effective_j(&shifted, n + 1);
            prop_assert!((a - b).abs() <= 8.0 * f64::EPSILON * (1.0 + a.abs()) / alpha);
        }

        #[test]
        fn affine_in_flux(alpha in 0.2f64..2.0, flux in -2.0f64..2.0, delta in -1.0f64..1.0, n in -20i64..20) {
            let a = effective_j(&params(alpha, flux, Spin::Up), n);
            let b = effective_j(&params(alpha, flux + delta, Spin::Up), n);
            prop_assert!(((b - a) - (-delta / alpha)).abs() <= 64.0 * f64::EPSILON * (1.0 + a.abs() + b.abs()));
        }

        #[test]
        fn classify_is_even(j in -5.0f64..5.0) {
            prop_assert_eq!(classify(j), classify(-j));
        }
    }
}
