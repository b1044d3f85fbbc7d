//! Bound-state routes behind a common trait, registered by name.
//!
//! Identity routes are different closed forms or root searches for the same
//! point-interaction energy and must agree to rounding. Measured routes model
//! a different physical problem and are only compared, never required to
//! match.

use serde::Serialize;

use crate::model::SystemParams;
use crate::specfun::Accuracy;
use crate::spectrum::{energy_bg, energy_ks, lambda_from_physics, BoundState};
use crate::verify::{find_pole, shell_bound_state};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteClass {
    Identity,
    Measured,
}

pub trait SpectrumRoute: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn class(&self) -> RouteClass;
    /// Bound state of the channel with effective angular momentum `j`, if any.
    fn bound_state(&self, params: &SystemParams, j: f64) -> Result<Option<BoundState>>;
}

/// Closed form from matching the zero-energy core solution.
pub struct ZeroEnergyMatching;

impl SpectrumRoute for ZeroEnergyMatching {
    fn name(&self) -> &'static str {
        "ks"
    }
    fn description(&self) -> &'static str {
        "closed form from zero-energy matching at the core"
    }
    fn class(&self) -> RouteClass {
        RouteClass::Identity
    }
    fn bound_state(&self, params: &SystemParams, j: f64) -> Result<Option<BoundState>> {
        energy_ks(params, j)
    }
}

/// Closed form in the extension parameter, with λ fixed by the core physics.
pub struct BoundaryCondition;

impl SpectrumRoute for BoundaryCondition {
    fn name(&self) -> &'static str {
        "bg"
    }
    fn description(&self) -> &'static str {
        "closed form in the self-adjoint extension parameter"
    }
    fn class(&self) -> RouteClass {
        RouteClass::Identity
    }
    fn bound_state(&self, params: &SystemParams, j: f64) -> Result<Option<BoundState>> {
        energy_bg(lambda_from_physics(params, j)?, j, params.mass)
    }
}

/// Numerical pole of the S-matrix on the positive imaginary k axis.
pub struct SMatrixPole;

impl SpectrumRoute for SMatrixPole {
    fn name(&self) -> &'static str {
        "pole"
    }
    fn description(&self) -> &'static str {
        "numerical S-matrix pole on the imaginary momentum axis"
    }
    fn class(&self) -> RouteClass {
        RouteClass::Identity
    }
    fn bound_state(&self, params: &SystemParams, j: f64) -> Result<Option<BoundState>> {
        let pole = find_pole(lambda_from_physics(params, j)?, j, params.mass)?;
        Ok(pole.map(|p| BoundState::from_kappa(p.kappa_star, params.mass)))
    }
}

/// Finite-radius delta shell solved with Bessel functions.
#[derive(Default)]
pub struct DeltaShell {
    pub accuracy: Accuracy,
}

impl SpectrumRoute for DeltaShell {
    fn name(&self) -> &'static str {
        "shell"
    }
    fn description(&self) -> &'static str {
        "delta-shell core of radius r0, matched with I and K Bessel functions"
    }
    fn class(&self) -> RouteClass {
        RouteClass::Measured
    }
    fn bound_state(&self, params: &SystemParams, j: f64) -> Result<Option<BoundState>> {
        let shell = shell_bound_state(params, j, &self.accuracy)?;
        Ok(shell.map(|s| BoundState::from_kappa(s.kappa, params.mass)))
    }
}

/// Named routes in registration order.
pub struct RouteRegistry {
    routes: Vec<Box<dyn SpectrumRoute>>,
}

impl Default for RouteRegistry {
    fn default() -> Self {
        let mut r = Self::new();
        r.routes.push(Box::new(ZeroEnergyMatching));
        r.routes.push(Box::new(BoundaryCondition));
        r.routes.push(Box::new(SMatrixPole));
        r.routes.push(Box::new(DeltaShell::default()));
        r
    }
}

impl RouteRegistry {
    pub fn new() -> Self {
        Self { routes: Vec::new() }
    }

    pub fn register(&mut self, route: Box<dyn SpectrumRoute>) -> Result<()> {
        if self.get(route.name()).is_some() {
            return Err(Error::InvalidParams(format!(
                "route '{}' is already registered",
                route.name()
            )));
        }
        self.routes.push(route);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn SpectrumRoute> {
        self.routes.iter().find(|r| r.name() == name).map(|r| r.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.routes.iter().map(|r| r.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn SpectrumRoute> {
        self.routes.iter().map(|r| r.as_ref())
    }

    /// Keeps only the named routes, in registry order. Unknown names are an error.
    pub fn retain(&mut self, names: &[&str]) -> Result<()> {
        for name in names {
            if self.get(name).is_none() {
                return Err(Error::InvalidParams(format!(
                    "unknown route '{name}', expected one of {}",
                    self.names().join(", ")
                )));
            }
        }
        self.routes.retain(|r| names.contains(&r.name()));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Spin;

    #[test]
    fn default_order_and_lookup() {
        let r = RouteRegistry::default();
        assert_eq!(r.names(), vec!["ks", "bg", "pole", "shell"]);
        assert_eq!(r.get("shell").unwrap().class(), RouteClass::Measured);
        assert!(r.get("nope").is_none());
    }

    #[test]
    fn duplicate_and_unknown_names() {
        let mut r = RouteRegistry::default();
        assert!(r.register(Box::new(SMatrixPole)).is_err());
        assert!(r.retain(&["ks", "bogus"]).is_err());
        r.retain(&["pole", "ks"]).unwrap();
        assert_eq!(r.names(), vec!["ks", "pole"]);
    }

    #[test]
    fn identity_routes_agree() {
        let p = SystemParams::new(0.8, 0.2, Spin::Up, 1.0, 1.0).unwrap();
        let r = RouteRegistry::default();
        let energies: Vec<f64> = ["ks", "bg", "pole"]
            .iter()
            .map(|n| r.get(n).unwrap().bound_state(&p, 0.5).unwrap().unwrap().energy)
            .collect();
        for e in energies {
            assert!((e + 24.5).abs() < 1e-10 * 24.5);
        }
    }
}
