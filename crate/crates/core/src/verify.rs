//! Independent numerical oracles and cross-route consistency reports.
//!
//! # S-matrix poles
//!
//! With k → iκ the S-matrix denominator of an extension channel becomes the
//! real function g(κ) = λ κ^{2|j|} Γ(1−|j|) + 4^{|j|} Γ(1+|j|). For λ < 0 it
//! falls monotonically from a positive value to −∞, so there is exactly one
//! root; for λ ≥ 0 (or λ = ∞) it has constant sign. The root is bracketed and
//! refined in ln κ.
//!
//! # Delta-shell oracle
//!
//! The contact term is replaced by a shell of radius r0,
//! U(r) = (s·flux)/(2Mα) · δ(r − r0)/r0. Integrating the radial equation
//! −(1/2M)(f'' + f'/r − j²f/r²) + U f = E f across r0 (only f'' is singular)
//! gives the derivative jump
//!
//! ```text
//! f'(r0+) − f'(r0−) = (s·flux/α) f(r0) / r0.
//! ```
//!
//! For E = −κ²/2M the interior solution regular at the origin is I_{|j|}(κr)
//! and the exterior decaying one is K_{|j|}(κr). Matching logarithmic
//! derivatives with the jump, and multiplying by r0, yields
//!
//! ```text
//! x [K'(x)/K(x) − I'(x)/I(x)] = s·flux/α,    x = κ r0,
//! ```
//!
//! which involves κ only through x. By the Wronskian the left side equals
//! −1/(I(x)K(x)); since I·K decreases from 1/(2|j|) to 0, a root exists iff
//! s·flux/α < −2|j| (any attractive shell when j = 0).

use std::f64::consts::PI;

use serde::Serialize;

use crate::model::{classify, Channel, HalfInteger, Regime, Spin, SystemParams};
use crate::roots::{bracketed_root, MAX_ITER};
use crate::routes::{RouteClass, RouteRegistry};
use crate::scattering::mu;
use crate::specfun::{bessel_j, bessel_y, gamma, Accuracy, SpecFunError};
use crate::spectrum::{extension_order, flux_ratio, lambda_from_physics, BoundState, ExtensionParameter};
use crate::{Error, Result};

/// Floor used in every relative deviation.
pub const REL_FLOOR: f64 = 1e-300;

pub fn relative_deviation(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(REL_FLOOR)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleResult {
    pub kappa_star: f64,
    pub energy: f64,
    /// |g(κ*)|
    pub residual: f64,
    /// 4^{|j|} Γ(1+|j|), the size of either term of g at the root.
    pub scale: f64,
}

const POLE_INITIAL: (f64, f64) = (1e-12, 1e12);
const POLE_LIMITS: (f64, f64) = (1e-300, 1e300);
const POLE_WIDEN: f64 = 1e6;

/// Bound state read off the S-matrix pole on the positive imaginary k axis.
pub fn find_pole(lambda: ExtensionParameter, j: f64, mass: f64) -> Result<Option<PoleResult>> {
    let nu = extension_order(j)?;
    let l = match lambda {
        ExtensionParameter::Finite(l) if l < 0.0 => l,
        _ => return Ok(None),
    };
    let a = l * gamma(1.0 - nu)?;
    let scale = 4f64.powf(nu) * gamma(1.0 + nu)?;
    let g = |u: f64| a * (2.0 * nu * u).exp() + scale;

    let (mut lo, mut hi) = (POLE_INITIAL.0.ln(), POLE_INITIAL.1.ln());
    while g(lo).signum() == g(hi).signum() {
        if lo <= POLE_LIMITS.0.ln() && hi >= POLE_LIMITS.1.ln() {
            return Err(Error::PoleOutOfRange);
        }
        lo = (lo - POLE_WIDEN.ln()).max(POLE_LIMITS.0.ln());
        hi = (hi + POLE_WIDEN.ln()).min(POLE_LIMITS.1.ln());
    }
    let xtol = 1e-13f64.max(1e-15 * lo.abs().max(hi.abs()));
    let u = bracketed_root(|u| Ok(g(u)), lo, hi, xtol, MAX_ITER).map_err(|e| match e {
        Error::NoConvergence { .. } => Error::NoConvergence {
            what: "S-matrix pole search",
            iterations: MAX_ITER,
        },
        other => other,
    })?;
    let kappa = u.exp();
    let state = BoundState::from_kappa(kappa, mass);
    Ok(Some(PoleResult {
        kappa_star: kappa,
        energy: state.energy,
        residual: g(u).abs(),
        scale,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellResult {
    pub r0: f64,
    pub kappa: f64,
    pub energy: f64,
    /// M r0² |E|, independent of r0.
    pub dimensionless_product: f64,
}

/// Scan range and resolution for the shell matching function in x = κ r0.
pub const SHELL_SCAN: (f64, f64, usize) = (1e-8, 1e3, 200);

/// x [K'/K − I'/I](x) − s·flux/α at order |j|; zero at a shell bound state.
pub fn shell_matching(params: &SystemParams, j: f64, x: f64, acc: &Accuracy) -> Result<f64> {
    let coupling = params.spin.sign() * params.flux / params.alpha;
    let (di, dk) = crate::specfun::ik_log_derivs(j.abs(), x, acc)?;
    Ok(x * (dk - di) - coupling)
}

/// Bound state of the finite-radius shell problem, solved in x = κ r0.
pub fn shell_bound_state(params: &SystemParams, j: f64, acc: &Accuracy) -> Result<Option<ShellResult>> {
    if !j.is_finite() {
        return Err(Error::InvalidParams(format!("j must be finite, got {j}")));
    }
    let x = match shell_root(params, j, acc)? {
        Some(x) => x,
        None => return Ok(None),
    };
    let r0 = params.core_radius;
    let kappa = x / r0;
    let state = BoundState::from_kappa(kappa, params.mass);
    Ok(Some(ShellResult {
        r0,
        kappa,
        energy: state.energy,
        dimensionless_product: params.mass * r0 * r0 * state.energy.abs(),
    }))
}

/// Root of the matching function in x; depends on (α, flux, s, |j|) only.
fn shell_root(params: &SystemParams, j: f64, acc: &Accuracy) -> Result<Option<f64>> {
    let (x_lo, x_hi, steps) = SHELL_SCAN;
    let (u_lo, u_hi) = (x_lo.ln(), x_hi.ln());
    let f = |u: f64| shell_matching(params, j, u.exp(), acc);
    let mut prev_u = u_lo;
    let mut prev_g = f(u_lo)?;
    for i in 1..=steps {
        let u = u_lo + (u_hi - u_lo) * i as f64 / steps as f64;
        let g = f(u)?;
        if prev_g == 0.0 {
            return Ok(Some(prev_u.exp()));
        }
        if g.signum() != prev_g.signum() {
            let root = bracketed_root(f, prev_u, u, 1e-15, MAX_ITER)?;
            return Ok(Some(root.exp()));
        }
        prev_u = u;
        prev_g = g;
    }
    Ok(None)
}

fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Phase shift read from the far field of J_{|j|}(kr) − μ Y_{|j|}(kr).
///
/// The radial function is sampled at kr and kr + π/2, each sample divided
/// by √(2/(π k r)), and the pair inverted against
/// cos(kr − |m|π/2 − π/4 + δ). Returns δ wrapped to (−π, π].
pub fn extract_phase(
    lambda: ExtensionParameter,
    j: f64,
    m: HalfInteger,
    k: f64,
    r_far: f64,
    acc: &Accuracy,
) -> Result<f64> {
    let x1 = k * r_far;
    if !(x1 >= 100.0 && x1.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "far-field sampling needs k*r_far >= 100, got {x1}"
        )));
    }
    let nu = j.abs();
    let mix = match classify(j) {
        Regime::ExtensionRequired => mu(lambda, j, k)?,
        _ => 0.0,
    };
    let radial = |x: f64| -> std::result::Result<f64, SpecFunError> {
        Ok((bessel_j(nu, x, acc)? - mix * bessel_y(nu, x, acc)?) / (2.0 / (PI * x)).sqrt())
    };
    let x2 = x1 + 0.5 * PI;
    let c1 = radial(x1)?;
    let c2 = radial(x2)?;
    // c1 ≈ A cos φ, c2 ≈ −A sin φ with A = √(1+μ²) > 0
    let phi = (-c2).atan2(c1);
    let reference = x1.rem_euclid(2.0 * PI) - m.value().abs() * 0.5 * PI - 0.25 * PI;
    Ok(wrap_angle(phi - reference))
}

/// Cone parameters of the default verification grid.
pub const GRID_ALPHAS: [f64; 4] = [0.5, 0.8, 1.0, 1.2];
/// Flux values are `GRID_FLUX_STEP * i` for i in −8..=8.
pub const GRID_FLUX_STEP: f64 = 0.05;
pub const GRID_R0: [f64; 2] = [0.1, 1.0];
pub const GRID_N: (i64, i64) = (-5, 5);

/// One channel of the verification grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub params: SystemParams,
    pub n: i64,
    pub j: f64,
}

/// Extension channels with ξ < 1 over α × flux × spin × r0 × n, M = 1, in
/// that nesting order.
pub fn default_grid() -> Vec<GridPoint> {
    let mut out = Vec::new();
    for &alpha in &GRID_ALPHAS {
        for i in -8..=8 {
            let flux = GRID_FLUX_STEP * i as f64;
            for spin in [Spin::Up, Spin::Down] {
                for &r0 in &GRID_R0 {
                    let params = SystemParams::new(alpha, flux, spin, 1.0, r0)
                        .expect("grid parameters are valid");
                    for n in GRID_N.0..=GRID_N.1 {
                        let j = Channel::new(&params, n).j;
                        if classify(j) != Regime::ExtensionRequired {
                            continue;
                        }
                        if flux_ratio(j, alpha, flux).is_ok_and(|xi| xi < 1.0) {
                            out.push(GridPoint { params, n, j });
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteOutcome {
    pub route: String,
    pub class: RouteClass,
    pub bound: bool,
    pub energy: Option<f64>,
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDeviation {
    pub first: String,
    pub second: String,
    pub existence_agrees: bool,
    /// Relative energy deviation when both routes bind.
    pub relative: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasuredRatio {
    pub route: String,
    pub reference: String,
    /// E_route / E_reference when both bind.
    pub ratio: Option<f64>,
}

/// All bound-state routes evaluated on one channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub params: SystemParams,
    pub n: Option<i64>,
    pub j: f64,
    pub xi: f64,
    pub lambda: ExtensionParameter,
    pub outcomes: Vec<RouteOutcome>,
    /// Pairwise comparisons among identity-class routes.
    pub deviations: Vec<PairDeviation>,
    /// Measured-class routes against the first identity-class route.
    pub ratios: Vec<MeasuredRatio>,
}

impl ConsistencyReport {
    pub fn max_deviation(&self) -> f64 {
        self.deviations
            .iter()
            .filter_map(|d| d.relative)
            .fold(0.0, f64::max)
    }

    pub fn existence_agrees(&self) -> bool {
        self.deviations.iter().all(|d| d.existence_agrees)
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.existence_agrees() && self.max_deviation() < tolerance
    }

    pub fn energy(&self, route: &str) -> Option<f64> {
        self.outcomes
            .iter()
            .find(|o| o.route == route)
            .and_then(|o| o.energy)
    }
}

/// Report for channel n with the standard routes.
pub fn consistency_report(params: &SystemParams, n: i64) -> Result<ConsistencyReport> {
    let registry = RouteRegistry::default();
    let channel = Channel::new(params, n);
    let mut report = consistency_report_with(&registry, params, channel.j)?;
    report.n = Some(n);
    Ok(report)
}

/// Report for an explicit |j| with the routes of `registry`, in registry order.
pub fn consistency_report_with(
    registry: &RouteRegistry,
    params: &SystemParams,
    j: f64,
) -> Result<ConsistencyReport> {
    extension_order(j)?;
    let lambda = lambda_from_physics(params, j)?;
    let xi = flux_ratio(j, params.alpha, params.flux)?;
    let mut outcomes = Vec::new();
    for route in registry.iter() {
        let state = route.bound_state(params, j)?;
        outcomes.push(RouteOutcome {
            route: route.name().to_string(),
            class: route.class(),
            bound: state.is_some(),
            energy: state.map(|s| s.energy),
            kappa: state.map(|s| s.kappa),
        });
    }
    let identity: Vec<&RouteOutcome> = outcomes
        .iter()
        .filter(|o| o.class == RouteClass::Identity)
        .collect();
    let mut deviations = Vec::new();
    for (i, a) in identity.iter().enumerate() {
        for b in &identity[i + 1..] {
            deviations.push(PairDeviation {
                first: a.route.clone(),
                second: b.route.clone(),
                existence_agrees: a.bound == b.bound,
                relative: a.energy.zip(b.energy).map(|(x, y)| relative_deviation(x, y)),
            });
        }
    }
    let ratios = match identity.first() {
        Some(reference) => outcomes
            .iter()
            .filter(|o| o.class == RouteClass::Measured)
            .map(|o| MeasuredRatio {
                route: o.route.clone(),
                reference: reference.route.clone(),
                ratio: o.energy.zip(reference.energy).map(|(x, y)| x / y),
            })
            .collect(),
        None => Vec::new(),
    };
    Ok(ConsistencyReport {
        params: *params,
        n: None,
        j,
        xi,
        lambda,
        outcomes,
        deviations,
        ratios,
    })
}
