//! Subcommand implementations. Each returns the full rendered output so
//! nothing is written until the whole computation has succeeded.

use serde::Serialize;
use serde_json::{json, Value};

use conical_ab::model::{channels, classify, Channel, Regime, SystemParams};
use conical_ab::routes::RouteRegistry;
use conical_ab::scattering::{amplitude, scatter_channel, LambdaSource, AMPLITUDE_CONVENTION};
use conical_ab::specfun::Accuracy;
use conical_ab::spectrum::{energy_bg, energy_ks, lambda_from_physics, ExtensionParameter};
use conical_ab::verify::{
    consistency_report_with, default_grid, shell_bound_state, ConsistencyReport, GRID_ALPHAS, GRID_FLUX_STEP,
    GRID_N, GRID_R0,
};

use crate::config::{ScatterConfig, ShellConfig, SpectrumConfig, VerifyConfig, XsecConfig};
use crate::output::{fmt_f64, fmt_lambda, fmt_opt, to_json_string, to_value, Format, Row, Table};
use crate::CliError;

/// Rendered output and whether every check in it passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
    /// One line for standard error.
    pub summary: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            passed: true,
            summary: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SpectrumRow {
    pub n: i64,
    pub m: f64,
    pub j: f64,
    pub regime: &'static str,
    pub lambda: Option<ExtensionParameter>,
    pub e_ks: Option<f64>,
    pub e_bg: Option<f64>,
    pub kappa: Option<f64>,
    pub bound: bool,
}

impl Row for SpectrumRow {
    const COLUMNS: &'static [&'static str] = &["n", "m", "j", "regime", "lambda", "e_ks", "e_bg", "kappa", "bound"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            fmt_f64(self.m),
            fmt_f64(self.j),
            self.regime.to_string(),
            fmt_lambda(self.lambda),
            fmt_opt(self.e_ks),
            fmt_opt(self.e_bg),
            fmt_opt(self.kappa),
            self.bound.to_string(),
        ]
    }
}

pub fn spectrum(cfg: &SpectrumConfig) -> Result<Outcome, CliError> {
    let p = &cfg.physics.params;
    let mut rows = Vec::new();
    for (c, regime) in channels(p, cfg.physics.n_min, cfg.physics.n_max)? {
        let mut row = SpectrumRow {
            n: c.n,
            m: c.m.value(),
            j: c.j,
            regime: regime.as_str(),
            lambda: None,
            e_ks: None,
            e_bg: None,
            kappa: None,
            bound: false,
        };
        if regime == Regime::ExtensionRequired {
            let lambda = match cfg.lambda_override {
                Some(l) => l,
                None => lambda_from_physics(p, c.j)?,
            };
            let ks = energy_ks(p, c.j)?;
            let bg = energy_bg(lambda, c.j, p.mass)?;
            row.lambda = Some(lambda);
            row.e_ks = ks.map(|s| s.energy);
            row.e_bg = bg.map(|s| s.energy);
            row.kappa = bg.or(ks).map(|s| s.kappa);
            row.bound = bg.is_some();
        }
        rows.push(row);
    }
    let mut meta = vec![("lambda_source", Value::from(lambda_source_name(cfg.lambda_override)))];
    meta.push(("units", Value::from("hbar = 1; energies in units set by mass and r0")));
    let table = Table {
        command: "spectrum",
        params: Some(p),
        meta,
        rows: &rows,
    };
    Ok(Outcome::ok(table.render(cfg.out.format)?))
}

fn lambda_source_name(l: Option<ExtensionParameter>) -> String {
    match l {
        Some(l) => format!("override {}", fmt_lambda(Some(l))),
        None => "core physics".to_string(),
    }
}

fn lambda_source(l: Option<ExtensionParameter>) -> LambdaSource {
    l.map_or(LambdaSource::Physical, LambdaSource::Fixed)
}

#[derive(Debug, Serialize)]
pub struct ScatterRow {
    pub n: i64,
    pub j: f64,
    pub k: f64,
    pub delta_m: f64,
    pub mu: f64,
    pub theta: f64,
    pub delta: f64,
    pub re_s: f64,
    pub im_s: f64,
    pub abs_s: f64,
}

impl Row for ScatterRow {
    const COLUMNS: &'static [&'static str] =
        &["n", "j", "k", "delta_m", "mu", "theta", "delta", "re_s", "im_s", "abs_s"];

    fn cells(&self) -> Vec<String> {
        let mut v = vec![self.n.to_string()];
        v.extend(
            [
                self.j, self.k, self.delta_m, self.mu, self.theta, self.delta, self.re_s, self.im_s, self.abs_s,
            ]
            .map(fmt_f64),
        );
        v
    }
}

pub fn scatter(cfg: &ScatterConfig) -> Result<Outcome, CliError> {
    let p = &cfg.physics.params;
    let source = lambda_source(cfg.momentum.lambda_override);
    let mut rows = Vec::new();
    for (c, _) in channels(p, cfg.physics.n_min, cfg.physics.n_max)? {
        let lambda = source.resolve(p, &c)?;
        for &k in &cfg.momentum.ks {
            let r = scatter_channel(lambda, &c, p.flux, k)?;
            rows.push(ScatterRow {
                n: c.n,
                j: c.j,
                k,
                delta_m: r.delta_m,
                mu: r.mu,
                theta: r.theta,
                delta: r.delta,
                re_s: r.s_value.re,
                im_s: r.s_value.im,
                abs_s: r.s_value.norm(),
            });
        }
    }
    let meta = vec![
        ("lambda_source", Value::from(lambda_source_name(cfg.momentum.lambda_override))),
        ("k_units", Value::from("absolute (1/length)")),
    ];
    let table = Table {
        command: "scatter",
        params: Some(p),
        meta,
        rows: &rows,
    };
    Ok(Outcome::ok(table.render(cfg.out.format)?))
}

#[derive(Debug, Serialize)]
pub struct XsecRow {
    pub k: f64,
    pub angle: f64,
    pub re_f: f64,
    pub im_f: f64,
    pub dcs: f64,
}

impl Row for XsecRow {
    const COLUMNS: &'static [&'static str] = &["k", "angle", "re_f", "im_f", "dcs"];

    fn cells(&self) -> Vec<String> {
        [self.k, self.angle, self.re_f, self.im_f, self.dcs].map(fmt_f64).to_vec()
    }
}

pub fn xsec(cfg: &XsecConfig) -> Result<Outcome, CliError> {
    let p = &cfg.physics.params;
    let source = lambda_source(cfg.momentum.lambda_override);
    let mut rows = Vec::new();
    let mut tails = Vec::new();
    for &k in &cfg.momentum.ks {
        let prof = amplitude(p, &source, k, &cfg.angles, cfg.physics.n_min, cfg.physics.n_max)?;
        tails.push(prof.truncation_tail);
        for ((&angle, f), &dcs) in prof.angles.iter().zip(&prof.amplitude).zip(&prof.dcs) {
            rows.push(XsecRow {
                k,
                angle,
                re_f: f.re,
                im_f: f.im,
                dcs,
            });
        }
    }
    let tail_text = tails.iter().map(|t| fmt_f64(*t)).collect::<Vec<_>>().join(" ");
    let meta = vec![
        ("convention", Value::from(AMPLITUDE_CONVENTION)),
        ("n_min", Value::from(cfg.physics.n_min)),
        ("n_max", Value::from(cfg.physics.n_max)),
        (
            "truncation_tail",
            match cfg.out.format {
                Format::Csv => Value::from(tail_text),
                Format::Json => to_value(&tails)?,
            },
        ),
        ("lambda_source", Value::from(lambda_source_name(cfg.momentum.lambda_override))),
        ("k_units", Value::from("absolute (1/length)")),
    ];
    let table = Table {
        command: "xsec",
        params: Some(p),
        meta,
        rows: &rows,
    };
    Ok(Outcome::ok(table.render(cfg.out.format)?))
}

/// α = 0.8, flux = 0.2, |j| = 0.5, r0 = M = 1: every analytic route gives −24.5.
pub const GOLDEN: (f64, f64, f64, f64) = (0.8, 0.2, 0.5, -24.5);

#[derive(Debug, Serialize)]
struct CheckedReport {
    #[serde(flatten)]
    report: ConsistencyReport,
    passed: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyRow {
    pub alpha: f64,
    pub flux: f64,
    pub spin: i64,
    pub r0: f64,
    pub n: Option<i64>,
    pub j: f64,
    pub xi: f64,
    pub lambda: ExtensionParameter,
    pub e_ks: Option<f64>,
    pub e_bg: Option<f64>,
    pub e_pole: Option<f64>,
    pub e_shell: Option<f64>,
    pub max_deviation: f64,
    pub passed: bool,
}

impl Row for VerifyRow {
    const COLUMNS: &'static [&'static str] = &[
        "alpha", "flux", "spin", "r0", "n", "j", "xi", "lambda", "e_ks", "e_bg", "e_pole", "e_shell",
        "max_deviation", "passed",
    ];

    fn cells(&self) -> Vec<String> {
        vec![
            fmt_f64(self.alpha),
            fmt_f64(self.flux),
            self.spin.to_string(),
            fmt_f64(self.r0),
            self.n.map_or_else(|| "none".to_string(), |n| n.to_string()),
            fmt_f64(self.j),
            fmt_f64(self.xi),
            fmt_lambda(Some(self.lambda)),
            fmt_opt(self.e_ks),
            fmt_opt(self.e_bg),
            fmt_opt(self.e_pole),
            fmt_opt(self.e_shell),
            fmt_f64(self.max_deviation),
            self.passed.to_string(),
        ]
    }
}

impl VerifyRow {
    fn from_report(c: &CheckedReport) -> Self {
        let r = &c.report;
        Self {
            alpha: r.params.alpha,
            flux: r.params.flux,
            spin: r.params.spin.sign() as i64,
            r0: r.params.core_radius,
            n: r.n,
            j: r.j,
            xi: r.xi,
            lambda: r.lambda,
            e_ks: r.energy("ks"),
            e_bg: r.energy("bg"),
            e_pole: r.energy("pole"),
            e_shell: r.energy("shell"),
            max_deviation: r.max_deviation(),
            passed: c.passed,
        }
    }
}

pub fn verify(cfg: &VerifyConfig) -> Result<Outcome, CliError> {
    let mut registry = RouteRegistry::default();
    let names: Vec<&str> = cfg.routes.iter().map(String::as_str).collect();
    registry.retain(&names)?;
    let tol = cfg.tolerance;

    let (alpha, flux, j, expected) = GOLDEN;
    let golden_params = SystemParams::new(alpha, flux, conical_ab::model::Spin::Up, 1.0, 1.0)?;
    let golden = consistency_report_with(&registry, &golden_params, j)?;
    let golden_energy_ok = golden
        .outcomes
        .iter()
        .filter(|o| o.class == conical_ab::routes::RouteClass::Identity)
        .all(|o| o.energy.is_some_and(|e| (e - expected).abs() <= tol * expected.abs()));
    let golden = CheckedReport {
        passed: golden.passes(tol) && golden_energy_ok,
        report: golden,
    };

    let mut reports = Vec::new();
    for point in default_grid() {
        let mut report = consistency_report_with(&registry, &point.params, point.j)?;
        report.n = Some(point.n);
        reports.push(CheckedReport {
            passed: report.passes(tol),
            report,
        });
    }

    let failures = reports.iter().filter(|r| !r.passed).count() + usize::from(!golden.passed);
    let max_dev = reports
        .iter()
        .chain(std::iter::once(&golden))
        .map(|r| r.report.max_deviation())
        .fold(0.0, f64::max);
    let checks = reports.len() + 1;
    let passed = failures == 0;
    let summary = format!(
        "verify: {checks} checks, {failures} failures, max identity deviation {} (tolerance {}): {}",
        fmt_f64(max_dev),
        fmt_f64(tol),
        if passed { "PASS" } else { "FAIL" }
    );

    let text = match cfg.out.format {
        Format::Json => {
            let doc = json!({
                "command": "verify",
                "tolerance": tol,
                "routes": registry.names(),
                "grid": {
                    "alphas": GRID_ALPHAS,
                    "flux_step": GRID_FLUX_STEP,
                    "flux_multiples": [-8, 8],
                    "spins": [1, -1],
                    "r0": GRID_R0,
                    "n": [GRID_N.0, GRID_N.1],
                    "mass": 1.0,
                    "selection": "0 < |j| < 1 and xi < 1",
                    "channels": reports.len(),
                },
                "golden": {
                    "expected_energy": expected,
                    "report": to_value(&golden)?,
                },
                "reports": to_value(&reports)?,
                "summary": {
                    "checks": checks,
                    "failures": failures,
                    "max_deviation": max_dev,
                    "passed": passed,
                },
            });
            to_json_string(&doc)?
        }
        Format::Csv => {
            let rows: Vec<VerifyRow> = std::iter::once(&golden)
                .chain(reports.iter())
                .map(VerifyRow::from_report)
                .collect();
            let meta = vec![
                ("tolerance", Value::from(fmt_f64(tol))),
                ("routes", Value::from(registry.names().join(" "))),
                ("first_row", Value::from("golden case, n = none")),
            ];
            Table {
                command: "verify",
                params: None,
                meta,
                rows: &rows,
            }
            .render(Format::Csv)?
        }
    };
    Ok(Outcome {
        text,
        passed,
        summary: Some(summary),
    })
}

#[derive(Debug, Serialize)]
pub struct ShellRow {
    pub n: i64,
    pub j: f64,
    pub r0: f64,
    pub kappa: Option<f64>,
    pub energy: Option<f64>,
    pub product: Option<f64>,
    pub e_ks: Option<f64>,
    pub ratio: Option<f64>,
}

impl Row for ShellRow {
    const COLUMNS: &'static [&'static str] = &["n", "j", "r0", "kappa", "energy", "product", "e_ks", "ratio"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            fmt_f64(self.j),
            fmt_f64(self.r0),
            fmt_opt(self.kappa),
            fmt_opt(self.energy),
            fmt_opt(self.product),
            fmt_opt(self.e_ks),
            fmt_opt(self.ratio),
        ]
    }
}

pub fn shell(cfg: &ShellConfig) -> Result<Outcome, CliError> {
    let base = &cfg.physics.params;
    let acc = Accuracy::default();
    let mut rows = Vec::new();
    for n in cfg.physics.n_min..=cfg.physics.n_max {
        for &r0 in &cfg.radii {
            let p = base.with_core_radius(r0)?;
            let c = Channel::new(&p, n);
            let s = shell_bound_state(&p, c.j, &acc)?;
            let e_ks = match classify(c.j) {
                Regime::ExtensionRequired => energy_ks(&p, c.j)?.map(|b| b.energy),
                _ => None,
            };
            let energy = s.map(|s| s.energy);
            rows.push(ShellRow {
                n,
                j: c.j,
                r0,
                kappa: s.map(|s| s.kappa),
                energy,
                product: s.map(|s| s.dimensionless_product),
                e_ks,
                ratio: energy.zip(e_ks).map(|(a, b)| a / b),
            });
        }
    }
    let meta = vec![
        ("jump", Value::from("f'(r0+) - f'(r0-) = (spin*flux/alpha) f(r0)/r0")),
        ("ratio", Value::from("E_shell/E_ks, measured and not asserted")),
    ];
    let table = Table {
        command: "shell",
        params: Some(base),
        meta,
        rows: &rows,
    };
    Ok(Outcome::ok(table.render(cfg.out.format)?))
}
