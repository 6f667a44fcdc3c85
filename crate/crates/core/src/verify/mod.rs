//! Sampled verification runs and their JSON manifests.

mod checks;
mod sampling;

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::contact::SYMPLECTISATION_SIGN;
use crate::expr::Expr;
use crate::jets::Point;
use crate::scenarios::ScenarioSpec;
use crate::Error;

pub use checks::{catalogue, rel, user_function_checks, CheckDef, Ctx};
pub use sampling::{halton_points, SampleBox};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Core,
    Invariance,
    Viscous,
    Current,
    Algebra,
    Contact,
    Symplectisation,
    Residuals,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Core,
        Suite::Invariance,
        Suite::Viscous,
        Suite::Current,
        Suite::Algebra,
        Suite::Contact,
        Suite::Symplectisation,
        Suite::Residuals,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Invariance => "invariance",
            Suite::Viscous => "viscous",
            Suite::Current => "current",
            Suite::Algebra => "algebra",
            Suite::Contact => "contact",
            Suite::Symplectisation => "symplectisation",
            Suite::Residuals => "residuals",
        }
    }

    /// Parses one suite name; `all` expands to every suite.
    pub fn parse_list(name: &str) -> Result<Vec<Suite>, String> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![name.parse()?])
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Degenerate,
    ScopedOut,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub spec: ScenarioSpec,
    pub jet_order: usize,
    pub seed: u64,
    pub sample_box: SampleBox,
    pub n_points: usize,
    pub suites: Vec<Suite>,
    /// Replaces every graded tolerance when set.
    pub tol_override: Option<f64>,
    /// Optional test functions checked alongside the built-in ones.
    pub user_f: Option<Expr>,
    pub user_g: Option<Expr>,
}

impl VerifyConfig {
    pub fn new(spec: ScenarioSpec) -> Self {
        let sample_box = SampleBox(spec.default_box());
        VerifyConfig {
            spec,
            jet_order: 3,
            seed: 42,
            sample_box,
            n_points: 1000,
            suites: Suite::ALL.to_vec(),
            tol_override: None,
            user_f: None,
            user_g: None,
        }
    }

    pub fn with_suites(mut self, suites: &[Suite]) -> Self {
        self.suites = suites.to_vec();
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub suite: Suite,
    pub description: String,
    pub identity_ref: &'static str,
    pub n_samples: usize,
    pub n_excluded_degenerate: usize,
    pub n_scoped_out: usize,
    pub n_errors: usize,
    pub max_abs_residual: Option<f64>,
    pub mean_abs_residual: Option<f64>,
    pub argmax_point: Option<Point>,
    pub tolerance: Option<f64>,
    pub status: Status,
    /// First error message, if any evaluation failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub symplectisation_sign: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub scenario: String,
    pub params: BTreeMap<String, f64>,
    pub gauge: String,
    pub jet_order: usize,
    pub seed: u64,
    #[serde(rename = "box")]
    pub sample_box: [[f64; 2]; 4],
    pub n_points: usize,
    pub suites: Vec<Suite>,
    pub conventions: Conventions,
    pub checks: Vec<CheckReport>,
}

impl RunManifest {
    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn any_degenerate(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Degenerate)
    }

    pub fn check(&self, id: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// 0 on pass, 1 on any failure, 3 under `strict` when nothing failed but
    /// some check had every sample excluded as degenerate.
    pub fn exit_code(&self, strict: bool) -> i32 {
        if self.any_failed() {
            1
        } else if strict && self.any_degenerate() {
            3
        } else {
            0
        }
    }

    pub fn write_json<W: io::Write>(&self, out: W) -> io::Result<()> {
        let value = serde_json::to_value(self).map_err(io::Error::other)?;
        let mut ser = serde_json::Serializer::with_formatter(out, FixedFloat);
        value.serialize(&mut ser).map_err(io::Error::other)
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        self.write_json(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }
}

/// Compact JSON with floats printed to 17 significant digits.
struct FixedFloat;

impl serde_json::ser::Formatter for FixedFloat {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }
}

enum Outcome {
    Value(f64),
    Degenerate,
    Scoped,
    Failed(String),
}

fn outcome(r: crate::Result<f64>) -> Outcome {
    match r {
        Ok(v) if v.is_nan() => Outcome::Failed("residual is NaN".into()),
        Ok(v) => Outcome::Value(v.abs()),
        Err(Error::Degenerate { .. }) => Outcome::Degenerate,
        Err(Error::OutOfScope { .. } | Error::NotApplicable(_)) => Outcome::Scoped,
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

fn summarise(def: &CheckDef, tolerance: Option<f64>, points: &[Point], outcomes: Vec<Outcome>) -> CheckReport {
    let mut report = CheckReport {
        id: def.id.clone(),
        suite: def.suite,
        description: def.description.clone(),
        identity_ref: def.identity_ref,
        n_samples: outcomes.len(),
        n_excluded_degenerate: 0,
        n_scoped_out: 0,
        n_errors: 0,
        max_abs_residual: None,
        mean_abs_residual: None,
        argmax_point: None,
        tolerance,
        status: Status::Pass,
        first_error: None,
    };
    let mut sum = 0.0;
    let mut count = 0usize;
    for (o, p) in outcomes.into_iter().zip(points) {
        match o {
            Outcome::Value(v) => {
                sum += v;
                count += 1;
                if report.max_abs_residual.is_none_or(|m| v > m) {
                    report.max_abs_residual = Some(v);
                    report.argmax_point = Some(*p);
                }
            }
            Outcome::Degenerate => report.n_excluded_degenerate += 1,
            Outcome::Scoped => report.n_scoped_out += 1,
            Outcome::Failed(msg) => {
                report.n_errors += 1;
                report.first_error.get_or_insert(msg);
            }
        }
    }
    if count > 0 {
        report.mean_abs_residual = Some(sum / count as f64);
    }
    report.status = if report.n_errors > 0 {
        Status::Fail
    } else if report.n_scoped_out == report.n_samples {
        Status::ScopedOut
    } else if count == 0 {
        Status::Degenerate
    } else {
        match (tolerance, report.max_abs_residual) {
            (Some(tol), Some(m)) if m > tol => Status::Fail,
            _ => Status::Pass,
        }
    };
    report
}

fn scoped_report(def: &CheckDef, tolerance: Option<f64>, n: usize) -> CheckReport {
    summarise(def, tolerance, &[], Vec::new()).with_scoped(n)
}

impl CheckReport {
    fn with_scoped(mut self, n: usize) -> Self {
        self.n_samples = n;
        self.n_scoped_out = n;
        self.status = Status::ScopedOut;
        self
    }
}

/// Runs every check of the selected suites over the sample set.
pub fn run(cfg: &VerifyConfig) -> RunManifest {
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let defs: Vec<CheckDef> = catalogue()
        .into_iter()
        .chain(user_function_checks(cfg.user_f.as_ref(), cfg.user_g.as_ref()))
        .filter(|d| suites.contains(&d.suite))
        .collect();
    let points = halton_points(&cfg.sample_box, cfg.n_points, cfg.seed);

    // One row per sample, one column per check.
    let rows: Vec<Vec<Option<Outcome>>> = points
        .par_iter()
        .map(|&p| {
            let sample = match cfg.spec.evaluate(p, cfg.jet_order) {
                Ok(s) => s,
                Err(e) => {
                    let msg = format!("field evaluation failed: {e}");
                    return defs.iter().map(|_| Some(Outcome::Failed(msg.clone()))).collect();
                }
            };
            let ctx = Ctx::new(&cfg.spec, sample);
            defs.iter()
                .map(|d| (cfg.jet_order >= d.min_order).then(|| outcome((d.eval)(&ctx))))
                .collect()
        })
        .collect();

    let mut columns: Vec<Vec<Outcome>> = defs.iter().map(|_| Vec::with_capacity(points.len())).collect();
    for row in rows {
        for (col, o) in columns.iter_mut().zip(row) {
            if let Some(o) = o {
                col.push(o);
            }
        }
    }

    let checks = defs
        .iter()
        .zip(columns)
        .map(|(d, col)| {
            let tol = d.tolerance.map(|t| cfg.tol_override.unwrap_or(t));
            if cfg.jet_order < d.min_order {
                scoped_report(d, tol, points.len())
            } else {
                summarise(d, tol, &points, col)
            }
        })
        .collect();

    RunManifest {
        schema_version: SCHEMA_VERSION,
        scenario: cfg.spec.name().to_string(),
        params: cfg.spec.params().clone(),
        gauge: cfg.spec.gauge().to_string(),
        jet_order: cfg.jet_order,
        seed: cfg.seed,
        sample_box: cfg.sample_box.0.map(|(a, b)| [a, b]),
        n_points: cfg.n_points,
        suites,
        conventions: Conventions {
            symplectisation_sign: SYMPLECTISATION_SIGN,
        },
        checks,
    }
}
