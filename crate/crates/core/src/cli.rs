//! Command-line front end: `scenarios`, `verify` and `trace`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::expr::{self, Expr};
use crate::jets::Point;
use crate::scenarios::{self, ScenarioSpec};
use crate::trace::{self, CurveKind, TraceError};
use crate::verify::{self, SampleBox, Status, Suite, VerifyConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fluidsymp", version, about = "Jet-based checks of the geometry of exact fluid flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the built-in scenarios.
    Scenarios {
        #[arg(long)]
        json: bool,
    },
    /// Sample a scenario and run the identity suites.
    Verify(VerifyArgs),
    /// Integrate a curve through a scenario and write CSV.
    Trace(TraceArgs),
}

#[derive(Debug, Args)]
struct FlowArgs {
    /// Built-in scenario name, or `custom` with --vx/--vy/--vz.
    #[arg(long, default_value = "accelerating_vortex")]
    scenario: String,
    /// Parameter override `name=value`; the value may be a constant expression.
    #[arg(long = "param", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    params: Vec<String>,
    /// Time-only gauge ψ(t) added to the Bernoulli function.
    #[arg(long, allow_hyphen_values = true)]
    gauge: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    vx: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    vy: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    vz: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pressure: Option<String>,
    /// Viscosity for custom flows.
    #[arg(long)]
    nu: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    flow: FlowArgs,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=4))]
    jet_order: u8,
    #[arg(long, default_value_t = 1000)]
    points: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// `tmin:tmax,xmin:xmax,ymin:ymax,zmin:zmax`.
    #[arg(long = "box", allow_hyphen_values = true)]
    sample_box: Option<SampleBox>,
    /// Replace every graded tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Manifest path; defaults to `manifest.json`.
    #[arg(long, default_value = "manifest.json")]
    out: PathBuf,
    /// Print the manifest to stdout instead of a summary table.
    #[arg(long)]
    json: bool,
    /// Suite name, repeatable; `all` selects every suite.
    #[arg(long = "suite", default_value = "all")]
    suites: Vec<String>,
    #[arg(long)]
    strict_degenerate: bool,
    /// Extra test function for the Hamiltonian checks.
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    /// Second test function; with --f adds a Poisson bracket check.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[command(flatten)]
    flow: FlowArgs,
    #[arg(long, default_value = "trajectory")]
    kind: CurveKind,
    /// Start point `t,x,y,z`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    start: Point,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long)]
    slice_time: Option<f64>,
    /// Append α, H and the Liouville coefficient per row.
    #[arg(long)]
    extras: bool,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|_| format!("bad coordinate `{c}`")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected t,x,y,z, got {} values", v.len()))
}

fn constant(text: &str) -> Result<f64, String> {
    let e = expr::parse(text).map_err(|e| format!("`{text}`: {e}"))?;
    if e.has_variables() {
        return Err(format!("`{text}` must not depend on t, x, y, z"));
    }
    e.eval_f64([0.0; 4]).map_err(|e| format!("`{text}`: {e}"))
}

fn parse_expr(text: &str) -> Result<Expr, String> {
    expr::parse(text).map_err(|e| format!("`{text}`: {e}"))
}

fn build_spec(a: &FlowArgs) -> Result<ScenarioSpec, String> {
    let custom_flags = [&a.vx, &a.vy, &a.vz, &a.pressure].iter().any(|f| f.is_some()) || a.nu.is_some();
    let mut spec = if a.scenario == "custom" {
        let comp = |f: &Option<String>, name: &str| {
            f.as_deref()
                .ok_or_else(|| format!("custom scenario needs --{name}"))
                .and_then(parse_expr)
        };
        let velocity = [comp(&a.vx, "vx")?, comp(&a.vy, "vy")?, comp(&a.vz, "vz")?];
        let pressure = a.pressure.as_deref().map(parse_expr).transpose()?.unwrap_or(Expr::Num(0.0));
        ScenarioSpec::custom(velocity, pressure, a.nu.unwrap_or(0.0)).map_err(|e| e.to_string())?
    } else {
        if custom_flags {
            return Err("--vx/--vy/--vz/--pressure/--nu need --scenario custom".into());
        }
        ScenarioSpec::builtin(&a.scenario).map_err(|e| e.to_string())?
    };
    for kv in &a.params {
        let (k, v) = kv.split_once('=').ok_or_else(|| format!("--param `{kv}` is not name=value"))?;
        spec = spec.with_param(k.trim(), constant(v)?).map_err(|e| e.to_string())?;
    }
    if let Some(g) = &a.gauge {
        spec = spec.with_gauge(parse_expr(g)?).map_err(|e| e.to_string())?;
    }
    Ok(spec)
}

fn usage(err: &mut dyn Write, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    EXIT_USAGE
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match cli.command {
        Command::Scenarios { json } => cmd_scenarios(json, out),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Trace(a) => cmd_trace(a, out, err),
    }
}

fn cmd_scenarios(json: bool, out: &mut dyn Write) -> i32 {
    let cat = scenarios::catalogue();
    if json {
        let _ = serde_json::to_writer_pretty(&mut *out, &cat);
        let _ = writeln!(out);
        return EXIT_PASS;
    }
    for e in &cat {
        let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let regime = serde_json::to_value(e.regime).ok().and_then(|v| v.as_str().map(String::from));
        let _ = writeln!(
            out,
            "{:<22} {:<14} [{}]  {}\n{:<22} {}",
            e.name,
            regime.unwrap_or_default(),
            params.join(", "),
            e.expected_degeneracies,
            "",
            e.description
        );
    }
    EXIT_PASS
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let spec = match build_spec(&a.flow) {
        Ok(s) => s,
        Err(m) => return usage(err, m),
    };
    let mut suites = Vec::new();
    for name in &a.suites {
        match Suite::parse_list(name) {
            Ok(s) => suites.extend(s),
            Err(m) => return usage(err, m),
        }
    }
    if let Some(t) = a.tol {
        if !(t >= 0.0 && t.is_finite()) {
            return usage(err, "--tol must be a non-negative number");
        }
    }
    if a.points == 0 {
        return usage(err, "--points must be positive");
    }
    let parsed = |s: &Option<String>| s.as_deref().map(parse_expr).transpose();
    let (user_f, user_g) = match (parsed(&a.f), parsed(&a.g)) {
        (Ok(f), Ok(g)) => (f, g),
        (Err(m), _) | (_, Err(m)) => return usage(err, m),
    };
    let mut cfg = VerifyConfig::new(spec).with_suites(&suites);
    cfg.jet_order = a.jet_order as usize;
    cfg.seed = a.seed;
    cfg.n_points = a.points;
    cfg.tol_override = a.tol;
    cfg.user_f = user_f;
    cfg.user_g = user_g;
    if let Some(b) = a.sample_box {
        cfg.sample_box = b;
    }

    let manifest = verify::run(&cfg);
    let write = File::create(&a.out).and_then(|f| {
        let mut w = BufWriter::new(f);
        manifest.write_json(&mut w)?;
        writeln!(w)?;
        w.flush()
    });
    if let Err(e) = write {
        let _ = writeln!(err, "error: cannot write {}: {e}", a.out.display());
        return EXIT_FAIL;
    }
    if a.json {
        let _ = writeln!(out, "{}", manifest.to_json());
    } else {
        for c in &manifest.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Degenerate => "degenerate",
                Status::ScopedOut => "scoped-out",
            };
            let max = c.max_abs_residual.map_or("-".to_string(), |m| format!("{m:.3e}"));
            let tol = c.tolerance.map_or("info".to_string(), |t| format!("{t:.0e}"));
            let _ = writeln!(out, "{status:<10} {:<42} max {max:<10} tol {tol}", c.id);
            if let Some(e) = &c.first_error {
                let _ = writeln!(out, "           {e}");
            }
        }
    }
    manifest.exit_code(a.strict_degenerate)
}

fn cmd_trace(a: TraceArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let spec = match build_spec(&a.flow) {
        Ok(s) => s,
        Err(m) => return usage(err, m),
    };
    let (curve, code) = match trace::integrate(&spec, a.kind, a.start, a.dt, a.steps, a.slice_time) {
        Ok(c) => (c, EXIT_PASS),
        Err(TraceError::Aborted { partial, at, reason }) => {
            let _ = writeln!(err, "trace aborted at {at:?}: {reason}");
            (*partial, EXIT_FAIL)
        }
        Err(e) => return usage(err, e),
    };
    let written = match &a.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            trace::write_csv(&curve, &spec, a.extras, &mut w)?;
            w.flush()
        }),
        None => trace::write_csv(&curve, &spec, a.extras, &mut *out),
    };
    match written {
        Ok(()) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock())
}
