//! Integral curves of the flow fields by classical fixed-step Runge-Kutta.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::exterior::{linalg, KForm};
use crate::jets::{Point, MIN_SEED_ORDER};
use crate::scenarios::{FieldSample, ScenarioSpec};
use crate::symplectic;
use crate::vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// `dx/dt = v(t, x)`.
    Trajectory,
    /// `dx/dτ = v(c, x)`.
    Streamline,
    /// `dx/dτ = w(c, x)`.
    Vortexline,
    /// `dx/dτ = w/(2H)` at `t = c`.
    ReebSlice,
    /// The spacetime helicity current `J`.
    Current,
}

impl CurveKind {
    pub const ALL: [CurveKind; 5] = [
        CurveKind::Trajectory,
        CurveKind::Streamline,
        CurveKind::Vortexline,
        CurveKind::ReebSlice,
        CurveKind::Current,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Trajectory => "trajectory",
            CurveKind::Streamline => "streamline",
            CurveKind::Vortexline => "vortexline",
            CurveKind::ReebSlice => "reeb-slice",
            CurveKind::Current => "current",
        }
    }

    /// Whether the field is evaluated on a frozen time slice.
    pub fn needs_slice_time(self) -> bool {
        matches!(self, CurveKind::Streamline | CurveKind::Vortexline | CurveKind::ReebSlice)
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CurveKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().replace('-', "_") == s)
            .ok_or_else(|| format!("unknown curve kind `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    /// `(parameter, point)` with strictly increasing parameter.
    pub samples: Vec<(f64, Point)>,
    pub kind: CurveKind,
    pub step: f64,
    pub scenario: String,
}

impl Curve {
    pub fn last_point(&self) -> Point {
        self.samples.last().expect("curves hold the start point").1
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TraceError {
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("at least one step is required")]
    NoSteps,
    #[error("curve kind `{0}` needs a slice time")]
    MissingSliceTime(CurveKind),
    #[error("trace aborted at {at:?} after {} samples: {reason}", partial.samples.len())]
    Aborted {
        partial: Box<Curve>,
        at: Point,
        reason: String,
    },
}

/// Right-hand side of the curve ODE on spacetime; `Err` carries the abort reason.
fn field(spec: &ScenarioSpec, kind: CurveKind, p: Point) -> Result<[f64; 4], String> {
    match kind {
        CurveKind::Trajectory => {
            let v = spec.velocity_at(p).map_err(|e| e.to_string())?;
            Ok([1.0, v[0], v[1], v[2]])
        }
        CurveKind::Streamline => {
            let v = spec.velocity_at(p).map_err(|e| e.to_string())?;
            Ok([0.0, v[0], v[1], v[2]])
        }
        CurveKind::Vortexline | CurveKind::ReebSlice | CurveKind::Current => {
            let s = FieldSample::new(spec, p, MIN_SEED_ORDER).map_err(|e| e.to_string())?;
            match kind {
                CurveKind::Vortexline => {
                    let w = vec3::values(&s.w);
                    Ok([0.0, w[0], w[1], w[2]])
                }
                CurveKind::ReebSlice => {
                    if s.helicity_degenerate() {
                        return Err(format!("helicity density vanishes (H = {:e})", s.helicity.value()));
                    }
                    let two_h = 2.0 * s.helicity.value();
                    let w = vec3::values(&s.w);
                    Ok([0.0, w[0] / two_h, w[1] / two_h, w[2] / two_h])
                }
                _ => {
                    if s.d_liouville_degenerate() {
                        return Err(format!(
                            "Ω_e degenerate (w·∇α = {:e})",
                            s.liouville_density.value()
                        ));
                    }
                    let data = symplectic::omega_e(&s);
                    let omega: KForm<f64> = data.omega.map(|c| c.value());
                    let theta: KForm<f64> = data.theta.map(|c| c.value());
                    let (j, _) = linalg::solve_contraction(&omega, &theta, 1e-13).map_err(|e| e.to_string())?;
                    Ok(j.0)
                }
            }
        }
    }
}

fn axpy(p: Point, h: f64, k: [f64; 4]) -> Point {
    std::array::from_fn(|i| p[i] + h * k[i])
}

fn rk4_step(spec: &ScenarioSpec, kind: CurveKind, p: Point, h: f64) -> Result<Point, String> {
    let k1 = field(spec, kind, p)?;
    let k2 = field(spec, kind, axpy(p, 0.5 * h, k1))?;
    let k3 = field(spec, kind, axpy(p, 0.5 * h, k2))?;
    let k4 = field(spec, kind, axpy(p, h, k3))?;
    let next: Point = std::array::from_fn(|i| p[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    if next.iter().all(|c| c.is_finite()) {
        Ok(next)
    } else {
        Err("non-finite state".into())
    }
}

/// Integrates `steps` RK4 steps of size `h` from `start`.
///
/// Slice kinds replace the start time by `slice_time`. Trajectories use `t` as
/// the parameter; every other kind uses arc parameter `τ` from 0.
pub fn integrate(
    spec: &ScenarioSpec,
    kind: CurveKind,
    start: Point,
    h: f64,
    steps: usize,
    slice_time: Option<f64>,
) -> Result<Curve, TraceError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(TraceError::InvalidStep(h));
    }
    if steps == 0 {
        return Err(TraceError::NoSteps);
    }
    let mut p = start;
    if kind.needs_slice_time() {
        p[0] = slice_time.ok_or(TraceError::MissingSliceTime(kind))?;
    }
    let param0 = if kind == CurveKind::Trajectory { p[0] } else { 0.0 };
    let mut curve = Curve {
        samples: Vec::with_capacity(steps + 1),
        kind,
        step: h,
        scenario: spec.name().to_string(),
    };
    if let Err(reason) = field(spec, kind, p) {
        return Err(TraceError::Aborted {
            partial: Box::new(curve),
            at: p,
            reason,
        });
    }
    curve.samples.push((param0, p));
    for n in 1..=steps {
        match rk4_step(spec, kind, p, h) {
            Ok(next) => {
                p = next;
                curve.samples.push((param0 + n as f64 * h, p));
            }
            Err(reason) => {
                return Err(TraceError::Aborted {
                    partial: Box::new(curve),
                    at: p,
                    reason,
                })
            }
        }
    }
    Ok(curve)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Stitched frozen-time streamlines, parameterised by `t`.
    pub curve: Curve,
    /// The true trajectory on the same time grid.
    pub reference: Curve,
    /// Euclidean distance of the spatial end points.
    pub terminal_error: f64,
}

/// Approximates a trajectory by `slabs` frozen-time streamlines of duration
/// `slab`, each re-frozen at its start time. The inner step is `slab / n` with
/// `n = ceil(slab / h)`.
pub fn reconstruct_trajectory(
    spec: &ScenarioSpec,
    start: Point,
    slab: f64,
    slabs: usize,
    h: f64,
) -> Result<Reconstruction, TraceError> {
    if !(slab > 0.0 && slab.is_finite()) {
        return Err(TraceError::InvalidStep(slab));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(TraceError::InvalidStep(h));
    }
    if slabs == 0 {
        return Err(TraceError::NoSteps);
    }
    let inner = (slab / h).ceil().max(1.0) as usize;
    let h_eff = slab / inner as f64;
    let mut curve = Curve {
        samples: vec![(start[0], start)],
        kind: CurveKind::Trajectory,
        step: h_eff,
        scenario: spec.name().to_string(),
    };
    let mut p = start;
    for k in 0..slabs {
        let t0 = start[0] + k as f64 * slab;
        let piece = integrate(spec, CurveKind::Streamline, p, h_eff, inner, Some(t0))?;
        for (n, (_, q)) in piece.samples.iter().enumerate().skip(1) {
            let t = t0 + n as f64 * h_eff;
            curve.samples.push((t, [t, q[1], q[2], q[3]]));
        }
        p = curve.last_point();
    }
    let reference = integrate(spec, CurveKind::Trajectory, start, h_eff, inner * slabs, None)?;
    let a = curve.last_point();
    let b = reference.last_point();
    let terminal_error = vec3::norm([a[1] - b[1], a[2] - b[2], a[3] - b[3]]);
    Ok(Reconstruction {
        curve,
        reference,
        terminal_error,
    })
}

/// Writes `param,t,x,y,z[,alpha,H,liouville]` with a header row.
pub fn write_csv<W: Write>(curve: &Curve, spec: &ScenarioSpec, extras: bool, mut out: W) -> io::Result<()> {
    write!(out, "param,t,x,y,z")?;
    if extras {
        write!(out, ",alpha,H,liouville")?;
    }
    writeln!(out)?;
    for (param, p) in &curve.samples {
        write!(out, "{param},{},{},{},{}", p[0], p[1], p[2], p[3])?;
        if extras {
            let s = FieldSample::new(spec, *p, MIN_SEED_ORDER).map_err(io::Error::other)?;
            write!(
                out,
                ",{},{},{}",
                s.alpha.value(),
                s.helicity.value(),
                -s.liouville_density.value()
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}
