//! Python bindings: scenarios, field samples, verification runs and traces.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use fluidsymp::expr::{self, Expr};
use fluidsymp::scenarios::{self, FieldSample, ScenarioSpec};
use fluidsymp::trace::{self, CurveKind, TraceError};
use fluidsymp::verify::{self, RunManifest, SampleBox, Suite, VerifyConfig};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse(text: &str) -> PyResult<Expr> {
    expr::parse(text).map_err(value_err)
}

/// A built-in or custom flow.
#[pyclass(name = "Scenario", module = "fluidsymp", frozen)]
struct PyScenario {
    spec: ScenarioSpec,
}

#[pymethods]
impl PyScenario {
    /// Built-in scenario with optional parameter overrides.
    #[new]
    #[pyo3(signature = (name, params = None, gauge = None))]
    fn new(name: &str, params: Option<BTreeMap<String, f64>>, gauge: Option<&str>) -> PyResult<Self> {
        let mut spec = ScenarioSpec::builtin(name).map_err(value_err)?;
        for (k, v) in params.unwrap_or_default() {
            spec = spec.with_param(&k, v).map_err(value_err)?;
        }
        if let Some(g) = gauge {
            spec = spec.with_gauge(parse(g)?).map_err(value_err)?;
        }
        Ok(PyScenario { spec })
    }

    /// Flow given by velocity and pressure expressions in `t, x, y, z`.
    #[staticmethod]
    #[pyo3(signature = (vx, vy, vz, pressure = "0", nu = 0.0))]
    fn custom(vx: &str, vy: &str, vz: &str, pressure: &str, nu: f64) -> PyResult<Self> {
        let spec = ScenarioSpec::custom([parse(vx)?, parse(vy)?, parse(vz)?], parse(pressure)?, nu).map_err(value_err)?;
        Ok(PyScenario { spec })
    }

    #[getter]
    fn name(&self) -> String {
        self.spec.name().to_string()
    }

    #[getter]
    fn params(&self) -> BTreeMap<String, f64> {
        self.spec.params().clone()
    }

    #[getter]
    fn nu(&self) -> f64 {
        self.spec.nu()
    }

    #[getter]
    fn default_box(&self) -> Vec<(f64, f64)> {
        self.spec.default_box().to_vec()
    }

    /// Jet sample at `(t, x, y, z)`.
    #[pyo3(signature = (point, order = 3))]
    fn sample(&self, point: [f64; 4], order: usize) -> PyResult<PySample> {
        let s = self.spec.evaluate(point, order).map_err(value_err)?;
        Ok(PySample { s })
    }

    fn velocity(&self, point: [f64; 4]) -> PyResult<[f64; 3]> {
        self.spec.velocity_at(point).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("Scenario({:?}, params={:?})", self.spec.name(), self.spec.params())
    }
}

/// Field values and derived densities at one spacetime point.
#[pyclass(name = "Sample", module = "fluidsymp", frozen)]
struct PySample {
    s: FieldSample,
}

fn vals(v: &fluidsymp::vec3::Vec3) -> [f64; 3] {
    fluidsymp::vec3::values(v)
}

#[pymethods]
impl PySample {
    #[getter]
    fn point(&self) -> [f64; 4] {
        self.s.point
    }
    #[getter]
    fn velocity(&self) -> [f64; 3] {
        vals(&self.s.v)
    }
    #[getter]
    fn vorticity(&self) -> [f64; 3] {
        vals(&self.s.w)
    }
    #[getter]
    fn pressure(&self) -> f64 {
        self.s.p.value()
    }
    #[getter]
    fn bernoulli(&self) -> f64 {
        self.s.alpha.value()
    }
    #[getter]
    fn helicity(&self) -> f64 {
        self.s.helicity.value()
    }
    /// `-w·∇α`, the Liouville coefficient of the ideal form.
    #[getter]
    fn liouville(&self) -> f64 {
        -self.s.liouville_density.value()
    }
    /// Largest component of the momentum equation residual.
    #[getter]
    fn momentum_residual(&self) -> f64 {
        self.s.ns_residual().norm
    }
}

/// Result of a verification run.
#[pyclass(name = "Manifest", module = "fluidsymp", frozen)]
struct PyManifest {
    m: RunManifest,
}

#[pymethods]
impl PyManifest {
    fn to_json(&self) -> String {
        self.m.to_json()
    }

    #[pyo3(signature = (strict = false))]
    fn exit_code(&self, strict: bool) -> i32 {
        self.m.exit_code(strict)
    }

    /// Check ids in run order.
    fn ids(&self) -> Vec<String> {
        self.m.checks.iter().map(|c| c.id.clone()).collect()
    }

    /// `(status, max_abs_residual, tolerance)` for one check.
    fn check(&self, id: &str) -> PyResult<(String, Option<f64>, Option<f64>)> {
        let c = self.m.check(id).ok_or_else(|| PyKeyError::new_err(id.to_string()))?;
        let status = serde_json::to_value(c.status)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        Ok((status, c.max_abs_residual, c.tolerance))
    }
}

/// Runs the identity suites over `points` quasi-random samples.
#[pyfunction]
#[pyo3(signature = (scenario, suites = vec!["all".to_string()], points = 1000, seed = 42, jet_order = 3, sample_box = None, tol = None))]
fn run_verify(
    py: Python<'_>,
    scenario: &PyScenario,
    suites: Vec<String>,
    points: usize,
    seed: u64,
    jet_order: usize,
    sample_box: Option<&str>,
    tol: Option<f64>,
) -> PyResult<PyManifest> {
    if !(2..=4).contains(&jet_order) {
        return Err(value_err("jet_order must be 2, 3 or 4"));
    }
    let mut selected = Vec::new();
    for s in &suites {
        selected.extend(Suite::parse_list(s).map_err(value_err)?);
    }
    let mut cfg = VerifyConfig::new(scenario.spec.clone()).with_suites(&selected);
    cfg.n_points = points;
    cfg.seed = seed;
    cfg.jet_order = jet_order;
    cfg.tol_override = tol;
    if let Some(b) = sample_box {
        cfg.sample_box = b.parse::<SampleBox>().map_err(value_err)?;
    }
    let m = py.detach(|| verify::run(&cfg));
    Ok(PyManifest { m })
}

/// Integrates a curve; returns `(param, [t, x, y, z])` rows.
#[pyfunction]
#[pyo3(signature = (scenario, kind, start, dt = 1e-3, steps = 1000, slice_time = None))]
fn run_trace(
    scenario: &PyScenario,
    kind: &str,
    start: [f64; 4],
    dt: f64,
    steps: usize,
    slice_time: Option<f64>,
) -> PyResult<Vec<(f64, [f64; 4])>> {
    let kind: CurveKind = kind.parse().map_err(value_err)?;
    match trace::integrate(&scenario.spec, kind, start, dt, steps, slice_time) {
        Ok(c) => Ok(c.samples),
        Err(e @ TraceError::Aborted { .. }) => Err(PyRuntimeError::new_err(e.to_string())),
        Err(e) => Err(value_err(e)),
    }
}

/// Built-in scenario catalogue as a JSON string.
#[pyfunction]
fn catalogue_json() -> String {
    serde_json::to_string(&scenarios::catalogue()).expect("catalogue serialises")
}

/// Evaluates an expression at `(t, x, y, z)`.
#[pyfunction]
fn evaluate(text: &str, point: [f64; 4]) -> PyResult<f64> {
    parse(text)?.eval_f64(point).map_err(value_err)
}

#[pymodule(name = "fluidsymp")]
fn fluidsymp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PySample>()?;
    m.add_class::<PyManifest>()?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_trace, m)?)?;
    m.add_function(wrap_pyfunction!(catalogue_json, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    Ok(())
}
