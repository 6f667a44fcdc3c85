//! Analytic flows: exact Euler and Navier-Stokes solutions plus a deliberate
//! non-solution, evaluated as jets together with their derived fields.

use std::collections::BTreeMap;
use std::fmt;

use crate::exterior::Coords;
use crate::expr::{self, Expr};
use crate::jets::{Jet, JetError, Point};
use crate::vec3::{self, Vec3};

/// Relative threshold of the degeneracy tests.
pub const DEGENERACY_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Euler,
    NavierStokes,
    NonSolution,
    /// User-supplied fields whose validity is not known in advance.
    Custom,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Euler => "Euler",
            Regime::NavierStokes => "Navier-Stokes",
            Regime::NonSolution => "non-solution",
            Regime::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    SteadyAbc,
    DecayingAbc,
    ColumnarVortex,
    BoostedVortex,
    AcceleratingVortex,
    NonsolutionShear,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::SteadyAbc,
        Builtin::DecayingAbc,
        Builtin::ColumnarVortex,
        Builtin::BoostedVortex,
        Builtin::AcceleratingVortex,
        Builtin::NonsolutionShear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::SteadyAbc => "steady_abc",
            Builtin::DecayingAbc => "decaying_abc",
            Builtin::ColumnarVortex => "columnar_vortex",
            Builtin::BoostedVortex => "boosted_vortex",
            Builtin::AcceleratingVortex => "accelerating_vortex",
            Builtin::NonsolutionShear => "nonsolution_shear",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }

    /// Parameter names with default values.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            Builtin::SteadyAbc => &[("A", 1.0), ("B", 1.0), ("C", 1.0)],
            Builtin::DecayingAbc => &[("A", 1.0), ("B", 1.0), ("C", 1.0), ("nu", 0.1)],
            Builtin::ColumnarVortex => &[("omega", 1.0), ("w0", 1.0)],
            Builtin::BoostedVortex => &[("omega", 1.0), ("u", 0.5), ("w0", 1.0)],
            Builtin::AcceleratingVortex => &[("omega", 1.0), ("a", 0.5), ("w0", 1.0)],
            Builtin::NonsolutionShear => &[],
        }
    }

    pub fn regime(self) -> Regime {
        match self {
            Builtin::DecayingAbc => Regime::NavierStokes,
            Builtin::NonsolutionShear => Regime::NonSolution,
            _ => Regime::Euler,
        }
    }

    pub fn expected_degeneracies(self) -> &'static str {
        match self {
            Builtin::SteadyAbc => "Ω_e-degenerate (steady)",
            Builtin::DecayingAbc => "Ω_e-degenerate (α ≡ 0); Ω_ν degenerate at stagnation points",
            Builtin::ColumnarVortex => "Ω_e-degenerate (steady)",
            Builtin::BoostedVortex => "Ω_e-degenerate on the plane x = Ut",
            Builtin::AcceleratingVortex => "none (|w·∇α| = 2Ωa)",
            Builtin::NonsolutionShear => "Ω_e-degenerate (w·∇α ≡ 0); contact-degenerate (H ≡ 0)",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Builtin::SteadyAbc => "v = (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x), p = -v²/2",
            Builtin::DecayingAbc => "v = exp(-νt)(ABC field), p = -v²/2",
            Builtin::ColumnarVortex => "v = (-Ωy, Ωx, W₀exp(-(x²+y²))), p = Ω²(x²+y²)/2",
            Builtin::BoostedVortex => "columnar vortex boosted along x with speed U",
            Builtin::AcceleratingVortex => "v = (-Ωy, Ωx, W₀exp(-(x²+y²)) + at), p = Ω²(x²+y²)/2 - az",
            Builtin::NonsolutionShear => "v = (ty, 0, 0), p = 0",
        }
    }

    fn steady(self) -> bool {
        matches!(self, Builtin::SteadyAbc | Builtin::ColumnarVortex)
    }

    fn pressure_steady(self) -> bool {
        !matches!(self, Builtin::DecayingAbc | Builtin::BoostedVortex)
    }

    fn periodic(self) -> bool {
        matches!(self, Builtin::SteadyAbc | Builtin::DecayingAbc)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Flow {
    Builtin(Builtin),
    Custom { velocity: [Expr; 3], pressure: Expr },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("scenario `{scenario}` has no parameter `{name}`")]
    UnknownParameter { scenario: String, name: String },
    #[error("parameter `{name}` must be {requirement}")]
    InvalidParameter { name: String, requirement: &'static str },
    #[error("gauge must depend on t only: `{0}`")]
    GaugeNotTimeOnly(String),
}

/// A named flow with parameters, viscosity and gauge function `ψ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    name: String,
    flow: Flow,
    params: BTreeMap<String, f64>,
    nu: f64,
    gauge: Expr,
}

/// Static description of a built-in, as listed by the CLI.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CatalogueEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub params: BTreeMap<&'static str, f64>,
    pub regime: Regime,
    pub expected_degeneracies: &'static str,
}

pub fn catalogue() -> Vec<CatalogueEntry> {
    Builtin::ALL
        .into_iter()
        .map(|b| CatalogueEntry {
            name: b.name(),
            description: b.description(),
            params: b.defaults().iter().copied().collect(),
            regime: b.regime(),
            expected_degeneracies: b.expected_degeneracies(),
        })
        .collect()
}

impl ScenarioSpec {
    pub fn builtin(name: &str) -> Result<Self, ScenarioError> {
        let b = Builtin::from_name(name).ok_or_else(|| ScenarioError::UnknownScenario(name.into()))?;
        Ok(Self::from_builtin(b))
    }

    pub fn from_builtin(b: Builtin) -> Self {
        let params: BTreeMap<String, f64> = b.defaults().iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let nu = params.get("nu").copied().unwrap_or(0.0);
        ScenarioSpec {
            name: b.name().to_string(),
            flow: Flow::Builtin(b),
            params,
            nu,
            gauge: Expr::Num(0.0),
        }
    }

    /// A user flow given by component expressions in `t, x, y, z`.
    pub fn custom(velocity: [Expr; 3], pressure: Expr, nu: f64) -> Result<Self, ScenarioError> {
        if !(nu >= 0.0) {
            return Err(ScenarioError::InvalidParameter {
                name: "nu".into(),
                requirement: "non-negative",
            });
        }
        Ok(ScenarioSpec {
            name: "custom".into(),
            flow: Flow::Custom { velocity, pressure },
            params: BTreeMap::new(),
            nu,
            gauge: Expr::Num(0.0),
        })
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Result<Self, ScenarioError> {
        let Some(slot) = self.params.get_mut(name) else {
            return Err(ScenarioError::UnknownParameter {
                scenario: self.name.clone(),
                name: name.into(),
            });
        };
        if !value.is_finite() {
            return Err(ScenarioError::InvalidParameter {
                name: name.into(),
                requirement: "finite",
            });
        }
        if name == "nu" {
            if value <= 0.0 {
                return Err(ScenarioError::InvalidParameter {
                    name: name.into(),
                    requirement: "positive",
                });
            }
            self.nu = value;
        }
        *slot = value;
        Ok(self)
    }

    pub fn with_gauge(mut self, gauge: Expr) -> Result<Self, ScenarioError> {
        if !gauge.is_time_only() {
            return Err(ScenarioError::GaugeNotTimeOnly(gauge.to_string()));
        }
        self.gauge = gauge;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flow(&self) -> &Flow {
        &self.flow
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn param(&self, name: &str) -> f64 {
        self.params[name]
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn gauge(&self) -> &Expr {
        &self.gauge
    }

    pub fn regime(&self) -> Regime {
        match &self.flow {
            Flow::Builtin(b) => b.regime(),
            Flow::Custom { .. } => Regime::Custom,
        }
    }

    pub fn is_viscous(&self) -> bool {
        self.nu > 0.0
    }

    /// Velocity and pressure have no explicit time dependence.
    pub fn is_steady(&self) -> bool {
        match &self.flow {
            Flow::Builtin(b) => b.steady(),
            Flow::Custom { velocity, pressure } => {
                velocity.iter().chain([pressure]).all(|e| !e.depends_on(|v| v == expr::Var::T))
            }
        }
    }

    /// `∂p/∂t ≡ 0`, the hypothesis under which `α` is conserved.
    pub fn is_pressure_steady(&self) -> bool {
        match &self.flow {
            Flow::Builtin(b) => b.pressure_steady(),
            Flow::Custom { pressure, .. } => !pressure.depends_on(|v| v == expr::Var::T),
        }
    }

    /// Default sampling box `[t, x, y, z]` as `(min, max)` pairs.
    pub fn default_box(&self) -> [(f64, f64); 4] {
        let periodic = matches!(self.flow, Flow::Builtin(b) if b.periodic());
        let s = if periodic {
            (0.0, std::f64::consts::TAU)
        } else {
            (-1.5, 1.5)
        };
        [(0.0, 2.0), s, s, s]
    }

    /// Velocity and pressure jets from coordinate jets.
    pub fn fields(&self, c: &Coords) -> Result<(Vec3, Jet), JetError> {
        let [t, x, y, z] = c;
        let p = |name: &str| self.params.get(name).copied().unwrap_or(0.0);
        let zero = t.zero_like();
        Ok(match &self.flow {
            Flow::Builtin(Builtin::SteadyAbc) => {
                let v = abc(p("A"), p("B"), p("C"), x, y, z);
                let pr = vec3::dot(&v, &v).scale(-0.5);
                (v, pr)
            }
            Flow::Builtin(Builtin::DecayingAbc) => {
                let decay = t.scale(-self.nu).exp();
                let v = vec3::scale(&abc(p("A"), p("B"), p("C"), x, y, z), &decay);
                let pr = vec3::dot(&v, &v).scale(-0.5);
                (v, pr)
            }
            Flow::Builtin(Builtin::ColumnarVortex) => {
                let om = p("omega");
                let v = [y.scale(-om), x.scale(om), axial_profile(p("w0"), x, y)];
                (v, radial_pressure(om, x, y))
            }
            Flow::Builtin(Builtin::BoostedVortex) => {
                let (om, u) = (p("omega"), p("u"));
                let xi = x - &t.scale(u);
                let v = [y.scale(-om).add_scalar(u), xi.scale(om), axial_profile(p("w0"), &xi, y)];
                (v, radial_pressure(om, &xi, y))
            }
            Flow::Builtin(Builtin::AcceleratingVortex) => {
                let (om, a) = (p("omega"), p("a"));
                let axial = &axial_profile(p("w0"), x, y) + &t.scale(a);
                let v = [y.scale(-om), x.scale(om), axial];
                (v, &radial_pressure(om, x, y) - &z.scale(a))
            }
            Flow::Builtin(Builtin::NonsolutionShear) => ([t * y, zero.clone(), zero.clone()], zero),
            Flow::Custom { velocity, pressure } => (
                [velocity[0].eval_jet(c)?, velocity[1].eval_jet(c)?, velocity[2].eval_jet(c)?],
                pressure.eval_jet(c)?,
            ),
        })
    }

    /// Evaluates every field at `point` with jets of order `order`.
    pub fn evaluate(&self, point: Point, order: usize) -> Result<FieldSample, JetError> {
        FieldSample::new(self, point, order)
    }

    /// Velocity value at `point`.
    pub fn velocity_at(&self, point: Point) -> Result<[f64; 3], JetError> {
        let c = Jet::coordinates(point, crate::jets::MIN_SEED_ORDER)?;
        Ok(vec3::values(&self.fields(&c)?.0))
    }
}

fn abc(a: f64, b: f64, c: f64, x: &Jet, y: &Jet, z: &Jet) -> Vec3 {
    let (sx, cx) = (x.sin(), x.cos());
    let (sy, cy) = (y.sin(), y.cos());
    let (sz, cz) = (z.sin(), z.cos());
    [
        &sz.scale(a) + &cy.scale(c),
        &sx.scale(b) + &cz.scale(a),
        &sy.scale(c) + &cx.scale(b),
    ]
}

/// `W₀ exp(-(x² + y²))`.
fn axial_profile(w0: f64, x: &Jet, y: &Jet) -> Jet {
    (&(x * x) + &(y * y)).scale(-1.0).exp().scale(w0)
}

fn radial_pressure(omega: f64, x: &Jet, y: &Jet) -> Jet {
    (&(x * x) + &(y * y)).scale(0.5 * omega * omega)
}

/// Velocity, pressure and every derived field as jets at one point.
///
/// Derived fields are computed from `v` and `p` only; each derivative lowers
/// the order by one.
#[derive(Debug, Clone)]
pub struct FieldSample {
    pub point: Point,
    pub order: usize,
    pub nu: f64,
    pub coords: Coords,
    pub v: Vec3,
    pub p: Jet,
    /// Gauge `ψ(t)`.
    pub psi: Jet,
    pub v_sq: Jet,
    pub v_t: Vec3,
    pub w: Vec3,
    pub alpha: Jet,
    pub grad_alpha: Vec3,
    pub v_cross_w: Vec3,
    /// `H = v·w / 2`.
    pub helicity: Jet,
    pub curl_w: Vec3,
    /// `H_w = w·(∇×w) / 2`.
    pub vortical_helicity: Jet,
    pub lap_v: Vec3,
    pub p_t: Jet,
    /// `w·∇α`.
    pub liouville_density: Jet,
}

impl FieldSample {
    pub fn new(spec: &ScenarioSpec, point: Point, order: usize) -> Result<Self, JetError> {
        let coords = Jet::coordinates(point, order)?;
        let (v, p) = spec.fields(&coords)?;
        let psi = spec.gauge().eval_jet(&coords)?;
        Self::from_fields(coords, v, p, psi, spec.nu())
    }

    pub fn from_fields(coords: Coords, v: Vec3, p: Jet, psi: Jet, nu: f64) -> Result<Self, JetError> {
        let v_sq = vec3::dot(&v, &v);
        let w = vec3::curl(&v)?;
        let alpha = -&(&p + &v_sq.scale(0.5));
        let grad_alpha = vec3::grad(&alpha)?;
        let v_cross_w = vec3::cross(&v, &w);
        let helicity = vec3::dot(&v, &w).scale(0.5);
        let curl_w = vec3::curl(&w)?;
        let vortical_helicity = vec3::dot(&w, &curl_w).scale(0.5);
        let lap_v = vec3::vector_laplacian(&v)?;
        let liouville_density = vec3::dot(&w, &grad_alpha);
        Ok(FieldSample {
            point: coords[0].anchor(),
            order: coords[0].order(),
            nu,
            v_t: vec3::time_derivative(&v)?,
            p_t: p.derivative(0)?,
            coords,
            v,
            p,
            psi,
            v_sq,
            w,
            alpha,
            grad_alpha,
            v_cross_w,
            helicity,
            curl_w,
            vortical_helicity,
            lap_v,
            liouville_density,
        })
    }

    /// Replaces the gauge function.
    pub fn with_gauge(mut self, gauge: &Expr) -> Result<Self, JetError> {
        self.psi = gauge.eval_jet(&self.coords)?;
        Ok(self)
    }

    pub fn d_liouville_degenerate(&self) -> bool {
        let scale = vec3::norm(vec3::values(&self.w)) * vec3::norm(vec3::values(&self.grad_alpha));
        self.liouville_density.value().abs() < DEGENERACY_EPS * scale.max(1.0)
    }

    pub fn helicity_degenerate(&self) -> bool {
        let scale = vec3::norm(vec3::values(&self.v)) * vec3::norm(vec3::values(&self.w));
        self.helicity.value().abs() < DEGENERACY_EPS * scale.max(1.0)
    }

    pub fn vortical_helicity_degenerate(&self) -> bool {
        let scale = vec3::norm(vec3::values(&self.w)) * vec3::norm(vec3::values(&self.curl_w));
        self.vortical_helicity.value().abs() < DEGENERACY_EPS * scale.max(1.0)
    }

    pub fn euler_residual(&self) -> ResidualVector {
        ResidualVector::new(vec3::values(&vec3::sub(
            &vec3::sub(&self.v_t, &self.v_cross_w),
            &self.grad_alpha,
        )))
    }

    pub fn ns_residual(&self) -> ResidualVector {
        let e = self.euler_residual().components;
        let l = vec3::values(&self.lap_v);
        ResidualVector::new(std::array::from_fn(|i| e[i] - self.nu * l[i]))
    }

    /// `w_t - ∇×(v×w) - ν∇²w` and the bracket form `w_t + [v, w] - ν∇²w`.
    pub fn vorticity_residual(&self) -> Result<(ResidualVector, ResidualVector), JetError> {
        let w_t = vec3::values(&vec3::time_derivative(&self.w)?);
        let transport = vec3::values(&vec3::curl(&self.v_cross_w)?);
        let bracket = vec3::values(&vec3::bracket(&self.v, &self.w)?);
        let diffusion = if self.nu != 0.0 {
            vec3::values(&vec3::vector_laplacian(&self.w)?).map(|c| self.nu * c)
        } else {
            [0.0; 3]
        };
        Ok((
            ResidualVector::new(std::array::from_fn(|i| w_t[i] - transport[i] - diffusion[i])),
            ResidualVector::new(std::array::from_fn(|i| w_t[i] + bracket[i] - diffusion[i])),
        ))
    }

    /// `(∇·v, ∇·w)`.
    pub fn solenoidal_residuals(&self) -> Result<(f64, f64), JetError> {
        Ok((vec3::div(&self.v)?.value(), vec3::div(&self.w)?.value()))
    }

    /// `∂_t(v²/2) - v·∇α`.
    pub fn bernoulli_residual(&self) -> Result<f64, JetError> {
        let lhs = self.v_sq.derivative(0)?.scale(0.5);
        Ok(lhs.value() - vec3::dot(&self.v, &self.grad_alpha).value())
    }

    /// `dα/dt + p_t` along the suspended velocity field.
    pub fn material_alpha_residual(&self) -> Result<f64, JetError> {
        let dadt = &self.alpha.derivative(0)? + &vec3::advect(&self.v, &self.alpha)?;
        Ok(dadt.value() + self.p_t.value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualVector {
    pub components: [f64; 3],
    pub norm: f64,
}

impl ResidualVector {
    pub fn new(components: [f64; 3]) -> Self {
        ResidualVector {
            components,
            norm: vec3::norm(components),
        }
    }
}
