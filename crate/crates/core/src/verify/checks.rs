//! The catalogue of per-sample checks.
//!
//! Each check maps one sample to a non-negative residual. Relative residuals
//! divide by `max(1, scale)` so that they stay meaningful near zero.

use std::cell::OnceCell;

use crate::contact;
use crate::exterior::{differential, directional, lie_derivative, KForm, Vector};
use crate::expr::Expr;
use crate::jets::Jet;
use crate::scenarios::{FieldSample, Regime as FlowRegime, ScenarioSpec};
use crate::symplectic::{self, BracketAlgebra, HamiltonianField, Regime, SymplecticData};
use crate::vec3;
use crate::{Error, Result};

use super::Suite;

pub type Eval = Box<dyn Fn(&Ctx) -> Result<f64> + Send + Sync>;

pub struct CheckDef {
    pub id: String,
    pub suite: Suite,
    pub description: String,
    /// Key into the identity catalogue.
    pub identity_ref: &'static str,
    /// `None` marks an informational diagnostic.
    pub tolerance: Option<f64>,
    /// Smallest jet order at which the check is meaningful.
    pub min_order: usize,
    pub eval: Eval,
}

/// Everything a check may need at one sample, computed on demand.
pub struct Ctx<'a> {
    pub spec: &'a ScenarioSpec,
    pub s: FieldSample,
    pub ideal: SymplecticData,
    viscous: OnceCell<Result<SymplecticData>>,
    x_t: OnceCell<Result<HamiltonianField>>,
    current: OnceCell<Result<symplectic::CurrentField>>,
    slice: OnceCell<Result<contact::SliceContactData>>,
}

impl<'a> Ctx<'a> {
    pub fn new(spec: &'a ScenarioSpec, s: FieldSample) -> Self {
        Ctx {
            spec,
            ideal: symplectic::omega_e(&s),
            s,
            viscous: OnceCell::new(),
            x_t: OnceCell::new(),
            current: OnceCell::new(),
            slice: OnceCell::new(),
        }
    }

    fn nondegenerate(&self) -> Result<&SymplecticData> {
        if self.ideal.degenerate {
            Err(Error::Degenerate {
                liouville: self.ideal.liouville.value(),
            })
        } else {
            Ok(&self.ideal)
        }
    }

    fn viscous(&self) -> Result<&SymplecticData> {
        if !self.spec.is_viscous() {
            return Err(Error::NotApplicable("inviscid scenario"));
        }
        let data = self.viscous.get_or_init(|| symplectic::omega_nu(&self.s)).as_ref().map_err(Clone::clone)?;
        if data.degenerate {
            return Err(Error::Degenerate {
                liouville: data.liouville.value(),
            });
        }
        Ok(data)
    }

    fn x_t(&self) -> Result<&HamiltonianField> {
        let data = self.nondegenerate()?;
        self.x_t
            .get_or_init(|| symplectic::hamiltonian_field(data, &self.s.coords[0]))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn current(&self) -> Result<&symplectic::CurrentField> {
        let data = self.nondegenerate()?;
        self.current
            .get_or_init(|| symplectic::helicity_current(&self.s, data))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn slice(&self) -> Result<&contact::SliceContactData> {
        self.slice
            .get_or_init(|| contact::slice_contact(&self.s))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn contact_nondegenerate(&self) -> Result<&contact::SliceContactData> {
        let d = self.slice()?;
        if d.degenerate {
            Err(Error::Degenerate { liouville: d.contact_coeff })
        } else {
            Ok(d)
        }
    }

    /// Ideal-flow identities only hold on-shell for Euler flows.
    fn require_inviscid(&self) -> Result<()> {
        if self.spec.is_viscous() {
            Err(Error::NotApplicable("viscous scenario"))
        } else {
            Ok(())
        }
    }

    fn require_euler_solution(&self) -> Result<()> {
        self.require_inviscid()?;
        if self.spec.regime() == FlowRegime::NonSolution {
            Err(Error::NotApplicable("not a solution"))
        } else {
            Ok(())
        }
    }

    fn require_steady_pressure(&self) -> Result<()> {
        if self.s.p_t.max_abs() > 0.0 {
            Err(Error::NotApplicable("time-dependent pressure"))
        } else {
            Ok(())
        }
    }
}

/// Named scalar test functions.
#[derive(Debug, Clone, Copy)]
pub enum TestFn {
    T,
    X,
    Y,
    VSq,
    Alpha,
    GaugeMinusVSq,
}

impl TestFn {
    pub fn label(self) -> &'static str {
        match self {
            TestFn::T => "t",
            TestFn::X => "x",
            TestFn::Y => "y",
            TestFn::VSq => "v2",
            TestFn::Alpha => "alpha",
            TestFn::GaugeMinusVSq => "psi-v2",
        }
    }

    pub fn jet(self, s: &FieldSample) -> Jet {
        match self {
            TestFn::T => s.coords[0].clone(),
            TestFn::X => s.coords[1].clone(),
            TestFn::Y => s.coords[2].clone(),
            TestFn::VSq => s.v_sq.clone(),
            TestFn::Alpha => s.alpha.clone(),
            TestFn::GaugeMinusVSq => &s.psi - &s.v_sq,
        }
    }
}

/// Checks for user-supplied test functions `f` and, with `g`, their bracket.
pub fn user_function_checks(f: Option<&Expr>, g: Option<&Expr>) -> Vec<CheckDef> {
    let mut b = Builder {
        defs: Vec::new(),
        suite: Suite::Core,
    };
    let jet = |e: &Expr, c: &Ctx| -> Result<Jet> { Ok(e.eval_jet(&c.s.coords)?) };
    for (label, e) in [("f", f), ("g", g)] {
        let Some(e) = e.cloned() else { continue };
        let shown = e.to_string();
        let e1 = e.clone();
        b.add(
            format!("hamiltonian.user_{label}.defect"),
            "hamiltonian-solve",
            format!("|i(X_f)Ω_e - df| for f = {shown}, relative"),
            Some(1e-10),
            move |c| {
                let data = c.nondegenerate()?;
                let df = differential(&jet(&e1, c)?)?;
                let x = symplectic::solve_hamiltonian(&data.omega, &df)?;
                Ok(rel(x.defect.max_abs_value(), df.max_abs_value()))
            },
        );
        b.add(
            format!("hamiltonian.user_{label}.closed_form"),
            "hamiltonian-closed-form",
            format!("solved X_f vs closed form for f = {shown}, relative"),
            Some(1e-10),
            move |c| {
                let data = c.nondegenerate()?;
                let fj = jet(&e, c)?;
                let x = symplectic::hamiltonian_field(data, &fj)?;
                Ok(vector_defect(&x.x, &symplectic::closed_form_xf(&c.s, Regime::Ideal, &fj)?))
            },
        );
    }
    if let (Some(f), Some(g)) = (f.cloned(), g.cloned()) {
        b.add(
            "poisson.user.routes",
            "poisson-formula",
            format!("{{{f}, {g}}}: closed formula vs Ω(X_g, X_f), relative"),
            Some(1e-10),
            move |c| {
                let data = c.nondegenerate()?;
                let pb = symplectic::poisson(&c.s, data, &jet(&f, c)?, &jet(&g, c)?)?;
                let a = pb.formula.value();
                Ok(rel((a - pb.via_fields.value()).abs(), a))
            },
        );
    }
    b.defs
}

pub fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.abs().max(1.0)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.abs()))
}

fn vector_defect(a: &Vector<Jet>, b: &Vector<Jet>) -> f64 {
    let (a, b) = (a.values(), b.values());
    let diff: Vec<f64> = (0..4).map(|i| a[i] - b[i]).collect();
    rel(max_abs(&diff), max_abs(&b))
}

fn form_defect(a: &KForm<Jet>, b: &KForm<Jet>) -> f64 {
    rel(a.sub(b).max_abs_value(), b.max_abs_value())
}

struct Builder {
    defs: Vec<CheckDef>,
    suite: Suite,
}

impl Builder {
    fn add(
        &mut self,
        id: impl Into<String>,
        identity_ref: &'static str,
        description: impl Into<String>,
        tolerance: Option<f64>,
        eval: impl Fn(&Ctx) -> Result<f64> + Send + Sync + 'static,
    ) {
        self.add_with_order(id, identity_ref, description, tolerance, 2, eval);
    }

    fn add_with_order(
        &mut self,
        id: impl Into<String>,
        identity_ref: &'static str,
        description: impl Into<String>,
        tolerance: Option<f64>,
        min_order: usize,
        eval: impl Fn(&Ctx) -> Result<f64> + Send + Sync + 'static,
    ) {
        self.defs.push(CheckDef {
            id: id.into(),
            suite: self.suite,
            description: description.into(),
            identity_ref,
            tolerance,
            min_order,
            eval: Box::new(eval),
        });
    }
}

const HAMILTONIAN_FNS: [TestFn; 4] = [TestFn::T, TestFn::X, TestFn::VSq, TestFn::Alpha];

pub fn catalogue() -> Vec<CheckDef> {
    let mut b = Builder {
        defs: Vec::new(),
        suite: Suite::Core,
    };
    core(&mut b);
    b.suite = Suite::Invariance;
    invariance(&mut b);
    b.suite = Suite::Viscous;
    viscous(&mut b);
    b.suite = Suite::Current;
    current(&mut b);
    b.suite = Suite::Algebra;
    algebra(&mut b);
    b.suite = Suite::Contact;
    contact_checks(&mut b);
    b.suite = Suite::Symplectisation;
    symplectisation(&mut b);
    b.suite = Suite::Residuals;
    residuals(&mut b);
    b.defs
}

fn core(b: &mut Builder) {
    b.add("closedness.ideal", "closedness-ideal", "max |dΩ_e|", Some(1e-10), |c| {
        c.require_inviscid()?;
        Ok(c.ideal.omega.d()?.max_abs_value())
    });
    b.add("liouville.ideal", "liouville-ideal", "½Ω_e∧Ω_e coefficient vs -w·∇α, relative", Some(1e-12), |c| {
        let d = c.s.liouville_density.value();
        Ok(rel((c.ideal.liouville.value() + d).abs(), d))
    });
    b.add("hamiltonian.time.defect", "hamiltonian-solve", "|i(X_t)Ω_e - dt|", Some(1e-10), |c| {
        Ok(c.x_t()?.defect.max_abs_value())
    });
    b.add(
        "hamiltonian.time.vorticity",
        "time-hamiltonian",
        "X_t vs -(w·∇α)⁻¹ w·∇, relative",
        Some(1e-10),
        |c| {
            let x = &c.x_t()?.x;
            let d = c.s.liouville_density.value();
            let w = vec3::values(&c.s.w);
            let expected = Vector([0.0, -w[0] / d, -w[1] / d, -w[2] / d]);
            let x = x.values();
            let diff: Vec<f64> = (0..4).map(|i| x[i] - expected.0[i]).collect();
            Ok(rel(max_abs(&diff), max_abs(&expected.0)))
        },
    );
    for f in HAMILTONIAN_FNS {
        let label = f.label();
        b.add(
            format!("hamiltonian.{label}.defect"),
            "hamiltonian-solve",
            format!("|i(X_f)Ω_e - df| for f = {label}, relative"),
            Some(1e-10),
            move |c| {
                let data = c.nondegenerate()?;
                let df = differential(&f.jet(&c.s))?;
                let x = symplectic::solve_hamiltonian(&data.omega, &df)?;
                Ok(rel(x.defect.max_abs_value(), df.max_abs_value()))
            },
        );
        b.add(
            format!("hamiltonian.{label}.closed_form"),
            "hamiltonian-closed-form",
            format!("solved X_f vs closed form for f = {label}, relative"),
            Some(1e-10),
            move |c| {
                let data = c.nondegenerate()?;
                let fj = f.jet(&c.s);
                let x = symplectic::hamiltonian_field(data, &fj)?;
                let closed = symplectic::closed_form_xf(&c.s, Regime::Ideal, &fj)?;
                Ok(vector_defect(&x.x, &closed))
            },
        );
        b.add(
            format!("hamiltonian.{label}.conservation"),
            "hamiltonian-conservation",
            format!("X_f(f) for f = {label}, relative to |X_f||∇f|"),
            Some(1e-12),
            move |c| {
                let data = c.nondegenerate()?;
                let fj = f.jet(&c.s);
                let x = symplectic::hamiltonian_field(data, &fj)?;
                let xf = directional(&x.x, &fj)?.value();
                let scale = max_abs(&x.x.values()) * max_abs(&fj.gradient_value());
                Ok(rel(xf.abs(), scale))
            },
        );
    }
    b.add(
        "hamiltonian.suspended",
        "suspended-defect",
        "|i(∂_t+v)Ω_e - dα - p_t dt|",
        Some(1e-10),
        |c| {
            c.require_euler_solution()?;
            let (defect, expected) = symplectic::suspended_defect(&c.s, &c.ideal)?;
            Ok(form_defect(&defect, &expected))
        },
    );

    let pairs = [
        (TestFn::T, TestFn::Alpha),
        (TestFn::X, TestFn::Y),
        (TestFn::X, TestFn::VSq),
        (TestFn::T, TestFn::GaugeMinusVSq),
    ];
    for (f, g) in pairs {
        let (lf, lg) = (f.label(), g.label());
        b.add(
            format!("poisson.{lf}.{lg}.routes"),
            "poisson-formula",
            format!("{{{lf}, {lg}}}: closed formula vs Ω(X_g, X_f), relative"),
            Some(1e-10),
            move |c| {
                let data = c.nondegenerate()?;
                let pb = symplectic::poisson(&c.s, data, &f.jet(&c.s), &g.jet(&c.s))?;
                let a = pb.formula.value();
                Ok(rel((a - pb.via_fields.value()).abs(), a))
            },
        );
        b.add(
            format!("poisson.{lf}.{lg}.antisymmetry"),
            "poisson-antisymmetry",
            format!("{{{lf}, {lg}}} + {{{lg}, {lf}}}"),
            Some(0.0),
            move |c| {
                c.nondegenerate()?;
                let (fj, gj) = (f.jet(&c.s), g.jet(&c.s));
                let a = symplectic::poisson_formula(&c.s, Regime::Ideal, &fj, &gj)?.value();
                let r = symplectic::poisson_formula(&c.s, Regime::Ideal, &gj, &fj)?.value();
                Ok((a + r).abs())
            },
        );
    }
    b.add("poisson.t.alpha.value", "poisson-time-alpha", "{t, α} + 1", Some(1e-10), |c| {
        c.nondegenerate()?;
        let pb = symplectic::poisson_formula(&c.s, Regime::Ideal, &c.s.coords[0], &c.s.alpha)?;
        Ok((pb.value() + 1.0).abs())
    });
    b.add(
        "poisson.leibniz",
        "poisson-leibniz",
        "{x, y·v²} - y{x, v²} - v²{x, y}, relative",
        Some(1e-11),
        |c| {
            c.nondegenerate()?;
            let s = &c.s;
            let (x, y, v2) = (&s.coords[1], &s.coords[2], &s.v_sq);
            let pb = |f: &Jet, g: &Jet| symplectic::poisson_formula(s, Regime::Ideal, f, g);
            let lhs = pb(x, &(y * v2))?.value();
            let a = y.value() * pb(x, v2)?.value();
            let bb = v2.value() * pb(x, y)?.value();
            Ok(rel((lhs - a - bb).abs(), lhs))
        },
    );
    b.add("poisson.jacobi", "poisson-jacobi", "cyclic sum over (x, y, v²)", Some(1e-8), |c| {
        c.nondegenerate()?;
        let s = &c.s;
        let fs = [s.coords[1].clone(), s.coords[2].clone(), s.v_sq.clone()];
        let pb = |f: &Jet, g: &Jet| symplectic::poisson_formula(s, Regime::Ideal, f, g);
        let mut sum = 0.0;
        for k in 0..3 {
            let (f, g, h) = (&fs[k], &fs[(k + 1) % 3], &fs[(k + 2) % 3]);
            sum += pb(f, &pb(g, h)?)?.value();
        }
        Ok(sum.abs())
    });
    b.add(
        "poisson.time.bernoulli",
        "poisson-time-energy",
        "{t, ψ - v²} vs (w·∇v²)/(w·∇α), relative",
        Some(1e-10),
        |c| {
            c.nondegenerate()?;
            let s = &c.s;
            let g = &s.psi - &s.v_sq;
            let value = symplectic::poisson_formula(s, Regime::Ideal, &s.coords[0], &g)?.value();
            let expected = vec3::dot(&s.w, &vec3::grad(&s.v_sq)?).value() / s.liouville_density.value();
            Ok(rel((value - expected).abs(), expected))
        },
    );

    b.add("helicity.balance.ideal", "helicity-balance-ideal", "∂_t H + ∇·(Hv - ½(½v² - p)w)", Some(1e-9), |c| {
        c.require_inviscid()?;
        Ok(symplectic::helicity_balance(&c.s, Regime::Ideal)?.0.abs())
    });
    b.add(
        "helicity.gauge",
        "helicity-gauge",
        "d(θ_e∧Ω_e) at ψ = 0 vs ψ = t²",
        Some(1e-11),
        |c| {
            let zero = c.s.clone().with_gauge(&Expr::Num(0.0))?;
            let square = c.s.clone().with_gauge(&crate::expr::parse("t^2")?)?;
            let a = symplectic::helicity_form_balance(&symplectic::omega_e(&zero))?;
            let b = symplectic::helicity_form_balance(&symplectic::omega_e(&square))?;
            Ok((a - b).abs())
        },
    );
}

fn invariance(b: &mut Builder) {
    fn suite(c: &Ctx) -> Result<symplectic::Invariance> {
        c.require_euler_solution()?;
        symplectic::invariance_suite(&c.s, &c.ideal)
    }
    fn scoped(r: &Result<f64>) -> Result<f64> {
        match r {
            Err(Error::OutOfScope { .. }) => Err(Error::NotApplicable("time-dependent pressure")),
            other => other.clone(),
        }
    }
    b.add("invariance.theta_exact", "theta-exact", "dθ_e - Ω_e", Some(1e-11), |c| {
        c.require_euler_solution()?;
        Ok(symplectic::theta_e(&c.s).d()?.sub(&c.ideal.omega).max_abs_value())
    });
    b.add(
        "invariance.relative",
        "relative-invariant",
        "L_{∂_t+v}θ_e - d(ψ + v²/2 - p)",
        Some(1e-9),
        |c| scoped(&suite(c)?.relative_invariant),
    );
    b.add(
        "invariance.three_form",
        "three-form-invariant",
        "L_{∂_t+v}(θ_e∧Ω_e) - d((ψ + v²/2 - p)Ω_e)",
        Some(1e-9),
        |c| scoped(&suite(c)?.three_form_invariant),
    );
    b.add(
        "invariance.decomposition",
        "helicity-three-form",
        "θ_e∧Ω_e vs 2H dx∧dy∧dz + ((ψ+v²)w - 2Hv - v×∇α)·(dx∧dx)∧dt",
        Some(1e-9),
        |c| Ok(suite(c)?.decomposition),
    );
    b.add("invariance.exactness", "helicity-exactness", "d(θ_e∧Ω_e) - Ω_e∧Ω_e", Some(1e-9), |c| {
        c.require_inviscid()?;
        Ok(symplectic::invariance_suite(&c.s, &c.ideal)?.exactness)
    });
    b.add(
        "invariance.liouville_transport",
        "liouville-conservation",
        "(∂_t + v)(w·∇α)",
        Some(1e-9),
        |c| scoped(&suite(c)?.liouville_transport).map(f64::abs),
    );
}

fn viscous(b: &mut Builder) {
    b.add("closedness.viscous", "closedness-viscous", "max |dΩ_ν|", Some(1e-9), |c| {
        if !c.spec.is_viscous() {
            return Err(Error::NotApplicable("inviscid scenario"));
        }
        let data = symplectic::omega_nu(&c.s)?;
        Ok(data.omega.d()?.max_abs_value())
    });
    b.add(
        "liouville.viscous",
        "liouville-viscous",
        "½Ω_ν∧Ω_ν coefficient vs 2νH_w, relative",
        Some(1e-12),
        |c| {
            if !c.spec.is_viscous() {
                return Err(Error::NotApplicable("inviscid scenario"));
            }
            let data = symplectic::omega_nu(&c.s)?;
            let expected = 2.0 * c.s.nu * c.s.vortical_helicity.value();
            Ok(rel((data.liouville.value() - expected).abs(), expected))
        },
    );
    for f in [TestFn::T, TestFn::X, TestFn::VSq] {
        let label = f.label();
        b.add(
            format!("viscous.hamiltonian.{label}.closed_form"),
            "hamiltonian-closed-form-viscous",
            format!("solved X_f vs closed form under Ω_ν for f = {label}, relative"),
            Some(1e-10),
            move |c| {
                let data = c.viscous()?;
                let fj = f.jet(&c.s);
                let x = symplectic::hamiltonian_field(data, &fj)?;
                if x.defect.max_abs_value() > 1e-10 * differential(&fj)?.max_abs_value().max(1.0) {
                    return Ok(f64::INFINITY);
                }
                Ok(vector_defect(&x.x, &symplectic::closed_form_xf(&c.s, Regime::Viscous, &fj)?))
            },
        );
    }
    b.add(
        "viscous.suspended",
        "suspended-defect-viscous",
        "i(∂_t+v)Ω_ν vs ν∇²v·(dx - v dt)",
        Some(1e-10),
        |c| {
            if !c.spec.is_viscous() {
                return Err(Error::NotApplicable("inviscid scenario"));
            }
            let data = symplectic::omega_nu(&c.s)?;
            let (defect, expected) = symplectic::suspended_defect(&c.s, &data)?;
            Ok(form_defect(&defect, &expected))
        },
    );
    b.add(
        "helicity.balance.viscous",
        "helicity-balance-viscous",
        "∂_t H + ∇·(Hv + ν v×∇²v - ½v²w) + 2νH_w",
        Some(1e-9),
        |c| {
            if !c.spec.is_viscous() {
                return Err(Error::NotApplicable("inviscid scenario"));
            }
            let (lhs, rhs) = symplectic::helicity_balance(&c.s, Regime::Viscous)?;
            Ok((lhs - rhs).abs())
        },
    );
    b.add(
        "viscous.current.closed_form",
        "current-closed-form",
        "solved J_ν vs (w·γ)⁻¹[2H(∂_t+v) - (ψ+v²)w + v×γ], relative",
        Some(1e-10),
        |c| {
            let data = c.viscous()?;
            let j = symplectic::solve_hamiltonian(&data.omega, &data.theta)?;
            Ok(vector_defect(&j.x, &symplectic::closed_form_current(&c.s, Regime::Viscous)?))
        },
    );
    b.add(
        "viscous.current.printed",
        "current-printed-viscous",
        "solved J_ν vs the printed form with (p - v²/2) w, relative (diagnostic)",
        None,
        |c| {
            let data = c.viscous()?;
            let j = symplectic::solve_hamiltonian(&data.omega, &data.theta)?;
            Ok(vector_defect(&j.x, &symplectic::printed_viscous_current(&c.s)?))
        },
    );
    b.add("viscous.current.dilation", "current-dilation", "L_J Ω_ν - Ω_ν", Some(1e-9), |c| {
        let data = c.viscous()?;
        let j = symplectic::solve_hamiltonian(&data.omega, &data.theta)?;
        Ok(lie_derivative(&j.x, &data.omega)?.sub(&data.omega).max_abs_value())
    });
}

fn current(b: &mut Builder) {
    b.add("current.defect", "current-solve", "|i(J)Ω_e - θ_e|", Some(1e-10), |c| {
        Ok(c.current()?.solved.defect.max_abs_value())
    });
    b.add(
        "current.closed_form",
        "current-closed-form",
        "solved J vs (w·∇α)⁻¹[2H(∂_t+v) - (ψ+v²)w + v×∇α], relative",
        Some(1e-10),
        |c| {
            let j = c.current()?;
            Ok(vector_defect(&j.solved.x, &j.closed_form))
        },
    );
    b.add("current.dilation", "current-dilation", "L_J Ω_e - Ω_e", Some(1e-9), |c| {
        c.require_euler_solution()?;
        let j = c.current()?;
        Ok(lie_derivative(&j.solved.x, &c.ideal.omega)?.sub(&c.ideal.omega).max_abs_value())
    });
    b.add("current.divergence", "symplectic-divergence", "div_Ω J - 2", Some(1e-9), |c| {
        c.require_euler_solution()?;
        let j = c.current()?;
        Ok((symplectic::symp_div(&j.solved.x, &c.ideal.omega)?.value() - 2.0).abs())
    });
    b.add("current.time_divergence", "symplectic-divergence", "div_Ω X_t", Some(1e-9), |c| {
        c.require_euler_solution()?;
        Ok(symplectic::symp_div(&c.x_t()?.x, &c.ideal.omega)?.value().abs())
    });
    b.add(
        "current.suspended_divergence",
        "liouville-conservation",
        "div_Ω (∂_t + v)",
        Some(1e-9),
        |c| {
            c.require_euler_solution()?;
            c.require_steady_pressure()?;
            c.nondegenerate()?;
            let sf = symplectic::suspended_field(&c.s);
            Ok(symplectic::symp_div(&sf, &c.ideal.omega)?.value().abs())
        },
    );
    b.add("current.skew", "current-skew", "i(J)θ_e", Some(1e-12), |c| {
        Ok(c.current()?.theta_contraction.value().abs())
    });
}

fn algebra(b: &mut Builder) {
    fn alg<'c>(c: &'c Ctx) -> Result<BracketAlgebra<'c>> {
        c.require_euler_solution()?;
        let data = c.nondegenerate()?;
        BracketAlgebra::new(&c.s, data)
    }
    fn scoped(r: Result<f64>) -> Result<f64> {
        match r {
            Err(Error::OutOfScope { .. }) => Err(Error::NotApplicable("time-dependent pressure")),
            other => other,
        }
    }
    for f in [TestFn::T, TestFn::VSq] {
        let label = f.label();
        b.add_with_order(
            format!("algebra.hierarchy1.{label}"),
            "hierarchy-depth1",
            format!("i([J, X_f])Ω_e - d(J(f) - f) for f = {label}"),
            Some(1e-8),
            3,
            move |c| alg(c)?.hierarchy_depth1(&f.jet(&c.s)),
        );
        b.add_with_order(
            format!("algebra.hierarchy2.{label}"),
            "hierarchy-depth2",
            format!("i([J, [J, X_f]])Ω_e - d(J(J(f)) - 2J(f) + f) for f = {label}"),
            Some(1e-7),
            4,
            move |c| alg(c)?.hierarchy_depth2(&f.jet(&c.s)),
        );
    }
    for (f, g) in [(TestFn::T, TestFn::GaugeMinusVSq), (TestFn::X, TestFn::Y)] {
        let (lf, lg) = (f.label(), g.label());
        b.add_with_order(
            format!("algebra.isomorphism.{lf}.{lg}"),
            "lie-isomorphism",
            format!("[X_f, X_g] - X_{{f,g}} for (f, g) = ({lf}, {lg})"),
            Some(1e-8),
            3,
            move |c| alg(c)?.isomorphism(&f.jet(&c.s), &g.jet(&c.s)),
        );
    }
    b.add_with_order(
        "algebra.suspended_symmetry",
        "bracket-symmetry",
        "[[J, X_t], ∂_t+v] + [X_t, [J, ∂_t+v]]",
        Some(1e-8),
        3,
        |c| scoped(alg(c)?.suspended_symmetry()),
    );
    b.add_with_order(
        "algebra.suspended_current",
        "bracket-current-suspended",
        "i([J, ∂_t+v])Ω_e - d(J(α) - α)",
        Some(1e-8),
        3,
        |c| scoped(alg(c)?.suspended_current_bracket().map(|r| r.0)),
    );
    b.add_with_order(
        "algebra.current_alpha",
        "current-alpha",
        "J(α) + ψ + v²",
        Some(1e-10),
        3,
        |c| scoped(alg(c)?.suspended_current_bracket().map(|r| r.1.abs())),
    );
}

fn contact_checks(b: &mut Builder) {
    b.add("contact.coefficient", "slice-contact", "ω∧dω coefficient - 2H", Some(1e-12), |c| {
        let d = c.slice()?;
        Ok((d.contact_coeff - 2.0 * d.helicity).abs())
    });
    b.add("contact.reeb.normalisation", "slice-reeb", "i(E)ω - 1", Some(1e-12), |c| {
        Ok(contact::slice_reeb(c.contact_nondegenerate()?)?.normalisation_defect.abs())
    });
    b.add("contact.reeb.kernel", "slice-reeb", "|i(E)dω|", Some(1e-12), |c| {
        Ok(contact::slice_reeb(c.contact_nondegenerate()?)?.kernel_defect)
    });
    b.add("contact.reeb.closed_form", "slice-reeb-closed-form", "E vs w/(2H), relative", Some(1e-10), |c| {
        let r = contact::slice_reeb(c.contact_nondegenerate()?)?;
        let e = contact::reeb_closed_form(&c.s);
        let diff: Vec<f64> = (0..3).map(|i| r.field[i] - e[i]).collect();
        Ok(rel(max_abs(&diff), max_abs(&e)))
    });
    b.add(
        "contact.reeb.printed",
        "slice-reeb-printed",
        "E vs the printed (-2/H)w, relative (diagnostic)",
        None,
        |c| {
            let r = contact::slice_reeb(c.contact_nondegenerate()?)?;
            let e = contact::reeb_printed(&c.s);
            let diff: Vec<f64> = (0..3).map(|i| r.field[i] - e[i]).collect();
            Ok(rel(max_abs(&diff), max_abs(&e)))
        },
    );
    b.add(
        "contact.reeb.pushforward",
        "slice-reeb-pushforward",
        "|X_t × E| / (|X_t||E|) on the slice",
        Some(1e-10),
        |c| {
            let r = contact::slice_reeb(c.contact_nondegenerate()?)?;
            let x = c.x_t()?.x.values();
            let xs = [x[1], x[2], x[3]];
            let e = r.field;
            let cross = [
                xs[1] * e[2] - xs[2] * e[1],
                xs[2] * e[0] - xs[0] * e[2],
                xs[0] * e[1] - xs[1] * e[0],
            ];
            Ok(vec3::norm(cross) / (vec3::norm(xs) * vec3::norm(e)))
        },
    );
    b.add("contact.time_pullback", "slice-time-equation", "i*(i(X_t)Ω_e)", Some(1e-11), |c| {
        let x = c.x_t()?;
        Ok(c.ideal.omega.interior(&x.x)?.pullback_slice().max_abs_value())
    });
    b.add(
        "contact.transversality",
        "slice-transversality",
        "i(J)dt vs 2H/(w·∇α), relative",
        Some(1e-10),
        |c| {
            let t = contact::slice_transversality(&c.s, c.nondegenerate()?)?;
            Ok(rel((t.value - t.expected).abs(), t.expected))
        },
    );
    b.add(
        "contact.steady",
        "steady-slice",
        "max(|v·∇α|, |w·∇α|, |[v, w]|) on steady flows",
        Some(1e-11),
        |c| {
            c.require_euler_solution()?;
            let d = contact::slice_dynamics_checks(c.spec, &c.s)?;
            let r = d.steady.ok_or(Error::NotApplicable("unsteady scenario"))?;
            Ok(max_abs(&r))
        },
    );
    b.add(
        "contact.slice_vorticity",
        "slice-vorticity",
        "|w_t + [v, w]| on a slice",
        Some(1e-10),
        |c| {
            c.require_euler_solution()?;
            let d = contact::slice_dynamics_checks(c.spec, &c.s)?;
            Ok(d.unsteady.ok_or(Error::NotApplicable("steady scenario"))?[0])
        },
    );
    b.add(
        "contact.slice_momentum",
        "slice-momentum",
        "|v_t - v×w - ∇α| on a slice",
        Some(1e-10),
        |c| {
            c.require_euler_solution()?;
            let d = contact::slice_dynamics_checks(c.spec, &c.s)?;
            Ok(d.unsteady.ok_or(Error::NotApplicable("steady scenario"))?[1])
        },
    );

    fn bernoulli(c: &Ctx, n: f64) -> Result<contact::BernoulliData> {
        contact::bernoulli_structure(&c.s, c.s.alpha.value(), n)
    }
    b.add("bernoulli.constraint", "bernoulli-reeb", "m v² + 2nH - 1", Some(1e-14), |c| {
        Ok(bernoulli(c, 0.0)?.constraint_defect.abs())
    });
    b.add("bernoulli.normalisation", "bernoulli-reeb", "i(E)ω_t - 1", Some(1e-12), |c| {
        Ok(bernoulli(c, 0.0)?.normalisation_defect.abs())
    });
    b.add("bernoulli.kernel", "bernoulli-reeb", "|i(E)(w·(dx∧dx) - (v×w)·dx∧dt)|", Some(1e-10), |c| {
        Ok(bernoulli(c, 0.0)?.kernel_defect)
    });
    b.add(
        "bernoulli.family",
        "bernoulli-reeb-family",
        "Reeb conditions for n = 1 and the kernel component of E(1) - E(0)",
        Some(1e-10),
        |c| {
            let (b0, b1) = (bernoulli(c, 0.0)?, bernoulli(c, 1.0)?);
            let diff = b1.reeb - b0.reeb;
            let off_kernel = b1.two_form.interior(&diff)?.max_abs_value();
            Ok(b1.kernel_defect.max(b1.normalisation_defect.abs()).max(off_kernel))
        },
    );
    b.add("bernoulli.kernel_rank", "bernoulli-kernel", "|kernel_rank - 2|", Some(0.0), |c| {
        Ok((bernoulli(c, 0.0)?.kernel_rank as f64 - 2.0).abs())
    });
    b.add(
        "bernoulli.non_integrability",
        "bernoulli-non-integrability",
        "ω_t∧(two-form) vs 2H dx∧dy∧dz + (v²w - 2Hv)·(dx∧dx)∧dt",
        Some(1e-12),
        |c| Ok(bernoulli(c, 0.0)?.non_integrability_defect),
    );
    b.add(
        "bernoulli.pullback",
        "bernoulli-pullback",
        "i*Ω_e - i*(two-form) vs i*(-∇α·dx∧dt) on the surface",
        Some(1e-12),
        |c| Ok(bernoulli(c, 0.0)?.pullback_discrepancy),
    );
    b.add(
        "bernoulli.pullback_difference",
        "bernoulli-pullback",
        "largest entry of i*Ω_e - i*(two-form) (diagnostic)",
        None,
        |c| Ok(bernoulli(c, 0.0)?.pullback_difference),
    );
    b.add(
        "bernoulli.transversality",
        "bernoulli-transversality",
        "i(J)dα + ψ + v² + p_t i(J)dt, relative",
        Some(1e-10),
        |c| {
            c.nondegenerate()?;
            let s = &c.s;
            let t = bernoulli(c, 0.0)?.current_transversality.ok_or(Error::Degenerate {
                liouville: c.ideal.liouville.value(),
            })?;
            let j_time = 2.0 * s.helicity.value() / s.liouville_density.value();
            let expected = -s.psi.value() - s.v_sq.value() - s.p_t.value() * j_time;
            Ok(rel((t - expected).abs(), expected))
        },
    );
}

fn symplectisation(b: &mut Builder) {
    fn run(c: &Ctx) -> Result<contact::Symplectisation> {
        contact::symplectise(c.contact_nondegenerate()?, c.s.point[0])
    }
    b.add("symplectisation.closedness", "symplectisation", "d(e^τ(d_Mω + dτ∧ω))", Some(1e-10), |c| {
        Ok(run(c)?.closedness)
    });
    b.add("symplectisation.dilation", "symplectisation", "L_{∂_τ}Ω - Ω", Some(1e-10), |c| {
        Ok(run(c)?.dilation_defect)
    });
    b.add(
        "symplectisation.reeb",
        "symplectisation-reeb",
        "i(E)Ω - σ d(e^τ) with σ = -1",
        Some(1e-10),
        |c| Ok(rel(run(c)?.reeb_defect, c.s.point[0].exp())),
    );
}

fn residuals(b: &mut Builder) {
    b.add("residual.momentum", "momentum-equation", "|v_t - v×w - ∇α - ν∇²v|", Some(1e-11), |c| {
        Ok(c.s.ns_residual().norm)
    });
    b.add(
        "residual.vorticity",
        "vorticity-equation",
        "|w_t - ∇×(v×w) - ν∇²w|",
        Some(1e-10),
        |c| Ok(c.s.vorticity_residual()?.0.norm),
    );
    b.add(
        "residual.vorticity_forms",
        "vorticity-equation",
        "difference of the curl and bracket forms",
        Some(1e-11),
        |c| {
            let (a, bb) = c.s.vorticity_residual()?;
            let d: Vec<f64> = (0..3).map(|i| a.components[i] - bb.components[i]).collect();
            Ok(max_abs(&d))
        },
    );
    b.add("residual.solenoidal", "solenoidal", "max(|∇·v|, |∇·w|)", Some(1e-11), |c| {
        let (dv, dw) = c.s.solenoidal_residuals()?;
        Ok(dv.abs().max(dw.abs()))
    });
    b.add("residual.bernoulli", "bernoulli-equation", "∂_t(v²/2) - v·∇α", Some(1e-10), |c| {
        c.require_inviscid()?;
        Ok(c.s.bernoulli_residual()?.abs())
    });
    b.add(
        "residual.material_alpha",
        "alpha-transport",
        "dα/dt + p_t along ∂_t + v",
        Some(1e-10),
        |c| {
            c.require_inviscid()?;
            Ok(c.s.material_alpha_residual()?.abs())
        },
    );
}
