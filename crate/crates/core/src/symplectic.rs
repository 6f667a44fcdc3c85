//! Symplectic structure of the suspended flow on spacetime.
//!
//! With `β` the time part of the two-form, `Ω = w·(dx∧dx) - β·dx∧dt`, where
//! `β = v×w + ∇α` (ideal) or `β = v×w - ν∇×w` (viscous). Writing `β = v×w + γ`
//! the Liouville coefficient of `½Ω∧Ω` is `-w·γ`, and both regimes share one set
//! of closed formulas in terms of `γ`.

use crate::exterior::linalg::{self, SolveError};
use crate::exterior::{differential, directional, lie_bracket, lie_derivative, KForm, Vector};
use crate::jets::Jet;
use crate::scenarios::FieldSample;
use crate::vec3::{self, Vec3};
use crate::{Error, Result};

/// Pivot floor of the 4×4 solves, relative to the largest matrix entry.
const PIVOT_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Ideal,
    Viscous,
}

#[derive(Debug, Clone)]
pub struct SymplecticData {
    pub theta: KForm<Jet>,
    pub omega: KForm<Jet>,
    /// Coefficient of `dx∧dy∧dz∧dt` in `½Ω∧Ω`.
    pub liouville: Jet,
    pub regime: Regime,
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct HamiltonianField {
    pub x: Vector<Jet>,
    /// `i(X)Ω - β`.
    pub defect: KForm<Jet>,
    pub condition: f64,
}

/// `θ_e = v·dx + ψ(t) dt`.
pub fn theta_e(s: &FieldSample) -> KForm<Jet> {
    KForm::one_form_parts(s.psi.clone(), s.v.clone())
}

/// `γ` in `β = v×w + γ`.
pub fn gamma(s: &FieldSample, regime: Regime) -> Vec3 {
    match regime {
        Regime::Ideal => s.grad_alpha.clone(),
        Regime::Viscous => vec3::scale_f64(&s.curl_w, -s.nu),
    }
}

fn two_form(s: &FieldSample, regime: Regime) -> KForm<Jet> {
    let beta = vec3::add(&s.v_cross_w, &gamma(s, regime));
    KForm::two_form_parts(s.w.clone(), vec3::scale_f64(&beta, -1.0))
}

/// Liouville coefficient of `½Ω∧Ω` in the orientation `dx∧dy∧dz∧dt`.
pub fn liouville(omega: &KForm<Jet>) -> Jet {
    omega.wedge(omega).volume_coefficient().scale(0.5)
}

pub fn omega_e(s: &FieldSample) -> SymplecticData {
    let omega = two_form(s, Regime::Ideal);
    SymplecticData {
        theta: theta_e(s),
        liouville: liouville(&omega),
        omega,
        regime: Regime::Ideal,
        degenerate: s.d_liouville_degenerate(),
    }
}

pub fn omega_nu(s: &FieldSample) -> Result<SymplecticData> {
    if s.nu <= 0.0 {
        return Err(Error::Regime("the viscous two-form needs ν > 0"));
    }
    let omega = two_form(s, Regime::Viscous);
    Ok(SymplecticData {
        theta: theta_e(s),
        liouville: liouville(&omega),
        omega,
        regime: Regime::Viscous,
        degenerate: s.vortical_helicity_degenerate(),
    })
}

pub fn symplectic(s: &FieldSample, regime: Regime) -> Result<SymplecticData> {
    match regime {
        Regime::Ideal => Ok(omega_e(s)),
        Regime::Viscous => omega_nu(s),
    }
}

/// The unique `X` with `i(X)Ω = β`.
pub fn solve_hamiltonian(omega: &KForm<Jet>, beta: &KForm<Jet>) -> Result<HamiltonianField> {
    let vol = liouville(omega).value();
    let scale = omega.max_abs_value().max(1.0);
    if vol.abs() < crate::scenarios::DEGENERACY_EPS * scale * scale {
        return Err(Error::Degenerate { liouville: vol });
    }
    let (x, condition) = match linalg::solve_contraction(omega, beta, PIVOT_FLOOR) {
        Err(Error::Solve(SolveError::Singular { .. })) => return Err(Error::Degenerate { liouville: vol }),
        r => r?,
    };
    let defect = omega.interior(&x)?.sub(beta);
    Ok(HamiltonianField { x, defect, condition })
}

/// Hamiltonian field of the scalar `f`: `i(X_f)Ω = df`.
pub fn hamiltonian_field(data: &SymplecticData, f: &Jet) -> Result<HamiltonianField> {
    solve_hamiltonian(&data.omega, &differential(f)?)
}

/// The suspended velocity field `∂_t + v`.
pub fn suspended_field(s: &FieldSample) -> Vector<Jet> {
    Vector::from_parts(s.v[0].constant_like(1.0), s.v.clone())
}

/// `df/dt = f_t + v·∇f`.
pub fn material_derivative(s: &FieldSample, f: &Jet) -> Result<Jet> {
    Ok(directional(&suspended_field(s), f)?)
}

fn ensure_nondegenerate(s: &FieldSample, regime: Regime) -> Result<Jet> {
    let degenerate = match regime {
        Regime::Ideal => s.d_liouville_degenerate(),
        Regime::Viscous => s.vortical_helicity_degenerate(),
    };
    let d = vec3::dot(&s.w, &gamma(s, regime));
    if degenerate {
        return Err(Error::Degenerate { liouville: -d.value() });
    }
    Ok(d)
}

/// `X_f = (w·γ)⁻¹ [(w·∇f)(∂_t + v) - (df/dt) w + ∇f×γ]`.
pub fn closed_form_xf(s: &FieldSample, regime: Regime, f: &Jet) -> Result<Vector<Jet>> {
    let d = ensure_nondegenerate(s, regime)?;
    let grad_f = vec3::grad(f)?;
    let w_f = vec3::dot(&s.w, &grad_f);
    let dfdt = material_derivative(s, f)?;
    let cross = vec3::cross(&grad_f, &gamma(s, regime));
    let spatial: Vec3 = std::array::from_fn(|i| &(&(&w_f * &s.v[i]) - &(&dfdt * &s.w[i])) + &cross[i]);
    let x = Vector::from_parts(w_f, spatial);
    let inv = d.recip()?;
    Ok(x.scale_by(&inv))
}

/// `J = (w·γ)⁻¹ [2H(∂_t + v) - (ψ + v²) w + v×γ]`.
pub fn closed_form_current(s: &FieldSample, regime: Regime) -> Result<Vector<Jet>> {
    let d = ensure_nondegenerate(s, regime)?;
    let two_h = s.helicity.scale(2.0);
    let coeff_w = &s.psi + &s.v_sq;
    let cross = vec3::cross(&s.v, &gamma(s, regime));
    let spatial: Vec3 = std::array::from_fn(|i| &(&(&two_h * &s.v[i]) - &(&coeff_w * &s.w[i])) + &cross[i]);
    Ok(Vector::from_parts(two_h, spatial).scale_by(&d.recip()?))
}

/// The viscous current in its printed form
/// `-(2νH_w)⁻¹ [2H(∂_t + v) + (p - v²/2) w - ν v×∇×w]`.
pub fn printed_viscous_current(s: &FieldSample) -> Result<Vector<Jet>> {
    ensure_nondegenerate(s, Regime::Viscous)?;
    let two_h = s.helicity.scale(2.0);
    let coeff_w = &s.p - &s.v_sq.scale(0.5);
    let cross = vec3::scale_f64(&vec3::cross(&s.v, &s.curl_w), s.nu);
    let spatial: Vec3 = std::array::from_fn(|i| &(&(&two_h * &s.v[i]) + &(&coeff_w * &s.w[i])) - &cross[i]);
    let pref = s.vortical_helicity.scale(-2.0 * s.nu).recip()?;
    Ok(Vector::from_parts(two_h, spatial).scale_by(&pref))
}

/// Ideal: `i(∂_t + v)Ω_e - dα` with its predicted value `p_t dt`.
/// Viscous: `i(∂_t + v)Ω_ν` with its predicted value `ν∇²v·(dx - v dt)`.
pub fn suspended_defect(s: &FieldSample, data: &SymplecticData) -> Result<(KForm<Jet>, KForm<Jet>)> {
    let contraction = data.omega.interior(&suspended_field(s))?;
    Ok(match data.regime {
        Regime::Ideal => {
            let defect = contraction.sub(&differential(&s.alpha)?);
            let zero = s.p_t.zero_like();
            (defect, KForm::one_form([s.p_t.clone(), zero.clone(), zero.clone(), zero]))
        }
        Regime::Viscous => {
            let lap = vec3::scale_f64(&s.lap_v, s.nu);
            let dt = -vec3::dot(&lap, &s.v);
            (contraction, KForm::one_form_parts(dt, lap))
        }
    })
}

#[derive(Debug, Clone)]
pub struct PoissonValue {
    /// Closed formula.
    pub formula: Jet,
    /// `Ω(X_g, X_f)` from the solved fields.
    pub via_fields: Jet,
}

/// `{f, g} = X_f(g) = (w·γ)⁻¹ [(dg/dt)(w·∇f) - (df/dt)(w·∇g) - (∇f×∇g)·γ]`.
pub fn poisson_formula(s: &FieldSample, regime: Regime, f: &Jet, g: &Jet) -> Result<Jet> {
    let d = ensure_nondegenerate(s, regime)?;
    let (gf, gg) = (vec3::grad(f)?, vec3::grad(g)?);
    let dfdt = material_derivative(s, f)?;
    let dgdt = material_derivative(s, g)?;
    let triple = vec3::dot(&vec3::cross(&gf, &gg), &gamma(s, regime));
    let num = &(&(&dgdt * &vec3::dot(&s.w, &gf)) - &(&dfdt * &vec3::dot(&s.w, &gg))) - &triple;
    Ok(num.try_div(&d)?)
}

pub fn poisson(s: &FieldSample, data: &SymplecticData, f: &Jet, g: &Jet) -> Result<PoissonValue> {
    let formula = poisson_formula(s, data.regime, f, g)?;
    let xf = hamiltonian_field(data, f)?;
    let xg = hamiltonian_field(data, g)?;
    let via_fields = data.omega.pair(&xg.x, &xf.x)?;
    Ok(PoissonValue { formula, via_fields })
}

#[derive(Debug, Clone)]
pub struct CurrentField {
    pub solved: HamiltonianField,
    pub closed_form: Vector<Jet>,
    /// `i(J)θ_e`, zero by skew-symmetry.
    pub theta_contraction: Jet,
}

/// The helicity current: `i(J)Ω = θ_e`.
pub fn helicity_current(s: &FieldSample, data: &SymplecticData) -> Result<CurrentField> {
    let solved = solve_hamiltonian(&data.omega, &data.theta)?;
    let closed_form = closed_form_current(s, data.regime)?;
    let theta_contraction = data.theta.interior(&solved.x)?.coeffs()[0].clone();
    Ok(CurrentField {
        solved,
        closed_form,
        theta_contraction,
    })
}

/// Symplectic divergence: `L_X(½Ω∧Ω) = div_Ω(X) ½Ω∧Ω`.
pub fn symp_div(x: &Vector<Jet>, omega: &KForm<Jet>) -> Result<Jet> {
    let vol = omega.wedge(omega);
    let flux = vol.interior(x)?.d()?;
    Ok(flux.coeffs()[0].try_div(&vol.coeffs()[0])?)
}

/// Helicity balance `(lhs, rhs)`.
///
/// Ideal: `∂_t H + ∇·(Hv - ½(½v² - p)w) = 0`.
/// Viscous: `∂_t H + ∇·(Hv + ν v×∇²v - ½v²w) = -2νH_w`.
pub fn helicity_balance(s: &FieldSample, regime: Regime) -> Result<(f64, f64)> {
    let hv = vec3::scale(&s.v, &s.helicity);
    let (flux, rhs) = match regime {
        Regime::Ideal => {
            let c = (&s.v_sq.scale(0.5) - &s.p).scale(-0.5);
            (vec3::add(&hv, &vec3::scale(&s.w, &c)), 0.0)
        }
        Regime::Viscous => {
            let visc = vec3::scale_f64(&vec3::cross(&s.v, &s.lap_v), s.nu);
            let adv = vec3::scale(&s.w, &s.v_sq.scale(-0.5));
            (vec3::add(&vec3::add(&hv, &visc), &adv), -2.0 * s.nu * s.vortical_helicity.value())
        }
    };
    let lhs = s.helicity.derivative(0)?.value() + vec3::div(&flux)?.value();
    Ok((lhs, rhs))
}

/// Coefficient of `d(θ_e∧Ω_e)`, the balance of the helicity three-form.
pub fn helicity_form_balance(data: &SymplecticData) -> Result<f64> {
    Ok(data.theta.wedge(&data.omega).d()?.volume_coefficient().value())
}

fn scoped_to_steady_pressure(s: &FieldSample, identity: &'static str) -> Result<()> {
    if s.p_t.max_abs() > 0.0 {
        Err(Error::OutOfScope {
            identity,
            instead: "suspended_defect (i(∂_t+v)Ω_e - dα = p_t dt)",
        })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Invariance {
    /// `L_S θ_e - d(ψ + v²/2 - p)`.
    pub relative_invariant: Result<f64>,
    /// `L_S(θ_e∧Ω_e) - d((ψ + v²/2 - p)Ω_e)`.
    pub three_form_invariant: Result<f64>,
    /// `θ_e∧Ω_e - [2H dx∧dy∧dz + ((ψ + v²)w - 2Hv - v×∇α)·(dx∧dx)∧dt]`.
    pub decomposition: f64,
    /// `d(θ_e∧Ω_e) - Ω_e∧Ω_e`.
    pub exactness: f64,
    /// `(∂_t + v)(w·∇α)`.
    pub liouville_transport: Result<f64>,
}

pub fn invariance_suite(s: &FieldSample, data: &SymplecticData) -> Result<Invariance> {
    let sf = suspended_field(s);
    let theta_omega = data.theta.wedge(&data.omega);
    let potential = &(&s.psi + &s.v_sq.scale(0.5)) - &s.p;

    let relative_invariant = scoped_to_steady_pressure(s, "relative invariance of θ_e").and_then(|_| {
        let lhs = lie_derivative(&sf, &data.theta)?;
        Ok(lhs.sub(&differential(&potential)?).max_abs_value())
    });
    let three_form_invariant = scoped_to_steady_pressure(s, "invariance of θ_e∧Ω_e").and_then(|_| {
        let lhs = lie_derivative(&sf, &theta_omega)?;
        let rhs = KForm::scalar(potential.clone()).wedge(&data.omega).d()?;
        Ok(lhs.sub(&rhs).max_abs_value())
    });

    let (scalar, dt_part) = theta_omega.three_form_split();
    let two_h = s.helicity.scale(2.0);
    let coeff_w = &s.psi + &s.v_sq;
    let vxa = vec3::cross(&s.v, &s.grad_alpha);
    let mut decomposition = (scalar.value() - two_h.value()).abs();
    for i in 0..3 {
        let expected = (&(&coeff_w * &s.w[i]) - &(&two_h * &s.v[i])) - vxa[i].clone();
        decomposition = decomposition.max((dt_part[i].value() - expected.value()).abs());
    }

    let exactness = theta_omega.d()?.sub(&data.omega.wedge(&data.omega)).max_abs_value();

    let liouville_transport = scoped_to_steady_pressure(s, "conservation of the Liouville density")
        .and_then(|_| Ok(directional(&sf, &s.liouville_density)?.value()));

    Ok(Invariance {
        relative_invariant,
        three_form_invariant,
        decomposition,
        exactness,
        liouville_transport,
    })
}

fn max_abs_vector(v: &Vector<Jet>) -> f64 {
    v.values().iter().fold(0.0, |m, c| m.max(c.abs()))
}

/// `max|a - b| / max(1, max|a|, max|b|)`; the bracket terms grow like powers
/// of `1/(w·∇α)`, so absolute residuals are meaningless near degeneracy.
fn relative_form_defect(a: &KForm<Jet>, b: &KForm<Jet>) -> f64 {
    a.sub(b).max_abs_value() / a.max_abs_value().max(b.max_abs_value()).max(1.0)
}

/// Brackets between `J`, the Hamiltonian fields and the suspended velocity field.
pub struct BracketAlgebra<'a> {
    pub sample: &'a FieldSample,
    pub data: &'a SymplecticData,
    pub current: Vector<Jet>,
}

impl<'a> BracketAlgebra<'a> {
    pub fn new(sample: &'a FieldSample, data: &'a SymplecticData) -> Result<Self> {
        let current = solve_hamiltonian(&data.omega, &data.theta)?.x;
        Ok(BracketAlgebra { sample, data, current })
    }

    fn j_of(&self, f: &Jet) -> Result<Jet> {
        Ok(directional(&self.current, f)?)
    }

    /// `i([J, X_f])Ω - d(J(f) - f)`, relative.
    pub fn hierarchy_depth1(&self, f: &Jet) -> Result<f64> {
        let xf = hamiltonian_field(self.data, f)?.x;
        let b = lie_bracket(&self.current, &xf)?;
        let lhs = self.data.omega.interior(&b)?;
        let rhs = differential(&(&self.j_of(f)? - f))?;
        Ok(relative_form_defect(&lhs, &rhs))
    }

    /// `i([J, [J, X_f]])Ω - d(J(J(f)) - 2J(f) + f)`, relative.
    pub fn hierarchy_depth2(&self, f: &Jet) -> Result<f64> {
        let xf = hamiltonian_field(self.data, f)?.x;
        let b = lie_bracket(&self.current, &lie_bracket(&self.current, &xf)?)?;
        let lhs = self.data.omega.interior(&b)?;
        let jf = self.j_of(f)?;
        let jjf = self.j_of(&jf)?;
        let rhs = differential(&(&(&jjf - &jf.scale(2.0)) + f))?;
        Ok(relative_form_defect(&lhs, &rhs))
    }

    /// `[X_f, X_g] - X_{X_f(g)}`, relative.
    pub fn isomorphism(&self, f: &Jet, g: &Jet) -> Result<f64> {
        let xf = hamiltonian_field(self.data, f)?.x;
        let xg = hamiltonian_field(self.data, g)?.x;
        let bracket = poisson_formula(self.sample, self.data.regime, f, g)?;
        let xh = hamiltonian_field(self.data, &bracket)?.x;
        let lhs = lie_bracket(&xf, &xg)?;
        let scale = max_abs_vector(&lhs).max(max_abs_vector(&xh)).max(1.0);
        Ok(max_abs_vector(&(lhs - xh)) / scale)
    }

    /// `[[J, X_t], ∂_t + v] + [X_t, [J, ∂_t + v]]`.
    pub fn suspended_symmetry(&self) -> Result<f64> {
        scoped_to_steady_pressure(self.sample, "bracket symmetry of the suspended field")?;
        let xt = hamiltonian_field(self.data, &self.sample.coords[0])?.x;
        let sf = suspended_field(self.sample);
        let a = lie_bracket(&lie_bracket(&self.current, &xt)?, &sf)?;
        let b = lie_bracket(&xt, &lie_bracket(&self.current, &sf)?)?;
        Ok(max_abs_vector(&(a + b)))
    }

    /// `i([J, ∂_t + v])Ω - d(J(α) - α)`, and `J(α) + ψ + v²`.
    pub fn suspended_current_bracket(&self) -> Result<(f64, f64)> {
        scoped_to_steady_pressure(self.sample, "Hamiltonian bracket of J with the suspended field")?;
        let s = self.sample;
        let b = lie_bracket(&self.current, &suspended_field(s))?;
        let ja = self.j_of(&s.alpha)?;
        let lhs = self.data.omega.interior(&b)?;
        let rhs = differential(&(&ja - &s.alpha))?;
        let closed = (&ja + &s.psi) + s.v_sq.clone();
        Ok((lhs.sub(&rhs).max_abs_value(), closed.value()))
    }
}
