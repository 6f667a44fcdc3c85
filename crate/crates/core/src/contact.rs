//! Contact structures on time slices and Bernoulli surfaces, Reeb fields and
//! symplectisation.

use crate::exterior::linalg;
use crate::exterior::{self, differential, lie_derivative, KForm, Vector};
use crate::jets::{Jet, Point};
use crate::scenarios::{FieldSample, ScenarioSpec};
use crate::symplectic::{self, SymplecticData};
use crate::vec3;
use crate::Result;
#[cfg(test)]
use crate::Error;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ContactError {
    #[error("helicity density vanishes at the slice point; no Reeb field")]
    NoReeb,
    #[error("α - b has no sign change on the segment")]
    LevelNotFound,
    #[error("Reeb coefficients undefined: v² = 0")]
    ReebUndefined,
    #[error("point is not on the level: |α - b| = {0:e}")]
    OffLevel(f64),
}

/// Contact data of the slice `t = c` through a sample point.
#[derive(Debug, Clone)]
pub struct SliceContactData {
    pub c: f64,
    /// `ω = i*θ_e = v(c, x)·dx`.
    pub omega: KForm<Jet>,
    /// `d_M ω = w·(dx∧dx)`.
    pub d_omega: KForm<Jet>,
    /// Coefficient of `dx∧dy∧dz` in `ω∧dω`.
    pub contact_coeff: f64,
    pub helicity: f64,
    pub degenerate: bool,
}

pub fn slice_contact(s: &FieldSample) -> Result<SliceContactData> {
    let omega = symplectic::theta_e(s).pullback_slice();
    let d_omega = omega.d()?;
    let (contact, _) = omega.wedge(&d_omega).three_form_split();
    Ok(SliceContactData {
        c: s.point[0],
        omega,
        d_omega,
        contact_coeff: contact.value(),
        helicity: s.helicity.value(),
        degenerate: s.helicity_degenerate(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceReeb {
    pub field: [f64; 3],
    /// `i(E)ω - 1`.
    pub normalisation_defect: f64,
    /// `max |i(E)dω|`.
    pub kernel_defect: f64,
}

/// Solves `i(E)ω = 1`, `i(E)dω = 0` on the slice through the normal equations of
/// the overdetermined 4×3 system.
pub fn slice_reeb(d: &SliceContactData) -> Result<SliceReeb> {
    if d.degenerate {
        return Err(ContactError::NoReeb.into());
    }
    let omega = d.omega.map(Jet::value);
    let d_omega = d.d_omega.map(Jet::value);
    let m = linalg::contraction_matrix(&d_omega)?;
    let mut rows = [[0.0; 3]; 4];
    let mut rhs = [0.0; 4];
    for a in 0..3 {
        rows[0][a] = omega.coeffs()[a + 1];
    }
    rhs[0] = 1.0;
    for c in 0..3 {
        for a in 0..3 {
            rows[c + 1][a] = m[c + 1][a + 1];
        }
    }
    let mut normal = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            normal[i][j] = (0..4).map(|r| rows[r][i] * rows[r][j]).sum();
        }
        b[i] = (0..4).map(|r| rows[r][i] * rhs[r]).sum();
    }
    let field = linalg::solve(&normal, &b, 1e-14)?;
    let e = Vector([0.0, field[0], field[1], field[2]]);
    let normalisation_defect = omega.interior(&e)?.coeffs()[0] - 1.0;
    let kernel_defect = d_omega.interior(&e)?.max_abs_value();
    Ok(SliceReeb {
        field,
        normalisation_defect,
        kernel_defect,
    })
}

/// `w / (2H)`, the Reeb field implied by `v·w = 2H` and `w×w = 0`.
pub fn reeb_closed_form(s: &FieldSample) -> [f64; 3] {
    let two_h = 2.0 * s.helicity.value();
    vec3::values(&s.w).map(|c| c / two_h)
}

/// `(-2/H) w`, the slice Reeb field as printed.
pub fn reeb_printed(s: &FieldSample) -> [f64; 3] {
    let h = s.helicity.value();
    vec3::values(&s.w).map(|c| -2.0 * c / h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transversality {
    /// `i(J)dt`.
    pub value: f64,
    /// `2H / (w·∇α)`.
    pub expected: f64,
    /// `i(J)θ_e`.
    pub theta_contraction: f64,
}

pub fn slice_transversality(s: &FieldSample, data: &SymplecticData) -> Result<Transversality> {
    let current = symplectic::helicity_current(s, data)?;
    Ok(Transversality {
        value: current.solved.x.0[0].value(),
        expected: 2.0 * s.helicity.value() / s.liouville_density.value(),
        theta_contraction: current.theta_contraction.value(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceDynamics {
    /// `i*(i(X_t)Ω_e)`.
    pub pulled_time_equation: Option<f64>,
    /// Steady flows: `(v·∇α, w·∇α, |[v, w]|)`.
    pub steady: Option<[f64; 3]>,
    /// Unsteady flows: `|w_t + [v, w]|` and the slice momentum residual
    /// `|v_t - v×w - ∇α|`.
    pub unsteady: Option<[f64; 2]>,
    /// `|[v, w]|` on its own.
    pub commutator: f64,
}

pub fn slice_dynamics_checks(spec: &ScenarioSpec, s: &FieldSample) -> Result<SliceDynamics> {
    let data = symplectic::omega_e(s);
    let pulled_time_equation = if data.degenerate {
        None
    } else {
        let xt = symplectic::hamiltonian_field(&data, &s.coords[0])?;
        Some(data.omega.interior(&xt.x)?.pullback_slice().max_abs_value())
    };
    let commutator = vec3::norm(vec3::values(&vec3::bracket(&s.v, &s.w)?));
    let (steady, unsteady) = if spec.is_steady() {
        let va = vec3::dot(&s.v, &s.grad_alpha).value();
        (Some([va, s.liouville_density.value(), commutator]), None)
    } else {
        let (_, bracket_form) = s.vorticity_residual()?;
        (None, Some([bracket_form.norm, s.euler_residual().norm]))
    };
    Ok(SliceDynamics {
        pulled_time_equation,
        steady,
        unsteady,
        commutator,
    })
}

/// Finds a point of `α = b` on the segment `origin + s·direction`, `s ∈ [0, 1]`,
/// by bisection followed by Newton polish along the segment.
pub fn seek_level(spec: &ScenarioSpec, b: f64, origin: Point, direction: Point) -> Result<Point> {
    let at = |s: f64| -> Point { std::array::from_fn(|i| origin[i] + s * direction[i]) };
    let alpha = |s: f64| -> Result<(f64, f64)> {
        let sample = spec.evaluate(at(s), crate::jets::MIN_SEED_ORDER)?;
        let g = sample.alpha.gradient_value();
        let slope = (0..4).map(|i| g[i] * direction[i]).sum();
        Ok((sample.alpha.value() - b, slope))
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let (mut f_lo, _) = alpha(lo)?;
    let (f_hi, _) = alpha(hi)?;
    if f_lo == 0.0 {
        return Ok(at(lo));
    }
    if f_hi == 0.0 {
        return Ok(at(hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(ContactError::LevelNotFound.into());
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let (f_mid, _) = alpha(mid)?;
        if f_mid == 0.0 {
            return Ok(at(mid));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-6 {
            break;
        }
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..8 {
        let (f, slope) = alpha(s)?;
        if f.abs() <= 1e-14 * b.abs().max(1.0) || slope == 0.0 {
            break;
        }
        s = (s - f / slope).clamp(lo, hi);
    }
    Ok(at(s))
}

#[derive(Debug, Clone)]
pub struct BernoulliData {
    pub level: f64,
    pub point: Point,
    /// `ω_t = v·dx` on spacetime.
    pub omega_t: KForm<f64>,
    /// `w·(dx∧dx) - (v×w)·dx∧dt`.
    pub two_form: KForm<f64>,
    pub kernel_rank: usize,
    /// Kernel of the honest pull-back of `Ω_e` to the tangent space of the surface.
    pub pulled_kernel_rank: usize,
    /// Largest entry of `i*Ω_e - i*(two_form) - i*(-∇α·dx∧dt)` on the surface.
    pub pullback_discrepancy: f64,
    /// Largest entry of `i*Ω_e - i*(two_form)`.
    pub pullback_difference: f64,
    /// `ω_t ∧ two_form = s dx∧dy∧dz + u·(dx∧dx)∧dt`.
    pub non_integrability: (f64, [f64; 3]),
    /// Defect of `(2H, v²w - 2Hv)`.
    pub non_integrability_defect: f64,
    pub reeb: Vector<f64>,
    /// `(m, n)` in `E = m(∂_t + v) + n w`.
    pub reeb_coefficients: (f64, f64),
    /// `m v² + 2nH - 1`.
    pub constraint_defect: f64,
    /// `i(E)ω_t - 1`.
    pub normalisation_defect: f64,
    /// `max |i(E) two_form|`.
    pub kernel_defect: f64,
    /// `i(J)dα`, when `Ω_e` is non-degenerate.
    pub current_transversality: Option<f64>,
}

/// Orthonormal basis of the annihilator of `g` in `R⁴`.
pub fn annihilator_basis(g: [f64; 4]) -> Vec<Vector<f64>> {
    let norm = g.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut basis: Vec<[f64; 4]> = vec![];
    if norm > 0.0 {
        basis.push(g.map(|c| c / norm));
    }
    for e in 0..4 {
        let mut u = [0.0; 4];
        u[e] = 1.0;
        for b in &basis {
            let p: f64 = (0..4).map(|i| u[i] * b[i]).sum();
            for i in 0..4 {
                u[i] -= p * b[i];
            }
        }
        let n = u.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-8 {
            basis.push(u.map(|c| c / n));
        }
        if basis.len() == 4 {
            break;
        }
    }
    let skip = usize::from(norm > 0.0);
    basis.into_iter().skip(skip).map(Vector).collect()
}

/// Pointwise structure of the Bernoulli surface `α = level` through the sample.
pub fn bernoulli_structure(s: &FieldSample, level: f64, n: f64) -> Result<BernoulliData> {
    let mismatch = (s.alpha.value() - level).abs();
    if mismatch > 1e-10 * level.abs().max(1.0) {
        return Err(ContactError::OffLevel(mismatch).into());
    }
    let v = vec3::values(&s.v);
    let w = vec3::values(&s.w);
    let vxw = vec3::values(&s.v_cross_w);
    let h = s.helicity.value();
    let v2 = s.v_sq.value();

    let omega_t = KForm::one_form([0.0, v[0], v[1], v[2]]);
    let two_form = KForm::two_form_parts(w, vxw.map(|c| -c));
    let kernel_rank = exterior::restrict(&two_form, &exterior::coordinate_basis())?.kernel_rank;

    let omega_e = symplectic::omega_e(s);
    let omega_val = omega_e.omega.map(Jet::value);
    let tangent = annihilator_basis(s.alpha.gradient_value());
    let pulled = exterior::restrict(&omega_val, &tangent)?;
    let pulled_two = exterior::restrict(&two_form, &tangent)?;
    let ga = vec3::values(&s.grad_alpha);
    let grad_alpha_part = KForm::two_form_parts([0.0; 3], ga.map(|c| -c));
    let predicted = exterior::restrict(&grad_alpha_part, &tangent)?;
    let mut pullback_discrepancy: f64 = 0.0;
    let mut pullback_difference: f64 = 0.0;
    for i in 0..tangent.len() {
        for j in 0..tangent.len() {
            let diff = pulled.matrix[i][j] - pulled_two.matrix[i][j];
            pullback_difference = pullback_difference.max(diff.abs());
            pullback_discrepancy = pullback_discrepancy.max((diff - predicted.matrix[i][j]).abs());
        }
    }

    let (scalar, dt_part) = omega_t.wedge(&two_form).three_form_split();
    let mut non_integrability_defect = (scalar - 2.0 * h).abs();
    for i in 0..3 {
        non_integrability_defect = non_integrability_defect.max((dt_part[i] - (v2 * w[i] - 2.0 * h * v[i])).abs());
    }

    if v2 == 0.0 {
        return Err(ContactError::ReebUndefined.into());
    }
    let m = (1.0 - 2.0 * n * h) / v2;
    let reeb = Vector([m, m * v[0] + n * w[0], m * v[1] + n * w[1], m * v[2] + n * w[2]]);
    let constraint_defect = m * v2 + 2.0 * n * h - 1.0;
    let normalisation_defect = omega_t.interior(&reeb)?.coeffs()[0] - 1.0;
    let kernel_defect = two_form.interior(&reeb)?.max_abs_value();

    let current_transversality = if omega_e.degenerate {
        None
    } else {
        let j = symplectic::helicity_current(s, &omega_e)?.solved.x;
        Some(differential(&s.alpha)?.interior(&j)?.coeffs()[0].value())
    };

    Ok(BernoulliData {
        level,
        point: s.point,
        omega_t,
        two_form,
        kernel_rank,
        pulled_kernel_rank: pulled.kernel_rank,
        pullback_discrepancy,
        pullback_difference,
        non_integrability: (scalar, dt_part),
        non_integrability_defect,
        reeb,
        reeb_coefficients: (m, n),
        constraint_defect,
        normalisation_defect,
        kernel_defect,
        current_transversality,
    })
}

/// Sign `σ` in `i(E)Ω = σ d(e^t)` for the slice Reeb field.
pub const SYMPLECTISATION_SIGN: f64 = -1.0;

#[derive(Debug, Clone)]
pub struct Symplectisation {
    /// `Ω = e^τ (d_M ω + dτ∧ω)` on `R × M_c`.
    pub form: KForm<Jet>,
    pub closedness: f64,
    /// `max |L_{∂_τ}Ω - Ω|`.
    pub dilation_defect: f64,
    /// `max |i(E)Ω - σ d(e^τ)|` with `σ` = [`SYMPLECTISATION_SIGN`].
    pub reeb_defect: f64,
    pub sign: f64,
}

/// Symplectisation of the slice contact form at symplectisation time `tau`,
/// using the sample's spatial point.
pub fn symplectise(d: &SliceContactData, tau: f64) -> Result<Symplectisation> {
    let reeb = slice_reeb(d)?;
    let c0 = &d.omega.coeffs()[1];
    // the time coordinate of the jets plays the role of τ, shifted to `tau`
    let t = Jet::seed(c0.anchor(), 0, c0.order())?;
    let e_tau = t.add_scalar(tau - d.c).exp();
    let zero = t.zero_like();
    let spatial: [Jet; 3] = std::array::from_fn(|i| d.omega.coeffs()[i + 1].clone());
    let omega = KForm::one_form_parts(zero.clone(), spatial);
    let dt = KForm::one_form([t.constant_like(1.0), zero.clone(), zero.clone(), zero.clone()]);
    let inner = d.d_omega.add(&dt.wedge(&omega));
    let form = inner.scale_by(&e_tau);

    let closedness = form.d()?.max_abs_value();
    let d_tau = Vector([t.constant_like(1.0), zero.clone(), zero.clone(), zero.clone()]);
    let dilation_defect = lie_derivative(&d_tau, &form)?.sub(&form).max_abs_value();

    let fv = form.map(Jet::value);
    let e = Vector([0.0, reeb.field[0], reeb.field[1], reeb.field[2]]);
    let lhs = fv.interior(&e)?;
    let et = tau.exp();
    let rhs = KForm::one_form([SYMPLECTISATION_SIGN * et, 0.0, 0.0, 0.0]);
    let reeb_defect = lhs.sub(&rhs).max_abs_value();
    Ok(Symplectisation {
        form,
        closedness,
        dilation_defect,
        reeb_defect,
        sign: SYMPLECTISATION_SIGN,
    })
}
