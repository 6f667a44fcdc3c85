//! Differential operators on jet-valued forms and vector fields.
//!
//! A form whose coefficients are jets is the germ of a form field at the anchor,
//! so `d`, Lie derivatives and brackets act directly on it. Each derivative
//! consumes one jet order.

use super::form::{basis_indices, basis_len, mask_at, position_of_mask, KForm, Vector};
use crate::jets::{Jet, JetError, Point};
use crate::Error;

/// Coordinate jets `(t, x, y, z)` seeded at a common anchor.
pub type Coords = [Jet; 4];

/// Exterior derivative `dω = Σ_I Σ_a ∂_a ω_I dx^a ∧ dx^I`.
pub fn ext_derivative(form: &KForm<Jet>) -> Result<KForm<Jet>, JetError> {
    let degree = form.degree() + 1;
    if form.is_zero_degree() || degree > 4 {
        return Ok(KForm::from_coeffs(degree, Vec::new()));
    }
    let template = form.coeffs()[0].derivative(0)?;
    let mut coeffs = vec![template.zero_like(); basis_len(degree)];
    for (pos, c) in form.coeffs().iter().enumerate() {
        let mask = mask_at(form.degree(), pos);
        for a in (0..4).filter(|a| mask & (1 << a) == 0) {
            let da = c.derivative(a)?;
            let before = (mask & ((1u8 << a) - 1)).count_ones();
            let k = position_of_mask(degree, mask | (1 << a));
            coeffs[k] = if before % 2 == 0 {
                &coeffs[k] + &da
            } else {
                &coeffs[k] - &da
            };
        }
    }
    Ok(KForm::from_coeffs(degree, coeffs))
}

impl KForm<Jet> {
    pub fn d(&self) -> Result<KForm<Jet>, JetError> {
        ext_derivative(self)
    }

    /// Pull-back to the time slice through the anchor: drops every `dt` term and
    /// freezes `t`, so that `d` of the result is the spatial derivative `d_M`.
    pub fn pullback_slice(&self) -> KForm<Jet> {
        let coeffs = (0..self.coeffs().len())
            .map(|pos| {
                let c = &self.coeffs()[pos];
                if basis_indices(self.degree(), pos).contains(&0) {
                    c.zero_like()
                } else {
                    c.freeze_axis(0)
                }
            })
            .collect();
        KForm::from_coeffs(self.degree(), coeffs)
    }

    /// Truncates every coefficient to at most `order`.
    pub fn truncate(&self, order: usize) -> KForm<Jet> {
        self.map(|c| c.truncate(order))
    }

    /// Lowest coefficient order.
    pub fn order(&self) -> usize {
        self.coeffs().iter().map(Jet::order).min().unwrap_or(0)
    }
}

/// Directional derivative `X(f) = X^a ∂_a f`.
pub fn directional(x: &Vector<Jet>, f: &Jet) -> Result<Jet, JetError> {
    let mut acc = f.derivative(0)?.zero_like();
    for a in 0..4 {
        acc = &acc + &(&x.0[a] * &f.derivative(a)?);
    }
    Ok(acc)
}

/// Differential of a scalar field as a one-form.
pub fn differential(f: &Jet) -> Result<KForm<Jet>, JetError> {
    KForm::scalar(f.clone()).d()
}

/// Cartan formula `L_X ω = i(X) dω + d(i(X) ω)`; for zero-forms `L_X f = X(f)`.
pub fn lie_derivative(x: &Vector<Jet>, form: &KForm<Jet>) -> Result<KForm<Jet>, Error> {
    if form.degree() == 0 {
        return Ok(KForm::scalar(directional(x, &form.coeffs()[0])?));
    }
    let di = form.interior(x)?.d()?;
    if form.degree() == 4 {
        return Ok(di);
    }
    let id = form.d()?.interior(x)?;
    Ok(id.add(&di))
}

/// Lie bracket `[X, Y]^a = X(Y^a) - Y(X^a)`.
pub fn lie_bracket(x: &Vector<Jet>, y: &Vector<Jet>) -> Result<Vector<Jet>, JetError> {
    let mut out = Vec::with_capacity(4);
    for a in 0..4 {
        out.push(&directional(x, &y.0[a])? - &directional(y, &x.0[a])?);
    }
    Ok(Vector(out.try_into().expect("four components")))
}

/// A form field: coordinate jets in, jet-valued form out.
pub trait FormField: Sync {
    fn eval(&self, coords: &Coords) -> Result<KForm<Jet>, Error>;
}

/// A vector field: coordinate jets in, jet-valued vector out.
pub trait VectorField: Sync {
    fn eval(&self, coords: &Coords) -> Result<Vector<Jet>, Error>;
}

impl<F> FormField for F
where
    F: Fn(&Coords) -> Result<KForm<Jet>, Error> + Sync,
{
    fn eval(&self, coords: &Coords) -> Result<KForm<Jet>, Error> {
        self(coords)
    }
}

/// Wrapper marking a closure as a [`VectorField`].
pub struct VectorFn<F>(pub F);

impl<F> VectorField for VectorFn<F>
where
    F: Fn(&Coords) -> Result<Vector<Jet>, Error> + Sync,
{
    fn eval(&self, coords: &Coords) -> Result<Vector<Jet>, Error> {
        (self.0)(coords)
    }
}

/// `dω` of a form field at `point`, evaluated with jets of the given order.
pub fn ext_deriv_at(field: &dyn FormField, point: Point, order: usize) -> Result<KForm<Jet>, Error> {
    let coords = Jet::coordinates(point, order)?;
    Ok(field.eval(&coords)?.d()?)
}

/// `L_X ω` at `point`.
pub fn lie_deriv_at(
    x: &dyn VectorField,
    form: &dyn FormField,
    point: Point,
    order: usize,
) -> Result<KForm<Jet>, Error> {
    let coords = Jet::coordinates(point, order)?;
    lie_derivative(&x.eval(&coords)?, &form.eval(&coords)?)
}

/// `[X, Y]` at `point`.
pub fn lie_bracket_at(
    x: &dyn VectorField,
    y: &dyn VectorField,
    point: Point,
    order: usize,
) -> Result<Vector<Jet>, Error> {
    let coords = Jet::coordinates(point, order)?;
    Ok(lie_bracket(&x.eval(&coords)?, &y.eval(&coords)?)?)
}

/// Pull-back of a form field to the slice `t = c` at the spatial point `x`.
pub fn pullback_slice_at(
    field: &dyn FormField,
    c: f64,
    x: [f64; 3],
    order: usize,
) -> Result<KForm<Jet>, Error> {
    let coords = Jet::coordinates([c, x[0], x[1], x[2]], order)?;
    Ok(field.eval(&coords)?.pullback_slice())
}
