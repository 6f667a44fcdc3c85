//! Truncated multivariate Taylor polynomials ("jets") over spacetime `(t, x, y, z)`.
//!
//! A [`Jet`] carries the Taylor coefficients `∂^k f / k!` of a scalar field at an
//! anchor point, up to a total order. Arithmetic is exact truncated-polynomial
//! arithmetic, so every derivative read back with [`Jet::partial`] is free of
//! discretisation error.
//!
//! Jets of different orders may be combined with the operator traits; the result
//! keeps the smaller order. [`Jet::arith`] is the strict variant that rejects
//! mismatched operands.

mod index;
mod series;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

pub use index::coefficient_count;
use index::tables;

/// Highest jet order supported by the precomputed tables.
pub const MAX_ORDER: usize = 6;

/// Smallest order accepted by [`Jet::seed`]; second derivatives are always needed.
pub const MIN_SEED_ORDER: usize = 2;

/// Default working order: three derivatives suffice for every viscous check.
pub const DEFAULT_ORDER: usize = 3;

/// A spacetime point `(t, x, y, z)`.
pub type Point = [f64; 4];

/// Axis names in storage order.
pub const AXES: [&str; 4] = ["t", "x", "y", "z"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("jet order {0} is invalid (seeds need order >= {MIN_SEED_ORDER}, at most {MAX_ORDER})")]
    InvalidOrder(usize),
    #[error("derivative of total order {requested} requested from a jet of order {available}")]
    OrderExceeded { requested: usize, available: usize },
    #[error("jets are anchored at different points")]
    AnchorMismatch,
    #[error("jet orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("division by a jet whose value is zero")]
    DivisionSingularity,
    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },
    #[error("axis {0} is out of range 0..4")]
    InvalidAxis(usize),
}

/// Exponents `(k_t, k_x, k_y, k_z)` of a partial derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(pub [u8; 4]);

impl MultiIndex {
    pub const fn new(kt: u8, kx: u8, ky: u8, kz: u8) -> Self {
        MultiIndex([kt, kx, ky, kz])
    }

    pub fn unit(axis: usize) -> Self {
        let mut e = [0; 4];
        e[axis] = 1;
        MultiIndex(e)
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    /// `k! = k_t! k_x! k_y! k_z!`
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&k| (1..=k as u32).map(f64::from).product::<f64>())
            .product()
    }
}

/// Binary operations accepted by [`Jet::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, PartialEq)]
pub struct Jet {
    anchor: Point,
    order: usize,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("anchor", &self.anchor)
            .field("order", &self.order)
            .field("value", &self.value())
            .finish()
    }
}

impl Jet {
    /// Constant field `c` anchored at `anchor`. Any order up to [`MAX_ORDER`] is allowed.
    pub fn constant(anchor: Point, order: usize, c: f64) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} above {MAX_ORDER}");
        let mut coeffs = vec![0.0; coefficient_count(order)];
        coeffs[0] = c;
        Jet {
            anchor,
            order,
            coeffs,
        }
    }

    /// Jet of the coordinate function `x^axis` at `point`.
    pub fn seed(point: Point, axis: usize, order: usize) -> Result<Self, JetError> {
        if !(MIN_SEED_ORDER..=MAX_ORDER).contains(&order) {
            return Err(JetError::InvalidOrder(order));
        }
        if axis >= 4 {
            return Err(JetError::InvalidAxis(axis));
        }
        let mut j = Jet::constant(point, order, point[axis]);
        j.coeffs[tables().position(&MultiIndex::unit(axis).0)] = 1.0;
        Ok(j)
    }

    /// The four coordinate jets `(t, x, y, z)` at `point`.
    pub fn coordinates(point: Point, order: usize) -> Result<[Jet; 4], JetError> {
        Ok([
            Jet::seed(point, 0, order)?,
            Jet::seed(point, 1, order)?,
            Jet::seed(point, 2, order)?,
            Jet::seed(point, 3, order)?,
        ])
    }

    /// Builds a jet from Taylor coefficients in graded order.
    pub fn from_coeffs(anchor: Point, order: usize, coeffs: Vec<f64>) -> Result<Self, JetError> {
        if order > MAX_ORDER {
            return Err(JetError::InvalidOrder(order));
        }
        if coeffs.len() != coefficient_count(order) {
            return Err(JetError::OrderMismatch(order, coeffs.len()));
        }
        Ok(Jet {
            anchor,
            order,
            coeffs,
        })
    }

    pub fn zero_like(&self) -> Self {
        Jet::constant(self.anchor, self.order, 0.0)
    }

    pub fn constant_like(&self, c: f64) -> Self {
        Jet::constant(self.anchor, self.order, c)
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Taylor coefficients in graded order.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Monomial exponents matching [`Jet::coeffs`] position by position.
    pub fn monomials(&self) -> &'static [[u8; 4]] {
        &tables().monomials[..self.coeffs.len()]
    }

    /// Taylor coefficient `∂^k f / k!`; zero beyond the jet order.
    pub fn coeff(&self, k: MultiIndex) -> f64 {
        if k.order() > self.order {
            return 0.0;
        }
        self.coeffs[tables().position(&k.0)]
    }

    /// The derivative `∂^k f` at the anchor.
    pub fn partial(&self, k: MultiIndex) -> Result<f64, JetError> {
        if k.order() > self.order {
            return Err(JetError::OrderExceeded {
                requested: k.order(),
                available: self.order,
            });
        }
        Ok(k.factorial() * self.coeffs[tables().position(&k.0)])
    }

    /// First partials at the anchor, `(∂_t, ∂_x, ∂_y, ∂_z)`.
    pub fn gradient_value(&self) -> [f64; 4] {
        std::array::from_fn(|a| self.coeff(MultiIndex::unit(a)))
    }

    /// The jet of `∂f/∂x^axis`, one order lower.
    pub fn derivative(&self, axis: usize) -> Result<Jet, JetError> {
        if axis >= 4 {
            return Err(JetError::InvalidAxis(axis));
        }
        if self.order == 0 {
            return Err(JetError::OrderExceeded {
                requested: 1,
                available: 0,
            });
        }
        let t = tables();
        let order = self.order - 1;
        let coeffs = t.monomials[..t.len(order)]
            .iter()
            .map(|e| {
                let mut up = *e;
                up[axis] += 1;
                f64::from(up[axis]) * self.coeffs[t.position(&up)]
            })
            .collect();
        Ok(Jet {
            anchor: self.anchor,
            order,
            coeffs,
        })
    }

    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        Jet {
            anchor: self.anchor,
            order,
            coeffs: self.coeffs[..coefficient_count(order)].to_vec(),
        }
    }

    /// Drops every coefficient that involves `axis`, i.e. the restriction of the
    /// field to the hyperplane `x^axis = anchor[axis]`, extended constantly.
    pub fn freeze_axis(&self, axis: usize) -> Jet {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.monomials())
            .map(|(&c, e)| if e[axis] == 0 { c } else { 0.0 })
            .collect();
        Jet {
            anchor: self.anchor,
            order: self.order,
            coeffs,
        }
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet {
            anchor: self.anchor,
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add_scalar(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Strict binary arithmetic: operands must share anchor and order.
    pub fn arith(op: ArithOp, a: &Jet, b: &Jet) -> Result<Jet, JetError> {
        if a.anchor != b.anchor {
            return Err(JetError::AnchorMismatch);
        }
        if a.order != b.order {
            return Err(JetError::OrderMismatch(a.order, b.order));
        }
        match op {
            ArithOp::Add => Ok(a + b),
            ArithOp::Sub => Ok(a - b),
            ArithOp::Mul => Ok(a * b),
            ArithOp::Div => a.try_div(b),
        }
    }

    pub fn try_div(&self, other: &Jet) -> Result<Jet, JetError> {
        Ok(self * &other.recip()?)
    }

    fn combine(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        check_anchor(self, other);
        let order = self.order.min(other.order);
        let coeffs = self.coeffs[..coefficient_count(order)]
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Jet {
            anchor: self.anchor,
            order,
            coeffs,
        }
    }

    fn product(&self, other: &Jet) -> Jet {
        check_anchor(self, other);
        let order = self.order.min(other.order);
        let t = tables();
        let mut coeffs = vec![0.0; coefficient_count(order)];
        for &(i, j, k) in &t.products[..t.product_end[order]] {
            coeffs[k as usize] += self.coeffs[i as usize] * other.coeffs[j as usize];
        }
        Jet {
            anchor: self.anchor,
            order,
            coeffs,
        }
    }
}

fn check_anchor(a: &Jet, b: &Jet) {
    assert!(
        a.anchor == b.anchor,
        "jets anchored at {:?} and {:?} cannot be combined",
        a.anchor,
        b.anchor
    );
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                let f: fn(&Jet, &Jet) -> Jet = $body;
                f(self, rhs)
            }
        }
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.combine(b, |x, y| x + y));
forward_binop!(Sub, sub, |a, b| a.combine(b, |x, y| x - y));
forward_binop!(Mul, mul, |a, b| a.product(b));

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        self.add_scalar(rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        self.add_scalar(rhs)
    }
}
