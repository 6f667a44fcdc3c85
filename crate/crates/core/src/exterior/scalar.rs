use std::ops::{Add, Mul, Neg, Sub};

use crate::jets::{Jet, JetError};

/// Coefficient ring for forms and vectors: plain reals or jets.
pub trait Scalar:
    Clone
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn value(&self) -> f64;
    fn zero_like(&self) -> Self;
    fn constant_like(&self, c: f64) -> Self;
    fn scale(&self, c: f64) -> Self;
    fn try_div(&self, other: &Self) -> Result<Self, JetError>;
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn zero_like(&self) -> Self {
        0.0
    }
    fn constant_like(&self, c: f64) -> Self {
        c
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn try_div(&self, other: &Self) -> Result<Self, JetError> {
        if *other == 0.0 {
            Err(JetError::DivisionSingularity)
        } else {
            Ok(self / other)
        }
    }
}

impl Scalar for Jet {
    fn value(&self) -> f64 {
        Jet::value(self)
    }
    fn zero_like(&self) -> Self {
        Jet::zero_like(self)
    }
    fn constant_like(&self, c: f64) -> Self {
        Jet::constant_like(self, c)
    }
    fn scale(&self, c: f64) -> Self {
        Jet::scale(self, c)
    }
    fn try_div(&self, other: &Self) -> Result<Self, JetError> {
        Jet::try_div(self, other)
    }
}
