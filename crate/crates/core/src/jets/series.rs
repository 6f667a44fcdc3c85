//! Univariate composition `g(f)` for the elementary functions.
//!
//! With `f = f0 + h` and `h` free of a constant term, `g(f) = Σ_n g⁽ⁿ⁾(f0)/n! hⁿ`
//! terminates at the jet order because `h^(K+1)` truncates to zero.

use super::{Jet, JetError};

impl Jet {
    /// Evaluates `Σ_n taylor[n] (self - self.value())^n` by Horner's rule.
    fn compose(&self, taylor: &[f64]) -> Jet {
        let h = self.add_scalar(-self.value());
        let mut acc = self.constant_like(*taylor.last().unwrap_or(&0.0));
        for &c in taylor.iter().rev().skip(1) {
            acc = (&acc * &h).add_scalar(c);
        }
        acc
    }

    fn with_taylor(&self, nth_derivative: impl Fn(usize) -> f64) -> Jet {
        let mut fact = 1.0;
        let taylor: Vec<f64> = (0..=self.order)
            .map(|n| {
                if n > 0 {
                    fact *= n as f64;
                }
                nth_derivative(n) / fact
            })
            .collect();
        self.compose(&taylor)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.with_taylor(|n| [s, c, -s, -c][n % 4])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.with_taylor(|n| [c, -s, -c, s][n % 4])
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.with_taylor(|_| e)
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a <= 0.0 || !a.is_finite() {
            return Err(JetError::Domain {
                function: "sqrt",
                value: a,
            });
        }
        Ok(self.real_power(a, 0.5))
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        let a = self.value();
        if a == 0.0 {
            return Err(JetError::DivisionSingularity);
        }
        Ok(self.with_taylor(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * falling(n) / a.powi(n as i32 + 1)
        }))
    }

    /// Integer power by repeated squaring; negative exponents go through [`Jet::recip`].
    pub fn powi(&self, n: i32) -> Result<Jet, JetError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.constant_like(1.0);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Real power `self^p`. Integral `p` is exact for any base; otherwise the base
    /// value must be positive.
    pub fn powf(&self, p: f64) -> Result<Jet, JetError> {
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            return self.powi(p as i32);
        }
        let a = self.value();
        if a <= 0.0 {
            return Err(JetError::Domain {
                function: "pow",
                value: a,
            });
        }
        Ok(self.real_power(a, p))
    }

    fn real_power(&self, a: f64, p: f64) -> Jet {
        self.with_taylor(|n| {
            let falling_p: f64 = (0..n).map(|k| p - k as f64).product();
            falling_p * a.powf(p - n as f64)
        })
    }
}

/// n!
fn falling(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use crate::jets::{coefficient_count, Jet, JetError, MultiIndex, Point};
    use proptest::prelude::*;

    const P: Point = [0.3, 0.0, 0.5, -0.7];

    #[test]
    fn sin_of_coordinate_at_zero() {
        let x = Jet::seed(P, 1, 2).unwrap();
        let s = x.sin();
        assert_eq!(s.value(), 0.0);
        assert_eq!(s.partial(MultiIndex::unit(1)).unwrap(), 1.0);
        assert_eq!(s.coeff(MultiIndex::new(0, 2, 0, 0)), 0.0);
    }

    #[test]
    fn exp_of_zero_constant() {
        let z = Jet::constant(P, 3, 0.0);
        assert_eq!(z.exp(), Jet::constant(P, 3, 1.0));
    }

    #[test]
    fn sqrt_domain() {
        let x = Jet::seed(P, 1, 2).unwrap();
        assert!(matches!(x.sqrt(), Err(JetError::Domain { .. })));
        let y = Jet::seed(P, 2, 3).unwrap();
        let r = y.sqrt().unwrap();
        let sq = &r * &r;
        for (a, b) in sq.coeffs().iter().zip(y.coeffs()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn powers() {
        let x = Jet::seed([0.0, 3.0, 0.0, 0.0], 1, 2).unwrap();
        let x2 = x.powi(2).unwrap();
        assert_eq!(x2.value(), 9.0);
        assert_eq!(x2.partial(MultiIndex::unit(1)).unwrap(), 6.0);
        assert_eq!(x2.coeff(MultiIndex::new(0, 2, 0, 0)), 1.0);
        let inv = x.powi(-1).unwrap();
        assert!((inv.partial(MultiIndex::new(0, 2, 0, 0)).unwrap() - 2.0 / 27.0).abs() < 1e-15);
        let h = x.powf(1.5).unwrap();
        let expected = 0.75 * 3.0f64.powf(-0.5);
        assert!((h.partial(MultiIndex::new(0, 2, 0, 0)).unwrap() - expected).abs() < 1e-14);
        let neg = Jet::seed([0.0, -2.0, 0.0, 0.0], 1, 2).unwrap();
        assert!(neg.powf(0.5).is_err());
        assert_eq!(neg.powf(3.0).unwrap().value(), -8.0);
    }

    proptest! {
        #[test]
        fn pythagorean(c in prop::collection::vec(-1.5f64..1.5, coefficient_count(4))) {
            let a = Jet::from_coeffs(P, 4, c).unwrap();
            let s = a.sin();
            let co = a.cos();
            let (ss, cc) = (&s * &s, &co * &co);
            let one = &ss + &cc;
            // Roundoff scale of the cancelling sum.
            let tol = 1e-14 * ss.max_abs().max(cc.max_abs()).max(1.0);
            prop_assert!((one.value() - 1.0).abs() <= 1e-14);
            for x in &one.coeffs()[1..] {
                prop_assert!(x.abs() <= tol, "coefficient {} above {}", x, tol);
            }
        }

        #[test]
        fn exp_recip(c in prop::collection::vec(-1.0f64..1.0, coefficient_count(3))) {
            let a = Jet::from_coeffs(P, 3, c).unwrap();
            let e = a.exp();
            let back = &e * &(-&a).exp();
            prop_assert!((back.value() - 1.0).abs() <= 1e-14);
            prop_assert!(back.coeffs()[1..].iter().all(|x| x.abs() <= 1e-13));
        }
    }
}
