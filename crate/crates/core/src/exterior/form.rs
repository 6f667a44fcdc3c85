use super::Scalar;

/// Index sets of each degree as bitmasks over `{0=t, 1=x, 2=y, 3=z}`, in lexicographic order.
const BASIS: [&[u8]; 5] = [
    &[0b0000],
    &[0b0001, 0b0010, 0b0100, 0b1000],
    &[0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100],
    &[0b0111, 0b1011, 0b1101, 0b1110],
    &[0b1111],
];

fn mask_of(indices: &[usize]) -> Option<u8> {
    let mut mask = 0u8;
    let mut last = None;
    for &i in indices {
        if i >= 4 || last.is_some_and(|l| i <= l) {
            return None;
        }
        mask |= 1 << i;
        last = Some(i);
    }
    Some(mask)
}

fn position(degree: usize, mask: u8) -> usize {
    BASIS[degree]
        .iter()
        .position(|&m| m == mask)
        .expect("mask of matching degree")
}

fn indices_of(mask: u8) -> impl Iterator<Item = usize> {
    (0..4).filter(move |i| mask & (1 << i) != 0)
}

/// Sign of `dx^A ∧ dx^B` relative to the sorted union, for disjoint `A`, `B`.
fn wedge_sign(a: u8, b: u8) -> f64 {
    let inversions: u32 = indices_of(a)
        .map(|i| indices_of(b).filter(|&j| j < i).count() as u32)
        .sum();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn mask_at(k: usize, pos: usize) -> u8 {
    BASIS[k][pos]
}

pub(crate) fn position_of_mask(k: usize, mask: u8) -> usize {
    position(k, mask)
}

/// Number of strictly increasing subsets of size `k` of `{0,1,2,3}`.
pub fn basis_len(k: usize) -> usize {
    BASIS.get(k).map_or(0, |b| b.len())
}

/// Sorted index tuple of the `pos`-th basis element of degree `k`.
pub fn basis_indices(k: usize, pos: usize) -> Vec<usize> {
    indices_of(BASIS[k][pos]).collect()
}

/// Exterior `k`-form at a point, `Σ_I c_I dx^I` over increasing index sets `I`.
///
/// Degrees above four are the zero form and carry no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct KForm<T> {
    degree: usize,
    coeffs: Vec<T>,
}

/// Tangent vector `X^0 ∂_t + X^1 ∂_x + X^2 ∂_y + X^3 ∂_z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<T>(pub [T; 4]);

impl<T: Scalar> Vector<T> {
    pub fn new(components: [T; 4]) -> Self {
        Vector(components)
    }

    /// `X^0 ∂_t + spatial · ∇`.
    pub fn from_parts(time: T, spatial: [T; 3]) -> Self {
        let [a, b, c] = spatial;
        Vector([time, a, b, c])
    }

    pub fn spatial(&self) -> [T; 3] {
        [self.0[1].clone(), self.0[2].clone(), self.0[3].clone()]
    }

    pub fn values(&self) -> [f64; 4] {
        std::array::from_fn(|a| self.0[a].value())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Vector<U> {
        Vector(std::array::from_fn(|a| f(&self.0[a])))
    }

    pub fn scale_by(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }
}

impl<T: Scalar> std::ops::Add for Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Self {
        let Vector(a) = self;
        let Vector(b) = rhs;
        let mut b = b.into_iter();
        Vector(a.map(|x| x + b.next().unwrap()))
    }
}

impl<T: Scalar> std::ops::Sub for Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Self {
        let Vector(a) = self;
        let Vector(b) = rhs;
        let mut b = b.into_iter();
        Vector(a.map(|x| x - b.next().unwrap()))
    }
}

impl<T: Scalar> std::ops::Neg for Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Self {
        Vector(self.0.map(|x| -x))
    }
}

impl<T: Scalar> KForm<T> {
    pub fn zero(degree: usize, template: &T) -> Self {
        KForm {
            degree,
            coeffs: vec![template.zero_like(); basis_len(degree)],
        }
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<T>) -> Self {
        assert_eq!(coeffs.len(), basis_len(degree), "coefficient count for degree {degree}");
        KForm { degree, coeffs }
    }

    pub fn scalar(f: T) -> Self {
        KForm {
            degree: 0,
            coeffs: vec![f],
        }
    }

    /// `Σ_a c_a dx^a`.
    pub fn one_form(c: [T; 4]) -> Self {
        KForm {
            degree: 1,
            coeffs: c.to_vec(),
        }
    }

    /// `c_t dt + c · dx`.
    pub fn one_form_parts(dt: T, spatial: [T; 3]) -> Self {
        let [a, b, c] = spatial;
        Self::one_form([dt, a, b, c])
    }

    /// `u · (dx ∧ dx) + b · dx ∧ dt`, where `u·(dx∧dx) = u₁ dy∧dz + u₂ dz∧dx + u₃ dx∧dy`
    /// and `b·dx∧dt = (b₁ dx + b₂ dy + b₃ dz) ∧ dt`.
    pub fn two_form_parts(u: [T; 3], b: [T; 3]) -> Self {
        let [u1, u2, u3] = u;
        let [b1, b2, b3] = b;
        // storage order: {0,1} {0,2} {0,3} {1,2} {1,3} {2,3}
        KForm {
            degree: 2,
            coeffs: vec![-b1, -b2, -b3, u3, -u2, u1],
        }
    }

    /// Inverse of [`KForm::two_form_parts`]: `(u, b)`.
    pub fn two_form_split(&self) -> ([T; 3], [T; 3]) {
        assert_eq!(self.degree, 2);
        let c = &self.coeffs;
        (
            [c[5].clone(), -c[4].clone(), c[3].clone()],
            [-c[0].clone(), -c[1].clone(), -c[2].clone()],
        )
    }

    /// `s dx∧dy∧dz + u · (dx∧dx) ∧ dt`.
    pub fn three_form_parts(s: T, u: [T; 3]) -> Self {
        let [u1, u2, u3] = u;
        // storage order: {0,1,2} {0,1,3} {0,2,3} {1,2,3}
        KForm {
            degree: 3,
            coeffs: vec![u3, -u2, u1, s],
        }
    }

    /// Inverse of [`KForm::three_form_parts`]: `(s, u)`.
    pub fn three_form_split(&self) -> (T, [T; 3]) {
        assert_eq!(self.degree, 3);
        let c = &self.coeffs;
        (
            c[3].clone(),
            [c[2].clone(), -c[1].clone(), c[0].clone()],
        )
    }

    /// Coefficient of `dx∧dy∧dz∧dt`, the reporting orientation for top forms.
    /// Storage uses `dt∧dx∧dy∧dz`, which differs by an odd permutation.
    pub fn volume_coefficient(&self) -> T {
        assert_eq!(self.degree, 4);
        -self.coeffs[0].clone()
    }

    pub fn from_volume_coefficient(c: T) -> Self {
        KForm {
            degree: 4,
            coeffs: vec![-c],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient on a strictly increasing index tuple.
    pub fn coeff(&self, indices: &[usize]) -> Option<&T> {
        if indices.len() != self.degree {
            return None;
        }
        let mask = mask_of(indices)?;
        Some(&self.coeffs[position(self.degree, mask)])
    }

    pub fn is_zero_degree(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.coeffs.iter().map(Scalar::value).collect()
    }

    /// Largest coefficient magnitude at the anchor.
    pub fn max_abs_value(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.value().abs()))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> KForm<U> {
        KForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Scalar, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<KForm<U>, E> {
        Ok(KForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn scale_by(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        KForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "subtracting forms of different degree");
        KForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    /// `self ∧ other`; graded antisymmetric, zero above degree four.
    pub fn wedge(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        if degree > 4 {
            return KForm {
                degree,
                coeffs: Vec::new(),
            };
        }
        let template = self.coeffs.first().or(other.coeffs.first()).expect("non-empty form");
        let mut out = KForm::zero(degree, template);
        for (i, a) in self.coeffs.iter().enumerate() {
            let ma = BASIS[self.degree][i];
            for (j, b) in other.coeffs.iter().enumerate() {
                let mb = BASIS[other.degree][j];
                if ma & mb != 0 {
                    continue;
                }
                let k = position(degree, ma | mb);
                let term = a.clone() * b.clone();
                out.coeffs[k] = if wedge_sign(ma, mb) > 0.0 {
                    out.coeffs[k].clone() + term
                } else {
                    out.coeffs[k].clone() - term
                };
            }
        }
        out
    }

    /// Contraction in the first slot, `(i(X)ω)(Y₂, …) = ω(X, Y₂, …)`.
    pub fn interior(&self, x: &Vector<T>) -> Result<KForm<T>, FormError> {
        if self.degree == 0 {
            return Err(FormError::InteriorOfScalar);
        }
        let degree = self.degree - 1;
        if self.coeffs.is_empty() {
            return Ok(KForm {
                degree,
                coeffs: Vec::new(),
            });
        }
        let mut out = KForm::zero(degree, &self.coeffs[0]);
        for (pos, c) in self.coeffs.iter().enumerate() {
            let mask = BASIS[self.degree][pos];
            for (slot, a) in indices_of(mask).enumerate() {
                let k = position(degree, mask & !(1 << a));
                let term = c.clone() * x.0[a].clone();
                out.coeffs[k] = if slot % 2 == 0 {
                    out.coeffs[k].clone() + term
                } else {
                    out.coeffs[k].clone() - term
                };
            }
        }
        Ok(out)
    }

    /// `ω(X, Y)` for a two-form.
    pub fn pair(&self, x: &Vector<T>, y: &Vector<T>) -> Result<T, FormError> {
        if self.degree != 2 {
            return Err(FormError::Degree {
                expected: 2,
                found: self.degree,
            });
        }
        let f = self.interior(x)?.interior(y)?;
        Ok(f.coeffs[0].clone())
    }

    /// Full antisymmetric coefficient matrix `M[a][b]` of a two-form, with
    /// `ω = Σ_{a<b} M[a][b] dx^a ∧ dx^b`.
    pub fn matrix(&self) -> Result<[[T; 4]; 4], FormError> {
        if self.degree != 2 {
            return Err(FormError::Degree {
                expected: 2,
                found: self.degree,
            });
        }
        let zero = self.coeffs[0].zero_like();
        let mut m: [[T; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| zero.clone()));
        for (pos, c) in self.coeffs.iter().enumerate() {
            let idx: Vec<usize> = indices_of(BASIS[2][pos]).collect();
            m[idx[0]][idx[1]] = c.clone();
            m[idx[1]][idx[0]] = -c.clone();
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormError {
    #[error("interior product of a zero-form")]
    InteriorOfScalar,
    #[error("expected a {expected}-form, found degree {found}")]
    Degree { expected: usize, found: usize },
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dx(a: usize) -> KForm<f64> {
        let mut c = [0.0; 4];
        c[a] = 1.0;
        KForm::one_form(c)
    }

    #[test]
    fn dx_wedge_dy() {
        let f = dx(1).wedge(&dx(2));
        assert_eq!(f.coeff(&[1, 2]), Some(&1.0));
        assert_eq!(f.values().iter().filter(|c| **c != 0.0).count(), 1);
        assert!(dx(1).wedge(&dx(1)).values().iter().all(|c| *c == 0.0));
    }

    #[test]
    fn helicity_as_wedge() {
        let v = [0.3, -1.2, 2.0];
        let w = [1.1, 0.4, -0.6];
        let vdx = KForm::one_form_parts(0.0, v);
        let wdd = KForm::two_form_parts(w, [0.0; 3]);
        let top = vdx.wedge(&wdd);
        let (s, u) = top.three_form_split();
        let vw: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        assert!((s - vw).abs() < 1e-15);
        assert!(u.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn interior_conventions() {
        let w = [0.5, -2.0, 1.5];
        let v = [1.0, 0.25, -0.75];
        let wdd = KForm::two_form_parts(w, [0.0; 3]);
        let self_contract = wdd.interior(&Vector::from_parts(0.0, w)).unwrap();
        assert!(self_contract.values().iter().all(|c| c.abs() < 1e-15));

        let c = wdd.interior(&Vector::from_parts(0.0, v)).unwrap();
        let wxv = [
            w[1] * v[2] - w[2] * v[1],
            w[2] * v[0] - w[0] * v[2],
            w[0] * v[1] - w[1] * v[0],
        ];
        assert_eq!(c.values(), vec![0.0, wxv[0], wxv[1], wxv[2]]);

        let b = [2.0, -1.0, 3.0];
        let bdxdt = KForm::two_form_parts([0.0; 3], b);
        let dt = Vector::new([1.0, 0.0, 0.0, 0.0]);
        assert_eq!(bdxdt.interior(&dt).unwrap().values(), vec![0.0, -2.0, 1.0, -3.0]);
    }

    #[test]
    fn interior_of_scalar_rejected() {
        assert_eq!(
            KForm::scalar(1.0).interior(&Vector::new([1.0; 4])),
            Err(FormError::InteriorOfScalar)
        );
    }

    #[test]
    fn top_degree_and_overflow() {
        let vol = dx(1).wedge(&dx(2)).wedge(&dx(3)).wedge(&dx(0));
        assert_eq!(vol.coeffs().len(), 1);
        assert_eq!(vol.volume_coefficient(), 1.0);
        let over = vol.wedge(&dx(1));
        assert_eq!(over.degree(), 5);
        assert!(over.is_zero_degree());
    }

    #[test]
    fn split_roundtrip() {
        let f = KForm::two_form_parts([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]);
        assert_eq!(f.two_form_split(), ([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]));
        let g = KForm::three_form_parts(7.0, [1.0, 2.0, 3.0]);
        assert_eq!(g.three_form_split(), (7.0, [1.0, 2.0, 3.0]));
    }

    fn arb_form(k: usize) -> impl Strategy<Value = KForm<f64>> {
        prop::collection::vec(-3.0f64..3.0, basis_len(k)).prop_map(move |c| KForm::from_coeffs(k, c))
    }

    fn arb_vec() -> impl Strategy<Value = Vector<f64>> {
        prop::array::uniform4(-3.0f64..3.0).prop_map(Vector)
    }

    fn close(a: &KForm<f64>, b: &KForm<f64>, tol: f64) -> bool {
        a.degree() == b.degree() && a.values().iter().zip(b.values()).all(|(x, y)| (x - y).abs() <= tol)
    }

    proptest! {
        #[test]
        fn graded_antisymmetry(
            ka in 0usize..=4,
            kb in 0usize..=4,
            ca in prop::collection::vec(-3.0f64..3.0, 6),
            cb in prop::collection::vec(-3.0f64..3.0, 6),
        ) {
            let a = KForm::from_coeffs(ka, ca[..basis_len(ka)].to_vec());
            let b = KForm::from_coeffs(kb, cb[..basis_len(kb)].to_vec());
            let ab = a.wedge(&b);
            let ba = b.wedge(&a);
            let sign = if (ka * kb) % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!(close(&ab, &ba.map(|c| c * sign), 1e-13));
        }

        #[test]
        fn wedge_associative(a in arb_form(1), b in arb_form(2), c in arb_form(1)) {
            prop_assert!(close(&a.wedge(&b).wedge(&c), &a.wedge(&b.wedge(&c)), 1e-13));
        }

        #[test]
        fn wedge_bilinear(a in arb_form(1), b in arb_form(2), c in arb_form(2), s in -2.0f64..2.0) {
            let lhs = a.wedge(&b.add(&c.map(|x| x * s)));
            let rhs = a.wedge(&b).add(&a.wedge(&c).map(|x| x * s));
            prop_assert!(close(&lhs, &rhs, 1e-13));
        }

        #[test]
        fn interior_anticommutes(w in arb_form(2), x in arb_vec(), y in arb_vec()) {
            let xy = w.interior(&y).unwrap().interior(&x).unwrap();
            let yx = w.interior(&x).unwrap().interior(&y).unwrap();
            prop_assert!((xy.values()[0] + yx.values()[0]).abs() < 1e-13);
            let xx = w.interior(&x).unwrap().interior(&x).unwrap();
            prop_assert!(xx.values()[0].abs() < 1e-13);
        }

        #[test]
        fn interior_is_antiderivation(a in arb_form(1), b in arb_form(2), x in arb_vec()) {
            let lhs = a.wedge(&b).interior(&x).unwrap();
            let rhs = a.interior(&x).unwrap().wedge(&b).sub(&a.wedge(&b.interior(&x).unwrap()));
            prop_assert!(close(&lhs, &rhs, 1e-12));
        }
    }
}
