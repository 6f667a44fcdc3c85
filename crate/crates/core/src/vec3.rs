//! Spatial vector calculus on triples of jets.

use crate::jets::{Jet, JetError};

pub type Vec3 = [Jet; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> Jet {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    std::array::from_fn(|i| &a[i] + &b[i])
}

pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    std::array::from_fn(|i| &a[i] - &b[i])
}

pub fn scale(a: &Vec3, c: &Jet) -> Vec3 {
    std::array::from_fn(|i| &a[i] * c)
}

pub fn scale_f64(a: &Vec3, c: f64) -> Vec3 {
    std::array::from_fn(|i| a[i].scale(c))
}

pub fn grad(f: &Jet) -> Result<Vec3, JetError> {
    Ok([f.derivative(1)?, f.derivative(2)?, f.derivative(3)?])
}

pub fn time_derivative(a: &Vec3) -> Result<Vec3, JetError> {
    Ok([a[0].derivative(0)?, a[1].derivative(0)?, a[2].derivative(0)?])
}

pub fn div(a: &Vec3) -> Result<Jet, JetError> {
    Ok(&(&a[0].derivative(1)? + &a[1].derivative(2)?) + &a[2].derivative(3)?)
}

pub fn curl(a: &Vec3) -> Result<Vec3, JetError> {
    Ok([
        &a[2].derivative(2)? - &a[1].derivative(3)?,
        &a[0].derivative(3)? - &a[2].derivative(1)?,
        &a[1].derivative(1)? - &a[0].derivative(2)?,
    ])
}

pub fn laplacian(f: &Jet) -> Result<Jet, JetError> {
    let mut acc: Option<Jet> = None;
    for axis in 1..4 {
        let d2 = f.derivative(axis)?.derivative(axis)?;
        acc = Some(match acc {
            Some(a) => &a + &d2,
            None => d2,
        });
    }
    Ok(acc.expect("three axes"))
}

pub fn vector_laplacian(a: &Vec3) -> Result<Vec3, JetError> {
    Ok([laplacian(&a[0])?, laplacian(&a[1])?, laplacian(&a[2])?])
}

/// `(a·∇) f`.
pub fn advect(a: &Vec3, f: &Jet) -> Result<Jet, JetError> {
    Ok(dot(a, &grad(f)?))
}

/// `[a, b] = (a·∇)b - (b·∇)a`.
pub fn bracket(a: &Vec3, b: &Vec3) -> Result<Vec3, JetError> {
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        out.push(&advect(a, &b[i])? - &advect(b, &a[i])?);
    }
    Ok(out.try_into().expect("three components"))
}

pub fn values(a: &Vec3) -> [f64; 3] {
    [a[0].value(), a[1].value(), a[2].value()]
}

pub fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn div_curl_and_curl_grad_vanish() {
        let [_, x, y, z] = Jet::coordinates([0.2, 0.5, -0.4, 1.3], 3).unwrap();
        let a = [(&x * &y).sin(), (&y * &z).exp(), &(&x * &x) * &z];
        assert!(div(&curl(&a).unwrap()).unwrap().max_abs() < 1e-13);
        let f = (&x * &z).cos();
        let cg = curl(&grad(&f).unwrap()).unwrap();
        assert!(cg.iter().all(|c| c.max_abs() < 1e-13));
    }

    #[test]
    fn bracket_of_rotation_and_axis() {
        let [_, x, y, _] = Jet::coordinates([0.0, 0.3, 0.7, 0.0], 2).unwrap();
        let rot = [-&y, x.clone(), x.zero_like()];
        let axis = [x.zero_like(), x.zero_like(), x.constant_like(1.0)];
        assert!(values(&bracket(&rot, &axis).unwrap()).iter().all(|c| *c == 0.0));
    }
}
