//! Exterior algebra and calculus on spacetime with coordinates `(t, x, y, z)`.
//!
//! Forms are stored on strictly increasing index subsets in lexicographic order
//! with index 0 the time axis. Under the interior product the first slot is
//! contracted, and `(dx^a ∧ dx^b)(X, Y) = X^a Y^b - X^b Y^a`.

mod calculus;
mod form;
pub mod linalg;
mod scalar;

pub use calculus::{
    differential, directional, ext_deriv_at, ext_derivative, lie_bracket, lie_bracket_at,
    lie_deriv_at, lie_derivative, pullback_slice_at, Coords, FormField, VectorField, VectorFn,
};
pub use form::{basis_indices, basis_len, FormError, KForm, Vector};
pub use scalar::Scalar;

use nalgebra::DMatrix;

/// Threshold on singular values, relative to the largest, below which a
/// direction counts as kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Restriction {
    /// `M[i][j] = ω(b_i, b_j)`.
    pub matrix: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub kernel_rank: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RestrictError {
    #[error("basis vectors are linearly dependent (rank {rank} of {len})")]
    RankDeficient { rank: usize, len: usize },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Restricts a two-form to the span of `basis` and counts its kernel.
pub fn restrict(omega: &KForm<f64>, basis: &[Vector<f64>]) -> Result<Restriction, RestrictError> {
    let n = basis.len();
    let b = DMatrix::from_fn(4, n, |i, j| basis[j].0[i]);
    let rank = b.clone().svd(false, false).rank(KERNEL_THRESHOLD * b.norm().max(f64::MIN_POSITIVE));
    if rank < n {
        return Err(RestrictError::RankDeficient { rank, len: n });
    }
    let mut matrix = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            matrix[i][j] = omega.pair(&basis[i], &basis[j])?;
        }
    }
    let m = DMatrix::from_fn(n, n, |i, j| matrix[i][j]);
    let singular_values: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    let largest = singular_values.iter().copied().fold(0.0, f64::max);
    let kernel_rank = singular_values
        .iter()
        .filter(|&&s| largest == 0.0 || s < KERNEL_THRESHOLD * largest)
        .count();
    Ok(Restriction {
        matrix,
        singular_values,
        kernel_rank,
    })
}

/// The coordinate basis `∂_t, ∂_x, ∂_y, ∂_z`.
pub fn coordinate_basis() -> Vec<Vector<f64>> {
    (0..4)
        .map(|a| {
            let mut c = [0.0; 4];
            c[a] = 1.0;
            Vector(c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nondegenerate_form_has_trivial_kernel() {
        let omega = KForm::two_form_parts([0.0, 0.0, 1.0], [0.0, 0.0, 2.0]);
        let r = restrict(&omega, &coordinate_basis()).unwrap();
        assert_eq!(r.kernel_rank, 0);
        assert_eq!(r.matrix[0][3], -omega.matrix().unwrap()[3][0]);
    }

    #[test]
    fn rank_two_form() {
        // w·(dx∧dx) alone annihilates ∂_t and w·∇
        let omega = KForm::two_form_parts([0.3, -0.5, 1.2], [0.0; 3]);
        assert_eq!(restrict(&omega, &coordinate_basis()).unwrap().kernel_rank, 2);
    }

    #[test]
    fn zero_form_kernel_is_everything() {
        let omega = KForm::zero(2, &0.0);
        assert_eq!(restrict(&omega, &coordinate_basis()).unwrap().kernel_rank, 4);
    }

    #[test]
    fn dependent_basis_rejected() {
        let b = vec![Vector([1.0, 0.0, 0.0, 0.0]), Vector([2.0, 0.0, 0.0, 0.0])];
        let omega = KForm::zero(2, &0.0);
        assert!(matches!(restrict(&omega, &b), Err(RestrictError::RankDeficient { .. })));
    }
}
