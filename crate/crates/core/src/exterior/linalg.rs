//! Dense direct solves over reals or jets.

use super::form::{KForm, Vector};
use super::Scalar;
use crate::jets::JetError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("singular system (pivot magnitude {pivot:e})")]
    Singular { pivot: f64 },
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting on the values.
///
/// A pivot whose magnitude falls below `pivot_floor` times the largest entry is
/// reported as singular.
pub fn solve<T: Scalar, const N: usize>(
    a: &[[T; N]; N],
    b: &[T; N],
    pivot_floor: f64,
) -> Result<[T; N], SolveError> {
    let mut m: Vec<Vec<T>> = a.iter().map(|row| row.to_vec()).collect();
    let mut rhs: Vec<T> = b.to_vec();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |s, x| s.max(x.value().abs()))
        .max(f64::MIN_POSITIVE);

    for col in 0..N {
        let pivot_row = (col..N)
            .max_by(|&i, &j| {
                m[i][col]
                    .value()
                    .abs()
                    .total_cmp(&m[j][col].value().abs())
            })
            .expect("non-empty range");
        let pivot = m[pivot_row][col].value();
        if !(pivot.abs() > pivot_floor * scale) {
            return Err(SolveError::Singular { pivot: pivot.abs() });
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for row in col + 1..N {
            let factor = m[row][col].try_div(&m[col][col])?;
            for k in col..N {
                let delta = factor.clone() * m[col][k].clone();
                m[row][k] = m[row][k].clone() - delta;
            }
            let delta = factor * rhs[col].clone();
            rhs[row] = rhs[row].clone() - delta;
        }
    }

    let mut x: Vec<T> = rhs.clone();
    for row in (0..N).rev() {
        let mut acc = rhs[row].clone();
        for k in row + 1..N {
            acc = acc - m[row][k].clone() * x[k].clone();
        }
        x[row] = acc.try_div(&m[row][row])?;
    }
    Ok(x.try_into().unwrap_or_else(|_| unreachable!()))
}

/// 1-norm condition number of a real matrix, `‖A‖₁ ‖A⁻¹‖₁`.
pub fn condition_number<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    let norm1 = |m: &[[f64; N]; N]| {
        (0..N)
            .map(|j| (0..N).map(|i| m[i][j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let mut inv = [[0.0; N]; N];
    for j in 0..N {
        let mut e = [0.0; N];
        e[j] = 1.0;
        match solve(a, &e, 0.0) {
            Ok(col) => (0..N).for_each(|i| inv[i][j] = col[i]),
            Err(_) => return f64::INFINITY,
        }
    }
    norm1(a) * norm1(&inv)
}

/// Coefficient matrix of `X ↦ i(X)ω` for a two-form: row `c` holds the
/// coefficients of `dx^c`.
pub fn contraction_matrix<T: Scalar>(omega: &KForm<T>) -> Result<[[T; 4]; 4], super::FormError> {
    let m = omega.matrix()?;
    // (i(X)ω)_c = Σ_a M[a][c] X^a
    Ok(std::array::from_fn(|c| std::array::from_fn(|a| m[a][c].clone())))
}

/// The unique `X` with `i(X)ω = β`, plus the condition number of the system.
pub fn solve_contraction<T: Scalar>(
    omega: &KForm<T>,
    beta: &KForm<T>,
    pivot_floor: f64,
) -> Result<(Vector<T>, f64), crate::Error> {
    if beta.degree() != 1 {
        return Err(super::FormError::Degree {
            expected: 1,
            found: beta.degree(),
        }
        .into());
    }
    let a = contraction_matrix(omega)?;
    let rhs: [T; 4] = std::array::from_fn(|c| beta.coeffs()[c].clone());
    let x = solve(&a, &rhs, pivot_floor)?;
    let values: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].value()));
    Ok((Vector(x), condition_number(&values)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Jet;

    #[test]
    fn solves_small_system() {
        let a = [[0.0, 2.0, 1.0], [1.0, -1.0, 0.0], [3.0, 0.0, -2.0]];
        let b = [3.0, 0.0, 1.0];
        let x = solve(&a, &b, 1e-14).unwrap();
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[i][j] * x[j]).sum::<f64>() - b[i];
            assert!(r.abs() < 1e-14);
        }
    }

    #[test]
    fn singular_system_reported() {
        let a = [[1.0, 2.0], [2.0, 4.0]];
        assert!(matches!(solve(&a, &[1.0, 1.0], 1e-12), Err(SolveError::Singular { .. })));
        assert!(condition_number(&[[1.0, 0.0], [0.0, 1e-3]]) > 999.0);
    }

    #[test]
    fn jet_solve_differentiates_solution() {
        // A(x) = [[x, 1], [0, 2]], b = [1, 2]  =>  X = ((1 - 1)/x, 1) = (0, 1)
        // with b = [x^2, 2]: X0 = (x^2 - 1)/x
        let p = [0.0, 2.0, 0.0, 0.0];
        let x = Jet::seed(p, 1, 3).unwrap();
        let one = x.constant_like(1.0);
        let two = x.constant_like(2.0);
        let a = [[x.clone(), one.clone()], [x.zero_like(), two.clone()]];
        let b = [&x * &x, two.clone()];
        let sol = solve(&a, &b, 1e-14).unwrap();
        // d/dx (x - 1/x) = 1 + 1/x^2
        let d = sol[0].partial(crate::jets::MultiIndex::unit(1)).unwrap();
        assert!((d - 1.25).abs() < 1e-14);
        assert!((sol[1].value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn contraction_solve_reproduces_rhs() {
        let omega = KForm::two_form_parts([0.3, -1.0, 2.0], [1.5, 0.2, -0.4]);
        let beta = KForm::one_form([1.0, -2.0, 0.5, 0.25]);
        let (x, cond) = solve_contraction(&omega, &beta, 1e-14).unwrap();
        let back = omega.interior(&x).unwrap();
        for (a, b) in back.values().iter().zip(beta.values()) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(cond.is_finite() && cond >= 1.0);
    }
}
