//! Fraction-free (Bareiss) elimination for the barycentric system
//!
//! ```text
//! [ alpha_1 ... alpha_m ]           [ beta ]
//! [   1    ...    1     ] * lambda = [  1   ]
//! ```
//!
//! All entries are integers, so forward elimination stays in `BigInt` and
//! only the final back substitution produces rationals.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::polycore::ExponentVector;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarycentricError {
    /// The outer points are affinely dependent.
    Dependent,
    /// `beta` is not in the affine hull of the outer points.
    Inconsistent,
}

/// Forward elimination in place; returns `Err(Dependent)` if the coefficient
/// block has rank below its column count. `cols` counts coefficient columns;
/// any further columns are carried along as right-hand sides.
fn bareiss(matrix: &mut [Vec<BigInt>], cols: usize) -> Result<(), BarycentricError> {
    let rows = matrix.len();
    let width = matrix.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let pivot = (c..rows).find(|&r| !matrix[r][c].is_zero());
        let Some(p) = pivot else {
            return Err(BarycentricError::Dependent);
        };
        matrix.swap(c, p);
        for i in c + 1..rows {
            for j in c + 1..width {
                let v = (&matrix[c][c] * &matrix[i][j] - &matrix[i][c] * &matrix[c][j]) / &prev;
                matrix[i][j] = v;
            }
            matrix[i][c] = BigInt::zero();
        }
        prev = matrix[c][c].clone();
    }
    Ok(())
}

fn system(outer: &[ExponentVector], rhs: Option<&ExponentVector>) -> Vec<Vec<BigInt>> {
    let n = outer.first().map_or(0, ExponentVector::dim);
    let m = outer.len();
    let width = m + usize::from(rhs.is_some());
    let mut matrix = vec![vec![BigInt::zero(); width]; n + 1];
    for (j, alpha) in outer.iter().enumerate() {
        for i in 0..n {
            matrix[i][j] = BigInt::from(alpha[i]);
        }
        matrix[n][j] = BigInt::from(1);
    }
    if let Some(beta) = rhs {
        for i in 0..n {
            matrix[i][m] = BigInt::from(beta[i]);
        }
        matrix[n][m] = BigInt::from(1);
    }
    matrix
}

pub fn affinely_independent(points: &[ExponentVector]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = points[0].dim();
    if points.len() > n + 1 {
        return false;
    }
    let mut matrix = system(points, None);
    bareiss(&mut matrix, points.len()).is_ok()
}

/// The unique `lambda` with `sum lambda_i = 1` and `sum lambda_i alpha_i = beta`.
pub fn barycentric_weights(
    outer: &[ExponentVector],
    inner: &ExponentVector,
) -> Result<Vec<Rational>, BarycentricError> {
    let m = outer.len();
    if m == 0 || m > inner.dim() + 1 {
        return Err(BarycentricError::Dependent);
    }
    let mut matrix = system(outer, Some(inner));
    bareiss(&mut matrix, m)?;
    if matrix[m..].iter().any(|row| !row[m].is_zero()) {
        return Err(BarycentricError::Inconsistent);
    }
    let mut lambda = vec![Rational::zero(); m];
    for k in (0..m).rev() {
        let mut acc = Rational::from_integer(matrix[k][m].clone());
        for j in k + 1..m {
            acc -= Rational::from_integer(matrix[k][j].clone()) * &lambda[j];
        }
        lambda[k] = acc / Rational::from_integer(matrix[k][k].clone());
    }
    Ok(lambda)
}
