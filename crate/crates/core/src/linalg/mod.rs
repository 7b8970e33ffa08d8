//! Exact dense linear algebra: determinants, row Gramians, the determinant
//! preserving transforms and the closed-form bound formulas.

mod bounds;
mod det;
mod exponent;
mod matrix;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

pub use bounds::{hadamard_row_bound, prop01_bound, ryser_bound, BoundValue, RyserParams, BOUND_TOLERANCE};
pub use det::{abs_det, det_exact, det_integer};
pub(crate) use det::det_small;
pub use exponent::{maximize_exponent_on_grid, sparse_bound_exponent, ExponentPoint, GridMaximum};
pub use matrix::{dot, ExactMatrix};
pub(crate) use matrix::int;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("entry ({row}, {col}) is not 0 or 1")]
    NotZeroOne { row: usize, col: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// Gram matrix of the rows: entry `(i, j)` is the scalar product of rows `i` and `j`.
pub fn row_gram(m: &ExactMatrix) -> ExactMatrix {
    let n = m.rows();
    let mut g = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = dot(m.row(i), m.row(j));
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        }
    }
    g
}

pub fn gram_det(m: &ExactMatrix) -> BigRational {
    det_exact(&row_gram(m)).expect("Gram matrices are square")
}

/// Maps a 0/1 matrix `A` of order `n` to a ±1 matrix `B` of order `n + 1`
/// with `det B = 2^n det A`.
///
/// `B` is obtained from `[[1, 1ᵀ], [0, A]]` by scaling the lower rows by -2
/// and adding the top row to each of them. That gives `(-2)^n det A`; for odd
/// `n` the first column is negated to fix the sign.
pub fn to_pm_one(a: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    a.check_zero_one()?;
    let n = a.rows();
    let first = if n % 2 == 1 { int(-1) } else { int(1) };
    Ok(ExactMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (_, 0) => first.clone(),
        (0, _) => int(1),
        _ => {
            if a[(i - 1, j - 1)].is_one() {
                int(-1)
            } else {
                int(1)
            }
        }
    }))
}

/// Replaces column `j` by `col j - col (j-1)` for `j = n-1, ..., 1`.
///
/// Rows of a matrix whose ones form at most `k` blocks become rows with at
/// most `2k` nonzeros that alternate between `1` and `-1`.
pub fn column_diff_transform(a: &ExactMatrix) -> ExactMatrix {
    let mut b = a.clone();
    for i in 0..a.rows() {
        for j in (1..a.cols()).rev() {
            let prev = a[(i, j - 1)].clone();
            b[(i, j)] -= prev;
        }
    }
    b
}

/// Inverse of [`column_diff_transform`]: running prefix sums along each row.
pub fn prefix_sum_columns(b: &ExactMatrix) -> ExactMatrix {
    let mut c = b.clone();
    for i in 0..b.rows() {
        for j in 1..b.cols() {
            let prev = c[(i, j - 1)].clone();
            c[(i, j)] += prev;
        }
    }
    c
}

/// Exact `base^exp` for small integers.
pub(crate) fn ipow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub(crate) fn is_power_of_two(k: usize) -> bool {
    k >= 1 && k & (k - 1) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, Zero};
    use rand::{Rng, SeedableRng};

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> ExactMatrix {
        let a: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(lo..=hi)).collect())
            .collect();
        ExactMatrix::from_i64_rows(&a)
    }

    #[test]
    fn gram_of_single_edge() {
        let m = ExactMatrix::from_i64_rows(&[[1, 1]]);
        assert_eq!(row_gram(&m), ExactMatrix::from_i64_rows(&[[2]]));
        assert_eq!(gram_det(&m), int(2));
    }

    #[test]
    fn gram_of_two_edge_star() {
        let m = ExactMatrix::from_i64_rows(&[[1, 1, 0], [1, 0, 1]]);
        assert_eq!(row_gram(&m), ExactMatrix::from_i64_rows(&[[2, 1], [1, 2]]));
        assert_eq!(gram_det(&m), int(3));
    }

    #[test]
    fn gram_of_triangle() {
        let m = ExactMatrix::from_i64_rows(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]]);
        assert_eq!(
            row_gram(&m),
            ExactMatrix::from_i64_rows(&[[2, 1, 1], [1, 2, 1], [1, 1, 2]])
        );
        assert_eq!(gram_det(&m), int(4));
    }

    #[test]
    fn gram_det_is_square_of_det() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let m = random_matrix(&mut rng, n, n, -2, 2);
            let d = det_exact(&m).unwrap();
            assert_eq!(gram_det(&m), &d * &d);
        }
    }

    #[test]
    fn pm_one_transform_small_cases() {
        let one = ExactMatrix::from_i64_rows(&[[1]]);
        let b = to_pm_one(&one).unwrap();
        assert_eq!((b.rows(), b.cols()), (2, 2));
        assert_eq!(det_exact(&b).unwrap(), int(2));

        let b = to_pm_one(&ExactMatrix::identity(2)).unwrap();
        assert!(b.is_plus_minus_one());
        assert_eq!(det_exact(&b).unwrap(), int(4));

        let b = to_pm_one(&ExactMatrix::zeros(2, 2)).unwrap();
        assert_eq!(det_exact(&b).unwrap(), int(0));
    }

    #[test]
    fn pm_one_transform_rejects_non_binary() {
        let m = ExactMatrix::from_i64_rows(&[[1, 2], [0, 1]]);
        assert_eq!(
            to_pm_one(&m),
            Err(LinalgError::NotZeroOne { row: 0, col: 1 })
        );
    }

    #[test]
    fn pm_one_transform_scales_determinant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let n = rng.gen_range(1..=7);
            let a = random_matrix(&mut rng, n, n, 0, 1);
            let b = to_pm_one(&a).unwrap();
            assert!(b.is_plus_minus_one());
            let expected = det_exact(&a).unwrap() * BigRational::from_integer(ipow(2, n as u32));
            assert_eq!(det_exact(&b).unwrap(), expected);
        }
    }

    #[test]
    fn column_difference_of_staircase() {
        let a = ExactMatrix::from_i64_rows(&[[1, 1, 1], [0, 1, 1], [0, 0, 1]]);
        let b = column_diff_transform(&a);
        assert_eq!(b, ExactMatrix::from_i64_rows(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        for i in 0..3 {
            assert!(b.row_nonzeros(i) <= 2);
        }
        assert_eq!(det_exact(&b).unwrap(), det_exact(&a).unwrap());
    }

    #[test]
    fn column_difference_of_identity() {
        let b = column_diff_transform(&ExactMatrix::identity(4));
        assert!(b.is_ternary());
        assert_eq!(det_exact(&b).unwrap(), int(1));
    }

    #[test]
    fn prefix_sum_of_identity_is_staircase() {
        let c = prefix_sum_columns(&ExactMatrix::identity(3));
        assert_eq!(c, ExactMatrix::from_i64_rows(&[[1, 1, 1], [0, 1, 1], [0, 0, 1]]));
        assert_eq!(det_exact(&c).unwrap(), int(1));
    }

    #[test]
    fn column_transforms_preserve_determinant_and_invert() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(1..=7);
            let a = random_matrix(&mut rng, n, n, -3, 3);
            let b = column_diff_transform(&a);
            let c = prefix_sum_columns(&a);
            let d = det_exact(&a).unwrap();
            assert_eq!(det_exact(&b).unwrap(), d);
            assert_eq!(det_exact(&c).unwrap(), d);
            assert_eq!(prefix_sum_columns(&b), a);
            assert_eq!(column_diff_transform(&c), a);
        }
    }

    #[test]
    fn column_difference_alternates_on_block_rows() {
        let a = ExactMatrix::from_i64_rows(&[[0, 1, 1, 0, 1, 1, 0]]);
        let b = column_diff_transform(&a);
        let nz: Vec<i64> = b
            .row(0)
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| if x.is_positive() { 1 } else { -1 })
            .collect();
        assert_eq!(nz, vec![1, -1, 1, -1]);
    }
}
