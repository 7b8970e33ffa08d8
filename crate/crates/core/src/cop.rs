//! The k-consecutive ones property under a fixed column order, its
//! determinant bounds, and the row-shortening reduction for 2-COP matrices.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, dot, BoundValue, ExactMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CopError {
    #[error("entry {index} is not 0 or 1")]
    NotZeroOne { index: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("matrix does not have the 2-consecutive ones property")]
    NotTwoCop,
    #[error("matrix is singular")]
    Singular,
    #[error("{four_rows} rows with four nonzeros among {n} are pairwise orthogonal")]
    NoNonorthogonalPair { four_rows: usize, n: usize },
}

/// Number of maximal runs of ones.
pub fn count_blocks(row: &[BigRational]) -> Result<usize, CopError> {
    let mut blocks = 0;
    let mut inside = false;
    for (index, x) in row.iter().enumerate() {
        if x.is_one() {
            if !inside {
                blocks += 1;
            }
            inside = true;
        } else if x.is_zero() {
            inside = false;
        } else {
            return Err(CopError::NotZeroOne { index });
        }
    }
    Ok(blocks)
}

/// `true` iff every row has at most `k` blocks of ones.
pub fn has_kcop(m: &ExactMatrix, k: usize) -> Result<bool, CopError> {
    for i in 0..m.rows() {
        if count_blocks(m.row(i))? > k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(2k)^(n/2)`
pub fn kcop_bound(n: usize, k: usize) -> BoundValue {
    BoundValue::new(
        (2.0 * k as f64).powf(n as f64 / 2.0),
        format!("k-COP: (2k)^(n/2), n={n}, k={k}"),
    )
}

/// `3.936^(n/2)`
pub fn two_cop_bound(n: usize) -> BoundValue {
    BoundValue::new(3.936f64.powf(n as f64 / 2.0), format!("2-COP: 3.936^(n/2), n={n}"))
}

/// Indices of the three row classes after the reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RowPartition {
    /// Rows with four nonzeros that were never replaced.
    pub four: Vec<usize>,
    /// Rows with at most three nonzeros from the start.
    pub kept: Vec<usize>,
    /// Rows replaced by a shortened version.
    pub shortened: Vec<usize>,
}

/// One replacement `row[replaced] -= coefficient * row[pivot]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replacement {
    pub replaced: usize,
    pub pivot: usize,
    pub coefficient: BigRational,
}

#[derive(Clone, Debug)]
pub struct TwoCopReduction {
    /// Column-differenced matrix before any replacement.
    pub transformed: ExactMatrix,
    /// Final rows, in the original row order.
    pub rows: ExactMatrix,
    pub partition: RowPartition,
    pub steps: Vec<Replacement>,
}

/// Squared norm bound `15/4` for a shortened row.
pub fn short_row_norm_sq() -> BigRational {
    BigRational::new(15.into(), 4.into())
}

impl TwoCopReduction {
    pub fn row_norms_sq(&self) -> Vec<BigRational> {
        (0..self.rows.rows()).map(|i| self.rows.row_norm_sq(i)).collect()
    }

    /// Rows whose squared norm is at most `15/4`.
    pub fn short_rows(&self) -> usize {
        let limit = short_row_norm_sq();
        self.row_norms_sq().iter().filter(|x| **x <= limit).count()
    }

    /// Product of the final row norms.
    pub fn hadamard_product(&self) -> f64 {
        self.row_norms_sq()
            .iter()
            .map(|x| x.to_f64().unwrap().sqrt())
            .product()
    }
}

/// Replaces rows with four nonzeros by shorter projections until at most
/// `3n/4` of them remain. Every replacement is a determinant-one row operation.
///
/// Among all pairs of remaining four-nonzero rows the lexicographically first
/// pair `(i, j)` with the largest `|r_i . r_j|` is used, and `r_i` becomes
/// `r_i - (r_i . r_j)/(r_j . r_j) r_j`.
pub fn two_cop_reduce(a: &ExactMatrix) -> Result<TwoCopReduction, CopError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    if !has_kcop(a, 2)? {
        return Err(CopError::NotTwoCop);
    }
    if linalg::det_exact(a)?.is_zero() {
        return Err(CopError::Singular);
    }
    let n = a.rows();
    let transformed = linalg::column_diff_transform(a);
    let mut rows = transformed.clone();
    let mut partition = RowPartition::default();
    for i in 0..n {
        if rows.row_nonzeros(i) == 4 {
            partition.four.push(i);
        } else {
            partition.kept.push(i);
        }
    }
    let mut steps = Vec::new();
    while 4 * partition.four.len() > 3 * n {
        let mut best: Option<(usize, usize, BigRational)> = None;
        for (x, &i) in partition.four.iter().enumerate() {
            for &j in &partition.four[x + 1..] {
                let d = dot(rows.row(i), rows.row(j));
                if d.is_zero() {
                    continue;
                }
                if best.as_ref().map_or(true, |(_, _, b)| d.abs() > b.abs()) {
                    best = Some((i, j, d));
                }
            }
        }
        let Some((i, j, d)) = best else {
            return Err(CopError::NoNonorthogonalPair {
                four_rows: partition.four.len(),
                n,
            });
        };
        let coefficient = d / rows.row_norm_sq(j);
        rows.add_row_multiple(i, j, &-coefficient.clone());
        partition.four.retain(|&r| r != i);
        partition.shortened.push(i);
        steps.push(Replacement {
            replaced: i,
            pivot: j,
            coefficient,
        });
    }
    Ok(TwoCopReduction {
        transformed,
        rows,
        partition,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::two_cop_construct;
    use crate::linalg::{abs_det, int};

    fn row(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn block_counts() {
        assert_eq!(count_blocks(&row(&[0, 1, 1, 0, 1])).unwrap(), 2);
        assert_eq!(count_blocks(&row(&[0, 0, 0])).unwrap(), 0);
        assert_eq!(count_blocks(&row(&[1, 0, 1, 0, 1])).unwrap(), 3);
        assert_eq!(count_blocks(&row(&[])).unwrap(), 0);
        assert_eq!(
            count_blocks(&row(&[1, 2])),
            Err(CopError::NotZeroOne { index: 1 })
        );
    }

    #[test]
    fn kcop_predicate() {
        let m = ExactMatrix::from_i64_rows(&[[1, 1, 1, 1], [1, 1, 1, 0], [0, 1, 1, 1], [1, 0, 0, 1]]);
        assert!(has_kcop(&m, 2).unwrap());
        assert!(!has_kcop(&m, 1).unwrap());
        assert!(has_kcop(&ExactMatrix::identity(5), 1).unwrap());
        assert!(!has_kcop(&ExactMatrix::from_i64_rows(&[[1, 0, 1, 0, 1]]), 2).unwrap());
    }

    #[test]
    fn bound_values() {
        assert!((kcop_bound(2, 1).value - 2.0).abs() < 1e-12);
        assert!((kcop_bound(4, 2).value - 16.0).abs() < 1e-12);
        assert!((kcop_bound(6, 2).value - 64.0).abs() < 1e-9);
        assert!((two_cop_bound(2).value - 3.936).abs() < 1e-12);
        assert!((two_cop_bound(6).value - 60.976).abs() < 1e-2);
        assert!((two_cop_bound(3).value - 7.809).abs() < 1e-2);
        assert!(two_cop_bound(6).admits(&int(4)));
    }

    #[test]
    fn shortened_norm_constant_gives_the_bound() {
        let c = (15f64 / 4.0).powf(0.25) * 2f64.powf(1.5);
        assert!(c <= 3.936);
    }

    #[test]
    fn reduce_identity_is_noop() {
        let red = two_cop_reduce(&ExactMatrix::identity(4)).unwrap();
        assert!(red.steps.is_empty());
        assert!(red.partition.four.is_empty());
        assert_eq!(abs_det(&red.rows).unwrap(), int(1));
    }

    #[test]
    fn reduce_construction_output() {
        let c = two_cop_construct(2).unwrap();
        let red = two_cop_reduce(&c.matrix).unwrap();
        assert!(4 * red.partition.four.len() <= 3 * 6);
        assert_eq!(abs_det(&red.rows).unwrap(), int(4));
        assert!(4 * red.short_rows() >= 6);
        assert!(two_cop_bound(6).admits_f64(red.hadamard_product()));
    }

    #[test]
    fn reduce_rejects_bad_inputs() {
        let singular = ExactMatrix::from_i64_rows(&[[1, 1], [1, 1]]);
        assert!(matches!(two_cop_reduce(&singular), Err(CopError::Singular)));
        let three_blocks = ExactMatrix::from_i64_rows(&[
            [1, 0, 1, 0, 1],
            [0, 1, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1],
        ]);
        assert!(matches!(two_cop_reduce(&three_blocks), Err(CopError::NotTwoCop)));
    }

    #[test]
    fn replacement_steps_replay_exactly() {
        let c = two_cop_construct(3).unwrap();
        let red = two_cop_reduce(&c.matrix).unwrap();
        let mut m = red.transformed.clone();
        let d0 = abs_det(&m).unwrap();
        for s in &red.steps {
            m.add_row_multiple(s.replaced, s.pivot, &-s.coefficient.clone());
            assert_eq!(abs_det(&m).unwrap(), d0);
            assert!(m.row_norm_sq(s.replaced) <= short_row_norm_sq());
        }
        assert_eq!(m, red.rows);
    }
}
