//! Explicit extremal matrix families. Every constructor checks the
//! determinant and the advertised properties before returning.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cop::has_kcop;
use crate::linalg::{self, abs_det, int, ipow, is_power_of_two, ExactMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("determinant mismatch: predicted {predicted}, computed {computed}")]
    DeterminantMismatch { predicted: BigInt, computed: BigRational },
    #[error("property `{0}` does not hold")]
    PropertyViolated(Property),
    #[error("filler row {row} breaks the alternation pattern")]
    FillerInvalid { row: usize },
}

/// A machine-checkable matrix property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Property {
    ZeroOne,
    /// Entries in {-1, 0, 1}.
    Ternary,
    /// Exactly this many nonzero entries.
    Nonzeros(usize),
    /// At most this many nonzero entries per row.
    MaxPerRow(usize),
    /// 0/1 with at most `k` blocks of ones in every row.
    KCop(usize),
}

impl Property {
    pub fn holds(&self, m: &ExactMatrix) -> bool {
        match *self {
            Property::ZeroOne => m.is_zero_one(),
            Property::Ternary => m.is_ternary(),
            Property::Nonzeros(t) => m.count_nonzero() == t,
            Property::MaxPerRow(r) => (0..m.rows()).all(|i| m.row_nonzeros(i) <= r),
            Property::KCop(k) => has_kcop(m, k).unwrap_or(false),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::ZeroOne => write!(f, "0/1 entries"),
            Property::Ternary => write!(f, "entries in {{-1,0,1}}"),
            Property::Nonzeros(t) => write!(f, "{t} nonzeros"),
            Property::MaxPerRow(r) => write!(f, "<= {r} nonzeros per row"),
            Property::KCop(k) => write!(f, "k-COP with k={k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionResult {
    pub matrix: ExactMatrix,
    pub predicted_abs_det: BigInt,
    pub properties: Vec<Property>,
}

impl ConstructionResult {
    fn checked(
        matrix: ExactMatrix,
        predicted_abs_det: BigInt,
        properties: Vec<Property>,
    ) -> Result<Self, ConstructionError> {
        let r = ConstructionResult {
            matrix,
            predicted_abs_det,
            properties,
        };
        r.verify()?;
        Ok(r)
    }

    /// Recomputes the determinant and every property.
    pub fn verify(&self) -> Result<(), ConstructionError> {
        let computed = abs_det(&self.matrix)
            .map_err(|e| ConstructionError::InvalidParameters(e.to_string()))?;
        if computed != BigRational::from_integer(self.predicted_abs_det.clone()) {
            return Err(ConstructionError::DeterminantMismatch {
                predicted: self.predicted_abs_det.clone(),
                computed,
            });
        }
        if let Some(p) = self.properties.iter().find(|p| !p.holds(&self.matrix)) {
            return Err(ConstructionError::PropertyViolated(p.clone()));
        }
        Ok(())
    }
}

/// The 3x3 matrix with two cyclically adjacent ones per row.
pub fn cyclic_block() -> ExactMatrix {
    ExactMatrix::from_i64_rows(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]])
}

/// Incidence matrix of the Fano plane, lines `{i, i+1, i+3} mod 7`.
pub fn fano_block() -> ExactMatrix {
    ExactMatrix::from_fn(7, 7, |i, j| {
        if [0, 1, 3].iter().any(|&d| (i + d) % 7 == j) {
            int(1)
        } else {
            int(0)
        }
    })
}

/// `diag(C, ..., C)` with `n/3` cyclic blocks: `2n` ones, `|det| = 2^(n/3)`.
pub fn cyclic_block_matrix(n: usize) -> Result<ConstructionResult, ConstructionError> {
    if n == 0 || n % 3 != 0 {
        return Err(ConstructionError::InvalidParameters(format!(
            "cyclic blocks need n divisible by 3, got {n}"
        )));
    }
    let blocks = vec![cyclic_block(); n / 3];
    ConstructionResult::checked(
        ExactMatrix::block_diag(&blocks),
        ipow(2, (n / 3) as u32),
        vec![Property::ZeroOne, Property::Nonzeros(2 * n), Property::MaxPerRow(2)],
    )
}

/// `diag(F, ..., F)` with `n/7` Fano blocks: `3n` ones, `|det| = 24^(n/7)`.
pub fn fano_block_matrix(n: usize) -> Result<ConstructionResult, ConstructionError> {
    if n == 0 || n % 7 != 0 {
        return Err(ConstructionError::InvalidParameters(format!(
            "Fano blocks need n divisible by 7, got {n}"
        )));
    }
    let blocks = vec![fano_block(); n / 7];
    ConstructionResult::checked(
        ExactMatrix::block_diag(&blocks),
        ipow(24, (n / 7) as u32),
        vec![Property::ZeroOne, Property::Nonzeros(3 * n), Property::MaxPerRow(3)],
    )
}

/// Sylvester Hadamard matrix of order `k` (a power of two). Its first row and
/// first column are all ones.
pub fn sylvester_hadamard(k: usize) -> Result<ExactMatrix, ConstructionError> {
    if !is_power_of_two(k) {
        return Err(ConstructionError::InvalidParameters(format!(
            "Sylvester order must be a power of two, got {k}"
        )));
    }
    let mut h = ExactMatrix::identity(1);
    while h.rows() < k {
        let m = h.rows();
        h = ExactMatrix::from_fn(2 * m, 2 * m, |i, j| {
            let v = h[(i % m, j % m)].clone();
            if i >= m && j >= m {
                -v
            } else {
                v
            }
        });
    }
    Ok(h)
}

/// Row `r` of the interleaved matrix `(H_1 R_1 H_2 R_2 ... H_k R_k)`.
pub fn interleave_row(h: &ExactMatrix, r: &ExactMatrix, row: usize) -> Vec<BigRational> {
    (0..h.cols())
        .flat_map(|i| [h[(row, i)].clone(), r[(row, i)].clone()])
        .collect()
}

/// At most `max_nonzeros` nonzeros, all of absolute value 1, alternating in
/// sign and starting with `+1`.
pub fn is_alternating_row(row: &[BigRational], max_nonzeros: usize) -> bool {
    let nz: Vec<&BigRational> = row.iter().filter(|x| !x.is_zero()).collect();
    if nz.len() > max_nonzeros || nz.iter().any(|x| !x.abs().is_one()) {
        return false;
    }
    nz.iter().enumerate().all(|(idx, x)| {
        if idx % 2 == 0 {
            x.is_positive()
        } else {
            x.is_negative()
        }
    })
}

fn check_hadamard_like(h: &ExactMatrix) -> Result<(), ConstructionError> {
    if !h.is_square() || h.rows() == 0 || !h.is_plus_minus_one() {
        return Err(ConstructionError::InvalidParameters(
            "expected a square ±1 matrix".into(),
        ));
    }
    if (0..h.rows()).any(|i| !h[(i, 0)].is_one()) {
        return Err(ConstructionError::InvalidParameters(
            "first column must be all ones".into(),
        ));
    }
    Ok(())
}

/// Filler `R` for the block construction: `R[r][i] = -H[r][i]` when
/// `H[r][i] == H[r][i+1]`, otherwise 0; the last column is zero. The
/// interleaved rows are then checked for the alternation pattern.
pub fn interleave_filler(h: &ExactMatrix) -> Result<ExactMatrix, ConstructionError> {
    check_hadamard_like(h)?;
    let k = h.rows();
    let r = ExactMatrix::from_fn(k, k, |row, i| {
        if i + 1 < k && h[(row, i)] == h[(row, i + 1)] {
            -h[(row, i)].clone()
        } else {
            int(0)
        }
    });
    for row in 0..k {
        if !is_alternating_row(&interleave_row(h, &r, row), 2 * k) {
            return Err(ConstructionError::FillerInvalid { row });
        }
    }
    Ok(r)
}

/// Intermediate matrices of the block construction.
#[derive(Clone, Debug)]
pub struct BlockConstruction {
    /// Block upper bidiagonal: `H` on the diagonal, `R` above it, identity in the last block.
    pub block_matrix: ExactMatrix,
    /// `block_matrix` with columns interleaved by residue class.
    pub interleaved: ExactMatrix,
    /// Prefix sums of `interleaved`; a 0/1 matrix.
    pub result: ExactMatrix,
}

/// Column `b*k + i` of the block matrix goes to position `i*p + b`.
fn interleave_position(col: usize, k: usize, p: usize) -> usize {
    (col % k) * p + col / k
}

pub fn block_construction(h: &ExactMatrix, r: &ExactMatrix, p: usize) -> BlockConstruction {
    let k = h.rows();
    let n = p * k;
    let mut a = ExactMatrix::zeros(n, n);
    for b in 0..p {
        for i in 0..k {
            let row = b * k + i;
            if b + 1 == p {
                a[(row, row)] = int(1);
                continue;
            }
            for j in 0..k {
                a[(row, b * k + j)] = h[(i, j)].clone();
                a[(row, (b + 1) * k + j)] = r[(i, j)].clone();
            }
        }
    }
    let mut order = vec![0; n];
    for col in 0..n {
        order[interleave_position(col, k, p)] = col;
    }
    let interleaved = a.select_columns(&order);
    let result = linalg::prefix_sum_columns(&interleaved);
    BlockConstruction {
        block_matrix: a,
        interleaved,
        result,
    }
}

/// 0/1 matrix of order `n = pk` with the `k`-consecutive ones property and
/// `|det| = k^((n-k)/2)`, for `k` a power of two and `p >= 2`.
pub fn kcop_construct(k: usize, p: usize) -> Result<ConstructionResult, ConstructionError> {
    kcop_construct_detailed(k, p).map(|(r, _)| r)
}

pub fn kcop_construct_detailed(
    k: usize,
    p: usize,
) -> Result<(ConstructionResult, BlockConstruction), ConstructionError> {
    if !is_power_of_two(k) || k > 16 || p < 2 {
        return Err(ConstructionError::InvalidParameters(format!(
            "need k in {{1,2,4,8,16}} and p >= 2, got k={k}, p={p}"
        )));
    }
    let h = sylvester_hadamard(k)?;
    let r = interleave_filler(&h)?;
    let parts = block_construction(&h, &r, p);
    for row in 0..parts.interleaved.rows() {
        if !is_alternating_row(parts.interleaved.row(row), 2 * k) {
            return Err(ConstructionError::FillerInvalid { row });
        }
    }
    // |det H| = k^(k/2) per Hadamard block, p - 1 blocks
    let det_h = if k == 1 { BigInt::one() } else { ipow(k as u64, (k / 2) as u32) };
    let predicted = num_traits::pow(det_h, p - 1);
    let result = ConstructionResult::checked(
        parts.result.clone(),
        predicted,
        vec![Property::ZeroOne, Property::KCop(k)],
    )?;
    Ok((result, parts))
}

/// The 3x3 pair used for the improved 2-COP construction.
pub fn two_cop_blocks() -> (ExactMatrix, ExactMatrix) {
    let h = ExactMatrix::from_i64_rows(&[[1, 1, -1], [1, -1, 1], [1, -1, -1]]);
    let r = ExactMatrix::from_i64_rows(&[[-1, 0, 0], [0, 0, 0], [0, 1, 0]]);
    (h, r)
}

/// 0/1 matrix of order `n = 3p` with the 2-consecutive ones property and
/// `|det| = 4^((n-3)/3)`.
pub fn two_cop_construct(p: usize) -> Result<ConstructionResult, ConstructionError> {
    if p < 2 {
        return Err(ConstructionError::InvalidParameters(format!(
            "need p >= 2, got {p}"
        )));
    }
    let (h, r) = two_cop_blocks();
    let parts = block_construction(&h, &r, p);
    for row in 0..parts.interleaved.rows() {
        if !is_alternating_row(parts.interleaved.row(row), 4) {
            return Err(ConstructionError::FillerInvalid { row });
        }
    }
    ConstructionResult::checked(
        parts.result,
        ipow(4, (p - 1) as u32),
        vec![Property::ZeroOne, Property::KCop(2)],
    )
}

/// Block diagonal of `n/h` Sylvester blocks of order `h = t/n`: a ±1/0 matrix
/// with `t` nonzeros and `|det| = (t/n)^(n/2)`.
pub fn prop01_extremal(n: usize, t: usize) -> Result<ConstructionResult, ConstructionError> {
    let bad = || {
        ConstructionError::InvalidParameters(format!(
            "need t/n a power of two dividing n, got n={n}, t={t}"
        ))
    };
    if n == 0 || t % n != 0 {
        return Err(bad());
    }
    let h = t / n;
    if !is_power_of_two(h) || n % h != 0 {
        return Err(bad());
    }
    let block = sylvester_hadamard(h)?;
    let m = ExactMatrix::block_diag(&vec![block; n / h]);
    let predicted = if h == 1 { BigInt::one() } else { ipow(h as u64, (n / 2) as u32) };
    ConstructionResult::checked(m, predicted, vec![Property::Ternary, Property::Nonzeros(t)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{column_diff_transform, det_exact, prefix_sum_columns};

    #[test]
    fn cyclic_examples() {
        let c = cyclic_block_matrix(3).unwrap();
        assert_eq!(c.matrix, cyclic_block());
        assert_eq!(c.predicted_abs_det, BigInt::from(2));
        assert_eq!(cyclic_block_matrix(6).unwrap().predicted_abs_det, BigInt::from(4));
        let c9 = cyclic_block_matrix(9).unwrap();
        assert_eq!(c9.predicted_abs_det, BigInt::from(8));
        assert_eq!(c9.matrix.count_nonzero(), 18);
        assert!(cyclic_block_matrix(4).is_err());
    }

    #[test]
    fn fano_examples() {
        assert_eq!(det_exact(&fano_block()).unwrap().abs(), int(24));
        let f = fano_block_matrix(7).unwrap();
        assert_eq!(f.matrix.count_nonzero(), 21);
        assert_eq!(fano_block_matrix(14).unwrap().predicted_abs_det, BigInt::from(576));
        assert!(fano_block_matrix(8).is_err());
    }

    #[test]
    fn fano_lines_meet_once() {
        let f = fano_block();
        for i in 0..7 {
            for j in i + 1..7 {
                assert_eq!(linalg::dot(f.row(i), f.row(j)), int(1));
            }
        }
    }

    #[test]
    fn sylvester_examples() {
        assert_eq!(sylvester_hadamard(1).unwrap(), ExactMatrix::identity(1));
        assert_eq!(abs_det(&sylvester_hadamard(2).unwrap()).unwrap(), int(2));
        let h4 = sylvester_hadamard(4).unwrap();
        assert_eq!(abs_det(&h4).unwrap(), int(16));
        let gram = h4.mul(&h4.transpose()).unwrap();
        let four_id = ExactMatrix::from_fn(4, 4, |i, j| if i == j { int(4) } else { int(0) });
        assert_eq!(gram, four_id);
        for k in [1, 2, 4, 8, 16] {
            let h = sylvester_hadamard(k).unwrap();
            assert!((0..k).all(|i| h[(i, 0)].is_one()));
        }
        assert!(sylvester_hadamard(3).is_err());
        assert!(sylvester_hadamard(0).is_err());
    }

    #[test]
    fn filler_examples() {
        let r1 = interleave_filler(&sylvester_hadamard(1).unwrap()).unwrap();
        assert_eq!(r1, ExactMatrix::zeros(1, 1));
        let h2 = ExactMatrix::from_i64_rows(&[[1, 1], [1, -1]]);
        let r2 = interleave_filler(&h2).unwrap();
        assert_eq!(r2, ExactMatrix::from_i64_rows(&[[-1, 0], [0, 0]]));
    }

    #[test]
    fn filler_rule_holds_for_all_sylvester_orders() {
        for k in [1, 2, 4, 8, 16] {
            let h = sylvester_hadamard(k).unwrap();
            let r = interleave_filler(&h).unwrap();
            assert!(r.is_ternary());
            assert!((0..k).all(|i| r[(i, k - 1)].is_zero()));
            for row in 0..k {
                assert!(is_alternating_row(&interleave_row(&h, &r, row), 2 * k));
            }
        }
    }

    #[test]
    fn filler_rejects_unnormalized_hadamard() {
        let h = ExactMatrix::from_i64_rows(&[[1, 1], [-1, 1]]);
        assert!(interleave_filler(&h).is_err());
    }

    #[test]
    fn kcop_examples() {
        for (k, p, det) in [(2, 3, 4), (2, 2, 2), (4, 2, 16)] {
            let c = kcop_construct(k, p).unwrap();
            assert_eq!(c.predicted_abs_det, BigInt::from(det));
            assert!(has_kcop(&c.matrix, k).unwrap());
            assert_eq!(c.matrix.rows(), k * p);
        }
        assert!(kcop_construct(3, 2).is_err());
        assert!(kcop_construct(2, 1).is_err());
    }

    #[test]
    fn kcop_interleaving_follows_residue_order() {
        let (_, parts) = kcop_construct_detailed(2, 3).unwrap();
        // columns v1 v3 v5 v2 v4 v6 (1-based)
        let expected = parts.block_matrix.select_columns(&[0, 2, 4, 1, 3, 5]);
        assert_eq!(parts.interleaved, expected);
        assert_eq!(
            abs_det(&parts.block_matrix).unwrap(),
            abs_det(&parts.result).unwrap()
        );
    }

    #[test]
    fn two_cop_examples() {
        let (h, r) = two_cop_blocks();
        assert_eq!(abs_det(&h).unwrap(), int(4));
        for row in 0..3 {
            assert!(is_alternating_row(&interleave_row(&h, &r, row), 4));
        }
        assert_eq!(two_cop_construct(2).unwrap().predicted_abs_det, BigInt::from(4));
        assert_eq!(two_cop_construct(3).unwrap().predicted_abs_det, BigInt::from(16));
        assert!(two_cop_construct(1).is_err());
    }

    #[test]
    fn prop01_examples() {
        assert_eq!(prop01_extremal(4, 8).unwrap().predicted_abs_det, BigInt::from(4));
        assert_eq!(prop01_extremal(2, 4).unwrap().predicted_abs_det, BigInt::from(2));
        assert_eq!(prop01_extremal(8, 32).unwrap().predicted_abs_det, BigInt::from(256));
        assert_eq!(prop01_extremal(3, 3).unwrap().predicted_abs_det, BigInt::from(1));
        assert!(prop01_extremal(4, 12).is_err());
        assert!(prop01_extremal(2, 8).is_err());
    }

    #[test]
    fn constructions_round_trip_column_transforms() {
        let all = [
            cyclic_block_matrix(6).unwrap(),
            fano_block_matrix(7).unwrap(),
            kcop_construct(4, 2).unwrap(),
            two_cop_construct(3).unwrap(),
            prop01_extremal(8, 32).unwrap(),
        ];
        for c in all {
            assert_eq!(prefix_sum_columns(&column_diff_transform(&c.matrix)), c.matrix);
        }
    }

    #[test]
    fn verify_catches_wrong_prediction() {
        let mut c = cyclic_block_matrix(3).unwrap();
        c.predicted_abs_det = BigInt::from(3);
        assert!(matches!(
            c.verify(),
            Err(ConstructionError::DeterminantMismatch { .. })
        ));
        c.predicted_abs_det = BigInt::from(2);
        c.properties.push(Property::KCop(0));
        assert!(matches!(c.verify(), Err(ConstructionError::PropertyViolated(_))));
    }
}
