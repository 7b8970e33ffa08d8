//! Exact determinants.
//!
//! Integer matrices go through fraction-free (Bareiss) elimination, first in
//! checked `i128` arithmetic and, on overflow, over `BigInt`. Matrices with a
//! proper fraction anywhere are eliminated over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactMatrix, LinalgError};

pub fn det_exact(m: &ExactMatrix) -> Result<BigRational, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigRational::one());
    }
    if m.is_integer() {
        let small: Option<Vec<i128>> = m
            .entries()
            .map(|x| x.to_integer().to_i128())
            .collect();
        if let Some(mut a) = small {
            if let Some(d) = bareiss_i128(&mut a, n) {
                return Ok(BigRational::from_integer(BigInt::from(d)));
            }
        }
        let mut a: Vec<BigInt> = m.entries().map(|x| x.to_integer()).collect();
        return Ok(BigRational::from_integer(bareiss_big(&mut a, n)));
    }
    Ok(gauss_rational(m))
}

/// Determinant of an integer matrix as a `BigInt`.
pub fn det_integer(m: &ExactMatrix) -> Result<BigInt, LinalgError> {
    let d = det_exact(m)?;
    if !d.is_integer() {
        return Err(LinalgError::Dimension("determinant is not an integer".into()));
    }
    Ok(d.to_integer())
}

pub fn abs_det(m: &ExactMatrix) -> Result<BigRational, LinalgError> {
    det_exact(m).map(|d| d.abs())
}

/// Bareiss elimination with checked arithmetic. `None` on overflow.
pub(crate) fn bareiss_i128(a: &mut [i128], n: usize) -> Option<i128> {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k] == 0 {
            let pivot = (k + 1..n).find(|&i| a[i * n + k] != 0);
            match pivot {
                None => return Some(0),
                Some(p) => {
                    for j in 0..n {
                        a.swap(k * n + j, p * n + j);
                    }
                    sign = -sign;
                }
            }
        }
        let akk = a[k * n + k];
        for i in k + 1..n {
            let aik = a[i * n + k];
            for j in k + 1..n {
                let lhs = a[i * n + j].checked_mul(akk)?;
                let rhs = aik.checked_mul(a[k * n + j])?;
                a[i * n + j] = lhs.checked_sub(rhs)? / prev;
            }
            a[i * n + k] = 0;
        }
        prev = akk;
    }
    a[n * n - 1].checked_mul(sign)
}

fn bareiss_big(a: &mut [BigInt], n: usize) -> BigInt {
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                None => return BigInt::zero(),
                Some(p) => {
                    for j in 0..n {
                        a.swap(k * n + j, p * n + j);
                    }
                    negate = !negate;
                }
            }
        }
        let akk = a[k * n + k].clone();
        for i in k + 1..n {
            let aik = a[i * n + k].clone();
            for j in k + 1..n {
                let v = &a[i * n + j] * &akk - &aik * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = akk;
    }
    let d = a[n * n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn gauss_rational(m: &ExactMatrix) -> BigRational {
    let n = m.rows();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap_rows(p, k);
            det = -det;
        }
        let pivot = a[(k, k)].clone();
        det *= &pivot;
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let factor = -(&a[(i, k)] / &pivot);
            a.add_row_multiple(i, k, &factor);
        }
    }
    det
}

/// Determinant of a small integer matrix held in a fixed-size stack array.
/// Used on the hot path of the exhaustive searches.
pub(crate) fn det_small(rows: &[[i64; 8]], n: usize) -> i64 {
    let mut a = [[0i64; 8]; 8];
    a[..n].copy_from_slice(&rows[..n]);
    let mut sign = 1i64;
    let mut prev = 1i64;
    for k in 0..n.saturating_sub(1) {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                None => return 0,
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
            }
        }
        let akk = a[k][k];
        for i in k + 1..n {
            let aik = a[i][k];
            for j in k + 1..n {
                a[i][j] = (a[i][j] * akk - aik * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = akk;
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}
