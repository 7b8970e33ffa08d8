use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{ExactMatrix, LinalgError};

/// Relative slack granted to a bound when it is compared with an exact determinant.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// A real-valued upper (or lower) bound together with the formula it came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub formula: String,
}

impl BoundValue {
    pub fn new(value: f64, formula: impl Into<String>) -> Self {
        debug_assert!(value >= 0.0 || value.is_nan());
        BoundValue {
            value,
            formula: formula.into(),
        }
    }

    /// `true` if `x <= value` up to the one-sided relative tolerance.
    pub fn admits(&self, x: &BigRational) -> bool {
        let x = x.to_f64().unwrap_or(f64::INFINITY);
        x <= self.value * (1.0 + BOUND_TOLERANCE) + BOUND_TOLERANCE
    }

    pub fn admits_f64(&self, x: f64) -> bool {
        x <= self.value * (1.0 + BOUND_TOLERANCE) + BOUND_TOLERANCE
    }
}

/// Product of the Euclidean row norms.
pub fn hadamard_row_bound(m: &ExactMatrix) -> Result<BoundValue, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let value = (0..m.rows())
        .map(|i| m.row_norm_sq(i).to_f64().unwrap_or(f64::INFINITY).sqrt())
        .product();
    Ok(BoundValue::new(value, "hadamard: prod_i ||row_i||_2"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RyserParams {
    n: usize,
    k: usize,
}

impl RyserParams {
    /// Requires `n >= 2` and `1 <= k <= (n + 1) / 2`.
    pub fn new(n: usize, k: usize) -> Result<Self, LinalgError> {
        if n < 2 || k < 1 || 2 * k > n + 1 {
            return Err(LinalgError::InvalidParameters(format!(
                "ryser bound needs n >= 2 and 1 <= k <= (n+1)/2, got n={n}, k={k}"
            )));
        }
        Ok(RyserParams { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `k(k-1)/(n-1)`
    pub fn lambda(&self) -> BigRational {
        BigRational::new(
            ((self.k * (self.k - 1)) as i64).into(),
            ((self.n - 1) as i64).into(),
        )
    }
}

/// `k (k - λ)^((n-1)/2)` for 0/1 matrices with `kn` ones.
pub fn ryser_bound(p: &RyserParams) -> BoundValue {
    let k = p.k as f64;
    let lambda = p.lambda().to_f64().unwrap();
    let value = k * (k - lambda).powf((p.n as f64 - 1.0) / 2.0);
    BoundValue::new(value, format!("ryser: k(k-lambda)^((n-1)/2), n={}, k={}", p.n, p.k))
}

/// `(t/n)^(n/2)` for ±1/0 matrices with `t` nonzero entries.
pub fn prop01_bound(n: usize, t: usize) -> Result<BoundValue, LinalgError> {
    if n == 0 {
        return Err(LinalgError::InvalidParameters("n must be positive".into()));
    }
    let value = (t as f64 / n as f64).powf(n as f64 / 2.0);
    Ok(BoundValue::new(value, format!("nonzeros: (t/n)^(n/2), n={n}, t={t}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    #[test]
    fn hadamard_examples() {
        assert!(close(hadamard_row_bound(&ExactMatrix::identity(4)).unwrap().value, 1.0));
        let ones = ExactMatrix::from_i64_rows(&[[1, 1], [1, 1]]);
        assert!(close(hadamard_row_bound(&ones).unwrap().value, 2.0));
        let c = ExactMatrix::from_i64_rows(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]]);
        let b = hadamard_row_bound(&c).unwrap();
        assert!(close(b.value, 2f64.powf(1.5)));
        assert!(b.admits(&int(2)));
        assert!(!b.admits(&int(3)));
    }

    #[test]
    fn hadamard_rejects_rectangular() {
        assert!(hadamard_row_bound(&ExactMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn ryser_examples() {
        let p = RyserParams::new(7, 3).unwrap();
        assert_eq!(p.lambda(), int(1));
        assert!(close(ryser_bound(&p).value, 24.0));
        assert!(close(ryser_bound(&RyserParams::new(2, 1).unwrap()).value, 1.0));
        let p = RyserParams::new(5, 2).unwrap();
        assert_eq!(p.lambda(), BigRational::new(1.into(), 2.into()));
        assert!(close(ryser_bound(&p).value, 4.5));
    }

    #[test]
    fn ryser_parameter_range() {
        assert!(RyserParams::new(1, 1).is_err());
        assert!(RyserParams::new(5, 0).is_err());
        assert!(RyserParams::new(5, 4).is_err());
        assert!(RyserParams::new(5, 3).is_ok());
    }

    #[test]
    fn prop01_examples() {
        assert!(close(prop01_bound(4, 16).unwrap().value, 16.0));
        assert!(close(prop01_bound(4, 8).unwrap().value, 4.0));
        assert!(close(prop01_bound(3, 3).unwrap().value, 1.0));
        assert!(prop01_bound(0, 3).is_err());
    }

    #[test]
    fn hadamard_dominates_random_determinants() {
        use crate::linalg::abs_det;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=8);
            let pm = rng.gen_bool(0.5);
            let a: Vec<Vec<i64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| if pm { [-1, 1][rng.gen_range(0..2)] } else { rng.gen_range(0..=1) })
                        .collect()
                })
                .collect();
            let m = ExactMatrix::from_i64_rows(&a);
            assert!(hadamard_row_bound(&m).unwrap().admits(&abs_det(&m).unwrap()));
        }
    }
}
