use super::LinalgError;

/// Row-class fractions `x = n1/n` (rows with a single one) and
/// `y = n3/n` (rows with three or more ones) of a sparse 0/1 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentPoint {
    x: f64,
    y: f64,
}

impl ExponentPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, LinalgError> {
        if !(0.0..=1.0).contains(&x) || !(0.0..=x).contains(&y) {
            return Err(LinalgError::InvalidParameters(format!(
                "need 0 <= y <= x <= 1, got x={x}, y={y}"
            )));
        }
        Ok(ExponentPoint { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Exponent `f(x, y)` such that `det(A)^2 <= 2^(f(x,y) n)` for a 0/1 matrix
/// with at most `2n` ones. The `y ln(2 + x/y)` term is taken as 0 at `y = 0`.
pub fn sparse_bound_exponent(p: ExponentPoint) -> f64 {
    let ExponentPoint { x, y } = p;
    let log_term = if y == 0.0 {
        0.0
    } else {
        y * (2.0 + x / y).ln() / std::f64::consts::LN_2
    };
    if x + 2.0 * y >= 1.0 {
        1.0 - x - y + log_term
    } else {
        (2.0 - 2.0 * x - y) / 3.0 + log_term
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMaximum {
    pub value: f64,
    pub argmax: ExponentPoint,
}

impl GridMaximum {
    /// Per-dimension growth constant `2^(f/2)` implied by the maximum.
    pub fn growth_constant(&self) -> f64 {
        2f64.powf(self.value / 2.0)
    }
}

/// Maximizes [`sparse_bound_exponent`] over the grid `{(i/s, j/s) : 0 <= j <= i <= s}`.
pub fn maximize_exponent_on_grid(steps: u32) -> GridMaximum {
    assert!(steps > 0);
    let s = steps as f64;
    let mut best = GridMaximum {
        value: f64::NEG_INFINITY,
        argmax: ExponentPoint { x: 0.0, y: 0.0 },
    };
    for i in 0..=steps {
        for j in 0..=i {
            let p = ExponentPoint {
                x: i as f64 / s,
                y: j as f64 / s,
            };
            let v = sparse_bound_exponent(p);
            if v > best.value {
                best = GridMaximum { value: v, argmax: p };
            }
        }
    }
    best
}
