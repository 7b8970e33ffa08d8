//! The `bounds` table.

use detlab::cop::{kcop_bound, two_cop_bound};
use detlab::leafrank::leaf_rank_upper_bound;
use detlab::linalg::{prop01_bound, ryser_bound, RyserParams};
use detlab::path::{path_matrix_bound, transformed_hadamard_bound};
use detlab::BoundValue;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub name: &'static str,
    /// `upper` or `lower`
    pub kind: &'static str,
    pub value: f64,
    pub formula: String,
}

fn row(name: &'static str, kind: &'static str, b: BoundValue) -> BoundRow {
    BoundRow {
        name,
        kind,
        value: b.value,
        formula: b.formula,
    }
}

/// One row per bound that applies to `n` with `ones` ones and a `k`-COP
/// parameter. Rows come out in a fixed order.
pub fn table(n: usize, ones: usize, k: usize) -> Vec<BoundRow> {
    let nf = n as f64;
    let mut rows = Vec::new();
    if let Ok(b) = prop01_bound(n, ones) {
        rows.push(row("hadamard", "upper", b));
    }
    if ones % n == 0 {
        if let Ok(p) = RyserParams::new(n, ones / n) {
            rows.push(row("ryser", "upper", ryser_bound(&p)));
        }
    }
    if ones <= 2 * n {
        rows.push(row(
            "sparse",
            "upper",
            BoundValue::new(6f64.powf(nf / 6.0), format!("at most 2n ones: 6^(n/6), n={n}")),
        ));
        rows.push(row(
            "conjecture",
            "upper",
            BoundValue::new(2f64.powf(nf / 3.0), format!("conjectured: 2^(n/3), n={n}")),
        ));
    }
    if n % 3 == 0 {
        rows.push(row(
            "cyclic",
            "lower",
            BoundValue::new(2f64.powf(nf / 3.0), format!("cyclic blocks: 2^(n/3), n={n}")),
        ));
    }
    if n % 7 == 0 && ones >= 3 * n {
        rows.push(row(
            "fano",
            "lower",
            BoundValue::new(24f64.powf(nf / 7.0), format!("Fano blocks: 24^(n/7), n={n}")),
        ));
    }
    rows.push(row("kcop", "upper", kcop_bound(n, k)));
    rows.push(row("two-cop", "upper", two_cop_bound(n)));
    rows.push(row("path", "upper", path_matrix_bound(n)));
    rows.push(row("path-transformed", "upper", transformed_hadamard_bound(n)));
    rows.push(row("leafrank", "upper", leaf_rank_upper_bound(n)));
    if n == 1 {
        // a 1x1 matrix of any of these kinds has |det| <= 1 and K1 has rank 1
        for r in &mut rows {
            r.value = 1.0;
            r.formula = "n=1".into();
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn get<'a>(rows: &'a [BoundRow], name: &str) -> Option<&'a BoundRow> {
        rows.iter().find(|r| r.name == name)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    #[test]
    fn six_with_twelve_ones() {
        let t = table(6, 12, 2);
        assert!(close(get(&t, "hadamard").unwrap().value, 8.0));
        assert!(close(get(&t, "ryser").unwrap().value, 2.0 * 1.6f64.powf(2.5)));
        assert!(close(get(&t, "sparse").unwrap().value, 6.0));
        assert!(close(get(&t, "conjecture").unwrap().value, 4.0));
        assert!(get(&t, "fano").is_none());
    }

    #[test]
    fn fano_row_needs_three_n_ones() {
        assert!(close(get(&table(7, 21, 2), "fano").unwrap().value, 24.0));
        assert!(get(&table(7, 14, 2), "fano").is_none());
    }

    #[test]
    fn order_one_is_all_ones() {
        let t = table(1, 2, 2);
        assert!(!t.is_empty());
        assert!(t.iter().all(|r| r.value == 1.0));
    }
}
