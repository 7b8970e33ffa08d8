//! Maximum |det| over small classes of 0/1 matrices, by plain enumeration and
//! by branch and bound with Hadamard pruning.

use std::fmt;
use std::sync::atomic::{AtomicI64, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{det_small, int, BoundValue, ExactMatrix, BOUND_TOLERANCE};

/// Largest order for branch and bound.
pub const MAX_SEARCH_N: usize = 7;
/// Largest order for plain enumeration of all `2^(n^2)` matrices.
pub const MAX_EXHAUSTIVE_N: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search with n={n} exceeds the limit {limit}")]
    BudgetExceeded { n: usize, limit: usize },
    #[error("matrix order must be at least 1")]
    EmptyClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassKind {
    /// At most `t` ones in total.
    MaxOnes(usize),
    /// At most `r` ones in every row.
    MaxPerRow(usize),
    /// At most `k` blocks of consecutive ones in every row.
    KCop(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MatrixClass {
    pub n: usize,
    pub kind: ClassKind,
}

impl MatrixClass {
    pub fn new(n: usize, kind: ClassKind) -> Result<Self, SearchError> {
        if n == 0 {
            return Err(SearchError::EmptyClass);
        }
        Ok(MatrixClass { n, kind })
    }

    pub fn max_ones(n: usize, t: usize) -> Result<Self, SearchError> {
        Self::new(n, ClassKind::MaxOnes(t))
    }

    pub fn max_per_row(n: usize, r: usize) -> Result<Self, SearchError> {
        Self::new(n, ClassKind::MaxPerRow(r))
    }

    pub fn kcop(n: usize, k: usize) -> Result<Self, SearchError> {
        Self::new(n, ClassKind::KCop(k))
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ClassKind::MaxOnes(_) => "maxones",
            ClassKind::MaxPerRow(_) => "maxperrow",
            ClassKind::KCop(_) => "kcop",
        }
    }

    pub fn budget(&self) -> usize {
        match self.kind {
            ClassKind::MaxOnes(b) | ClassKind::MaxPerRow(b) | ClassKind::KCop(b) => b,
        }
    }

    /// Whether a single row (bit `n-1-j` is column `j`) may appear at all.
    fn row_allowed(&self, mask: u32) -> bool {
        match self.kind {
            ClassKind::MaxOnes(t) => mask.count_ones() as usize <= t,
            ClassKind::MaxPerRow(r) => mask.count_ones() as usize <= r,
            ClassKind::KCop(k) => mask_blocks(mask) <= k,
        }
    }

    pub fn contains(&self, m: &ExactMatrix) -> bool {
        if m.rows() != self.n || m.cols() != self.n || !m.is_zero_one() {
            return false;
        }
        let masks: Vec<u32> = (0..self.n).map(|i| row_mask(m, i)).collect();
        if !masks.iter().all(|&r| self.row_allowed(r)) {
            return false;
        }
        match self.kind {
            ClassKind::MaxOnes(t) => masks.iter().map(|r| r.count_ones() as usize).sum::<usize>() <= t,
            _ => true,
        }
    }

    /// Upper bound on the norm product of `rows` further rows when `ones`
    /// ones are still available (ignored outside `MaxOnes`).
    fn remaining_norm_bound(&self, rows: usize, ones: usize) -> f64 {
        if rows == 0 {
            return 1.0;
        }
        let n = self.n as f64;
        match self.kind {
            ClassKind::MaxPerRow(r) => (r.min(self.n) as f64).powf(rows as f64 / 2.0),
            ClassKind::KCop(_) => n.powf(rows as f64 / 2.0),
            ClassKind::MaxOnes(_) => {
                let per_row = (ones as f64 / rows as f64).min(n);
                per_row.powf(rows as f64 / 2.0)
            }
        }
    }
}

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, budget={})", self.name(), self.n, self.budget())
    }
}

fn mask_blocks(mask: u32) -> usize {
    (mask & !(mask >> 1)).count_ones() as usize
}

fn row_mask(m: &ExactMatrix, i: usize) -> u32 {
    let n = m.cols();
    (0..n)
        .filter(|&j| !num_traits::Zero::is_zero(&m[(i, j)]))
        .fold(0u32, |acc, j| acc | 1 << (n - 1 - j))
}

fn masks_to_matrix(masks: &[u32], n: usize) -> ExactMatrix {
    ExactMatrix::from_fn(n, n, |i, j| int(((masks[i] >> (n - 1 - j)) & 1) as i64))
}

fn masks_det(masks: &[u32], n: usize) -> i64 {
    let mut rows = [[0i64; 8]; 8];
    for (i, &m) in masks.iter().enumerate() {
        for j in 0..n {
            rows[i][j] = ((m >> (n - 1 - j)) & 1) as i64;
        }
    }
    det_small(&rows, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub class: MatrixClass,
    pub max_abs_det: u64,
    pub witness: ExactMatrix,
    pub nodes_explored: u64,
}

/// Hadamard bound on any completion of `partial` within `class`: the norms
/// of the placed rows times the largest norm product the remaining rows can have.
pub fn hadamard_prune_bound(partial: &ExactMatrix, class: &MatrixClass) -> BoundValue {
    let placed: f64 = (0..partial.rows())
        .map(|i| num_traits::ToPrimitive::to_f64(&partial.row_norm_sq(i)).unwrap().sqrt())
        .product();
    let used = partial.count_nonzero();
    let ones = class.budget().saturating_sub(used);
    let rest = class.remaining_norm_bound(class.n - partial.rows(), ones);
    BoundValue::new(
        placed * rest,
        format!("completion Hadamard bound, {} rows placed, {class}", partial.rows()),
    )
}

/// Rows sorted in non-increasing lexicographic order.
pub fn canonical_row_order(m: &ExactMatrix) -> ExactMatrix {
    let mut rows = m.row_vectors();
    rows.sort_by(|a, b| b.cmp(a));
    ExactMatrix::from_rows(rows).expect("same shape")
}

struct Worker<'a> {
    class: &'a MatrixClass,
    candidates: &'a [u32],
    incumbent: &'a AtomicI64,
    rows: Vec<u32>,
    best: i64,
    witness: Option<Vec<u32>>,
    nodes: u64,
}

impl Worker<'_> {
    fn dfs(&mut self, norm: f64, ones: usize) {
        self.nodes += 1;
        let n = self.class.n;
        if self.rows.len() == n {
            let d = masks_det(&self.rows, n).abs();
            if d > self.best {
                self.best = d;
                self.witness = Some(self.rows.clone());
                self.incumbent.fetch_max(d, Ordering::Relaxed);
            }
            return;
        }
        let left = match self.class.kind {
            ClassKind::MaxOnes(t) => t - ones,
            _ => 0,
        };
        let bound = norm * self.class.remaining_norm_bound(n - self.rows.len(), left);
        let target = self.incumbent.load(Ordering::Relaxed).max(self.best);
        if bound * (1.0 + BOUND_TOLERANCE) < target as f64 {
            return;
        }
        let last = *self.rows.last().unwrap();
        for &m in self.candidates.iter().filter(|&&m| m < last) {
            let w = m.count_ones() as usize;
            if let ClassKind::MaxOnes(t) = self.class.kind {
                if ones + w > t {
                    continue;
                }
            }
            self.rows.push(m);
            self.dfs(norm * (w as f64).sqrt(), ones + w);
            self.rows.pop();
        }
    }
}

/// Branch and bound over strictly decreasing row sequences (repeated rows
/// give determinant 0). Parallel over the first row; value and witness do not
/// depend on the thread count, the node count may.
pub fn max_det(class: &MatrixClass) -> Result<SearchReport, SearchError> {
    let n = class.n;
    if n > MAX_SEARCH_N {
        return Err(SearchError::BudgetExceeded { n, limit: MAX_SEARCH_N });
    }
    let candidates: Vec<u32> = (0..1u32 << n).rev().filter(|&m| class.row_allowed(m)).collect();
    let incumbent = AtomicI64::new(0);
    let results: Vec<(i64, Option<Vec<u32>>, u64)> = candidates
        .par_iter()
        .map(|&first| {
            let mut w = Worker {
                class,
                candidates: &candidates,
                incumbent: &incumbent,
                rows: vec![first],
                best: 0,
                witness: None,
                nodes: 0,
            };
            let c = first.count_ones() as usize;
            w.dfs((c as f64).sqrt(), c);
            (w.best, w.witness, w.nodes)
        })
        .collect();
    let nodes = results.iter().map(|r| r.2).sum();
    let mut best = 0;
    let mut witness = None;
    for (value, wit, _) in results {
        if value > best {
            best = value;
            witness = wit;
        }
    }
    let witness = match witness {
        Some(w) => masks_to_matrix(&w, n),
        None => ExactMatrix::zeros(n, n),
    };
    Ok(SearchReport {
        class: *class,
        max_abs_det: best as u64,
        witness,
        nodes_explored: nodes,
    })
}

/// Every `n x n` 0/1 matrix in turn, no pruning and no symmetry reduction.
pub fn max_det_exhaustive(class: &MatrixClass) -> Result<SearchReport, SearchError> {
    let n = class.n;
    if n > MAX_EXHAUSTIVE_N {
        return Err(SearchError::BudgetExceeded { n, limit: MAX_EXHAUSTIVE_N });
    }
    let total = 1u64 << (n * n);
    let row_bits = (1u64 << n) - 1;
    let (best, code, nodes) = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let masks: Vec<u32> = (0..n).map(|i| ((code >> (i * n)) & row_bits) as u32).collect();
            if !masks.iter().all(|&r| class.row_allowed(r)) {
                return None;
            }
            if let ClassKind::MaxOnes(t) = class.kind {
                if code.count_ones() as usize > t {
                    return None;
                }
            }
            Some((masks_det(&masks, n).abs(), code, 1u64))
        })
        .reduce(
            || (0, u64::MAX, 0),
            |a, b| {
                let nodes = a.2 + b.2;
                // larger value first, then smaller code
                if (b.0, std::cmp::Reverse(b.1)) > (a.0, std::cmp::Reverse(a.1)) {
                    (b.0, b.1, nodes)
                } else {
                    (a.0, a.1, nodes)
                }
            },
        );
    let witness = if best == 0 {
        ExactMatrix::zeros(n, n)
    } else {
        let masks: Vec<u32> = (0..n).map(|i| ((code >> (i * n)) & row_bits) as u32).collect();
        masks_to_matrix(&masks, n)
    };
    Ok(SearchReport {
        class: *class,
        max_abs_det: best as u64,
        witness,
        nodes_explored: nodes,
    })
}
