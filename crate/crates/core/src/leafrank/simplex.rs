//! Dense two-phase simplex over the rationals with Bland's rule.
//!
//! Solves `min c.x` subject to `A x <= b`, `x >= 0`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<BigRational>, value: BigRational },
}

#[derive(Clone, Debug, Default)]
pub struct Lp {
    pub vars: usize,
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
    pub c: Vec<BigRational>,
}

impl Lp {
    pub fn new(vars: usize) -> Self {
        Lp {
            vars,
            a: Vec::new(),
            b: Vec::new(),
            c: vec![BigRational::zero(); vars],
        }
    }

    pub fn push_le(&mut self, row: Vec<BigRational>, rhs: BigRational) {
        debug_assert_eq!(row.len(), self.vars);
        self.a.push(row);
        self.b.push(rhs);
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.c, self.vars)
    }
}

struct Tableau {
    /// Constraint rows; last entry is the right-hand side.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    /// Columns `>= art_start` are artificial.
    art_start: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &Lp) -> Self {
        let m = lp.a.len();
        let n = lp.vars;
        let negative: Vec<usize> = (0..m).filter(|&i| lp.b[i].is_negative()).collect();
        let art_start = n + m;
        let width = art_start + negative.len();
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        for i in 0..m {
            let mut r = vec![BigRational::zero(); width + 1];
            let flip = lp.b[i].is_negative();
            for j in 0..n {
                r[j] = if flip { -lp.a[i][j].clone() } else { lp.a[i][j].clone() };
            }
            r[n + i] = BigRational::from_integer(if flip { (-1).into() } else { 1.into() });
            r[width] = lp.b[i].abs();
            if flip {
                let col = art_start + negative.iter().position(|&x| x == i).unwrap();
                r[col] = BigRational::from_integer(1.into());
                basis.push(col);
            } else {
                basis.push(n + i);
            }
            rows.push(r);
        }
        Tableau {
            rows,
            basis,
            art_start,
            width,
        }
    }

    /// Reduced-cost row for `cost` (indexed by column) given the current basis.
    fn objective(&self, cost: &dyn Fn(usize) -> BigRational) -> Vec<BigRational> {
        let mut obj: Vec<BigRational> = (0..self.width).map(cost).collect();
        obj.push(BigRational::zero());
        for (r, &bcol) in self.rows.iter().zip(&self.basis) {
            let cb = cost(bcol);
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(r) {
                *o -= &cb * x;
            }
        }
        obj
    }

    fn pivot(&mut self, obj: &mut [BigRational], r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !obj[col].is_zero() {
            let f = obj[col].clone();
            for (x, y) in obj.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Runs Bland's rule on columns `< limit`. Returns `false` if unbounded.
    fn optimize(&mut self, obj: &mut [BigRational], limit: usize) -> bool {
        loop {
            let Some(col) = (0..limit).find(|&j| obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(obj, r, col);
        }
    }

    fn run(mut self, c: &[BigRational], n: usize) -> LpOutcome {
        let art_start = self.art_start;
        if self.width > art_start {
            let one = BigRational::from_integer(1.into());
            let mut obj = self.objective(&|j| if j >= art_start { one.clone() } else { BigRational::zero() });
            self.optimize(&mut obj, self.width);
            if !obj[self.width].is_zero() {
                return LpOutcome::Infeasible;
            }
            // drive remaining artificials out of the basis
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= art_start {
                    match (0..art_start).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(col) => self.pivot(&mut obj, r, col),
                        None => {
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }
        let mut obj = self.objective(&|j| if j < n { c[j].clone() } else { BigRational::zero() });
        if !self.optimize(&mut obj, art_start) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![BigRational::zero(); n];
        for (row, &bcol) in self.rows.iter().zip(&self.basis) {
            if bcol < n {
                x[bcol] = row[self.width].clone();
            }
        }
        let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, value }
    }
}
