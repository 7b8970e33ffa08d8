//! Batch verification suites. Each suite checks one family of statements
//! over exhaustive or seeded random instances and stops at the first
//! counterexample.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::constructions::{
    cyclic_block_matrix, fano_block_matrix, kcop_construct, prop01_extremal, two_cop_construct, ConstructionResult,
    Property,
};
use crate::cop::{has_kcop, two_cop_bound, two_cop_reduce};
use crate::graph::{self, Graph};
use crate::leafrank::{self, leaf_rank, leaf_rank_upper_bound, leaf_root_check, Outcome};
use crate::linalg::{self, abs_det, det_exact, dot, hadamard_row_bound, int, ipow, ExactMatrix};
use crate::path::{self, RootedTree};
use crate::search::{max_det, max_det_exhaustive, MatrixClass};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{suite}: {message}")]
    Violation { suite: &'static str, message: String },
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

/// Outcome of a passing suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checked: u64,
    pub detail: String,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OK {} checked={}", self.suite, self.checked)?;
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        Ok(())
    }
}

fn fail(suite: &'static str, message: impl Into<String>) -> VerifyError {
    VerifyError::Violation {
        suite,
        message: message.into(),
    }
}

/// Names accepted by [`run_suite`].
pub const SUITES: &[&str] = &[
    "gram-tree",
    "gram-formula",
    "gram-lemma",
    "gram-invariance",
    "constructions",
    "search",
    "two-cop",
    "path",
    "leafrank",
    "exponent",
];

/// Knobs shared by the suites; each suite reads the ones it needs.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub max_n: Option<usize>,
    pub samples: Option<u64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            max_n: None,
            samples: None,
        }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport, VerifyError> {
    let samples = |d| opts.samples.unwrap_or(d);
    let max_n = |d| opts.max_n.unwrap_or(d);
    match name {
        "gram-tree" => gram_tree(max_n(8), 9, samples(100_000), opts.seed),
        "gram-formula" => gram_formula(max_n(7)),
        "gram-lemma" => gram_lemma(max_n(7), 9),
        "gram-invariance" => gram_invariance(samples(1000), opts.seed),
        "constructions" => constructions(),
        "search" => search_oracle(max_n(4), 5),
        "two-cop" => two_cop(max_n(4), samples(10_000), opts.seed),
        "path" => path_edge(samples(1000), opts.seed),
        "leafrank" => leafrank_suite(max_n(4)),
        "exponent" => exponent(1000),
        other => Err(VerifyError::UnknownSuite(other.to_string())),
    }
}

fn tree_gram(t: &Graph) -> BigRational {
    linalg::gram_det(&graph::incidence_matrix(t).expect("trees on two or more vertices have edges"))
}

/// Incidence Gram determinant of every labelled tree on `2..=max_n` vertices
/// equals the order, and so does a random sample of order `sample_n`.
pub fn gram_tree(max_n: usize, sample_n: usize, samples: u64, seed: u64) -> Result<SuiteReport, VerifyError> {
    const SUITE: &str = "gram-tree";
    let mut checked = 0;
    for n in 2..=max_n {
        let bad = (0..graph::tree_count(n))
            .into_par_iter()
            .find_first(|&i| tree_gram(&graph::tree_at(n, i)) != int(n as i64));
        if let Some(i) = bad {
            return Err(fail(SUITE, format!("tree {:?} on {n} vertices", graph::tree_at(n, i).edges())));
        }
        checked += graph::tree_count(n);
    }
    if samples > 0 {
        let bad = (0..samples).into_par_iter().find_first(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            tree_gram(&graph::random_tree(sample_n, &mut rng)) != int(sample_n as i64)
        });
        if let Some(i) = bad {
            return Err(fail(SUITE, format!("random sample {i} on {sample_n} vertices")));
        }
        checked += samples;
    }
    Ok(SuiteReport {
        suite: SUITE,
        checked,
        detail: format!("trees=all n<={max_n} + {samples} at n={sample_n}"),
    })
}

fn graph_from_code(n: usize, pairs: &[(usize, usize)], code: u64) -> Graph {
    Graph::new(n, pairs.iter().enumerate().filter(|(b, _)| code >> b & 1 == 1).map(|(_, &e)| e))
        .expect("distinct pairs")
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Closed-form Gram determinant against the matrix computation for every
/// connected graph with at most as many edges as vertices.
pub fn gram_formula(max_n: usize) -> Result<SuiteReport, VerifyError> {
    const SUITE: &str = "gram-formula";
    let mut checked = 0;
    for n in 2..=max_n {
        let pairs = all_pairs(n);
        let codes: Vec<u64> = (1..1u64 << pairs.len())
            .filter(|c| c.count_ones() as usize <= n)
            .collect();
        let results: Vec<Option<u64>> = codes
            .par_iter()
            .map(|&c| {
                let g = graph_from_code(n, &pairs, c);
                if !g.is_connected() {
                    return None;
                }
                let ok = graph::gram_det_formula(&g).unwrap() == graph::brute_force_gram_det(&g).unwrap();
                Some(if ok { 0 } else { c + 1 })
            })
            .collect();
        if let Some(c) = results.iter().flatten().find(|&&x| x != 0) {
            let g = graph_from_code(n, &pairs, c - 1);
            return Err(fail(SUITE, format!("graph n={n} edges={:?}", g.edges())));
        }
        checked += results.iter().flatten().count() as u64;
    }
    Ok(SuiteReport {
        suite: SUITE,
        checked,
        detail: format!("connected graphs n<={max_n}, m<=n"),
    })
}

/// Gram determinant of every graph on at most `max_n` vertices is within the
/// lemma bound, and the extremal graphs meet it for every tight `(n, m)`.
///
/// Graphs with more edges than vertices have linearly dependent incidence
/// rows; at the largest order those are evaluated by the component formula.
pub fn gram_lemma(max_n: usize, extremal_max_n: usize) -> Result<SuiteReport, VerifyError> {
    const SUITE: &str = "gram-lemma";
    let mut checked = 0;
    for n in 1..=max_n {
        let pairs = all_pairs(n);
        let bad = (0..1u64 << pairs.len()).into_par_iter().find_first(|&c| {
            let g = graph_from_code(n, &pairs, c);
            if g.m() == 0 {
                return false;
            }
            let det = if n < 7 || g.m() <= n {
                graph::brute_force_gram_det(&g).unwrap()
            } else {
                graph::gram_det(&g).unwrap()
            };
            !graph::within_lemma_bound(&det, n, g.m())
        });
        if let Some(c) = bad {
            let g = graph_from_code(n, &pairs, c);
            return Err(fail(SUITE, format!("graph n={n} edges={:?} exceeds the bound", g.edges())));
        }
        checked += 1 << pairs.len();
    }
    let mut tight = 0;
    for n in 1..=extremal_max_n {
        for m in 1..=n {
            let Ok(g) = graph::extremal_gram_graph(n, m) else {
                continue;
            };
            let det = graph::brute_force_gram_det(&g).unwrap();
            if g.m() != m || !graph::attains_lemma_bound(&det, n, m) {
                return Err(fail(SUITE, format!("extremal graph for n={n}, m={m} has det {det}")));
            }
            tight += 1;
        }
    }
    Ok(SuiteReport {
        suite: SUITE,
        checked: checked + tight,
        detail: format!("graphs n<={max_n}, tight pairs={tight} up to n={extremal_max_n}"),
    })
}

fn random_int_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ExactMatrix {
    ExactMatrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-2..=2)))
}

/// Solves `g y = b` for nonsingular `g` by Gaussian elimination.
fn solve(g: &ExactMatrix, b: &[BigRational]) -> Vec<BigRational> {
    let n = g.rows();
    let mut a = ExactMatrix::from_fn(n, n + 1, |i, j| if j < n { g[(i, j)].clone() } else { b[i].clone() });
    for k in 0..n {
        let p = (k..n).find(|&i| !a[(i, k)].is_zero()).expect("nonsingular");
        a.swap_rows(p, k);
        for i in 0..n {
            if i != k && !a[(i, k)].is_zero() {
                let f = -(&a[(i, k)] / &a[(k, k)]);
                a.add_row_multiple(i, k, &f);
            }
        }
    }
    (0..n).map(|i| &a[(i, n)] / &a[(i, i)]).collect()
}

/// Row negation, adding a multiple of one row to another, and row/column
/// permutations leave the Gram determinant unchanged; appending a row
/// multiplies it by at most the row's squared norm, with equality exactly
/// for rows orthogonal to the others.
pub fn gram_invariance(trials: u64, seed: u64) -> Result<SuiteReport, VerifyError> {
    const SUITE: &str = "gram-invariance";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let cols = rng.gen_range(1..=6);
        let rows = rng.gen_range(1..=cols);
        let m = random_int_matrix(rows, cols, &mut rng);
        let base = linalg::gram_det(&m);

        let mut g1 = m.clone();
        let i = rng.gen_range(0..rows);
        for j in 0..cols {
            g1[(i, j)] = -m[(i, j)].clone();
        }
        if linalg::gram_det(&g1) != base {
            return Err(fail(SUITE, format!("trial {t}: negating row {i} of\n{m}")));
        }

        if rows >= 2 {
            let mut g2 = m.clone();
            let (i, j) = (rng.gen_range(0..rows), rng.gen_range(0..rows - 1));
            let j = if j >= i { j + 1 } else { j };
            let alpha = BigRational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=4).into());
            g2.add_row_multiple(i, j, &alpha);
            if linalg::gram_det(&g2) != base {
                return Err(fail(SUITE, format!("trial {t}: row {i} += {alpha} row {j} of\n{m}")));
            }
        }

        let mut rp: Vec<usize> = (0..rows).collect();
        let mut cp: Vec<usize> = (0..cols).collect();
        rp.shuffle(&mut rng);
        cp.shuffle(&mut rng);
        let g3 = m.select_rows(&rp).select_columns(&cp);
        if linalg::gram_det(&g3) != base {
            return Err(fail(SUITE, format!("trial {t}: permuting rows {rp:?} columns {cp:?} of\n{m}")));
        }

        // appended row, half of the time projected onto the orthogonal complement
        if rows < cols && !base.is_zero() {
            let b: Vec<BigRational> = (0..cols).map(|_| int(rng.gen_range(-2..=2))).collect();
            let a = if t % 2 == 0 {
                let rhs: Vec<BigRational> = (0..rows).map(|r| dot(m.row(r), &b)).collect();
                let y = solve(&linalg::row_gram(&m), &rhs);
                let mut a = b.clone();
                for (r, yr) in y.iter().enumerate() {
                    for (x, mr) in a.iter_mut().zip(m.row(r)) {
                        *x -= yr * mr;
                    }
                }
                a
            } else {
                b
            };
            let norm = dot(&a, &a);
            let ext = m.stack(&ExactMatrix::from_rows(vec![a.clone()]).unwrap()).unwrap();
            let lhs = linalg::gram_det(&ext);
            let rhs = &base * &norm;
            let orthogonal = (0..rows).all(|r| dot(m.row(r), &a).is_zero());
            if lhs > rhs || (lhs == rhs) != orthogonal {
                return Err(fail(SUITE, format!("trial {t}: appended row {a:?} to\n{m}")));
            }
        }
    }
    Ok(SuiteReport {
        suite: SUITE,
        checked: trials,
        detail: "G1 G2 G3 and row recursion".into(),
    })
}

fn check_construction(
    name: String,
    r: Result<ConstructionResult, crate::constructions::ConstructionError>,
    expected: BigInt,
) -> Result<(), VerifyError> {
    const SUITE: &str = "constructions";
    let r = r.map_err(|e| fail(SUITE, format!("{name}: {e}")))?;
    r.verify().map_err(|e| fail(SUITE, format!("{name}: {e}")))?;
    if r.predicted_abs_det != expected || abs_det(&r.matrix).unwrap() != BigRational::from_integer(expected.clone()) {
        return Err(fail(SUITE, format!("{name}: expected |det| {expected}")));
    }
    Ok(())
}

/// Every constructor against its closed-form determinant.
pub fn constructions() -> Result<SuiteReport, VerifyError> {
    const SUITE: &str = "constructions";
    let mut checked = 0;
    for n in [3, 6, 9, 12, 15] {
        check_construction(format!("cyclic n={n}"), cyclic_block_matrix(n), ipow(2, n as u32 / 3))?;
        checked += 1;
    }
    for (n, d) in [(7, 24), (14, 576)] {
        check_construction(format!("fano n={n}"), fano_block_matrix(n), BigInt::from(d))?;
        checked += 1;
    }
    for (k, p) in [(2, 2), (2, 3), (2, 4), (4, 2), (4, 3)] {
        let n = k * p;
        let r = kcop_construct(k, p);
        if let Ok(c) = &r {
            if !has_kcop(&c.matrix, k).unwrap() || !c.properties.contains(&Property::KCop(k)) {
                return Err(fail(SUITE, format!("kcop k={k} p={p} lacks the k-COP")));
            }
        }
        check_construction(format!("kcop k={k} p={p}"), r, ipow(k as u64, ((n - k) / 2) as u32))?;
        checked += 1;
    }
    for p in [2, 3, 4] {
        let r = two_cop_construct(p);
        if let Ok(c) = &r {
            if !has_kcop(&c.matrix, 2).unwrap() {
                return Err(fail(SUITE, format!("two-cop p={p} lacks the 2-COP")));
            }
        }
        check_construction(format!("two-cop p={p}"), r, ipow(4, (p - 1) as u32))?;
        checked += 1;
    }
    for (n, t) in [(4, 8), (8, 32)] {
        check_construction(format!("prop01 n={n} t={t}"), prop01_extremal(n, t), ipow((t / n) as u64, (n / 2) as u32))?;
        checked += 1;
    }
    Ok(SuiteReport {
        suite: SUITE,
        checked,
        detail: String::new(),
    })
}

/// Every class variant and budget at order `n`.
pub fn all_classes(n: usize) -> Vec<MatrixClass> {
    let mut out = Vec::new();
    for t in 0..=n * n {
        out.push(MatrixClass::max_ones(n, t).unwrap());
    }
    for r in 0..=n {
        out.push(MatrixClass::max_per_row(n, r).unwrap());
    }
    for k in 0..=n.div_ceil(2) {
        out.push(MatrixClass::kcop(n, k).unwrap());
    }
    out
}

/// Branch and bound against plain enumeration, then the sparse-matrix
/// statements on the search results.
pub fn search_oracle(oracle_max_n: usize, conjecture_max_n: usize) -> Result<SuiteReport, VerifyError> {
    const SUITE: &str = "search";
    let mut checked = 0;
    for n in 1..=oracle_max_n {
        for c in all_classes(n) {
            let a = max_det(&c).map_err(|e| fail(SUITE, e.to_string()))?;
            let b = max_det_exhaustive(&c).map_err(|e| fail(SUITE, e.to_string()))?;
            if a.max_abs_det != b.max_abs_det {
                return Err(fail(SUITE, format!("{c}: branch and bound {} vs enumeration {}", a.max_abs_det, b.max_abs_det)));
            }
            if !c.contains(&a.witness) || abs_det(&a.witness).unwrap() != int(a.max_abs_det as i64) {
                return Err(fail(SUITE, format!("{c}: bad witness\n{}", a.witness)));
            }
            checked += 1;
        }
    }
    let mut values = Vec::new();
    for n in 3..=conjecture_max_n {
        let d = max_det(&MatrixClass::max_ones(n, 2 * n).unwrap())
            .map_err(|e| fail(SUITE, e.to_string()))?
            .max_abs_det as u128;
        // d <= 2^(n/3) and d <= 6^(n/6)
        if d.pow(3) > 1u128 << n || d.pow(6) > 6u128.pow(n as u32) {
            return Err(fail(SUITE, format!("n={n}: 2n ones reach |det|={d}")));
        }
        values.push(format!("{n}:{d}"));
        checked += 1;
    }
    let d = max_det(&MatrixClass::max_per_row(3, 2).unwrap()).unwrap().max_abs_det;
    if d != 2 {
        return Err(fail(SUITE, format!("two ones per row at n=3 give {d}, expected 2")));
    }
    Ok(SuiteReport {
        suite: SUITE,
        checked: checked + 1,
        detail: format!("maxones(2n)=[{}]", values.join(" ")),
    })
}

/// Row masks (bit `n-1-j` is column `j`) with at most two blocks of ones.
fn two_cop_rows(n: usize) -> Vec<u32> {
    (1..1u32 << n).filter(|&m| (m & !(m >> 1)).count_ones() <= 2).collect()
}

fn mask_matrix(masks: &[u32], n: usize) -> ExactMatrix {
    ExactMatrix::from_fn(masks.len(), n, |i, j| int(((masks[i] >> (n - 1 - j)) & 1) as i64))
}

fn check_two_cop(a: &ExactMatrix) -> Result<(), String> {
    let n = a.rows();
    let red = two_cop_reduce(a).map_err(|e| e.to_string())?;
    if abs_det(&red.rows).unwrap() != abs_det(a).unwrap() {
        return Err("|det| changed".into());
    }
    if 4 * red.short_rows() < n {
        return Err(format!("only {} short rows", red.short_rows()));
    }
    if !two_cop_bound(n).admits_f64(red.hadamard_product()) {
        return Err(format!("Hadamard product {} above the bound", red.hadamard_product()));
    }
    Ok(())
}

/// The row-shortening reduction on every nonsingular 2-COP matrix of order at
/// most `exhaustive_n` and on random ones of order 5 to 8.
pub fn two_cop(exhaustive_n: usize, samples: u64, seed: u64) -> Result<SuiteReport, VerifyError> {
    const SUITE: &str = "two-cop";
    let mut checked = 0;
    for n in 1..=exhaustive_n {
        let rows = two_cop_rows(n);
        let total = (rows.len() as u64).pow(n as u32);
        let results: Vec<Option<String>> = (0..total)
            .into_par_iter()
            .map(|mut code| {
                let masks: Vec<u32> = (0..n)
                    .map(|_| {
                        let r = rows[(code % rows.len() as u64) as usize];
                        code /= rows.len() as u64;
                        r
                    })
                    .collect();
                let a = mask_matrix(&masks, n);
                if det_exact(&a).unwrap().is_zero() {
                    return None;
                }
                Some(check_two_cop(&a).err().map(|e| format!("{e}\n{a}")).unwrap_or_default())
            })
            .collect();
        if let Some(e) = results.iter().flatten().find(|e| !e.is_empty()) {
            return Err(fail(SUITE, e.clone()));
        }
        checked += results.iter().flatten().count() as u64;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances: Vec<ExactMatrix> = (0..samples)
        .map(|_| {
            let n = rng.gen_range(5..=8);
            let rows = two_cop_rows(n);
            loop {
                let masks: Vec<u32> = (0..n).map(|_| *rows.choose(&mut rng).unwrap()).collect();
                let a = mask_matrix(&masks, n);
                if !det_exact(&a).unwrap().is_zero() {
                    break a;
                }
            }
        })
        .collect();
    let bad = instances
        .par_iter()
        .map(|a| check_two_cop(a).map_err(|e| format!("{e}\n{a}")))
        .find_first(|r| r.is_err());
    if let Some(Err(e)) = bad {
        return Err(fail(SUITE, e));
    }
    Ok(SuiteReport {
        suite: SUITE,
        checked: checked + samples,
        detail: format!("exhaustive n<={exhaustive_n} + {samples} random n=5..8"),
    })
}

fn check_path_instance(tree: &RootedTree, paths: &path::PathFamily) -> Result<(), String> {
    let n = tree.n();
    let order = path::natural_order(tree.graph());
    let a = path::path_edge_matrix(tree.graph(), paths, &order).map_err(|e| e.to_string())?;
    let d = det_exact(&a).unwrap();
    if d.abs() > BigRational::from_integer(ipow(2, n as u32 - 1)) {
        return Err(format!("|det|={d} above 2^(n-1)"));
    }
    let b = path::ancestor_transform(&a, tree, &order).map_err(|e| e.to_string())?;
    path::classify_transformed_rows(&b, tree, &order, paths).map_err(|e| e.to_string())?;
    let had = hadamard_row_bound(&b).unwrap();
    if !path::transformed_hadamard_bound(n).admits_f64(had.value) {
        return Err(format!("transformed Hadamard bound {} above 6^((n-1)/2)", had.value));
    }
    let red = path::reduce_path_matrix(&b, tree, &order).map_err(|e| e.to_string())?;
    let mut m = b.clone();
    for (s, step) in red.steps.iter().enumerate() {
        m.add_row_multiple(step.target, step.source, &step.factor);
        if det_exact(&m).unwrap() != d {
            return Err(format!("step {s} changed the determinant"));
        }
    }
    if m != red.matrix {
        return Err("replayed steps differ from the reduced matrix".into());
    }
    let e = red.expansion_bound();
    if !path::path_matrix_bound(n).admits_f64(e) || !linalg::BoundValue::new(e, "").admits(&d.abs()) {
        return Err(format!("expansion bound {e} inconsistent with |det|={d}"));
    }
    Ok(())
}

/// Extremal instances, random trees with random path families, and the
/// non-realizable 2-COP matrix.
pub fn path_edge(samples: u64, seed: u64) -> Result<SuiteReport, VerifyError> {
    const SUITE: &str = "path";
    let mut checked = 0;
    for d in 1..=3 {
        let inst = path::extremal_path_instance(d).map_err(|e| fail(SUITE, e.to_string()))?;
        let n = inst.tree.n();
        // 2^((2n - 5)/3)
        let expected = ipow(2, ((2 * n - 5) / 3) as u32);
        if (2 * n - 5) % 3 != 0
            || inst.predicted_abs_det != expected
            || abs_det(&inst.matrix()).unwrap() != BigRational::from_integer(expected.clone())
        {
            return Err(fail(SUITE, format!("extremal instance d={d} (n={n}) misses {expected}")));
        }
        check_path_instance(&inst.tree, &inst.paths).map_err(|e| fail(SUITE, format!("extremal d={d}: {e}")))?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        let n = rng.gen_range(2..=8);
        let g = graph::random_tree(n, &mut rng);
        let tree = RootedTree::new(g, 0).unwrap();
        let paths = path::random_path_family(&tree, n - 1, &mut rng);
        check_path_instance(&tree, &paths).map_err(|e| {
            fail(
                SUITE,
                format!("sample {s}: {e}; tree {:?} paths {:?}", tree.graph().edges(), paths.paths()),
            )
        })?;
        checked += 1;
    }
    let m = path::non_realizable_example();
    if !has_kcop(&m, 2).unwrap() || path::is_realizable(&m).unwrap() {
        return Err(fail(SUITE, "the 4x4 example should be 2-COP and not realizable"));
    }
    Ok(SuiteReport {
        suite: SUITE,
        checked: checked + 1,
        detail: format!("{samples} random instances n<=8"),
    })
}

fn check_rank(g: &Graph) -> Result<Outcome, String> {
    let r = leaf_rank(g).map_err(|e| e.to_string())?;
    if let Outcome::Finite(k) = r.outcome {
        let w = r.witness.as_ref().ok_or("finite rank without witness")?;
        if !leaf_root_check(g, &w.topology, &w.lengths, k).map_err(|e| e.to_string())? {
            return Err(format!("witness for k={k} is not a leaf root"));
        }
        if !leaf_rank_upper_bound(g.n()).admits_f64(k as f64) {
            return Err(format!("k={k} above 2n 2^(2n)"));
        }
    }
    Ok(r.outcome)
}

/// Named leaf ranks and witness soundness on every graph of order at most `max_n`.
pub fn leafrank_suite(max_n: usize) -> Result<SuiteReport, VerifyError> {
    const SUITE: &str = "leafrank";
    let mut expected = vec![(Graph::cycle(4), Outcome::Infinite), (Graph::path(3), Outcome::Finite(3))];
    for n in 3..=5 {
        expected.push((Graph::complete(n), Outcome::Finite(2)));
    }
    for (g, want) in &expected {
        let got = check_rank(g).map_err(|e| fail(SUITE, format!("{:?}: {e}", g.edges())))?;
        if got != *want {
            return Err(fail(SUITE, format!("graph {:?}: {got:?}, expected {want:?}", g.edges())));
        }
    }
    let mut checked = expected.len() as u64;
    let mut infinite = 0;
    for n in 1..=max_n.min(leafrank::MAX_ORDER) {
        let pairs = all_pairs(n);
        let results: Vec<Result<Outcome, String>> = (0..1u64 << pairs.len())
            .into_par_iter()
            .map(|c| check_rank(&graph_from_code(n, &pairs, c)))
            .collect();
        for (c, r) in results.iter().enumerate() {
            match r {
                Ok(Outcome::Infinite) => infinite += 1,
                Ok(_) => {}
                Err(e) => {
                    let g = graph_from_code(n, &pairs, c as u64);
                    return Err(fail(SUITE, format!("graph n={n} edges={:?}: {e}", g.edges())));
                }
            }
        }
        checked += results.len() as u64;
    }
    Ok(SuiteReport {
        suite: SUITE,
        checked,
        detail: format!("all graphs n<={max_n}, infinite={infinite}"),
    })
}

/// Grid maximum of the sparse-bound exponent.
pub fn exponent(steps: u32) -> Result<SuiteReport, VerifyError> {
    const SUITE: &str = "exponent";
    let g = linalg::maximize_exponent_on_grid(steps);
    let (x, y) = (g.argmax.x(), g.argmax.y());
    let c = g.growth_constant();
    let ok = (0.8606..=0.8627).contains(&g.value)
        && (x - 1.0 / 3.0).abs() <= 0.01
        && (y - 1.0 / 3.0).abs() <= 0.01
        && (1.3475..=1.3487).contains(&c);
    if !ok {
        return Err(fail(SUITE, format!("max {} at ({x}, {y}), constant {c}", g.value)));
    }
    Ok(SuiteReport {
        suite: SUITE,
        checked: 1,
        detail: format!("max={:.5} at ({x:.3}, {y:.3}) constant={c:.4}", g.value),
    })
}
