//! Exact leaf rank of small graphs.
//!
//! For a fixed topology the tree distances are linear in the edge lengths, so
//! `G` has a `k`-leaf root on that topology iff a system of linear
//! inequalities has an integral solution. Topologies range over all
//! leaf-labelled trees without internal vertices of degree 2.

mod simplex;
mod topology;

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::linalg::{int, BoundValue};

pub use simplex::{Lp, LpOutcome};
pub use topology::{enumerate_topologies, topology_shapes, Topology};

/// Largest graph order the solver accepts.
pub const MAX_ORDER: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeafRankError {
    #[error("leaf set does not match the graph: {0}")]
    LeafMismatch(String),
    #[error("invalid topology: {0}")]
    BadTopology(String),
    #[error("edge lengths must be positive integers, one per tree edge")]
    BadLengths,
    #[error("leaf rank search is limited to {MAX_ORDER} vertices, got {n}")]
    BudgetExceeded { n: usize },
}

/// Whether a row bounds the path length from above or from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `l(uTv) - k <= 0`
    AtMostK,
    /// `l(uTv) - k >= 1`
    AboveK,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemRow {
    pub u: usize,
    pub v: usize,
    /// Tree edges on the path between `u` and `v`.
    pub edges: Vec<usize>,
    pub relation: Relation,
}

/// Variables are one length per tree edge and `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearSystem {
    pub edge_count: usize,
    pub rows: Vec<SystemRow>,
}

impl LinearSystem {
    pub fn at_most_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.relation == Relation::AtMostK).count()
    }

    pub fn above_rows(&self) -> usize {
        self.rows.len() - self.at_most_rows()
    }

    /// All rows hold and every length is at least 1.
    pub fn is_satisfied(&self, lengths: &[BigRational], k: &BigRational) -> bool {
        if lengths.len() != self.edge_count || lengths.iter().any(|l| *l < BigRational::one()) {
            return false;
        }
        self.rows.iter().all(|r| {
            let s: BigRational = r.edges.iter().map(|&e| lengths[e].clone()).sum();
            match r.relation {
                Relation::AtMostK => s <= *k,
                Relation::AboveK => s - k >= BigRational::one(),
            }
        })
    }

    /// LP in the shifted variables `m_e = l_e - 1 >= 0` and `kappa = k - 1 >= 0`.
    /// With `fixed_k`, `kappa` is dropped.
    fn shifted_lp(&self, fixed_k: Option<u64>) -> Lp {
        let e = self.edge_count;
        let vars = if fixed_k.is_some() { e } else { e + 1 };
        let mut lp = Lp::new(vars);
        for r in &self.rows {
            let mut row = vec![BigRational::zero(); vars];
            let len = r.edges.len() as i64;
            let sign = match r.relation {
                Relation::AtMostK => 1,
                Relation::AboveK => -1,
            };
            for &x in &r.edges {
                row[x] = int(sign);
            }
            // sum m + len - (kappa + 1) <= 0   or   -(sum m + len) + kappa + 1 <= -1
            let rhs = match (r.relation, fixed_k) {
                (Relation::AtMostK, None) => {
                    row[e] = int(-1);
                    int(1 - len)
                }
                (Relation::AtMostK, Some(k)) => int(k as i64 - len),
                (Relation::AboveK, None) => {
                    row[e] = int(1);
                    int(len - 2)
                }
                (Relation::AboveK, Some(k)) => int(len - 1 - k as i64),
            };
            lp.push_le(row, rhs);
        }
        if fixed_k.is_none() {
            lp.c[e] = int(1);
        }
        lp
    }
}

/// One row per vertex pair of `g`; the leaves of `topology` are the vertices of `g`.
pub fn build_system(g: &Graph, topology: &Topology) -> Result<LinearSystem, LeafRankError> {
    if topology.leaves() != g.n() {
        return Err(LeafRankError::LeafMismatch(format!(
            "topology has {} leaves, graph has {} vertices",
            topology.leaves(),
            g.n()
        )));
    }
    let mut rows = Vec::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            rows.push(SystemRow {
                u,
                v,
                edges: topology.path_edges(u, v),
                relation: if g.has_edge(u, v) {
                    Relation::AtMostK
                } else {
                    Relation::AboveK
                },
            });
        }
    }
    Ok(LinearSystem {
        edge_count: topology.edges().len(),
        rows,
    })
}

/// A rational point of the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub lengths: Vec<BigRational>,
    pub k: BigRational,
}

/// A vertex of the system's polyhedron minimizing `k`, or `None` if it is empty.
pub fn feasible_rational(s: &LinearSystem) -> Option<RationalPoint> {
    match s.shifted_lp(None).solve() {
        LpOutcome::Optimal { x, .. } => {
            let one = BigRational::one();
            let lengths = x[..s.edge_count].iter().map(|m| m + &one).collect();
            Some(RationalPoint {
                lengths,
                k: &x[s.edge_count] + &one,
            })
        }
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("k is bounded below by 1"),
    }
}

/// Rational feasibility with `k` fixed.
pub fn feasible_at(s: &LinearSystem, k: u64) -> bool {
    !matches!(s.shifted_lp(Some(k)).solve(), LpOutcome::Infeasible)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralPoint {
    pub lengths: Vec<BigInt>,
    pub k: BigInt,
    pub scale: BigInt,
}

/// Scales `x` by the least common denominator of its coordinates.
pub fn integralize(x: &RationalPoint) -> IntegralPoint {
    let scale = x
        .lengths
        .iter()
        .chain(std::iter::once(&x.k))
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let lift = |q: &BigRational| (q * BigRational::from_integer(scale.clone())).to_integer();
    IntegralPoint {
        lengths: x.lengths.iter().map(lift).collect(),
        k: lift(&x.k),
        scale,
    }
}

/// Integral lengths for a fixed `k`, found by depth-first search.
///
/// Lengths above `k + 1` are never needed: capping such an edge at `k + 1`
/// keeps every pair across it farther than `k` apart.
pub fn integer_lengths_at(s: &LinearSystem, k: u64) -> Option<Vec<u64>> {
    let e = s.edge_count;
    // rows grouped by the last edge (in search order) they use
    let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); e];
    for (i, r) in s.rows.iter().enumerate() {
        if let Some(&last) = r.edges.iter().max() {
            by_last[last].push(i);
        }
    }
    let mut lengths = vec![0u64; e];
    fn go(
        s: &LinearSystem,
        k: u64,
        pos: usize,
        lengths: &mut Vec<u64>,
        by_last: &[Vec<usize>],
    ) -> bool {
        if pos == lengths.len() {
            return true;
        }
        for l in 1..=k + 1 {
            lengths[pos] = l;
            let ok = by_last[pos].iter().all(|&i| {
                let r = &s.rows[i];
                let d: u64 = r.edges.iter().map(|&x| lengths[x]).sum();
                match r.relation {
                    Relation::AtMostK => d <= k,
                    Relation::AboveK => d > k,
                }
            });
            // partial sums only grow, so an exceeded upper row stays exceeded
            let dead = s.rows.iter().any(|r| {
                r.relation == Relation::AtMostK
                    && r.edges.iter().filter(|&&x| x <= pos).map(|&x| lengths[x]).sum::<u64>()
                        + r.edges.iter().filter(|&&x| x > pos).count() as u64
                        > k
            });
            if ok && !dead && go(s, k, pos + 1, lengths, by_last) {
                return true;
            }
            if dead {
                break;
            }
        }
        false
    }
    if go(s, k, 0, &mut lengths, &by_last) {
        Some(lengths)
    } else {
        None
    }
}

/// Expands every edge into a path of unit edges; leaves keep their indices.
pub fn subdivide(topology: &Topology, lengths: &[u64]) -> Result<Graph, LeafRankError> {
    if lengths.len() != topology.edges().len() || lengths.iter().any(|&l| l == 0) {
        return Err(LeafRankError::BadLengths);
    }
    let mut n = topology.tree().n();
    let mut edges = Vec::new();
    for (&(u, v), &l) in topology.edges().iter().zip(lengths) {
        let mut prev = u;
        for _ in 1..l {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, v));
    }
    Ok(Graph::new(n, edges).expect("subdivision of a tree is a tree"))
}

/// `true` iff adjacency in `g` matches distance at most `k` in the subdivided tree.
pub fn leaf_root_check(g: &Graph, topology: &Topology, lengths: &[u64], k: u64) -> Result<bool, LeafRankError> {
    if topology.leaves() != g.n() {
        return Err(LeafRankError::LeafMismatch(format!(
            "topology has {} leaves, graph has {} vertices",
            topology.leaves(),
            g.n()
        )));
    }
    let t = subdivide(topology, lengths)?;
    for u in 0..g.n() {
        let mut dist = vec![u64::MAX; t.n()];
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &y in t.neighbors(x) {
                if dist[y] == u64::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        for v in u + 1..g.n() {
            if g.has_edge(u, v) != (dist[v] <= k) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Finite(u64),
    Infinite,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub topology: Topology,
    pub lengths: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafRankResult {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    /// Set for the one-vertex graph, whose rank is 1 by convention.
    pub by_convention: bool,
}

/// Minimum `k` over all topologies, or `Infinite` if every topology's
/// system is empty.
///
/// Integral feasibility is not monotone in `k`, so `k` is scanned upward. The
/// scan stops no later than the scaled LP vertex of the best topology.
pub fn leaf_rank(g: &Graph) -> Result<LeafRankResult, LeafRankError> {
    let n = g.n();
    if n > MAX_ORDER {
        return Err(LeafRankError::BudgetExceeded { n });
    }
    if n <= 1 {
        let topology = Topology::new(n.max(1), Graph::empty(1))?;
        return Ok(LeafRankResult {
            outcome: Outcome::Finite(1),
            witness: Some(Witness {
                topology,
                lengths: Vec::new(),
            }),
            by_convention: true,
        });
    }
    let topologies = enumerate_topologies(n);
    let systems: Vec<LinearSystem> = topologies
        .iter()
        .map(|t| build_system(g, t))
        .collect::<Result<_, _>>()?;
    let vertices: Vec<Option<RationalPoint>> = systems.par_iter().map(feasible_rational).collect();
    let ceiling = vertices
        .iter()
        .flatten()
        .map(|x| integralize(x).k)
        .min();
    let Some(ceiling) = ceiling else {
        return Ok(LeafRankResult {
            outcome: Outcome::Infinite,
            witness: None,
            by_convention: false,
        });
    };
    let ceiling = ceiling.to_u64().unwrap_or(u64::MAX);
    for k in 1..=ceiling {
        let kq = BigRational::from_integer(k.into());
        let found = systems
            .par_iter()
            .zip(&vertices)
            .enumerate()
            .filter(|(_, (_, x))| x.as_ref().is_some_and(|x| x.k <= kq))
            .filter_map(|(i, (s, _))| {
                if !feasible_at(s, k) {
                    return None;
                }
                integer_lengths_at(s, k).map(|l| (i, l))
            })
            .min_by_key(|(i, _)| *i);
        if let Some((i, lengths)) = found {
            return Ok(LeafRankResult {
                outcome: Outcome::Finite(k),
                witness: Some(Witness {
                    topology: topologies[i].clone(),
                    lengths,
                }),
                by_convention: false,
            });
        }
    }
    unreachable!("the scaled LP vertex is an integral witness")
}

/// `2n 2^(2n)`
pub fn leaf_rank_upper_bound(n: usize) -> BoundValue {
    BoundValue::new(
        2.0 * n as f64 * 4f64.powi(n as i32),
        format!("leaf rank: 2n 2^(2n), n={n}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Topology {
        Topology::new(leaves, Graph::new(leaves + 1, (0..leaves).map(|i| (i, leaves))).unwrap()).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn check_examples() {
        let edge = Topology::new(2, Graph::path(2)).unwrap();
        assert!(leaf_root_check(&Graph::complete(2), &edge, &[1], 1).unwrap());
        assert!(leaf_root_check(&Graph::complete(3), &star(3), &[1, 1, 1], 2).unwrap());
        assert!(leaf_root_check(&Graph::path(3), &star(3), &[2, 1, 2], 3).unwrap());
        assert!(!leaf_root_check(&Graph::path(3), &star(3), &[1, 1, 1], 2).unwrap());
        assert!(leaf_root_check(&Graph::path(4), &star(3), &[1, 1, 1], 2).is_err());
        assert_eq!(subdivide(&star(3), &[0, 1, 1]), Err(LeafRankError::BadLengths));
    }

    #[test]
    fn system_row_census() {
        let k2 = build_system(&Graph::complete(2), &Topology::new(2, Graph::path(2)).unwrap()).unwrap();
        assert_eq!(k2.rows.len(), 1);
        assert_eq!(k2.rows[0].relation, Relation::AtMostK);
        let p3 = build_system(&Graph::path(3), &star(3)).unwrap();
        assert_eq!((p3.at_most_rows(), p3.above_rows()), (2, 1));
        for t in enumerate_topologies(4) {
            let s = build_system(&Graph::cycle(4), &t).unwrap();
            assert_eq!((s.at_most_rows(), s.above_rows()), (4, 2));
        }
    }

    #[test]
    fn rational_feasibility() {
        let p3 = build_system(&Graph::path(3), &star(3)).unwrap();
        let x = feasible_rational(&p3).unwrap();
        assert!(p3.is_satisfied(&x.lengths, &x.k));
        assert!(p3.is_satisfied(&[int(2), int(1), int(2)], &int(3)));
        let c4 = build_system(&Graph::cycle(4), &star(4)).unwrap();
        assert!(feasible_rational(&c4).is_none());
        let k2 = build_system(&Graph::complete(2), &Topology::new(2, Graph::path(2)).unwrap()).unwrap();
        let x = feasible_rational(&k2).unwrap();
        assert_eq!((x.lengths, x.k), (vec![int(1)], int(1)));
    }

    #[test]
    fn integralize_scales_by_common_denominator() {
        let p3 = build_system(&Graph::path(3), &star(3)).unwrap();
        let x = RationalPoint {
            lengths: vec![q(3, 2), q(1, 2), q(3, 2)],
            k: int(2),
        };
        let y = integralize(&x);
        assert_eq!(y.scale, BigInt::from(2));
        assert_eq!(y.lengths, vec![3.into(), 1.into(), 3.into()]);
        assert_eq!(y.k, BigInt::from(4));
        let lifted: Vec<BigRational> = y.lengths.iter().cloned().map(BigRational::from_integer).collect();
        assert!(p3.is_satisfied(&lifted, &BigRational::from_integer(y.k.clone())));
        let lengths: Vec<u64> = y.lengths.iter().map(|l| l.to_u64().unwrap()).collect();
        assert!(leaf_root_check(&Graph::path(3), &star(3), &lengths, 4).unwrap());
        let id = integralize(&RationalPoint {
            lengths: vec![int(2)],
            k: int(3),
        });
        assert_eq!(id.scale, BigInt::one());
    }

    #[test]
    fn scaling_closure() {
        let p3 = build_system(&Graph::path(3), &star(3)).unwrap();
        let x = feasible_rational(&p3).unwrap();
        for lambda in 1..6 {
            let l = int(lambda);
            let scaled: Vec<BigRational> = x.lengths.iter().map(|v| v * &l).collect();
            assert!(p3.is_satisfied(&scaled, &(&x.k * &l)));
        }
    }

    #[test]
    fn known_ranks() {
        assert_eq!(leaf_rank(&Graph::cycle(4)).unwrap().outcome, Outcome::Infinite);
        assert_eq!(leaf_rank(&Graph::path(3)).unwrap().outcome, Outcome::Finite(3));
        assert_eq!(leaf_rank(&Graph::complete(2)).unwrap().outcome, Outcome::Finite(1));
        for n in 3..=5 {
            assert_eq!(leaf_rank(&Graph::complete(n)).unwrap().outcome, Outcome::Finite(2));
        }
        let k1 = leaf_rank(&Graph::empty(1)).unwrap();
        assert!(k1.by_convention);
        assert_eq!(k1.outcome, Outcome::Finite(1));
        assert!(matches!(leaf_rank(&Graph::empty(8)), Err(LeafRankError::BudgetExceeded { n: 8 })));
    }

    #[test]
    fn witnesses_are_leaf_roots() {
        let graphs = [Graph::path(4), Graph::star(3), Graph::path(5), Graph::empty(3), Graph::complete(4)];
        for g in &graphs {
            let r = leaf_rank(g).unwrap();
            let Outcome::Finite(k) = r.outcome else { panic!() };
            let w = r.witness.unwrap();
            assert!(leaf_root_check(g, &w.topology, &w.lengths, k).unwrap());
            assert!(leaf_rank_upper_bound(g.n()).admits_f64(k as f64));
        }
    }

    #[test]
    fn feasibility_is_not_monotone_in_k() {
        // fixed lengths: P3 on the star with lengths (2,1,2) works for k=3 only
        let p3 = Graph::path(3);
        assert!(leaf_root_check(&p3, &star(3), &[2, 1, 2], 3).unwrap());
        assert!(!leaf_root_check(&p3, &star(3), &[2, 1, 2], 4).unwrap());
    }

    #[test]
    fn upper_bound_values() {
        assert_eq!(leaf_rank_upper_bound(3).value, 384.0);
        assert_eq!(leaf_rank_upper_bound(2).value, 64.0);
    }
}
