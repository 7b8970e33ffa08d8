//! Simple graphs, their edge-vertex incidence matrices and the determinant of
//! the incidence row Gramian.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, int, BoundValue, ExactMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("no tight extremal graph for n={n}, m={m}")]
    NotTight { n: usize, m: usize },
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;

    fn try_from(r: GraphRepr) -> Result<Self, GraphError> {
        Graph::new(r.n, r.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Edges are normalized to `(min, max)` and keep their input order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::ParallelEdge(e.0, e.1));
            }
            adj[u].push(v);
            adj[v].push(u);
            list.push(e);
        }
        Ok(Graph { n, edges: list, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph::new(n, []).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    /// Vertex-disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        Graph::new(
            self.n + other.n,
            self.edges
                .iter()
                .copied()
                .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift))),
        )
        .unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    /// Vertex sets of the connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut verts = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        verts.push(w);
                        queue.push_back(w);
                    }
                }
            }
            verts.sort_unstable();
            out.push(verts);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.m() + 1 == self.n && self.is_connected()
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Subgraph induced by `vertices`, relabeled to `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        Graph::new(
            vertices.len(),
            self.edges
                .iter()
                .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
                .map(|&(u, v)| (index[u], index[v])),
        )
        .unwrap()
    }
}

/// Edge-vertex incidence matrix: one row per edge with ones at its two endpoints.
pub fn incidence_matrix(g: &Graph) -> Result<ExactMatrix, GraphError> {
    if g.m() == 0 {
        return Err(GraphError::EmptyEdgeSet);
    }
    let mut m = ExactMatrix::zeros(g.m(), g.n());
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        m[(i, u)] = int(1);
        m[(i, v)] = int(1);
    }
    Ok(m)
}

/// Gram determinant of the incidence rows computed directly from the matrix.
pub fn brute_force_gram_det(g: &Graph) -> Result<BigInt, GraphError> {
    let inc = incidence_matrix(g)?;
    Ok(linalg::gram_det(&inc).to_integer())
}

/// Closed form for a connected graph: `n` for a tree, `4` for a unicyclic graph
/// with an odd cycle, `0` otherwise.
pub fn gram_det_formula(g: &Graph) -> Result<BigInt, GraphError> {
    if g.m() == 0 {
        return Err(GraphError::EmptyEdgeSet);
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let (n, m) = (g.n(), g.m());
    Ok(if m + 1 == n {
        BigInt::from(n)
    } else if m == n && !g.is_bipartite() {
        BigInt::from(4)
    } else {
        BigInt::zero()
    })
}

/// Product of the component closed forms. Isolated vertices contribute no rows.
pub fn gram_det(g: &Graph) -> Result<BigInt, GraphError> {
    if g.m() == 0 {
        return Err(GraphError::EmptyEdgeSet);
    }
    let mut acc = BigInt::one();
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        acc *= gram_det_formula(&g.induced(&comp))?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// Component census: single edges, two-edge paths, triangles, and everything else.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComponentProfile {
    pub k1: usize,
    pub k2: usize,
    pub k3: usize,
    pub isolated: usize,
    /// `(vertices, edges)` of every component not counted above.
    pub other: Vec<(usize, usize)>,
}

impl ComponentProfile {
    pub fn only_small_components(&self) -> bool {
        self.other.is_empty()
    }

    /// `2^k1 3^k2 4^k3`
    pub fn small_component_product(&self) -> BigInt {
        linalg::ipow(2, self.k1 as u32) * linalg::ipow(3, self.k2 as u32) * linalg::ipow(4, self.k3 as u32)
    }
}

pub fn component_profile(g: &Graph) -> ComponentProfile {
    let mut p = ComponentProfile::default();
    for comp in g.components() {
        let sub = g.induced(&comp);
        match (sub.n(), sub.m()) {
            (1, 0) => p.isolated += 1,
            (2, 1) => p.k1 += 1,
            (3, 2) => p.k2 += 1,
            (3, 3) => p.k3 += 1,
            shape => p.other.push(shape),
        }
    }
    p
}

/// Upper bound on the incidence Gram determinant of a graph of order `n`
/// with at most `m` edges: `2^m` when `2m <= n`, else `2^((n+m)/3)`.
pub fn lemma_gram_bound(n: usize, m: usize) -> BoundValue {
    if 2 * m <= n {
        BoundValue::new(2f64.powi(m as i32), format!("gram lemma: 2^m, n={n}, m={m}"))
    } else {
        BoundValue::new(
            2f64.powf((n + m) as f64 / 3.0),
            format!("gram lemma: 2^((n+m)/3), n={n}, m={m}"),
        )
    }
}

/// Exact form of the comparison `det <= lemma_gram_bound(n, m)`.
pub fn within_lemma_bound(det: &BigInt, n: usize, m: usize) -> bool {
    if 2 * m <= n {
        *det <= linalg::ipow(2, m as u32)
    } else {
        det * det * det <= linalg::ipow(2, (n + m) as u32)
    }
}

/// Exact equality `det == lemma_gram_bound(n, m)`.
pub fn attains_lemma_bound(det: &BigInt, n: usize, m: usize) -> bool {
    if 2 * m <= n {
        *det == linalg::ipow(2, m as u32)
    } else {
        det * det * det == linalg::ipow(2, (n + m) as u32)
    }
}

/// A graph meeting [`lemma_gram_bound`] with equality: `mK2 + (n-2m)K1` when
/// `2m <= n`, and `(n-m)K2 + ((2m-n)/3)K3` when `n/2 <= m <= n` and `3 | 2m-n`.
pub fn extremal_gram_graph(n: usize, m: usize) -> Result<Graph, GraphError> {
    if m == 0 {
        return Err(GraphError::NotTight { n, m });
    }
    let (pairs, triangles) = if 2 * m <= n {
        (m, 0)
    } else if m <= n && (2 * m - n) % 3 == 0 {
        (n - m, (2 * m - n) / 3)
    } else {
        return Err(GraphError::NotTight { n, m });
    };
    let mut edges = Vec::with_capacity(m);
    for i in 0..pairs {
        edges.push((2 * i, 2 * i + 1));
    }
    let base = 2 * pairs;
    for t in 0..triangles {
        let a = base + 3 * t;
        edges.extend([(a, a + 1), (a + 1, a + 2), (a, a + 2)]);
    }
    Graph::new(n, edges)
}

/// Tree encoded by a Prüfer sequence over `0..n` (`n >= 2`, `seq.len() == n - 2`).
pub fn prufer_decode(n: usize, seq: &[usize]) -> Graph {
    assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = leaves.pop_first().expect("Prüfer sequence always leaves a leaf");
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let u = leaves.pop_first().unwrap();
    let v = leaves.pop_first().unwrap();
    edges.push((u, v));
    Graph::new(n, edges).unwrap()
}

/// Number of labeled trees on `n` vertices, `n^(n-2)`.
pub fn tree_count(n: usize) -> u64 {
    assert!(n >= 2);
    (n as u64).pow(n as u32 - 2)
}

/// The tree with Prüfer index `index` in `0..tree_count(n)`; digits are read
/// most significant first.
pub fn tree_at(n: usize, mut index: u64) -> Graph {
    let mut seq = vec![0usize; n - 2];
    for slot in seq.iter_mut().rev() {
        *slot = (index % n as u64) as usize;
        index /= n as u64;
    }
    prufer_decode(n, &seq)
}

/// All `n^(n-2)` labeled trees on `n >= 2` vertices, each exactly once.
pub fn enumerate_trees(n: usize) -> impl Iterator<Item = Graph> {
    (0..tree_count(n)).map(move |i| tree_at(n, i))
}

pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(n, &seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_parallel_edges() {
        assert_eq!(Graph::new(2, [(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(Graph::new(2, [(0, 1), (1, 0)]), Err(GraphError::ParallelEdge(0, 1)));
        assert_eq!(
            Graph::new(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn incidence_examples() {
        assert_eq!(
            incidence_matrix(&Graph::complete(2)).unwrap(),
            ExactMatrix::from_i64_rows(&[[1, 1]])
        );
        assert_eq!(
            incidence_matrix(&Graph::path(3)).unwrap(),
            ExactMatrix::from_i64_rows(&[[1, 1, 0], [0, 1, 1]])
        );
        let tri = incidence_matrix(&Graph::cycle(3)).unwrap();
        assert_eq!(tri, ExactMatrix::from_i64_rows(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]]));
        assert_eq!(incidence_matrix(&Graph::empty(3)), Err(GraphError::EmptyEdgeSet));
    }

    #[test]
    fn incidence_column_sums_are_degrees() {
        let g = Graph::new(5, [(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let inc = incidence_matrix(&g).unwrap();
        for v in 0..5 {
            let col: i64 = inc.column(v).iter().map(|x| i64::try_from(x.to_integer()).unwrap()).sum();
            assert_eq!(col as usize, g.degree(v));
        }
        for i in 0..inc.rows() {
            assert_eq!(inc.row_nonzeros(i), 2);
        }
    }

    #[test]
    fn formula_examples() {
        assert_eq!(gram_det_formula(&Graph::star(4)).unwrap(), BigInt::from(5));
        assert_eq!(gram_det_formula(&Graph::cycle(4)).unwrap(), BigInt::zero());
        assert_eq!(gram_det_formula(&Graph::cycle(5)).unwrap(), BigInt::from(4));
        assert_eq!(gram_det_formula(&Graph::complete(4)).unwrap(), BigInt::zero());
        assert_eq!(
            gram_det_formula(&Graph::new(4, [(0, 1), (2, 3)]).unwrap()),
            Err(GraphError::Disconnected)
        );
    }

    #[test]
    fn component_products() {
        let two_k2 = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(gram_det(&two_k2).unwrap(), BigInt::from(4));
        let k2_k3 = Graph::complete(2).disjoint_union(&Graph::complete(3));
        assert_eq!(gram_det(&k2_k3).unwrap(), BigInt::from(8));
        let with_isolated = Graph::new(3, [(1, 2)]).unwrap();
        assert_eq!(gram_det(&with_isolated).unwrap(), BigInt::from(2));
        assert_eq!(brute_force_gram_det(&k2_k3).unwrap(), BigInt::from(8));
    }

    #[test]
    fn small_component_identity() {
        let g = Graph::complete(2)
            .disjoint_union(&Graph::path(3))
            .disjoint_union(&Graph::cycle(3))
            .disjoint_union(&Graph::complete(2))
            .disjoint_union(&Graph::empty(1));
        let p = component_profile(&g);
        assert_eq!((p.k1, p.k2, p.k3, p.isolated), (2, 1, 1, 1));
        assert!(p.only_small_components());
        assert_eq!(p.small_component_product(), BigInt::from(48));
        assert_eq!(gram_det(&g).unwrap(), p.small_component_product());
        assert_eq!(brute_force_gram_det(&g).unwrap(), p.small_component_product());
    }

    #[test]
    fn lemma_bound_examples() {
        assert_eq!(lemma_gram_bound(6, 3).value, 8.0);
        assert!((lemma_gram_bound(6, 6).value - 16.0).abs() < 1e-12);
        assert!((lemma_gram_bound(3, 3).value - 4.0).abs() < 1e-12);
        assert!(attains_lemma_bound(&BigInt::from(4), 3, 3));
        assert!(within_lemma_bound(&BigInt::from(5), 5, 5));
        assert!(within_lemma_bound(&BigInt::from(16), 6, 6));
        assert!(!within_lemma_bound(&BigInt::from(17), 6, 6));
    }

    #[test]
    fn extremal_graph_examples() {
        let g = extremal_gram_graph(6, 3).unwrap();
        assert_eq!((g.n(), g.m()), (6, 3));
        assert_eq!(gram_det(&g).unwrap(), BigInt::from(8));
        let g = extremal_gram_graph(3, 3).unwrap();
        assert_eq!(g, Graph::cycle(3).induced(&[0, 1, 2]));
        assert_eq!(gram_det(&g).unwrap(), BigInt::from(4));
        let g = extremal_gram_graph(9, 9).unwrap();
        assert_eq!(gram_det(&g).unwrap(), BigInt::from(64));
        assert_eq!(gram_det(&extremal_gram_graph(5, 4).unwrap()).unwrap(), BigInt::from(8));
        assert!(extremal_gram_graph(5, 5).is_err());
        assert!(extremal_gram_graph(4, 5).is_err());
    }

    #[test]
    fn tree_enumeration_counts() {
        assert_eq!(enumerate_trees(2).count(), 1);
        assert_eq!(enumerate_trees(3).count(), 3);
        assert_eq!(enumerate_trees(4).count(), 16);
        let trees: BTreeSet<Vec<(usize, usize)>> = enumerate_trees(5)
            .map(|t| {
                assert!(t.is_tree());
                let mut e = t.edges().to_vec();
                e.sort_unstable();
                e
            })
            .collect();
        assert_eq!(trees.len(), 125);
    }

    #[test]
    fn trees_have_gram_det_n() {
        for n in 2..=6 {
            for t in enumerate_trees(n) {
                assert_eq!(brute_force_gram_det(&t).unwrap(), BigInt::from(n));
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let g = Graph::cycle(4);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[0,3]]}"#);
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }
}
