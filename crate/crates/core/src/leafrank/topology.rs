//! Leaf-labelled trees without internal vertices of degree 2.

use std::collections::BTreeSet;

use serde::Serialize;

use super::LeafRankError;
use crate::graph::Graph;

/// A tree whose leaves are `0..leaves` and whose remaining vertices are
/// internal with degree at least 3. Two leaves joined by one edge form the
/// only tree without internal vertices; a single vertex is allowed for `K1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Topology {
    leaves: usize,
    tree: Graph,
}

impl Topology {
    pub fn new(leaves: usize, tree: Graph) -> Result<Self, LeafRankError> {
        if !tree.is_tree() || tree.n() < leaves {
            return Err(LeafRankError::BadTopology("not a tree on the leaves".into()));
        }
        if leaves == 1 {
            if tree.n() != 1 {
                return Err(LeafRankError::BadTopology("one leaf needs the one-vertex tree".into()));
            }
        } else {
            for v in 0..tree.n() {
                let d = tree.degree(v);
                if v < leaves && d != 1 {
                    return Err(LeafRankError::LeafMismatch(format!("vertex {v} is not a leaf")));
                }
                if v >= leaves && d < 3 {
                    return Err(LeafRankError::BadTopology(format!(
                        "internal vertex {v} has degree {d}"
                    )));
                }
            }
        }
        Ok(Topology { leaves, tree })
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn internal(&self) -> usize {
        self.tree.n() - self.leaves
    }

    pub fn tree(&self) -> &Graph {
        &self.tree
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        self.tree.edges()
    }

    /// Edge indices on the tree path between `u` and `v`.
    pub fn path_edges(&self, u: usize, v: usize) -> Vec<usize> {
        let n = self.tree.n();
        let mut prev = vec![usize::MAX; n];
        prev[u] = u;
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            for &y in self.tree.neighbors(x) {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut out = Vec::new();
        let mut x = v;
        while x != u {
            let p = prev[x];
            let e = (p.min(x), p.max(x));
            out.push(self.tree.edges().iter().position(|&f| f == e).unwrap());
            x = p;
        }
        out.sort_unstable();
        out
    }

    /// Canonical string of the tree with leaf labels forgotten.
    pub fn shape(&self) -> String {
        let n = self.tree.n();
        if n <= 2 {
            return format!("{n}");
        }
        // centres by repeated leaf removal
        let mut alive: BTreeSet<usize> = (0..n).collect();
        while alive.len() > 2 {
            let strip: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&v| self.tree.neighbors(v).iter().filter(|w| alive.contains(w)).count() <= 1)
                .collect();
            for v in strip {
                alive.remove(&v);
            }
        }
        let centers: Vec<usize> = alive.into_iter().collect();
        centers
            .iter()
            .map(|&c| self.encode(c, usize::MAX))
            .min()
            .unwrap()
    }

    fn encode(&self, v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = self
            .tree
            .neighbors(v)
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| self.encode(w, v))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }
}

/// Every leaf-labelled topology on `n >= 2` leaves, each exactly once.
///
/// Leaf `i` is added to a topology on leaves `0..i` either at an internal
/// vertex or on a new vertex subdividing an edge. Removing the largest leaf
/// (and suppressing its neighbour if that drops to degree 2) inverts this, so
/// no topology is produced twice.
pub fn enumerate_topologies(n: usize) -> Vec<Topology> {
    assert!(n >= 2, "topologies need at least two leaves");
    // vertices: leaves as 0..n-1 is only fixed at the end, so track nodes by tag
    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    enum Node {
        Leaf(usize),
        Inner(usize),
    }
    #[derive(Clone)]
    struct Partial {
        edges: Vec<(Node, Node)>,
        inner: usize,
    }
    let mut current = vec![Partial {
        edges: vec![(Node::Leaf(0), Node::Leaf(1))],
        inner: 0,
    }];
    for leaf in 2..n {
        let mut next = Vec::new();
        for t in &current {
            for j in 0..t.inner {
                let mut e = t.edges.clone();
                e.push((Node::Inner(j), Node::Leaf(leaf)));
                next.push(Partial { edges: e, inner: t.inner });
            }
            for (idx, &(a, b)) in t.edges.iter().enumerate() {
                let w = Node::Inner(t.inner);
                let mut e = t.edges.clone();
                e.remove(idx);
                e.extend([(a, w), (w, b), (w, Node::Leaf(leaf))]);
                next.push(Partial {
                    edges: e,
                    inner: t.inner + 1,
                });
            }
        }
        current = next;
    }
    current
        .into_iter()
        .map(|t| {
            let id = |x: Node| match x {
                Node::Leaf(i) => i,
                Node::Inner(j) => n + j,
            };
            let g = Graph::new(n + t.inner, t.edges.iter().map(|&(a, b)| (id(a), id(b))))
                .expect("insertion keeps a tree");
            Topology::new(n, g).expect("insertion keeps the degree conditions")
        })
        .collect()
}

/// Distinct shapes among the topologies on `n` leaves.
pub fn topology_shapes(n: usize) -> BTreeSet<String> {
    enumerate_topologies(n).iter().map(Topology::shape).collect()
}
