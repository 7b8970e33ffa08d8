//! Path-edge incidence matrices of trees, the ancestor column transform and
//! the elimination of `-2` columns that bounds their determinants.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{self, Graph};
use crate::linalg::{self, int, BoundValue, ExactMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("graph is not a tree")]
    NotATree,
    #[error("root {0} is not a vertex of the tree")]
    BadRoot(usize),
    #[error("path {index} is invalid: {reason}")]
    InvalidPath { index: usize, reason: String },
    #[error("edge order is not a permutation of the tree's edges")]
    BadEdgeOrder,
    #[error("row {row} matches none of the four transformed row shapes")]
    UnclassifiableRow { row: usize },
    #[error("reduction invariant violated: {0}")]
    InvariantViolation(String),
    #[error("realizability search is limited to order 5, got {n}")]
    BudgetExceeded { n: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A tree with a designated root. Edges keep the indices of the underlying
/// graph; every edge is identified with its lower (child) endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    tree: Graph,
    root: usize,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    /// Edge joining a vertex to its parent.
    up_edge: Vec<Option<usize>>,
    /// Lower endpoint of each edge.
    edge_child: Vec<usize>,
    child_edges: Vec<Vec<usize>>,
    /// Edges in breadth-first order from the root.
    bfs_edges: Vec<usize>,
}

impl RootedTree {
    pub fn new(tree: Graph, root: usize) -> Result<Self, PathError> {
        if !tree.is_tree() {
            return Err(PathError::NotATree);
        }
        if root >= tree.n() {
            return Err(PathError::BadRoot(root));
        }
        let n = tree.n();
        let edge_index = |u: usize, v: usize| {
            let e = (u.min(v), u.max(v));
            tree.edges().iter().position(|&x| x == e).unwrap()
        };
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut up_edge = vec![None; n];
        let mut edge_child = vec![usize::MAX; tree.m()];
        let mut bfs_edges = Vec::with_capacity(tree.m());
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let mut kids: Vec<usize> = tree.neighbors(u).iter().copied().filter(|&w| !seen[w]).collect();
            kids.sort_unstable();
            for w in kids {
                seen[w] = true;
                parent[w] = Some(u);
                depth[w] = depth[u] + 1;
                let e = edge_index(u, w);
                up_edge[w] = Some(e);
                edge_child[e] = w;
                bfs_edges.push(e);
                queue.push_back(w);
            }
        }
        let mut child_edges = vec![Vec::new(); tree.m()];
        for e in 0..tree.m() {
            let c = edge_child[e];
            if let Some(p) = parent[c] {
                if let Some(pe) = up_edge[p] {
                    child_edges[pe].push(e);
                }
            }
        }
        Ok(RootedTree {
            tree,
            root,
            parent,
            depth,
            up_edge,
            edge_child,
            child_edges,
            bfs_edges,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn edge_count(&self) -> usize {
        self.tree.m()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Edge between `v` and its parent; `None` for the root.
    pub fn up_edge(&self, v: usize) -> Option<usize> {
        self.up_edge[v]
    }

    pub fn edge_child(&self, e: usize) -> usize {
        self.edge_child[e]
    }

    /// The unique ancestor edge of `e`, if `e` does not touch the root.
    pub fn parent_edge(&self, e: usize) -> Option<usize> {
        self.parent[self.edge_child[e]].and_then(|p| self.up_edge[p])
    }

    pub fn child_edges(&self, e: usize) -> &[usize] {
        &self.child_edges[e]
    }

    pub fn bfs_edges(&self) -> &[usize] {
        &self.bfs_edges
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.tree.degree(v) == 1
    }

    /// `u` is an ancestor of `v` or equal to it.
    pub fn is_ancestor_or_self(&self, u: usize, mut v: usize) -> bool {
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].unwrap();
        }
        u == v
    }

    /// `e <= f` in the tree order on edges.
    pub fn edge_le(&self, e: usize, f: usize) -> bool {
        self.is_ancestor_or_self(self.edge_child[e], self.edge_child[f])
    }

    pub fn comparable(&self, e: usize, f: usize) -> bool {
        self.edge_le(e, f) || self.edge_le(f, e)
    }

    /// Vertex sequence of the tree path from `u` to `v`.
    pub fn vertex_path(&self, u: usize, v: usize) -> Vec<usize> {
        let (mut a, mut b) = (u, v);
        let mut left = vec![a];
        let mut right = vec![b];
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a].unwrap();
                left.push(a);
            } else {
                b = self.parent[b].unwrap();
                right.push(b);
            }
        }
        right.pop();
        left.extend(right.into_iter().rev());
        left
    }
}

/// Tree paths given as vertex sequences; the rows of a path-edge matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathFamily {
    paths: Vec<Vec<usize>>,
}

impl PathFamily {
    /// Every path must be a simple path of `tree` with at least one edge.
    pub fn new(tree: &Graph, paths: Vec<Vec<usize>>) -> Result<Self, PathError> {
        for (index, p) in paths.iter().enumerate() {
            let bad = |reason: &str| PathError::InvalidPath {
                index,
                reason: reason.to_string(),
            };
            if p.len() < 2 {
                return Err(bad("a path needs at least one edge"));
            }
            if p.iter().any(|&v| v >= tree.n()) {
                return Err(bad("vertex out of range"));
            }
            if p.iter().collect::<BTreeSet<_>>().len() != p.len() {
                return Err(bad("repeated vertex"));
            }
            if p.windows(2).any(|w| !tree.has_edge(w[0], w[1])) {
                return Err(bad("consecutive vertices are not adjacent in the tree"));
            }
        }
        Ok(PathFamily { paths })
    }

    /// Paths between the given endpoint pairs.
    pub fn from_endpoints(tree: &RootedTree, ends: &[(usize, usize)]) -> Result<Self, PathError> {
        let paths = ends.iter().map(|&(u, v)| tree.vertex_path(u, v)).collect();
        PathFamily::new(tree.graph(), paths)
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    /// Edge indices used by path `i`.
    pub fn edges_of(&self, tree: &Graph, i: usize) -> Vec<usize> {
        self.paths[i]
            .windows(2)
            .map(|w| {
                let e = (w[0].min(w[1]), w[0].max(w[1]));
                tree.edges().iter().position(|&x| x == e).unwrap()
            })
            .collect()
    }
}

fn check_edge_order(tree: &Graph, order: &[usize]) -> Result<(), PathError> {
    let set: BTreeSet<usize> = order.iter().copied().collect();
    if order.len() != tree.m() || set.len() != order.len() || order.iter().any(|&e| e >= tree.m()) {
        return Err(PathError::BadEdgeOrder);
    }
    Ok(())
}

/// `A(P, T)`: row per path, column `j` is edge `edge_order[j]`, entry 1 iff the path uses it.
pub fn path_edge_matrix(
    tree: &Graph,
    paths: &PathFamily,
    edge_order: &[usize],
) -> Result<ExactMatrix, PathError> {
    check_edge_order(tree, edge_order)?;
    let mut col_of = vec![0; tree.m()];
    for (j, &e) in edge_order.iter().enumerate() {
        col_of[e] = j;
    }
    let mut m = ExactMatrix::zeros(paths.len(), tree.m());
    for i in 0..paths.len() {
        for e in paths.edges_of(tree, i) {
            m[(i, col_of[e])] = int(1);
        }
    }
    Ok(m)
}

/// Identity edge order `0..m`.
pub fn natural_order(tree: &Graph) -> Vec<usize> {
    (0..tree.m()).collect()
}

/// How the root is picked before transforming.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootStrategy {
    Vertex(usize),
    /// A leaf in which at least two paths end, falling back to vertex 0.
    LeafWithTwoPathEnds,
}

pub fn choose_root(tree: &Graph, paths: &PathFamily, strategy: RootStrategy) -> usize {
    match strategy {
        RootStrategy::Vertex(r) => r,
        RootStrategy::LeafWithTwoPathEnds => (0..tree.n())
            .find(|&v| {
                tree.degree(v) == 1
                    && paths
                        .paths()
                        .iter()
                        .filter(|p| p.first() == Some(&v) || p.last() == Some(&v))
                        .count()
                        >= 2
            })
            .unwrap_or(0),
    }
}

/// Subtracts from every edge column the columns of its child edges, going
/// through the edges in breadth-first order. Columns are indexed through
/// `edge_order` as in [`path_edge_matrix`].
pub fn ancestor_transform(
    a: &ExactMatrix,
    tree: &RootedTree,
    edge_order: &[usize],
) -> Result<ExactMatrix, PathError> {
    check_edge_order(tree.graph(), edge_order)?;
    if a.cols() != edge_order.len() {
        return Err(LinalgError::Dimension(format!(
            "matrix has {} columns, tree has {} edges",
            a.cols(),
            edge_order.len()
        ))
        .into());
    }
    let mut col_of = vec![0; edge_order.len()];
    for (j, &e) in edge_order.iter().enumerate() {
        col_of[e] = j;
    }
    let mut out = a.clone();
    for &e in tree.bfs_edges() {
        for &c in tree.child_edges(e) {
            for i in 0..a.rows() {
                let v = out[(i, col_of[c])].clone();
                out[(i, col_of[e])] -= v;
            }
        }
    }
    Ok(out)
}

/// Shape of a transformed row, determined by the path's two end edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowCase {
    /// End edges incomparable, path avoids the root: `+1, +1, -2`.
    IncomparableBelowRoot,
    /// End edges incomparable, path passes the root: `+1, +1`.
    ThroughRoot,
    /// End edges comparable, path avoids the root: `-1, +1`.
    ComparableBelowRoot,
    /// End edges comparable, path ends at the root: a single `+1`.
    EndsAtRoot,
}

/// Expected transformed row for a path, as `(edge, value)` pairs.
fn expected_row(tree: &RootedTree, path: &[usize]) -> (RowCase, Vec<(usize, i64)>) {
    let top = *path.iter().min_by_key(|&&v| tree.depth(v)).unwrap();
    let (first, last) = (path[0], path[path.len() - 1]);
    let bottom = |end: usize| tree.up_edge(end).unwrap();
    if top != first && top != last {
        let mut row = vec![(bottom(first), 1), (bottom(last), 1)];
        match tree.up_edge(top) {
            Some(up) => {
                row.push((up, -2));
                (RowCase::IncomparableBelowRoot, row)
            }
            None => (RowCase::ThroughRoot, row),
        }
    } else {
        let low = if top == first { last } else { first };
        let mut row = vec![(bottom(low), 1)];
        match tree.up_edge(top) {
            Some(up) => {
                row.push((up, -1));
                (RowCase::ComparableBelowRoot, row)
            }
            None => (RowCase::EndsAtRoot, row),
        }
    }
}

/// Labels every transformed row with its case, checking that the row has
/// exactly the shape the case predicts.
pub fn classify_transformed_rows(
    transformed: &ExactMatrix,
    tree: &RootedTree,
    edge_order: &[usize],
    paths: &PathFamily,
) -> Result<Vec<RowCase>, PathError> {
    check_edge_order(tree.graph(), edge_order)?;
    let mut col_of = vec![0; edge_order.len()];
    for (j, &e) in edge_order.iter().enumerate() {
        col_of[e] = j;
    }
    let mut cases = Vec::with_capacity(paths.len());
    for (row, path) in paths.paths().iter().enumerate() {
        let (case, entries) = expected_row(tree, path);
        let mut expected = vec![BigRational::zero(); edge_order.len()];
        for (e, v) in entries {
            expected[col_of[e]] = int(v);
        }
        if transformed.row(row) != expected.as_slice() {
            return Err(PathError::UnclassifiableRow { row });
        }
        cases.push(case);
    }
    Ok(cases)
}

/// Which of the five row properties fails, if any. `edge_of[j]` is the edge of column `j`.
pub fn row_property_violation(
    row: &[BigRational],
    tree: &RootedTree,
    edge_of: &[usize],
    f_columns: &BTreeSet<usize>,
) -> Option<&'static str> {
    let minus_two = int(-2);
    let pos: Vec<usize> = (0..row.len()).filter(|&j| row[j].is_positive()).collect();
    let neg: Vec<usize> = (0..row.len()).filter(|&j| row[j].is_negative()).collect();
    for (x, &a) in pos.iter().enumerate() {
        if pos[x + 1..].iter().any(|&b| tree.comparable(edge_of[a], edge_of[b])) {
            return Some("(i) positive entries on comparable edges");
        }
    }
    if neg.len() > 1 {
        return Some("(ii) more than one negative entry");
    }
    if neg.iter().any(|&j| row[j] == minus_two && !f_columns.contains(&j)) {
        return Some("(ii) -2 outside F");
    }
    for &e in &neg {
        if pos.iter().any(|&f| !tree.edge_le(edge_of[e], edge_of[f])) {
            return Some("(iii) negative entry not below a positive entry");
        }
    }
    if row.iter().any(|x| *x != minus_two && x.abs() > BigRational::one()) {
        return Some("(iv) entry of absolute value above 1");
    }
    let positive_sum: BigRational = pos.iter().map(|&j| row[j].clone()).sum();
    if positive_sum > int(2) {
        return Some("(v) positive entries sum above 2");
    }
    None
}

/// One elementary update `row[target] += factor * row[source]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowUpdate {
    pub target: usize,
    pub source: usize,
    pub factor: BigRational,
    pub phase: u8,
}

/// Result of the `-2` elimination.
#[derive(Clone, Debug)]
pub struct ReductionState {
    pub matrix: ExactMatrix,
    /// Columns that held a `-2` after the transform.
    pub f_columns: Vec<usize>,
    /// Rows holding the only nonzero, a `-2`, of some column.
    pub r_rows: Vec<usize>,
    /// Rows vanishing on the `F` columns with norm at most 2.
    pub s_rows: Vec<usize>,
    pub steps: Vec<RowUpdate>,
}

impl ReductionState {
    /// For each row in `r_rows`, the column in which its `-2` stands alone.
    pub fn isolated_columns(&self) -> Vec<(usize, usize)> {
        self.r_rows
            .iter()
            .map(|&p| (p, isolated_minus_two(&self.matrix, p).unwrap()))
            .collect()
    }

    /// Expands the determinant along the isolated `-2` columns and bounds the
    /// remaining minor by Hadamard's inequality.
    pub fn expansion_bound(&self) -> f64 {
        let iso = self.isolated_columns();
        let rows_out: BTreeSet<usize> = iso.iter().map(|&(r, _)| r).collect();
        let cols_out: BTreeSet<usize> = iso.iter().map(|&(_, c)| c).collect();
        let rest: f64 = (0..self.matrix.rows())
            .filter(|i| !rows_out.contains(i))
            .map(|i| {
                let sq: BigRational = (0..self.matrix.cols())
                    .filter(|j| !cols_out.contains(j))
                    .map(|j| &self.matrix[(i, j)] * &self.matrix[(i, j)])
                    .sum();
                sq.to_f64().unwrap().sqrt()
            })
            .product();
        2f64.powi(iso.len() as i32) * rest
    }
}

fn isolated_minus_two(m: &ExactMatrix, p: usize) -> Option<usize> {
    let minus_two = int(-2);
    (0..m.cols()).find(|&j| m[(p, j)] == minus_two && (0..m.rows()).all(|i| i == p || m[(i, j)].is_zero()))
}

fn r_set(m: &ExactMatrix) -> BTreeSet<usize> {
    (0..m.rows()).filter(|&p| isolated_minus_two(m, p).is_some()).collect()
}

fn s_set(m: &ExactMatrix, f: &BTreeSet<usize>) -> BTreeSet<usize> {
    (0..m.rows())
        .filter(|&p| f.iter().all(|&j| m[(p, j)].is_zero()) && m.row_norm_sq(p) <= int(4))
        .collect()
}

/// Removes positive entries from the `-2` columns, then clears every other
/// nonzero from the columns of `-2` entries outside the settled rows. Every
/// update is a determinant-preserving row operation and is recorded.
pub fn reduce_path_matrix(
    transformed: &ExactMatrix,
    tree: &RootedTree,
    edge_order: &[usize],
) -> Result<ReductionState, PathError> {
    check_edge_order(tree.graph(), edge_order)?;
    let edge_of = edge_order;
    let mut b = transformed.clone();
    let minus_two = int(-2);
    let f_columns: Vec<usize> = (0..b.cols())
        .filter(|&j| (0..b.rows()).any(|i| b[(i, j)] == minus_two))
        .collect();
    let f_set: BTreeSet<usize> = f_columns.iter().copied().collect();
    let violation = |b: &ExactMatrix, row: usize| {
        row_property_violation(b.row(row), tree, edge_of, &f_set)
            .map(|v| PathError::InvariantViolation(format!("row {row}: {v}")))
    };
    for i in 0..b.rows() {
        if let Some(e) = violation(&b, i) {
            return Err(e);
        }
    }
    let mut steps = Vec::new();
    let limit = 4 * (b.rows() + 1) * (b.cols() + 1);

    // phase 1
    loop {
        if steps.len() > limit {
            return Err(PathError::InvariantViolation("phase 1 does not terminate".into()));
        }
        let Some(&col) = f_columns
            .iter()
            .find(|&&j| (0..b.rows()).any(|i| b[(i, j)].is_positive()))
        else {
            break;
        };
        let p = (0..b.rows()).find(|&i| b[(i, col)] == minus_two).ok_or_else(|| {
            PathError::InvariantViolation(format!("column {col} lost its -2 entry"))
        })?;
        let q = (0..b.rows()).find(|&i| b[(i, col)].is_positive()).unwrap();
        let factor = &b[(q, col)] / int(2);
        b.add_row_multiple(q, p, &factor);
        steps.push(RowUpdate {
            target: q,
            source: p,
            factor,
            phase: 1,
        });
        if let Some(e) = violation(&b, q) {
            return Err(e);
        }
    }

    // phase 2
    let mut settled: BTreeSet<usize> = r_set(&b).union(&s_set(&b, &f_set)).copied().collect();
    loop {
        if steps.len() > 2 * limit {
            return Err(PathError::InvariantViolation("phase 2 does not terminate".into()));
        }
        let found = (0..b.rows())
            .filter(|p| !settled.contains(p))
            .find_map(|p| (0..b.cols()).find(|&j| b[(p, j)] == minus_two).map(|j| (p, j)));
        let Some((p, col)) = found else {
            break;
        };
        let q = (0..b.rows())
            .find(|&i| i != p && !b[(i, col)].is_zero())
            .ok_or_else(|| PathError::InvariantViolation(format!("row {p} should be settled")))?;
        if settled.contains(&q) {
            return Err(PathError::InvariantViolation(format!(
                "partner row {q} of row {p} is already settled"
            )));
        }
        let beta = b[(q, col)].clone();
        if !beta.is_negative() {
            return Err(PathError::InvariantViolation(format!(
                "positive entry left in F column {col}"
            )));
        }
        let factor = beta / int(2);
        b.add_row_multiple(q, p, &factor);
        steps.push(RowUpdate {
            target: q,
            source: p,
            factor,
            phase: 2,
        });
        let next: BTreeSet<usize> = r_set(&b).union(&s_set(&b, &f_set)).copied().collect();
        if !(next.is_superset(&settled) && next.len() > settled.len()) {
            return Err(PathError::InvariantViolation(
                "settled rows did not strictly grow".into(),
            ));
        }
        settled = next;
    }

    let r_rows: Vec<usize> = r_set(&b).into_iter().collect();
    let s_rows: Vec<usize> = s_set(&b, &f_set).into_iter().collect();
    for i in 0..b.rows() {
        if !r_rows.contains(&i) && b.row_norm_sq(i) > int(4) {
            return Err(PathError::InvariantViolation(format!(
                "row {i} outside R has norm above 2"
            )));
        }
    }
    Ok(ReductionState {
        matrix: b,
        f_columns,
        r_rows,
        s_rows,
        steps,
    })
}

/// `2^(n-1)` for `n - 1` paths in a tree on `n` vertices.
pub fn path_matrix_bound(n: usize) -> BoundValue {
    BoundValue::new(2f64.powi(n as i32 - 1), format!("path-edge: 2^(n-1), n={n}"))
}

/// `6^((n-1)/2)`, the Hadamard bound right after the ancestor transform.
pub fn transformed_hadamard_bound(n: usize) -> BoundValue {
    BoundValue::new(
        6f64.powf((n as f64 - 1.0) / 2.0),
        format!("path-edge transformed: 6^((n-1)/2), n={n}"),
    )
}

/// The ternary-tree instance with `n - 1 = 3(2^d - 1)` edges and `n - 1` paths.
#[derive(Clone, Debug)]
pub struct ExtremalPathInstance {
    pub tree: RootedTree,
    pub paths: PathFamily,
    /// Number of paths inside a root subtree, one per internal non-root vertex.
    pub internal_paths: usize,
    /// Number of paths between leaves of different root subtrees.
    pub leaf_paths: usize,
    pub predicted_abs_det: BigInt,
}

impl ExtremalPathInstance {
    pub fn matrix(&self) -> ExactMatrix {
        path_edge_matrix(self.tree.graph(), &self.paths, &natural_order(self.tree.graph())).unwrap()
    }
}

/// Root with three children, every other internal vertex with two children,
/// all leaves at depth `d`. Vertices are numbered breadth-first.
pub fn extremal_path_instance(d: usize) -> Result<ExtremalPathInstance, PathError> {
    if d == 0 {
        return Err(PathError::InvariantViolation("depth must be at least 1".into()));
    }
    let mut edges = Vec::new();
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut level = vec![0usize];
    for depth in 0..d {
        let mut next = Vec::new();
        for &v in &level {
            let k = if depth == 0 { 3 } else { 2 };
            for _ in 0..k {
                let w = children.len();
                children.push(Vec::new());
                children[v].push(w);
                edges.push((v, w));
                next.push(w);
            }
        }
        level = next;
    }
    let n = children.len();
    let tree = RootedTree::new(Graph::new(n, edges).map_err(|_| PathError::NotATree)?, 0)?;
    let min_leaf = |mut v: usize| {
        while let Some(&c) = children[v].first() {
            v = c;
        }
        v
    };
    let leaves_below = |v: usize| -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if children[u].is_empty() {
                out.push(u);
            }
            stack.extend(children[u].iter().rev());
        }
        out.sort_unstable();
        out
    };
    let mut ends = Vec::new();
    for v in 1..n {
        if children[v].len() == 2 {
            ends.push((min_leaf(children[v][0]), min_leaf(children[v][1])));
        }
    }
    let internal_paths = ends.len();
    let subtrees: Vec<Vec<usize>> = children[0].iter().map(|&c| leaves_below(c)).collect();
    for i in 0..subtrees[0].len() {
        let (a, b, c) = (subtrees[0][i], subtrees[1][i], subtrees[2][i]);
        ends.extend([(a, b), (b, c), (c, a)]);
    }
    let leaf_paths = ends.len() - internal_paths;
    let paths = PathFamily::from_endpoints(&tree, &ends)?;
    let predicted_abs_det = linalg::ipow(2, (internal_paths + leaf_paths / 3) as u32);
    Ok(ExtremalPathInstance {
        tree,
        paths,
        internal_paths,
        leaf_paths,
        predicted_abs_det,
    })
}

/// Random family of `count` paths between distinct random vertices.
pub fn random_path_family(tree: &RootedTree, count: usize, rng: &mut impl Rng) -> PathFamily {
    let n = tree.n();
    let ends: Vec<(usize, usize)> = (0..count)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect();
    PathFamily::from_endpoints(tree, &ends).expect("endpoints of a tree give tree paths")
}

/// `true` iff some tree with `cols(m)` edges, some bijection of its edges to
/// the columns, and some choice of paths reproduce `m`. Exhaustive; order at most 5.
pub fn is_realizable(m: &ExactMatrix) -> Result<bool, PathError> {
    m.check_zero_one()?;
    let edges = m.cols();
    if edges > 5 {
        return Err(PathError::BudgetExceeded { n: edges });
    }
    if edges == 0 {
        return Ok(m.rows() == 0);
    }
    let row_masks: Vec<u32> = (0..m.rows())
        .map(|i| {
            (0..edges)
                .filter(|&j| m[(i, j)].is_one())
                .fold(0u32, |acc, j| acc | 1 << j)
        })
        .collect();
    if row_masks.contains(&0) {
        return Ok(false);
    }
    let mut perm: Vec<usize> = (0..edges).collect();
    let perms = permutations(&mut perm);
    for tree in graph::enumerate_trees(edges + 1) {
        let rooted = RootedTree::new(tree, 0)?;
        let n = rooted.n();
        let mut path_masks = BTreeSet::new();
        for u in 0..n {
            for v in u + 1..n {
                let p = rooted.vertex_path(u, v);
                let fam = PathFamily::new(rooted.graph(), vec![p])?;
                let mask = fam.edges_of(rooted.graph(), 0).iter().fold(0u32, |acc, &e| acc | 1 << e);
                path_masks.insert(mask);
            }
        }
        for pi in &perms {
            // column j is edge pi[j]
            let ok = row_masks.iter().all(|&rm| {
                let mapped = (0..edges)
                    .filter(|&j| rm & (1 << j) != 0)
                    .fold(0u32, |acc, j| acc | 1 << pi[j]);
                path_masks.contains(&mapped)
            });
            if ok {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn permutations(items: &mut Vec<usize>) -> Vec<Vec<usize>> {
    fn go(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            go(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut out = Vec::new();
    go(items, 0, &mut out);
    out
}

/// The 4x4 matrix with the 2-consecutive ones property that is not a
/// path-edge incidence matrix of any tree.
pub fn non_realizable_example() -> ExactMatrix {
    ExactMatrix::from_i64_rows(&[[1, 1, 1, 1], [1, 1, 1, 0], [0, 1, 1, 1], [1, 0, 0, 1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{abs_det, det_exact};
    use rand::SeedableRng;

    fn star3() -> RootedTree {
        RootedTree::new(Graph::star(3), 0).unwrap()
    }

    #[test]
    fn rooted_tree_structure() {
        let t = RootedTree::new(Graph::path(4), 0).unwrap();
        assert_eq!(t.bfs_edges(), &[0, 1, 2]);
        assert_eq!(t.parent_edge(2), Some(1));
        assert_eq!(t.parent_edge(0), None);
        assert!(t.edge_le(0, 2));
        assert!(!t.edge_le(2, 0));
        assert_eq!(t.vertex_path(3, 0), vec![3, 2, 1, 0]);
        assert!(RootedTree::new(Graph::cycle(3), 0).is_err());
        assert!(RootedTree::new(Graph::path(3), 5).is_err());
    }

    #[test]
    fn single_edge_paths_give_identity() {
        let t = RootedTree::new(Graph::path(4), 0).unwrap();
        let p = PathFamily::from_endpoints(&t, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let a = path_edge_matrix(t.graph(), &p, &natural_order(t.graph())).unwrap();
        assert_eq!(a, ExactMatrix::identity(3));
    }

    #[test]
    fn star_leaf_paths_give_cyclic_pattern() {
        let t = star3();
        let p = PathFamily::from_endpoints(&t, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let a = path_edge_matrix(t.graph(), &p, &natural_order(t.graph())).unwrap();
        assert_eq!(a, ExactMatrix::from_i64_rows(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]]));
        assert_eq!(abs_det(&a).unwrap(), int(2));
        let b = ancestor_transform(&a, &t, &natural_order(t.graph())).unwrap();
        assert_eq!(b, a);
        let cases = classify_transformed_rows(&b, &t, &natural_order(t.graph()), &p).unwrap();
        assert!(cases.iter().all(|&c| c == RowCase::ThroughRoot));
    }

    #[test]
    fn path_family_validation() {
        let g = Graph::path(4);
        assert!(PathFamily::new(&g, vec![vec![0]]).is_err());
        assert!(PathFamily::new(&g, vec![vec![0, 2]]).is_err());
        assert!(PathFamily::new(&g, vec![vec![0, 1, 0]]).is_err());
        assert!(PathFamily::new(&g, vec![vec![0, 1, 2]]).is_ok());
        let t = RootedTree::new(g.clone(), 0).unwrap();
        let p = PathFamily::new(&g, vec![vec![0, 1]]).unwrap();
        assert_eq!(path_edge_matrix(&g, &p, &[0, 1]), Err(PathError::BadEdgeOrder));
        assert!(ancestor_transform(&ExactMatrix::zeros(1, 2), &t, &[0, 1, 2]).is_err());
    }

    #[test]
    fn four_cases_are_recognized() {
        // root 0; 0-1, 1-2, 1-3, 2-4, 0-5
        let g = Graph::new(6, [(0, 1), (1, 2), (1, 3), (2, 4), (0, 5)]).unwrap();
        let t = RootedTree::new(g.clone(), 0).unwrap();
        let ends = [(4, 3), (4, 5), (4, 1), (4, 0)];
        let p = PathFamily::from_endpoints(&t, &ends).unwrap();
        let order = natural_order(&g);
        let a = path_edge_matrix(&g, &p, &order).unwrap();
        let b = ancestor_transform(&a, &t, &order).unwrap();
        let cases = classify_transformed_rows(&b, &t, &order, &p).unwrap();
        assert_eq!(
            cases,
            vec![
                RowCase::IncomparableBelowRoot,
                RowCase::ThroughRoot,
                RowCase::ComparableBelowRoot,
                RowCase::EndsAtRoot
            ]
        );
        assert_eq!(b.row(0).iter().filter(|x| **x == int(-2)).count(), 1);
        assert_eq!(b.row(3).iter().filter(|x| !x.is_zero()).count(), 1);
    }

    #[test]
    fn corrupted_row_is_unclassifiable() {
        let t = star3();
        let p = PathFamily::from_endpoints(&t, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let order = natural_order(t.graph());
        let mut b = path_edge_matrix(t.graph(), &p, &order).unwrap();
        b[(1, 0)] = int(1);
        assert_eq!(
            classify_transformed_rows(&b, &t, &order, &p),
            Err(PathError::UnclassifiableRow { row: 1 })
        );
    }

    #[test]
    fn transform_preserves_determinant_on_random_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(2..=8);
            let g = graph::random_tree(n, &mut rng);
            let t = RootedTree::new(g.clone(), rng.gen_range(0..n)).unwrap();
            let p = random_path_family(&t, n - 1, &mut rng);
            let order = natural_order(&g);
            let a = path_edge_matrix(&g, &p, &order).unwrap();
            let b = ancestor_transform(&a, &t, &order).unwrap();
            assert_eq!(det_exact(&a).unwrap(), det_exact(&b).unwrap());
            classify_transformed_rows(&b, &t, &order, &p).unwrap();
            for i in 0..b.rows() {
                assert!(b.row_norm_sq(i) <= int(6));
            }
        }
    }

    #[test]
    fn reduction_without_minus_two_is_noop() {
        let t = RootedTree::new(Graph::path(4), 0).unwrap();
        let p = PathFamily::from_endpoints(&t, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let order = natural_order(t.graph());
        let a = path_edge_matrix(t.graph(), &p, &order).unwrap();
        let b = ancestor_transform(&a, &t, &order).unwrap();
        let red = reduce_path_matrix(&b, &t, &order).unwrap();
        assert!(red.steps.is_empty());
        assert!(red.f_columns.is_empty());
        assert_eq!(red.matrix, b);
    }

    #[test]
    fn reduction_preserves_determinant_stepwise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = rng.gen_range(3..=8);
            let g = graph::random_tree(n, &mut rng);
            let t = RootedTree::new(g.clone(), 0).unwrap();
            let p = random_path_family(&t, n - 1, &mut rng);
            let order = natural_order(&g);
            let a = path_edge_matrix(&g, &p, &order).unwrap();
            let b = ancestor_transform(&a, &t, &order).unwrap();
            let red = reduce_path_matrix(&b, &t, &order).unwrap();
            let d = det_exact(&b).unwrap();
            let mut m = b.clone();
            for s in &red.steps {
                m.add_row_multiple(s.target, s.source, &s.factor);
                assert_eq!(det_exact(&m).unwrap(), d);
            }
            assert_eq!(m, red.matrix);
            let bound = path_matrix_bound(n);
            assert!(bound.admits_f64(red.expansion_bound()));
            assert!(BoundValue::new(red.expansion_bound(), "").admits(&d.abs()));
        }
    }

    #[test]
    fn extremal_instances() {
        for (d, n, det) in [(1, 4, 2), (2, 10, 32)] {
            let inst = extremal_path_instance(d).unwrap();
            assert_eq!(inst.tree.n(), n);
            assert_eq!(inst.paths.len(), n - 1);
            assert_eq!(inst.internal_paths, n / 2 - 2);
            assert_eq!(inst.leaf_paths, n / 2 + 1);
            assert_eq!(inst.predicted_abs_det, BigInt::from(det));
            assert_eq!(abs_det(&inst.matrix()).unwrap(), int(det));
        }
    }

    #[test]
    fn extremal_transform_has_block_shape() {
        let inst = extremal_path_instance(2).unwrap();
        let order = natural_order(inst.tree.graph());
        let b = ancestor_transform(&inst.matrix(), &inst.tree, &order).unwrap();
        for i in 0..inst.internal_paths {
            assert_eq!(b.row(i).iter().filter(|x| **x == int(-2)).count(), 1);
            assert_eq!(b.row(i).iter().filter(|x| **x == int(1)).count(), 2);
        }
        for i in inst.internal_paths..b.rows() {
            assert_eq!(b.row(i).iter().filter(|x| **x == int(1)).count(), 2);
            assert_eq!(b.row_nonzeros(i), 2);
        }
    }

    #[test]
    fn realizability() {
        assert!(!is_realizable(&non_realizable_example()).unwrap());
        assert!(is_realizable(&ExactMatrix::identity(3)).unwrap());
        let inst = extremal_path_instance(1).unwrap();
        assert!(is_realizable(&inst.matrix()).unwrap());
        assert!(matches!(
            is_realizable(&ExactMatrix::identity(6)),
            Err(PathError::BudgetExceeded { n: 6 })
        ));
    }

    #[test]
    fn root_strategy_prefers_leaf_with_two_path_ends() {
        let g = Graph::path(4);
        let p = PathFamily::new(&g, vec![vec![3, 2], vec![3, 2, 1], vec![0, 1]]).unwrap();
        assert_eq!(choose_root(&g, &p, RootStrategy::LeafWithTwoPathEnds), 3);
        assert_eq!(choose_root(&g, &p, RootStrategy::Vertex(1)), 1);
    }
}
