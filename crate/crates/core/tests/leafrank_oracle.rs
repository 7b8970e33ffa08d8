//! Leaf rank against a search over plain (unweighted) trees.

use std::collections::VecDeque;

use detlab::graph::{self, Graph};
use detlab::leafrank::{leaf_rank, Outcome};

/// Leaf-to-leaf distances of every tree on at most `max_order` vertices whose
/// leaves are exactly `0..n`.
fn leaf_distances(n: usize, max_order: usize) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for order in n..=max_order {
        for t in graph::enumerate_trees(order) {
            if (0..order).any(|v| (t.degree(v) == 1) != (v < n)) {
                continue;
            }
            let dist = (0..n)
                .map(|s| {
                    let mut d = vec![u64::MAX; order];
                    d[s] = 0;
                    let mut q = VecDeque::from([s]);
                    while let Some(x) = q.pop_front() {
                        for &y in t.neighbors(x) {
                            if d[y] == u64::MAX {
                                d[y] = d[x] + 1;
                                q.push_back(y);
                            }
                        }
                    }
                    d.truncate(n);
                    d
                })
                .collect();
            out.push(dist);
        }
    }
    out
}

/// Smallest `k` for which one of the trees is a `k`-leaf root of `g`.
fn tree_oracle(g: &Graph, trees: &[Vec<Vec<u64>>]) -> Option<u64> {
    let n = g.n();
    trees
        .iter()
        .filter_map(|dist| {
            let mut lo = 1;
            let mut hi = u64::MAX;
            for u in 0..n {
                for v in u + 1..n {
                    if g.has_edge(u, v) {
                        lo = lo.max(dist[u][v]);
                    } else {
                        hi = hi.min(dist[u][v]);
                    }
                }
            }
            (lo < hi).then_some(lo)
        })
        .min()
}

#[test]
fn agrees_with_unweighted_tree_search() {
    for n in 2..=4 {
        let trees = leaf_distances(n, 8);
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for code in 0u32..1 << pairs.len() {
            let g = Graph::new(
                n,
                pairs.iter().enumerate().filter(|(b, _)| code >> b & 1 == 1).map(|(_, &e)| e),
            )
            .unwrap();
            let oracle = tree_oracle(&g, &trees);
            let r = leaf_rank(&g).unwrap();
            let size = r.witness.as_ref().map(|w| {
                w.topology.tree().n() as u64 + w.lengths.iter().map(|l| l - 1).sum::<u64>()
            });
            match (r.outcome, oracle) {
                (Outcome::Finite(k), Some(o)) => {
                    assert!(k <= o, "{:?}: {k} vs {o}", g.edges());
                    // the witness itself is in the oracle's range
                    if size.unwrap() <= 8 {
                        assert_eq!(k, o, "{:?}", g.edges());
                    }
                }
                (Outcome::Infinite, None) => {}
                (Outcome::Infinite, Some(o)) => panic!("{:?}: oracle found k={o}", g.edges()),
                (Outcome::Finite(k), None) => {
                    assert!(size.unwrap() > 8, "{:?}: k={k} but no small tree found", g.edges());
                }
            }
        }
    }
}

#[test]
fn path_on_three_vertices_needs_k_three() {
    assert_eq!(tree_oracle(&Graph::path(3), &leaf_distances(3, 6)), Some(3));
    assert_eq!(leaf_rank(&Graph::path(3)).unwrap().outcome, Outcome::Finite(3));
}
