//! Brute-force references behind the CLI `--oracle` mode. They follow the
//! definitions directly and run in polynomial time, so they are meant for
//! small inputs.

use crate::graphio::{Digraph, RootedTree};
use crate::kruskal::{ComponentTree, KruskalTree};
use crate::mst::{Edge, Verdict};
use crate::NIL;

/// NCA by marking the root path of `v` and climbing from `w`.
pub fn nca_root_paths(t: &RootedTree, v: usize, w: usize) -> usize {
    let mut on_path = vec![false; t.n + 1];
    let mut x = v;
    while x != NIL {
        on_path[x] = true;
        x = t.parent[x];
    }
    let mut y = w;
    while !on_path[y] {
        y = t.parent[y];
    }
    y
}

/// Heaviest weight on the tree path from `v` to every vertex, by search.
fn path_max_from(n: usize, tree: &[Edge], v: usize) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n + 1];
    for &(a, b, c) in tree {
        adj[a].push((b, c));
        adj[b].push((a, c));
    }
    let mut best = vec![f64::NAN; n + 1];
    best[v] = f64::NEG_INFINITY;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for &(y, c) in &adj[x] {
            if best[y].is_nan() {
                best[y] = best[x].max(c);
                stack.push(y);
            }
        }
    }
    best
}

/// Verdict by comparing every nontree edge with its tree-path maximum.
pub fn verify_by_weights(n: usize, edges: &[Edge], is_tree: &[bool]) -> Verdict {
    let tree: Vec<Edge> = edges.iter().zip(is_tree).filter(|(_, &t)| t).map(|(e, _)| *e).collect();
    for (i, &(a, b, w)) in edges.iter().enumerate() {
        if !is_tree[i] && a != b && w < path_max_from(n, &tree, a)[b] {
            return Verdict::No { edge: i, u: a, v: b };
        }
    }
    Verdict::Yes
}

/// Vertices reaching `to` inside the vertex set accepted by `keep`.
fn reaches(g: &Digraph, to: usize, keep: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut inn = vec![Vec::new(); g.n + 1];
    for a in &g.arcs {
        inn[a.v].push(a.u);
    }
    let mut seen = vec![false; g.n + 1];
    seen[to] = true;
    let mut stack = vec![to];
    while let Some(x) = stack.pop() {
        for &y in &inn[x] {
            if !seen[y] && keep(y) {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Heads by definition on a preorder-labelled flowgraph: the deepest proper
/// ancestor u that v reaches without leaving D(u).
pub fn heads(g: &Digraph, t: &RootedTree) -> Vec<usize> {
    let mut h = vec![NIL; g.n + 1];
    for k in 1..=g.n {
        let u = t.order[k];
        let (lo, hi) = (t.pre[u], t.pre[u] + t.size[u]);
        let r = reaches(g, u, |x| t.pre[x] >= lo && t.pre[x] < hi);
        for v in 1..=g.n {
            // ancestors are visited in increasing preorder, so the last
            // hit is the deepest
            if v != u && r[v] && t.pre[v] > lo && t.pre[v] < hi {
                h[v] = u;
            }
        }
    }
    h
}

/// Component label of every vertex after each prefix of edges.
fn prefix_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..=n).collect();
    let mut out = vec![label.clone()];
    for &(a, b) in edges {
        let (la, lb) = (label[a], label[b]);
        for x in label.iter_mut() {
            if *x == lb {
                *x = la;
            }
        }
        out.push(label.clone());
    }
    out
}

fn members(label: &[usize], of: usize) -> Vec<usize> {
    (1..label.len()).filter(|&v| label[v] == label[of]).collect()
}

/// Every internal node's leaves are the component its edge completes.
pub fn kruskal_matches_components(k: &KruskalTree, edges: &[(usize, usize)]) -> bool {
    let comps = prefix_components(k.n, edges);
    (k.n + 1..=k.nodes()).all(|x| {
        let i = k.num[x];
        i >= 1 && i <= edges.len() && k.leaves(x) == members(&comps[i], edges[i - 1].0)
    })
}

/// Every internal node's leaves are a component at the end of its group,
/// and children of a node belong to earlier groups.
pub fn components_match_groups(c: &ComponentTree, edges: &[(usize, usize)], groups: &[usize]) -> bool {
    let comps = prefix_components(c.n, edges);
    c.internal.iter().all(|&x| {
        let gx = c.group[x];
        let Some(last) = groups.iter().rposition(|&q| q == gx) else {
            return false;
        };
        let mut leaves = Vec::new();
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            if y <= c.n {
                leaves.push(y);
            } else {
                stack.extend(c.children[y].iter().copied());
            }
        }
        leaves.sort_unstable();
        leaves == members(&comps[last + 1], leaves[0]) && c.children[x].iter().all(|&ch| ch <= c.n || c.group[ch] < gx)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kruskal::kruskal_tree;

    #[test]
    fn nca_small() {
        let t = RootedTree::from_parents(&[0, 0, 1, 1, 2]);
        assert_eq!(nca_root_paths(&t, 4, 3), 1);
        assert_eq!(nca_root_paths(&t, 4, 2), 2);
    }

    #[test]
    fn heads_of_a_loop() {
        let g = Digraph::flow(3, 1, &[(1, 2), (2, 3), (3, 2)]);
        let t = RootedTree::from_parents(&[0, 0, 1, 2]);
        assert_eq!(heads(&g, &t), vec![0, 0, 0, 2]);
    }

    #[test]
    fn kruskal_components() {
        let t = RootedTree::from_parents(&[0, 0, 1, 1]);
        let edges = [(1, 3), (2, 1)];
        let k = kruskal_tree(&t, &edges).unwrap();
        assert!(kruskal_matches_components(&k, &edges));
    }

    #[test]
    fn verify_detects_light_edge() {
        let edges = [(1, 2, 5.0), (2, 3, 1.0), (1, 3, 2.0)];
        assert_eq!(verify_by_weights(3, &edges, &[true, true, false]), Verdict::No { edge: 2, u: 1, v: 3 });
        assert_eq!(verify_by_weights(3, &edges, &[false, true, true]), Verdict::Yes);
    }
}
