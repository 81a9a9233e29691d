//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use treepath::graphio::{Digraph, RootedTree};

/// NCA by intersecting root paths.
pub fn nca_root_paths(t: &RootedTree, v: usize, w: usize) -> usize {
    let mut on_path = vec![false; t.n + 1];
    let mut x = v;
    while x != 0 {
        on_path[x] = true;
        x = t.parent[x];
    }
    let mut y = w;
    while !on_path[y] {
        y = t.parent[y];
    }
    y
}

/// Heaviest edge weight on the tree path by explicit walk; edges are
/// (u, v, w) with 1-based ids.
pub fn path_max_walk(n: usize, edges: &[(usize, usize, f64)], v: usize, w: usize) -> Option<f64> {
    if v == w {
        return None;
    }
    let mut adj = vec![Vec::new(); n + 1];
    for &(a, b, c) in edges {
        adj[a].push((b, c));
        adj[b].push((a, c));
    }
    let mut best = vec![None; n + 1];
    let mut seen = vec![false; n + 1];
    let mut stack = vec![v];
    seen[v] = true;
    best[v] = Some(f64::NEG_INFINITY);
    while let Some(x) = stack.pop() {
        for &(y, c) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                best[y] = Some(best[x].unwrap().max(c));
                stack.push(y);
            }
        }
    }
    best[w]
}

/// Total weight of a minimum spanning forest by sorting and naive
/// quick-union without compression.
pub fn mst_weight(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
    let mut idx: Vec<usize> = (0..edges.len()).collect();
    idx.sort_by(|&a, &b| edges[a].2.total_cmp(&edges[b].2).then(a.cmp(&b)));
    let mut parent: Vec<usize> = (0..=n).collect();
    fn root(p: &[usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut total = 0.0;
    for i in idx {
        let (a, b, c) = edges[i];
        let (ra, rb) = (root(&parent, a), root(&parent, b));
        if ra != rb {
            parent[ra] = rb;
            total += c;
        }
    }
    total
}

/// Kruskal edge set under (weight, index) order, sorted by index.
pub fn mst_edges(n: usize, edges: &[(usize, usize, f64)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..edges.len()).collect();
    idx.sort_by(|&a, &b| edges[a].2.total_cmp(&edges[b].2).then(a.cmp(&b)));
    let mut parent: Vec<usize> = (0..=n).collect();
    fn root(p: &[usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut out = Vec::new();
    for i in idx {
        let (a, b, _) = edges[i];
        let (ra, rb) = (root(&parent, a), root(&parent, b));
        if ra != rb {
            parent[ra] = rb;
            out.push(i);
        }
    }
    out.sort_unstable();
    out
}

pub fn edges_of(g: &Digraph) -> Vec<(usize, usize, f64)> {
    g.arcs.iter().map(|a| (a.u, a.v, a.w.unwrap_or(0.0))).collect()
}

/// Vertices reachable from `from` using only vertices accepted by `keep`.
pub fn reach(g: &Digraph, from: usize, keep: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut out = vec![Vec::new(); g.n + 1];
    for a in &g.arcs {
        out[a.u].push(a.v);
    }
    let mut seen = vec![false; g.n + 1];
    if !keep(from) {
        return seen;
    }
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        for &y in &out[x] {
            if !seen[y] && keep(y) {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Vertices that reach `to` using only vertices accepted by `keep` (other
/// than `to` itself).
pub fn reach_rev(g: &Digraph, to: usize, keep: impl Fn(usize) -> bool) -> Vec<bool> {
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

/// Interval heads by definition: h(v) is the largest proper ancestor u of v
/// (deepest, i.e. largest preorder) such that v reaches u inside D(u).
/// `g` must be labelled in DFS preorder with tree `t`.
pub fn heads_brute(g: &Digraph, t: &RootedTree) -> Vec<usize> {
    let mut h = vec![0; g.n + 1];
    for v in 1..=g.n {
        let mut u = t.parent[v];
        while u != 0 {
            let lo = t.pre[u];
            let hi = lo + t.size[u];
            let inside = |x: usize| t.pre[x] >= lo && t.pre[x] < hi;
            if reach(g, v, inside)[u] {
                h[v] = u;
                break;
            }
            u = t.parent[u];
        }
    }
    h
}

/// Immediate dominators by removing each vertex and testing reachability.
pub fn idom_naive(g: &Digraph) -> Vec<usize> {
    let r = g.root.unwrap_or(1);
    let n = g.n;
    // dom[d][v]: d dominates v
    let mut dom = vec![vec![false; n + 1]; n + 1];
    for d in 1..=n {
        let seen = reach(g, r, |x| x != d);
        for v in 1..=n {
            dom[d][v] = v == d || !seen[v];
        }
    }
    let mut idom = vec![0; n + 1];
    for v in 1..=n {
        if v == r {
            continue;
        }
        // the strict dominator dominated by all other strict dominators
        let strict: Vec<usize> = (1..=n).filter(|&d| d != v && dom[d][v]).collect();
        idom[v] = *strict.iter().find(|&&d| strict.iter().all(|&e| dom[e][d])).unwrap();
    }
    idom
}

/// Vertices connected to `from` through the edges flagged in `keep`.
pub fn reach_undirected_tree(n: usize, edges: &[(usize, usize, f64)], keep: &[bool], from: usize) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n + 1];
    for (i, &(a, b, _)) in edges.iter().enumerate() {
        if keep[i] {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; n + 1];
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}
