//! Kruskal (component) trees of a tree whose edges arrive in weight order:
//! the DSU baseline, the linear variant that precomputes finds inside the
//! microtrees of a full partition, and compressed trees for groups of
//! equal-weight edges.
//!
//! The tree is rooted at vertex 1. Leaves of K are the vertices 1..=n; the
//! internal node created by the i-th edge (1-based) is n + i.

use crate::dsu::{DsuCounters, DsuForest, UnionMode};
use crate::graphio::{Digraph, Kind, RootedTree};
use crate::partition::full_partition;
use crate::topobatch::{rank_within_groups, Batch, BatchCounters, Instance};
use crate::{default_g, Error, Result, NIL};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KruskalTree {
    pub n: usize,
    /// Children of internal node k (ids n+1..=2n-1); `NIL` for leaves.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// 1-based index of the edge that created each internal node.
    pub num: Vec<usize>,
    pub parent: Vec<usize>,
}

impl KruskalTree {
    pub fn nodes(&self) -> usize {
        2 * self.n - 1
    }

    pub fn root(&self) -> usize {
        self.nodes()
    }

    /// Lines `k left right idx`, one per internal node.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for k in self.n + 1..=self.nodes() {
            s.push_str(&format!("{} {} {} {}\n", k, self.left[k], self.right[k], self.num[k]));
        }
        s
    }

    /// Leaves below node `k`, ascending.
    pub fn leaves(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![k];
        while let Some(x) = stack.pop() {
            if x <= self.n {
                out.push(x);
            } else {
                stack.push(self.left[x]);
                stack.push(self.right[x]);
            }
        }
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KruskalStats {
    pub dsu: DsuCounters,
    pub batch: BatchCounters,
    pub cached_finds: u64,
}

/// Child endpoint of each edge in order. Fails unless the edges are a
/// permutation of the tree edges.
pub fn edge_children(t: &RootedTree, edges: &[(usize, usize)]) -> Result<Vec<usize>> {
    if edges.len() + 1 != t.n {
        return Err(Error::Invalid(format!("expected {} edges, got {}", t.n - 1, edges.len())));
    }
    let mut used = vec![false; t.n + 1];
    let mut out = Vec::with_capacity(edges.len());
    for (i, &(a, b)) in edges.iter().enumerate() {
        let v = if a <= t.n && b <= t.n && t.parent[b] == a {
            b
        } else if a <= t.n && b <= t.n && t.parent[a] == b {
            a
        } else {
            return Err(Error::Invalid(format!("edge {} ({a},{b}) is not a tree edge", i + 1)));
        };
        if std::mem::replace(&mut used[v], true) {
            return Err(Error::Invalid(format!("edge {} ({a},{b}) repeated", i + 1)));
        }
        out.push(v);
    }
    Ok(out)
}

fn build(t: &RootedTree, child: &[usize], cache: Option<&[usize]>) -> Result<(KruskalTree, DsuCounters, u64)> {
    let n = t.n;
    let total = 2 * n;
    let mut k = KruskalTree { n, left: vec![NIL; total], right: vec![NIL; total], num: vec![0; total], parent: vec![NIL; total] };
    let mut stored: Vec<usize> = (0..=n).collect();
    let mut dsu = DsuForest::make_sets(n, UnionMode::ByRank)?;
    let mut cached = 0;
    for (i, &v) in child.iter().enumerate() {
        let u = match cache {
            Some(f) if f[v] != NIL => {
                cached += 1;
                f[v]
            }
            _ => dsu.find(t.parent[v]),
        };
        let x = n + i + 1;
        k.left[x] = stored[u];
        k.right[x] = stored[v];
        k.num[x] = i + 1;
        k.parent[stored[u]] = x;
        k.parent[stored[v]] = x;
        stored[u] = x;
        dsu.unite(u, v)?;
    }
    Ok((k, dsu.counters, cached))
}

/// Baseline: u = find(p(v)) for each edge, a new node over the components
/// stored at u and v, then unite(u, v).
pub fn kruskal_tree(t: &RootedTree, edges: &[(usize, usize)]) -> Result<KruskalTree> {
    let child = edge_children(t, edges)?;
    Ok(build(t, &child, None)?.0)
}

/// f(v) for every non-root v whose nearest ancestor with a larger edge number
/// lies in v's microtree of a full partition; `NIL` elsewhere. The root's
/// edge number counts as infinite.
pub fn find_cache(t: &RootedTree, num: &[usize], g: usize) -> Result<(Vec<usize>, BatchCounters)> {
    let n = t.n;
    let fp = full_partition(t, g);
    let mut idx = vec![usize::MAX; n + 1];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for k in 1..=n {
        let v = t.order[k];
        let r = fp.micro[v];
        if idx[r] == usize::MAX {
            idx[r] = members.len();
            members.push(Vec::new());
        }
        members[idx[r]].push(v);
    }
    let verts: Vec<usize> = (1..=n).collect();
    let groups: Vec<usize> = verts.iter().map(|&v| idx[fp.micro[v]]).collect();
    let keys: Vec<usize> = verts.iter().map(|&v| if v == t.root { n } else { num[v] }).collect();
    let ranks = rank_within_groups(&groups, &keys, members.len(), n + 1);
    let mut local = vec![0usize; n + 1];
    let mut batch = Batch::new(g, g + 1, false);
    for mem in &members {
        for (j, &v) in mem.iter().enumerate() {
            local[v] = j;
        }
        let mut inst = Instance::new(mem.len());
        for (j, &v) in mem.iter().enumerate() {
            inst.vlabels[j] = ranks[v - 1];
            if j > 0 {
                inst.arcs.push((local[t.parent[v]], j, 0));
            }
        }
        batch.push(inst);
    }
    let sols = batch.solve_transfer(solve_find_cache)?;
    let mut f = vec![NIL; n + 1];
    for (mem, sol) in members.iter().zip(sols) {
        for (j, &a) in sol.iter().enumerate() {
            if a != usize::MAX {
                f[mem[j]] = mem[a];
            }
        }
    }
    Ok((f, batch.counters))
}

/// Nearest proper ancestor with a larger label, by walking parent arcs.
fn solve_find_cache(inst: &Instance) -> Result<Vec<usize>> {
    let mut parent = vec![usize::MAX; inst.n];
    for &(p, c, _) in &inst.arcs {
        if p >= c {
            return Err(Error::Invalid("microtree arcs are not in preorder".into()));
        }
        parent[c] = p;
    }
    Ok((0..inst.n)
        .map(|v| {
            let mut a = parent[v];
            while a != usize::MAX && inst.vlabels[a] <= inst.vlabels[v] {
                a = parent[a];
            }
            a
        })
        .collect())
}

pub fn kruskal_tree_linear(t: &RootedTree, edges: &[(usize, usize)], g: usize) -> Result<KruskalTree> {
    kruskal_tree_linear_run(t, edges, g).map(|r| r.0)
}

/// Same tree as the baseline; finds whose answer lies in the microtree of
/// the edge's child come from the precomputed cache.
pub fn kruskal_tree_linear_run(t: &RootedTree, edges: &[(usize, usize)], g: usize) -> Result<(KruskalTree, KruskalStats)> {
    let child = edge_children(t, edges)?;
    let mut num = vec![0usize; t.n + 1];
    for (i, &v) in child.iter().enumerate() {
        num[v] = i + 1;
    }
    let (f, batch) = find_cache(t, &num, g.max(1))?;
    let (k, dsu, cached) = build(t, &child, Some(&f))?;
    Ok((k, KruskalStats { dsu, batch, cached_finds: cached }))
}

/// Component tree for equal-weight groups: non-binary, one internal node per
/// component formed by a whole group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTree {
    pub n: usize,
    /// Internal node ids (the id of the topmost Kruskal node contracted into
    /// each), ascending.
    pub internal: Vec<usize>,
    /// Group of each internal node, indexed by node id.
    pub group: Vec<usize>,
    /// Children (leaves and internal nodes), ascending, indexed by node id.
    pub children: Vec<Vec<usize>>,
}

impl ComponentTree {
    /// Lines `k group child...`, one per internal node.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for &k in &self.internal {
            s.push_str(&format!("{} {}", k, self.group[k]));
            for c in &self.children[k] {
                s.push_str(&format!(" {c}"));
            }
            s.push('\n');
        }
        s
    }
}

/// `groups[i]` is the group of the i-th edge; groups must be non-decreasing
/// along the edge order. Builds the Kruskal tree with the given tie order
/// and contracts each connected set of same-group internal nodes.
pub fn compressed_kruskal(t: &RootedTree, edges: &[(usize, usize)], groups: &[usize]) -> Result<ComponentTree> {
    if groups.len() != edges.len() {
        return Err(Error::Invalid("one group per edge expected".into()));
    }
    if groups.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Invalid("groups must follow the edge order".into()));
    }
    let k = kruskal_tree(t, edges)?;
    let n = t.n;
    let total = k.nodes();
    let mut group = vec![0usize; total + 1];
    for x in n + 1..=total {
        group[x] = groups[k.num[x] - 1];
    }
    // parents have larger ids, so a descending sweep sees them first
    let mut rep: Vec<usize> = (0..=total).collect();
    for x in (n + 1..=total).rev() {
        let p = k.parent[x];
        if p != NIL && group[p] == group[x] {
            rep[x] = rep[p];
        }
    }
    let mut children = vec![Vec::new(); total + 1];
    let mut internal = Vec::new();
    for x in 1..=total {
        if x > n && rep[x] != x {
            continue;
        }
        if x > n {
            internal.push(x);
        }
        let p = k.parent[x];
        if p != NIL {
            children[rep[p]].push(x);
        }
    }
    Ok(ComponentTree { n, internal, group, children })
}

/// Parses a group list: comma-separated group sizes in edge order, e.g.
/// `2,1,3`. Groups are numbered from 1.
pub fn parse_groups(list: &str, m: usize) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(m);
    for (gi, part) in list.split(',').enumerate() {
        let size: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad group size {part:?}")))?;
        if size == 0 {
            return Err(Error::Invalid("empty group".into()));
        }
        out.extend(std::iter::repeat(gi + 1).take(size));
    }
    if out.len() != m {
        return Err(Error::Invalid(format!("group sizes sum to {}, expected {m}", out.len())));
    }
    Ok(out)
}

/// Tree and edge list of an ordered tree file (line order = weight order),
/// rooted at vertex 1.
pub fn ordered_edges(g: &Digraph) -> Result<(RootedTree, Vec<(usize, usize)>)> {
    if g.kind != Kind::Tree {
        return Err(Error::Invalid("kruskal trees need a tree file".into()));
    }
    let t = RootedTree::from_tree_graph(g, 1)?;
    Ok((t, g.arcs.iter().map(|a| (a.u, a.v)).collect()))
}

/// Kruskal tree of an ordered tree file; `linear` selects the cached-find
/// variant with the given g (default from n).
pub fn kruskal_from_graph(g: &Digraph, linear: Option<Option<usize>>) -> Result<(KruskalTree, KruskalStats)> {
    let (t, edges) = ordered_edges(g)?;
    if t.n < 2 {
        return Err(Error::Invalid("a Kruskal tree needs at least two vertices".into()));
    }
    match linear {
        Some(gs) => kruskal_tree_linear_run(&t, &edges, gs.unwrap_or_else(|| default_g(t.n))),
        None => {
            let child = edge_children(&t, &edges)?;
            let (k, dsu, _) = build(&t, &child, None)?;
            Ok((k, KruskalStats { dsu, ..KruskalStats::default() }))
        }
    }
}
