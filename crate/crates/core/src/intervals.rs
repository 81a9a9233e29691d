//! Interval analysis: heads h(v) of the interval forest H and the compressed
//! forest H′ by backward search with contraction.
//!
//! Inputs are flowgraphs whose vertex ids are DFS preorder numbers (root 1)
//! together with that DFS tree and its fringe/core partition with left
//! paths. Fringe heads come from a batched per-microtree computation; core
//! heads come from path-by-path processing where contractions off the
//! current path live in a DSU and contractions on it live in a stack.

use crate::dsu::{DsuCounters, DsuForest, UnionMode};
use crate::graphio::{preorder_relabel, strong_components, Digraph, RootedTree};
use crate::nca::nca_linear_run;
use crate::partition::{partition, TreePartition};
use crate::topobatch::{Batch, BatchCounters, Instance};
use crate::{default_g, Error, Result, NIL};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalForest {
    /// Head of each vertex, `NIL` for none. For a compressed forest this is
    /// the nearest core ancestor in H.
    pub h: Vec<usize>,
    pub compressed: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntervalStats {
    pub nca: DsuCounters,
    pub dsu: DsuCounters,
    pub batch: BatchCounters,
    /// Bag entries created plus entries popped.
    pub bag_ops: u64,
    pub stack_pops: u64,
    pub big_arcs: u64,
}

/// Reverse adjacency bags as singly linked lists with O(1) concatenation.
/// Entries are popped most recently added first.
struct Bags {
    head: Vec<usize>,
    tail: Vec<usize>,
    val: Vec<usize>,
    next: Vec<usize>,
}

const END: usize = usize::MAX;

impl Bags {
    fn new(n: usize, cap: usize) -> Bags {
        Bags { head: vec![END; n + 1], tail: vec![END; n + 1], val: Vec::with_capacity(cap), next: Vec::with_capacity(cap) }
    }

    fn add(&mut self, u: usize, x: usize) {
        let i = self.val.len();
        self.val.push(x);
        self.next.push(self.head[u]);
        if self.head[u] == END {
            self.tail[u] = i;
        }
        self.head[u] = i;
    }

    fn pop(&mut self, u: usize) -> Option<usize> {
        let i = self.head[u];
        if i == END {
            return None;
        }
        self.head[u] = self.next[i];
        if self.head[u] == END {
            self.tail[u] = END;
        }
        Some(self.val[i])
    }

    /// R(u) ← R(v) ∪ R(u), leaving R(v) empty.
    fn absorb(&mut self, u: usize, v: usize) {
        if self.head[v] == END {
            return;
        }
        self.next[self.tail[v]] = self.head[u];
        if self.head[u] == END {
            self.tail[u] = self.tail[v];
        }
        self.head[u] = self.head[v];
        self.head[v] = END;
        self.tail[v] = END;
    }
}

fn check_inputs(g: &Digraph, d: &RootedTree, part: &TreePartition) -> Result<()> {
    if g.n != d.n || part.micro.len() != d.n + 1 {
        return Err(Error::Invalid("graph, tree and partition sizes differ".into()));
    }
    if g.root.unwrap_or(1) != 1 || d.root != 1 || !d.is_preorder_labelled() {
        return Err(Error::Invalid("vertices must be numbered in DFS preorder from root 1".into()));
    }
    if part.path_of.len() != d.n + 1 || (1..=d.n).any(|v| part.core[v] && part.path_of[v] == usize::MAX) {
        return Err(Error::Invalid("partition lacks left paths".into()));
    }
    for a in &g.arcs {
        if a.u == 0 || a.v == 0 || a.u > g.n || a.v > g.n {
            return Err(Error::Invalid(format!("arc ({},{}) out of range", a.u, a.v)));
        }
    }
    let mut has_tree = vec![false; d.n + 1];
    for a in &g.arcs {
        if d.parent[a.v] == a.u {
            has_tree[a.v] = true;
        }
    }
    if let Some(v) = (2..=d.n).find(|&v| !has_tree[v]) {
        return Err(Error::Invalid(format!("tree arc into {v} missing from graph")));
    }
    Ok(())
}

fn same_micro(part: &TreePartition, x: usize, y: usize) -> bool {
    part.micro[x] != NIL && part.micro[x] == part.micro[y]
}

/// Heads inside one microtree by the definition, on local indices. Label 0
/// arcs are the tree arcs. Returns the local head or `usize::MAX`.
fn solve_micro_heads(inst: &Instance) -> Result<Vec<usize>> {
    let k = inst.n;
    let mut parent = vec![usize::MAX; k];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b, l) in &inst.arcs {
        if l == 0 {
            parent[b] = a;
        }
        out[a].push(b);
    }
    let mut size = vec![1usize; k];
    for v in (1..k).rev() {
        if parent[v] >= v {
            return Err(Error::Invalid("microtree arcs are not in preorder".into()));
        }
        size[parent[v]] += size[v];
    }
    let mut heads = vec![usize::MAX; k];
    let mut seen = vec![false; k];
    let mut stack = Vec::new();
    for v in 1..k {
        let mut u = parent[v];
        loop {
            seen.iter_mut().for_each(|s| *s = false);
            seen[v] = true;
            stack.push(v);
            while let Some(x) = stack.pop() {
                for &y in &out[x] {
                    if !seen[y] && y >= u && y < u + size[u] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if seen[u] {
                heads[v] = u;
                break;
            }
            if u == 0 {
                break;
            }
            u = parent[u];
        }
    }
    Ok(heads)
}

/// Fringe heads with the head in the same microtree, via one batch over all
/// microtrees.
fn fringe_heads(g: &Digraph, d: &RootedTree, part: &TreePartition, h: &mut [usize]) -> Result<BatchCounters> {
    let members = part.microtree_members(d);
    let mut idx = vec![usize::MAX; d.n + 1];
    for (i, &r) in part.roots.iter().enumerate() {
        idx[r] = i;
    }
    let mut local = vec![0usize; d.n + 1];
    let mut insts: Vec<Instance> = members
        .iter()
        .map(|mem| {
            for (j, &v) in mem.iter().enumerate() {
                local[v] = j;
            }
            let mut inst = Instance::new(mem.len());
            for &v in &mem[1..] {
                inst.arcs.push((local[d.parent[v]], local[v], 0));
            }
            inst
        })
        .collect();
    for a in &g.arcs {
        if same_micro(part, a.u, a.v) && a.u != a.v && d.parent[a.v] != a.u {
            let m = &members[idx[part.micro[a.u]]];
            let base = m[0];
            insts[idx[part.micro[a.u]]].arcs.push((a.u - base, a.v - base, 1));
        }
    }
    let mut batch = Batch::new(part.g, 2, false);
    for inst in insts {
        batch.push(inst);
    }
    let sols = batch.solve_transfer(solve_micro_heads)?;
    for (mem, sol) in members.iter().zip(sols) {
        for (j, &lh) in sol.iter().enumerate() {
            if lh != usize::MAX {
                h[mem[j]] = mem[lh];
            }
        }
    }
    Ok(batch.counters)
}

/// Smallest vertex of the strong component of each fringe vertex within the
/// subgraph induced by its microtree.
fn fringe_component_mins(g: &Digraph, d: &RootedTree, part: &TreePartition) -> Vec<usize> {
    let n = d.n;
    let mut succ = vec![Vec::new(); n + 1];
    for a in &g.arcs {
        if same_micro(part, a.u, a.v) {
            succ[a.u].push(a.v);
        }
    }
    let fringe: Vec<usize> = (1..=n).filter(|&v| part.is_fringe(v)).collect();
    let mut comp_min = vec![NIL; n + 1];
    for c in strong_components(&fringe, &succ) {
        let m = *c.iter().min().unwrap();
        for x in c {
            comp_min[x] = m;
        }
    }
    comp_min
}

/// Core phase shared by both variants. `h` holds the fringe-internal heads
/// already merged into `dsu`; on return it holds every head into the core.
fn core_heads(
    g: &Digraph,
    d: &RootedTree,
    part: &TreePartition,
    dsu: &mut DsuForest,
    h: &mut [usize],
    stats: &mut IntervalStats,
) -> Result<()> {
    let n = d.n;
    let mut bags = Bags::new(n, g.m());
    let mut big = Vec::new();
    for a in &g.arcs {
        if same_micro(part, a.u, a.v) {
            let f = dsu.find(a.v);
            bags.add(f, a.u);
            stats.bag_ops += 1;
        } else {
            big.push((a.u, a.v));
        }
    }
    stats.big_arcs = big.len() as u64;
    let run = nca_linear_run(d, &big, part.g)?;
    stats.nca = run.dsu;
    // arcs bucketed by nca, as linked lists
    let mut first = vec![END; n + 1];
    let mut next = vec![END; big.len()];
    for (i, &a) in run.answers.iter().enumerate() {
        next[i] = first[a];
        first[a] = i;
    }

    let mut order: Vec<usize> = (0..part.paths.len()).collect();
    order.sort_unstable_by(|&a, &b| part.paths[b].top.cmp(&part.paths[a].top));
    let mut stack: Vec<usize> = Vec::new();
    for pi in order {
        let path = &part.paths[pi];
        stack.clear();
        for &u in path.members.iter().rev() {
            let mut i = first[u];
            while i != END {
                let (x, y) = big[i];
                let f = dsu.find(y);
                // on-path vertices below u may already be contracted on S
                let target = if part.path_of[f] == pi && f != u {
                    let k = stack.partition_point(|&s| s > f);
                    if k < stack.len() {
                        stack[k]
                    } else {
                        u
                    }
                } else {
                    f
                };
                bags.add(target, x);
                stats.bag_ops += 1;
                i = next[i];
            }
            while let Some(x) = bags.pop(u) {
                stats.bag_ops += 1;
                let v = dsu.find(x);
                if part.path_of[v] != pi {
                    h[v] = u;
                    bags.absorb(u, v);
                    dsu.unite(u, v)?;
                } else if v != u {
                    while let Some(&w) = stack.last() {
                        if w > v {
                            break;
                        }
                        stack.pop();
                        stats.stack_pops += 1;
                        h[w] = u;
                        bags.absorb(u, w);
                    }
                }
            }
            stack.push(u);
        }
        for &u in path.members.iter().rev() {
            if h[u] != NIL {
                dsu.unite(h[u], u)?;
            }
        }
    }
    Ok(())
}

/// The full interval forest H.
pub fn interval_forest(g: &Digraph, d: &RootedTree, part: &TreePartition) -> Result<IntervalForest> {
    interval_forest_run(g, d, part).map(|r| r.0)
}

pub fn interval_forest_run(g: &Digraph, d: &RootedTree, part: &TreePartition) -> Result<(IntervalForest, IntervalStats)> {
    check_inputs(g, d, part)?;
    let n = d.n;
    let mut stats = IntervalStats::default();
    let mut h = vec![NIL; n + 1];
    stats.batch = fringe_heads(g, d, part, &mut h)?;
    let mut dsu = DsuForest::make_sets(n, UnionMode::ByRank)?;
    for v in (1..=n).rev() {
        if part.is_fringe(v) && h[v] != NIL {
            dsu.unite(h[v], v)?;
        }
    }
    core_heads(g, d, part, &mut dsu, &mut h, &mut stats)?;
    stats.dsu = dsu.counters;
    Ok((IntervalForest { h, compressed: false }, stats))
}

/// The compressed forest H′ without the per-microtree batch: fringe strong
/// components are collapsed onto their smallest vertex first.
pub fn compressed_interval_forest(g: &Digraph, d: &RootedTree, part: &TreePartition) -> Result<IntervalForest> {
    compressed_interval_forest_run(g, d, part).map(|r| r.0)
}

pub fn compressed_interval_forest_run(
    g: &Digraph,
    d: &RootedTree,
    part: &TreePartition,
) -> Result<(IntervalForest, IntervalStats)> {
    check_inputs(g, d, part)?;
    let n = d.n;
    let mut stats = IntervalStats::default();
    let comp_min = fringe_component_mins(g, d, part);
    let mut dsu = DsuForest::make_sets(n, UnionMode::ByRank)?;
    for v in 1..=n {
        if part.is_fringe(v) && comp_min[v] != v {
            dsu.unite(comp_min[v], v)?;
        }
    }
    let mut h = vec![NIL; n + 1];
    core_heads(g, d, part, &mut dsu, &mut h, &mut stats)?;
    for v in 1..=n {
        if part.is_fringe(v) && comp_min[v] != v {
            h[v] = h[comp_min[v]];
        }
    }
    stats.dsu = dsu.counters;
    Ok((IntervalForest { h, compressed: true }, stats))
}

/// Heads of an arbitrary flowgraph in its own vertex ids: relabels by DFS
/// preorder (out-arcs in file order), partitions with `g` (default from n),
/// and maps the result back.
pub fn intervals(g: &Digraph, gsize: Option<usize>, compressed: bool) -> Result<(Vec<usize>, IntervalStats)> {
    if !matches!(g.kind, crate::graphio::Kind::Flow) {
        return Err(Error::Invalid("interval analysis needs a flow graph".into()));
    }
    let (pg, d, old) = preorder_relabel(g)?;
    let part = partition(&d, gsize.unwrap_or_else(|| default_g(g.n)).max(1));
    let (f, stats) = if compressed {
        compressed_interval_forest_run(&pg, &d, &part)?
    } else {
        interval_forest_run(&pg, &d, &part)?
    };
    let mut h = vec![NIL; g.n + 1];
    for v in 1..=g.n {
        if f.h[v] != NIL {
            h[old[v]] = old[f.h[v]];
        }
    }
    Ok((h, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(n: usize, arcs: &[(usize, usize)], g: usize) -> (Vec<usize>, Vec<usize>) {
        let fg = Digraph::flow(n, 1, arcs);
        (intervals(&fg, Some(g), false).unwrap().0, intervals(&fg, Some(g), true).unwrap().0)
    }

    #[test]
    fn dag_has_no_heads() {
        for g in 1..4 {
            let (h, hc) = run(4, &[(1, 2), (1, 3), (2, 4), (3, 4)], g);
            assert!(h.iter().all(|&x| x == 0));
            assert!(hc.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn two_cycle() {
        for g in 1..3 {
            let (h, _) = run(2, &[(1, 2), (2, 1)], g);
            assert_eq!(h, vec![0, 0, 1]);
        }
    }

    #[test]
    fn nested_loops() {
        // 1 -> 2 -> 3 -> 4, 4 -> 3, 4 -> 2
        for g in 1..5 {
            let (h, _) = run(4, &[(1, 2), (2, 3), (3, 4), (4, 3), (4, 2)], g);
            assert_eq!(h, vec![0, 0, 0, 2, 3]);
        }
    }

    #[test]
    fn fringe_cycle_under_core_head() {
        // core path 1-2-3, fringe {4,5} under 3 with a 2-cycle and an arc
        // back to 2; g = 2 keeps 4 and 5 in one microtree
        let arcs = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 4), (5, 2), (3, 6), (1, 7)];
        let (h, hc) = run(7, &arcs, 2);
        assert_eq!(h[5], 4);
        assert_eq!(h[4], 2);
        assert_eq!((hc[4], hc[5]), (2, 2));
    }

    #[test]
    fn rejects_bad_labelling() {
        let fg = Digraph::flow(3, 1, &[(1, 3), (3, 2)]);
        let d = RootedTree::from_parents(&[0, 0, 3, 1]);
        let part = partition(&d, 1);
        assert!(interval_forest(&fg, &d, &part).is_err());
    }
}
