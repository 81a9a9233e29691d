//! Minimum spanning trees: Borůvka trees, batched tree path maxima, MST
//! verification, and randomized sampling-based construction.
//!
//! Edge ties are broken by (weight, edge index), which makes the MST unique.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dsu::{DsuForest, UnionMode};
use crate::graphio::{Digraph, Kind, RootedTree};
use crate::linkeval::{LinkEval, LinkEvalCounters, Order, SimpleLinkEval};
use crate::partition::fringe_core;
use crate::topobatch::{Batch, BatchCounters, Instance};
use crate::{default_g, Error, Result, NIL};

/// Weighted edge (u, v, weight); its index is its position in the list.
pub type Edge = (usize, usize, f64);

#[inline]
fn lighter(edges: &[Edge], a: usize, b: usize) -> bool {
    let (wa, wb) = (edges[a].2, edges[b].2);
    wa < wb || (wa == wb && a < b)
}

// ---------------------------------------------------------------------------
// Borůvka tree
// ---------------------------------------------------------------------------

/// Leaves are the tree vertices 1..=n; internal nodes follow in creation
/// order, so the root is the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct BoruvkaTree {
    pub n: usize,
    pub nodes: usize,
    pub parent: Vec<usize>,
    /// Weight of the arc to the parent.
    pub weight: Vec<f64>,
    /// Tree edge carrying that weight.
    pub edge: Vec<usize>,
    /// Step in which the node was contracted into its parent (from 1).
    pub pass: Vec<usize>,
    pub root: usize,
}

impl BoruvkaTree {
    pub fn rooted(&self) -> RootedTree {
        RootedTree::from_parents(&self.parent)
    }
}

/// Repeated Borůvka steps on a spanning tree given as n-1 edges.
pub fn boruvka_tree(n: usize, edges: &[Edge]) -> Result<BoruvkaTree> {
    if n == 0 || edges.len() + 1 != n {
        return Err(Error::Invalid("Borůvka tree needs a spanning tree".into()));
    }
    let mut parent = vec![NIL; 2 * n];
    let mut weight = vec![f64::NEG_INFINITY; 2 * n];
    let mut edge = vec![usize::MAX; 2 * n];
    let mut pass = vec![0; 2 * n];
    // current contracted tree: vertex i is B node node[i]
    let mut node: Vec<usize> = (1..=n).collect();
    let mut cur: Vec<(usize, usize, usize)> = edges.iter().enumerate().map(|(i, e)| (e.0 - 1, e.1 - 1, i)).collect();
    let mut next_id = n + 1;
    let mut step = 0;
    while node.len() > 1 {
        step += 1;
        let k = node.len();
        let mut best = vec![usize::MAX; k];
        for (j, &(a, b, e)) in cur.iter().enumerate() {
            for x in [a, b] {
                if best[x] == usize::MAX || lighter(edges, e, cur[best[x]].2) {
                    best[x] = j;
                }
            }
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
        let mut chosen = vec![false; cur.len()];
        for x in 0..k {
            let j = best[x];
            if j == usize::MAX {
                return Err(Error::Disconnected);
            }
            if !chosen[j] {
                chosen[j] = true;
                let (a, b, _) = cur[j];
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut group = vec![usize::MAX; k];
        let mut new_node = Vec::new();
        for s in 0..k {
            if group[s] != usize::MAX {
                continue;
            }
            let gid = new_node.len();
            new_node.push(next_id);
            next_id += 1;
            group[s] = gid;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if group[y] == usize::MAX {
                        group[y] = gid;
                        stack.push(y);
                    }
                }
            }
        }
        for x in 0..k {
            let e = cur[best[x]].2;
            let b = node[x];
            parent[b] = new_node[group[x]];
            weight[b] = edges[e].2;
            edge[b] = e;
            pass[b] = step;
        }
        cur = cur
            .iter()
            .zip(&chosen)
            .filter(|(_, &c)| !c)
            .map(|(&(a, b, e), _)| (group[a], group[b], e))
            .collect();
        node = new_node;
    }
    let nodes = next_id - 1;
    parent.truncate(nodes + 1);
    weight.truncate(nodes + 1);
    edge.truncate(nodes + 1);
    pass.truncate(nodes + 1);
    Ok(BoruvkaTree { n, nodes, parent, weight, edge, pass, root: node[0] })
}

// ---------------------------------------------------------------------------
// Path maxima
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default)]
pub struct PathMaxRun {
    /// Maximum weight and a tree edge attaining it; `None` for v = w.
    pub answers: Vec<Option<(f64, usize)>>,
    pub link_eval: LinkEvalCounters,
    pub batch: BatchCounters,
    pub b_nodes: usize,
    pub small: usize,
}

/// Path maxima for vertex pairs of a spanning tree, computed on its Borůvka
/// tree: pairs split across microtrees use the postorder algorithm with a
/// simple max link-eval structure, pairs inside one microtree are batched
/// and answered by scanning each canonical path list with actual weights.
pub fn path_maxima(n: usize, edges: &[Edge], queries: &[(usize, usize)], g: Option<usize>) -> Result<PathMaxRun> {
    let b = boruvka_tree(n, edges)?;
    let bt = b.rooted();
    let g = g.unwrap_or_else(|| default_g(b.nodes));
    let part = fringe_core(&bt, g);
    let mut run = PathMaxRun { answers: vec![None; queries.len()], b_nodes: b.nodes, ..Default::default() };

    let mut pairs: Vec<Vec<usize>> = vec![Vec::new(); b.nodes + 1];
    let mut small_of: Vec<Vec<usize>> = vec![Vec::new(); b.nodes + 1];
    for (i, &(v, w)) in queries.iter().enumerate() {
        if v == w {
            continue;
        }
        if part.micro[v] != NIL && part.micro[v] == part.micro[w] {
            small_of[part.micro[v]].push(i);
        } else {
            pairs[v].push(i);
            pairs[w].push(i);
        }
    }

    // Big pairs: postorder, queries parked at Q(findroot(w)).
    let mut le = SimpleLinkEval::new(b.nodes, Order::Max);
    let mut visited = vec![false; b.nodes + 1];
    let mut parked: Vec<Vec<usize>> = vec![Vec::new(); b.nodes + 1];
    for v in bt.postorder() {
        visited[v] = true;
        for &i in &pairs[v] {
            let (x, y) = queries[i];
            let w = if x == v { y } else { x };
            if visited[w] {
                let r = le.findroot(w);
                parked[r].push(i);
            }
        }
        for i in std::mem::take(&mut parked[v]) {
            let (x, y) = queries[i];
            let ax = le.eval_arg(x);
            let ay = le.eval_arg(y);
            let pick = if ax == NIL || (ay != NIL && b.weight[ay] > b.weight[ax]) { ay } else { ax };
            run.answers[i] = Some((b.weight[pick], b.edge[pick]));
        }
        if bt.parent[v] != NIL {
            le.link(bt.parent[v], v, b.weight[v])?;
        }
    }
    run.link_eval = le.counters();

    // Small pairs: canonical path lists run against each member's weights.
    let members = part.microtree_members(&bt);
    let mut local = vec![0usize; b.nodes + 1];
    let mut batch = Batch::new(g, 2, false);
    let mut jobs: Vec<(usize, &[usize])> = Vec::new();
    for (mi, mem) in members.iter().enumerate() {
        let root = part.roots[mi];
        if small_of[root].is_empty() {
            continue;
        }
        for (j, &v) in mem.iter().enumerate() {
            local[v] = j;
        }
        let mut inst = Instance::new(mem.len());
        for &v in &mem[1..] {
            inst.arcs.push((local[bt.parent[v]], local[v], 0));
        }
        for &i in &small_of[root] {
            let (v, w) = queries[i];
            inst.arcs.push((local[v], local[w], 1));
        }
        batch.push(inst);
        jobs.push((root, mem));
        run.small += small_of[root].len();
    }
    let results = batch.solve_per_duplicate(path_lists, |lists: &Vec<Vec<usize>>, h| {
        let mem = jobs[h].1;
        lists
            .iter()
            .map(|list| {
                let mut best = mem[list[0]];
                for &j in &list[1..] {
                    if b.weight[mem[j]] > b.weight[best] {
                        best = mem[j];
                    }
                }
                (b.weight[best], b.edge[best])
            })
            .collect::<Vec<_>>()
    })?;
    for ((root, _), res) in jobs.iter().zip(results) {
        for (&i, ans) in small_of[*root].iter().zip(res) {
            run.answers[i] = Some(ans);
        }
    }
    run.batch = batch.counters;
    Ok(run)
}

/// For each query arc, the local child endpoints of the tree arcs on its
/// path: the x side bottom-up, then the y side bottom-up.
fn path_lists(inst: &Instance) -> Result<Vec<Vec<usize>>> {
    let mut parent = vec![usize::MAX; inst.n];
    let mut depth = vec![0; inst.n];
    for &(p, c, l) in &inst.arcs {
        if l == 0 {
            parent[c] = p;
        }
    }
    for v in 1..inst.n {
        depth[v] = depth[parent[v]] + 1;
    }
    Ok(inst
        .arcs
        .iter()
        .filter(|a| a.2 == 1)
        .map(|&(mut x, mut y, _)| {
            let (mut left, mut right) = (Vec::new(), Vec::new());
            while depth[x] > depth[y] {
                left.push(x);
                x = parent[x];
            }
            while depth[y] > depth[x] {
                right.push(y);
                y = parent[y];
            }
            while x != y {
                left.push(x);
                right.push(y);
                x = parent[x];
                y = parent[y];
            }
            left.extend(right);
            left
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Yes,
    /// A nontree edge lighter than the heaviest edge on its tree path.
    No { edge: usize, u: usize, v: usize },
}

pub fn weighted_edges(g: &Digraph) -> Vec<Edge> {
    g.arcs.iter().map(|a| (a.u, a.v, a.w.unwrap_or(0.0))).collect()
}

/// Matches the edges of tree file `t` to edges of `g` (same endpoints and
/// weight, first unused occurrence) and returns a tree flag per edge of `g`.
pub fn tree_edge_flags(g: &Digraph, t: &Digraph) -> Result<Vec<bool>> {
    if t.n != g.n || t.arcs.len() + 1 != g.n {
        return Err(Error::Invalid("tree does not span the graph".into()));
    }
    let mut index: std::collections::HashMap<(usize, usize, u64), Vec<usize>> = Default::default();
    for (i, a) in g.arcs.iter().enumerate().rev() {
        let key = (a.u.min(a.v), a.u.max(a.v), a.w.unwrap_or(0.0).to_bits());
        index.entry(key).or_default().push(i);
    }
    let mut flags = vec![false; g.arcs.len()];
    for a in &t.arcs {
        let key = (a.u.min(a.v), a.u.max(a.v), a.w.unwrap_or(0.0).to_bits());
        let i = index
            .get_mut(&key)
            .and_then(|v| v.pop())
            .ok_or_else(|| Error::Invalid(format!("tree edge {} {} is not a graph edge", a.u, a.v)))?;
        flags[i] = true;
    }
    let mut dsu = DsuForest::make_sets(g.n, UnionMode::ByRank)?;
    for (i, a) in g.arcs.iter().enumerate() {
        if flags[i] && dsu.unite_any(a.u, a.v).is_err() {
            return Err(Error::Invalid("tree edges contain a cycle".into()));
        }
    }
    Ok(flags)
}

/// Yes iff no nontree edge is lighter than the maximum on its tree path;
/// otherwise the lowest-indexed violating edge.
pub fn verify_mst_flags(g: &Digraph, is_tree: &[bool], gsize: Option<usize>) -> Result<Verdict> {
    verify_mst_run(g, is_tree, gsize).map(|r| r.0)
}

/// Verdict together with the path-maxima run behind it.
pub fn verify_mst_run(g: &Digraph, is_tree: &[bool], gsize: Option<usize>) -> Result<(Verdict, PathMaxRun)> {
    let edges = weighted_edges(g);
    let tree: Vec<Edge> = edges.iter().zip(is_tree).filter(|(_, &t)| t).map(|(e, _)| *e).collect();
    let non: Vec<usize> = (0..edges.len()).filter(|&i| !is_tree[i]).collect();
    let queries: Vec<(usize, usize)> = non.iter().map(|&i| (edges[i].0, edges[i].1)).collect();
    let run = path_maxima(g.n, &tree, &queries, gsize)?;
    for (k, &i) in non.iter().enumerate() {
        if let Some((mx, _)) = run.answers[k] {
            if edges[i].2 < mx {
                return Ok((Verdict::No { edge: i, u: edges[i].0, v: edges[i].1 }, run));
            }
        }
    }
    Ok((Verdict::Yes, run))
}

pub fn verify_mst(g: &Digraph, t: &Digraph) -> Result<Verdict> {
    let flags = tree_edge_flags(g, t)?;
    verify_mst_flags(g, &flags, None)
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// Kruskal under (weight, index) order on vertices 1..=n; returns a minimum
/// spanning forest as sorted edge indices.
pub fn kruskal_msf(n: usize, edges: &[Edge]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| edges[a].2.total_cmp(&edges[b].2).then(a.cmp(&b)));
    let mut dsu = DsuForest::make_sets(n.max(1), UnionMode::ByRank).expect("n >= 1");
    let mut out: Vec<usize> = order.into_iter().filter(|&i| dsu.unite_any(edges[i].0, edges[i].1).is_ok()).collect();
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KktCounters {
    pub calls: u64,
    pub edges_seen: u64,
    pub filtered: u64,
}

const KKT_BASE: usize = 16;

struct Kkt {
    seed: u64,
    stream: u64,
    counters: KktCounters,
}

/// Edge in a recursive subproblem: endpoints, weight, original index.
type SubEdge = (usize, usize, f64, usize);

fn sub_lighter(a: &SubEdge, b: &SubEdge) -> bool {
    a.2 < b.2 || (a.2 == b.2 && a.3 < b.3)
}

impl Kkt {
    /// Minimum spanning forest of a multigraph on 0..n.
    fn msf(&mut self, n: usize, mut edges: Vec<SubEdge>, out: &mut Vec<usize>) -> Result<()> {
        self.counters.calls += 1;
        self.counters.edges_seen += edges.len() as u64;
        let mut n = n;
        if edges.len() <= KKT_BASE {
            let local: Vec<Edge> = edges.iter().map(|e| (e.0 + 1, e.1 + 1, e.2)).collect();
            // ties must follow original indices
            let mut order: Vec<usize> = (0..edges.len()).collect();
            order.sort_by(|&a, &b| local[a].2.total_cmp(&local[b].2).then(edges[a].3.cmp(&edges[b].3)));
            let mut dsu = DsuForest::make_sets(n.max(1), UnionMode::ByRank)?;
            for i in order {
                if dsu.unite_any(local[i].0, local[i].1).is_ok() {
                    out.push(edges[i].3);
                }
            }
            return Ok(());
        }
        for _ in 0..2 {
            if edges.is_empty() {
                return Ok(());
            }
            let (n2, e2) = boruvka_step(n, &edges, out);
            n = n2;
            edges = e2;
        }
        if edges.is_empty() {
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        self.stream += 1;
        let sample: Vec<SubEdge> = edges.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let mut f = Vec::new();
        self.msf(n, sample.clone(), &mut f)?;
        // f holds original indices; rebuild the sampled forest locally
        let chosen: std::collections::HashSet<usize> = f.into_iter().collect();
        let forest: Vec<SubEdge> = sample.into_iter().filter(|e| chosen.contains(&e.3)).collect();
        let kept = filter_heavy(n, &forest, &edges)?;
        self.counters.filtered += (edges.len() - kept.len()) as u64;
        self.msf(n, kept, out)
    }
}

/// One Borůvka step: every vertex selects its lightest non-loop edge, the
/// selected edges join the forest, and components are contracted.
fn boruvka_step(n: usize, edges: &[SubEdge], out: &mut Vec<usize>) -> (usize, Vec<SubEdge>) {
    let mut best: Vec<Option<usize>> = vec![None; n];
    for (j, e) in edges.iter().enumerate() {
        if e.0 == e.1 {
            continue;
        }
        for x in [e.0, e.1] {
            if best[x].map_or(true, |b| sub_lighter(e, &edges[b])) {
                best[x] = Some(j);
            }
        }
    }
    let mut dsu = DsuForest::make_sets(n.max(1), UnionMode::ByRank).expect("n >= 1");
    let mut picked = vec![false; edges.len()];
    for b in best.iter().flatten() {
        if !picked[*b] {
            picked[*b] = true;
            let e = edges[*b];
            dsu.unite_any(e.0 + 1, e.1 + 1).expect("selected edges form a forest");
            out.push(e.3);
        }
    }
    let mut label = vec![usize::MAX; n + 1];
    let mut k = 0;
    for x in 1..=n {
        let r = dsu.find(x);
        if label[r] == usize::MAX {
            label[r] = k;
            k += 1;
        }
    }
    let mut next = Vec::with_capacity(edges.len());
    for e in edges {
        let a = label[dsu.find(e.0 + 1)];
        let b = label[dsu.find(e.1 + 1)];
        if a != b {
            next.push((a, b, e.2, e.3));
        }
    }
    (k, next)
}

/// Drops edges strictly heavier than the maximum on their path in `forest`.
/// Edges joining different trees of the forest are kept.
fn filter_heavy(n: usize, forest: &[SubEdge], edges: &[SubEdge]) -> Result<Vec<SubEdge>> {
    // join the forest's trees through an extra vertex n with -inf edges
    let mut dsu = DsuForest::make_sets(n + 1, UnionMode::ByRank)?;
    let mut tree: Vec<Edge> = Vec::with_capacity(n);
    for e in forest {
        dsu.unite_any(e.0 + 1, e.1 + 1)?;
        tree.push((e.0 + 1, e.1 + 1, e.2));
    }
    for x in 1..=n {
        if dsu.unite_any(x, n + 1).is_ok() {
            tree.push((x, n + 1, f64::NEG_INFINITY));
        }
    }
    let mut comp = DsuForest::make_sets(n, UnionMode::ByRank)?;
    for e in forest {
        comp.unite_any(e.0 + 1, e.1 + 1)?;
    }
    let queries: Vec<(usize, usize)> = edges.iter().map(|e| (e.0 + 1, e.1 + 1)).collect();
    let run = path_maxima(n + 1, &tree, &queries, None)?;
    Ok(edges
        .iter()
        .zip(&run.answers)
        .filter(|(e, ans)| match ans {
            Some((mx, _)) => !(comp.find(e.0 + 1) == comp.find(e.1 + 1) && e.2 > *mx),
            None => true,
        })
        .map(|(e, _)| *e)
        .collect())
}

/// Randomized MST: two Borůvka steps, recurse on a half sample, discard
/// edges heavy for the sample's forest, recurse on the rest. Returns edge
/// indices in increasing order.
pub fn build_mst_kkt(g: &Digraph, seed: u64) -> Result<Vec<usize>> {
    build_mst_kkt_counted(g, seed).map(|(e, _)| e)
}

pub fn build_mst_kkt_counted(g: &Digraph, seed: u64) -> Result<(Vec<usize>, KktCounters)> {
    if g.kind == Kind::Flow {
        return Err(Error::Invalid("MST needs an undirected graph".into()));
    }
    let edges: Vec<SubEdge> = g.arcs.iter().enumerate().map(|(i, a)| (a.u - 1, a.v - 1, a.w.unwrap_or(0.0), i)).collect();
    let mut k = Kkt { seed, stream: 0, counters: KktCounters::default() };
    let mut out = Vec::new();
    k.msf(g.n, edges, &mut out)?;
    if out.len() + 1 != g.n {
        return Err(Error::Disconnected);
    }
    out.sort_unstable();
    Ok((out, k.counters))
}
