//! Immediate dominators.
//!
//! The linear algorithm computes semi-dominators as extended tags in two
//! passes over a fringe/core partition with left paths, then relative
//! dominators as path minima on the DFS tree, then immediate dominators in
//! one top-down pass. Lengauer–Tarjan with the simple link-eval structure
//! and a vertex-removal method serve as references.
//!
//! Internal routines take flowgraphs numbered in DFS preorder from root 1.

use crate::graphio::{ancestor, preorder_relabel, strong_components, Digraph, Kind, RootedTree};
use crate::intervals::{compressed_interval_forest_run, IntervalStats};
use crate::linkeval::{LinkEval, LinkEvalCounters, LinkMode, Order, ShadowLinkEval, SimpleLinkEval};
use crate::mst::path_maxima;
use crate::nca::{cartesian_tree, nca_linear_run, range_min};
use crate::partition::{partition, TreePartition};
use crate::topobatch::{rank_within_groups, Batch, BatchCounters, Instance};
use crate::{default_g, dsu::DsuCounters, Error, Result, NIL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Linear,
    Lt,
    Naive,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DomStats {
    pub intervals: IntervalStats,
    pub nca: DsuCounters,
    pub rmq: DsuCounters,
    pub link_eval: LinkEvalCounters,
    pub micro_batch: BatchCounters,
    pub big_cross_arcs: u64,
    pub step2_link_eval: LinkEvalCounters,
    pub step2_batch: BatchCounters,
}

/// Arc tag of one big cross arc, with the last vertex of its top part (the
/// nca itself when the top part is empty).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcTag {
    pub u: usize,
    pub v: usize,
    pub nca: usize,
    pub mid: usize,
    pub at: usize,
}

#[derive(Debug, Clone, Default)]
pub struct SdomRun {
    pub sdom: Vec<usize>,
    /// Microtag of each fringe vertex; 0 for core vertices.
    pub mt: Vec<usize>,
    pub arc_tags: Vec<ArcTag>,
    pub stats: DomStats,
}

/// t(w) = min of w and the tails of all arcs entering w.
pub fn initial_tags(g: &Digraph, d: &RootedTree) -> Vec<usize> {
    let mut t: Vec<usize> = (0..=d.n).collect();
    for a in &g.arcs {
        t[a.v] = t[a.v].min(a.u);
    }
    t
}

fn check_inputs(g: &Digraph, d: &RootedTree, part: &TreePartition) -> Result<()> {
    if g.n != d.n || part.micro.len() != d.n + 1 || part.path_of.len() != d.n + 1 {
        return Err(Error::Invalid("graph, tree and partition sizes differ".into()));
    }
    if d.root != 1 || !d.is_preorder_labelled() {
        return Err(Error::Invalid("vertices must be numbered in DFS preorder from root 1".into()));
    }
    Ok(())
}

/// Where a big cross arc is finished: its top part lies on the left path of
/// its nca (pending until that path's first visit), or it is empty and the
/// arc is evaluated as soon as u's branch is linked to the nca.
struct CrossArc {
    u: usize,
    v: usize,
    nca: usize,
    mid: usize,
    top: usize,
}

const INF: usize = usize::MAX;

fn key(x: usize) -> f64 {
    if x == INF {
        f64::INFINITY
    } else {
        x as f64
    }
}

fn unkey(x: f64) -> usize {
    if x.is_finite() {
        x as usize
    } else {
        INF
    }
}

/// Semi-dominators (extended tags of the initial tags) by the two-pass
/// linear method.
pub fn semidominators(g: &Digraph, d: &RootedTree, part: &TreePartition) -> Result<Vec<usize>> {
    semidominators_run(g, d, part).map(|r| r.sdom)
}

pub fn semidominators_run(g: &Digraph, d: &RootedTree, part: &TreePartition) -> Result<SdomRun> {
    check_inputs(g, d, part)?;
    let n = d.n;
    let mut stats = DomStats::default();
    let t = initial_tags(g, d);
    let (hf, istats) = compressed_interval_forest_run(g, d, part)?;
    stats.intervals = istats;
    let hp = hf.h;

    // big cross arcs and their ncas
    let same_micro = |x: usize, y: usize| part.micro[x] != NIL && part.micro[x] == part.micro[y];
    let mut arcs: Vec<CrossArc> = Vec::new();
    let mut pairs = Vec::new();
    for a in &g.arcs {
        if !same_micro(a.u, a.v) && !ancestor(d, a.u, a.v) && !ancestor(d, a.v, a.u) {
            arcs.push(CrossArc { u: a.u, v: a.v, nca: NIL, mid: NIL, top: INF });
            pairs.push((a.u, a.v));
        }
    }
    stats.big_cross_arcs = arcs.len() as u64;
    let run = nca_linear_run(d, &pairs, part.g)?;
    stats.nca = run.dsu;
    for (c, &w) in arcs.iter_mut().zip(&run.answers) {
        c.nca = w;
    }

    // the child of the nca on the way to u, found in one preorder sweep
    let depth = d.depth();
    let mut by_tail: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (i, c) in arcs.iter().enumerate() {
        by_tail[c.u].push(i);
    }
    let mut on_path = vec![0usize; n + 1];
    // arcs finished at the first visit of a path, keyed by path index
    let mut at_path: Vec<Vec<usize>> = vec![Vec::new(); part.paths.len()];
    // arcs finished right after the link of a branch root
    let mut at_branch: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for v in 1..=n {
        on_path[depth[v]] = v;
        for &i in &by_tail[v] {
            let w = arcs[i].nca;
            let c = on_path[depth[w] + 1];
            if part.chosen_child[w] == c {
                at_path[part.path_of[w]].push(i);
            } else {
                arcs[i].mid = w;
                at_branch[c].push(i);
            }
        }
    }

    let mut pos_on_path = vec![0usize; n + 1];
    for p in &part.paths {
        for (k, &w) in p.members.iter().enumerate() {
            pos_on_path[w] = k + 1;
        }
    }
    let mut ct = t.clone();
    for v in 1..=n {
        if part.is_fringe(v) && hp[v] != NIL {
            ct[hp[v]] = ct[hp[v]].min(ct[v]);
        }
    }
    let mut le = ShadowLinkEval::new(n, Order::Min, LinkMode::ByRank);
    let mut pending_at_tail: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut at = vec![INF; arcs.len()];
    let mut pre_ct = vec![0usize; n + 1];
    let mut mt = vec![0usize; n + 1];

    // microtree structure: members and strong components in topological order
    let members = part.microtree_members(d);
    let mut micro_idx = vec![usize::MAX; n + 1];
    for (i, &r) in part.roots.iter().enumerate() {
        micro_idx[r] = i;
    }
    let mut succ = vec![Vec::new(); n + 1];
    for a in &g.arcs {
        if same_micro(a.u, a.v) {
            succ[a.u].push(a.v);
        }
    }
    let mut pred = vec![Vec::new(); n + 1];
    for a in &g.arcs {
        if same_micro(a.u, a.v) {
            pred[a.v].push(a.u);
        }
    }
    let mut comp_of = vec![usize::MAX; n + 1];
    let mut comp_val = Vec::new();

    let finish = |arcs: &[CrossArc], i: usize, x: usize, ct: &mut Vec<usize>, at: &mut Vec<usize>| {
        let c = &arcs[i];
        at[i] = x;
        ct[c.v] = ct[c.v].min(x);
        if part.is_fringe(c.v) && hp[c.v] != NIL {
            ct[hp[c.v]] = ct[hp[c.v]].min(ct[c.v]);
        }
    };

    for s in (1..=n).rev() {
        if micro_idx[s] != usize::MAX && part.is_fringe(s) {
            let mem = &members[micro_idx[s]];
            for &v in mem {
                pre_ct[v] = ct[v];
            }
            // microtags over strong components in topological order
            for comp in strong_components(mem, &succ) {
                let id = comp_val.len();
                let mut val = INF;
                for &x in &comp {
                    comp_of[x] = id;
                    val = val.min(ct[x]);
                    for &y in &pred[x] {
                        if comp_of[y] != usize::MAX && comp_of[y] != id {
                            val = val.min(comp_val[comp_of[y]]);
                        }
                    }
                }
                comp_val.push(val);
                for &x in &comp {
                    ct[x] = val;
                    mt[x] = val;
                }
            }
            for &v in mem.iter().rev() {
                if d.parent[v] != NIL {
                    le.link(d.parent[v], v, key(ct[v]))?;
                }
            }
            for &u in mem {
                for i in std::mem::take(&mut pending_at_tail[u]) {
                    let x = arcs[i].top.min(unkey(le.eval(u)));
                    finish(&arcs, i, x, &mut ct, &mut at);
                }
            }
            for i in std::mem::take(&mut at_branch[s]) {
                let x = unkey(le.eval(arcs[i].u));
                finish(&arcs, i, x, &mut ct, &mut at);
            }
        }
        if part.core[s] {
            let pi = part.path_of[s];
            let path = &part.paths[pi];
            if path.bottom == s {
                first_visit(pi, part, d, &pos_on_path, &hp, &mut ct, &mut le, &mut arcs, &at_path[pi], &mut stats)?;
                for &i in &at_path[pi] {
                    let u = arcs[i].u;
                    if part.is_fringe(u) && u < path.bottom {
                        pending_at_tail[u].push(i);
                        let x = arcs[i].top;
                        let c = &arcs[i];
                        ct[c.v] = ct[c.v].min(x);
                        if part.is_fringe(c.v) && hp[c.v] != NIL {
                            ct[hp[c.v]] = ct[hp[c.v]].min(ct[c.v]);
                        }
                    } else {
                        let x = arcs[i].top.min(unkey(le.eval(u)));
                        finish(&arcs, i, x, &mut ct, &mut at);
                    }
                }
            }
            if path.top == s {
                if d.parent[s] != NIL {
                    for &w in path.members.iter().rev() {
                        le.link(d.parent[w], w, key(ct[w]))?;
                    }
                }
                for i in std::mem::take(&mut at_branch[s]) {
                    let x = unkey(le.eval(arcs[i].u));
                    finish(&arcs, i, x, &mut ct, &mut at);
                }
            }
        }
    }
    stats.link_eval = le.counters();

    // second pass: extended tags inside each microtree from the ct values
    // seen just before its visit, ranked into [1, g]
    let mut sdom = ct;
    let fringe: Vec<usize> = (1..=n).filter(|&v| part.is_fringe(v)).collect();
    if !fringe.is_empty() {
        let groups: Vec<usize> = fringe.iter().map(|&v| micro_idx[part.micro[v]]).collect();
        let keys: Vec<usize> = fringe.iter().map(|&v| pre_ct[v]).collect();
        let ranks = rank_within_groups(&groups, &keys, part.roots.len(), n + 1);
        let mut rank = vec![0usize; n + 1];
        for (k, &v) in fringe.iter().enumerate() {
            rank[v] = ranks[k];
        }
        let mut batch = Batch::new(part.g, part.g + 1, false);
        for mem in &members {
            let base = mem[0];
            let mut inst = Instance::new(mem.len());
            for (j, &v) in mem.iter().enumerate() {
                inst.vlabels[j] = rank[v];
                if j > 0 {
                    inst.arcs.push((d.parent[v] - base, v - base, 0));
                }
            }
            for &x in mem {
                for &y in &succ[x] {
                    if x != y && d.parent[y] != x {
                        inst.arcs.push((x - base, y - base, 1));
                    }
                }
            }
            batch.push(inst);
        }
        let sols = batch.solve_transfer(solve_micro_et)?;
        stats.micro_batch = batch.counters;
        let mut value_of_rank = vec![0usize; part.g + 2];
        for (mem, sol) in members.iter().zip(sols) {
            for &v in mem {
                value_of_rank[rank[v]] = pre_ct[v];
            }
            for (j, &r) in sol.iter().enumerate() {
                sdom[mem[j]] = value_of_rank[r];
            }
        }
    }
    sdom[0] = 0;
    let arc_tags = arcs
        .iter()
        .zip(&at)
        .map(|(c, &x)| ArcTag { u: c.u, v: c.v, nca: c.nca, mid: c.mid, at: x })
        .collect();
    Ok(SdomRun { sdom, mt, arc_tags, stats })
}

/// First visit of a left path: push computed tags up H′ along the path,
/// locate the last vertex of each pending arc's top part and answer all top
/// parts with one range-minimum batch over the path.
#[allow(clippy::too_many_arguments)]
fn first_visit(
    pi: usize,
    part: &TreePartition,
    d: &RootedTree,
    pos_on_path: &[usize],
    hp: &[usize],
    ct: &mut [usize],
    le: &mut ShadowLinkEval,
    arcs: &mut [CrossArc],
    pending: &[usize],
    stats: &mut DomStats,
) -> Result<()> {
    let path = &part.paths[pi];
    for &w in path.members.iter().rev() {
        if hp[w] != NIL {
            ct[hp[w]] = ct[hp[w]].min(ct[w]);
        }
    }
    if pending.is_empty() {
        return Ok(());
    }
    let pos = |w: usize| pos_on_path[w];
    let mut ranges = Vec::with_capacity(pending.len());
    for &i in pending {
        let u = arcs[i].u;
        let mid = if part.is_fringe(u) && u < path.bottom {
            d.parent[part.micro[u]]
        } else {
            le.findroot(u)
        };
        arcs[i].mid = mid;
        ranges.push((pos(arcs[i].nca) + 1, pos(mid)));
    }
    let values: Vec<f64> = path.members.iter().map(|&w| key(ct[w])).collect();
    let cart = cartesian_tree(&values)?;
    let mins = range_min(&cart, &ranges, part.g)?;
    stats.rmq.finds += ranges.len() as u64;
    for (&i, &(_, x)) in pending.iter().zip(&mins) {
        arcs[i].top = unkey(x);
    }
    Ok(())
}

/// Extended tags within one microtree: the smallest label over all vertices
/// that reach w by a path whose vertices other than w are all larger than w.
fn solve_micro_et(inst: &Instance) -> Result<Vec<usize>> {
    let k = inst.n;
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b, _) in &inst.arcs {
        pred[b].push(a);
    }
    let mut et = vec![0; k];
    let mut seen = vec![false; k];
    let mut stack = Vec::new();
    for w in 0..k {
        seen.iter_mut().for_each(|s| *s = false);
        seen[w] = true;
        stack.push(w);
        let mut best = inst.vlabels[w];
        while let Some(x) = stack.pop() {
            for &y in &pred[x] {
                if y > w && !seen[y] {
                    seen[y] = true;
                    best = best.min(inst.vlabels[y]);
                    stack.push(y);
                }
            }
        }
        et[w] = best;
    }
    Ok(et)
}

/// rdom(v): a vertex of minimum sdom on the tree path (sdom(v), v], found as
/// path minima over tree edges (p(u), u) weighted by sdom(u).
pub fn relative_dominators(d: &RootedTree, sdom: &[usize], g: Option<usize>) -> Result<(Vec<usize>, PathMinCounters)> {
    let n = d.n;
    let mut rdom = vec![NIL; n + 1];
    if n < 2 {
        return Ok((rdom, PathMinCounters::default()));
    }
    if (n as f64) * (n as f64 + 1.0) >= 2f64.powi(53) {
        return Err(Error::Invalid("too many vertices for exact path-minimum keys".into()));
    }
    // distinct weights make the witness edge lie on the query path; ties in
    // sdom are broken by vertex id
    let mut edges = Vec::with_capacity(n - 1);
    let mut child = Vec::with_capacity(n - 1);
    for v in 1..=n {
        if d.parent[v] != NIL {
            edges.push((d.parent[v], v, -((sdom[v] * (n + 1) + v) as f64)));
            child.push(v);
        }
    }
    let queries: Vec<(usize, usize)> = (1..=n).filter(|&v| v != d.root).map(|v| (sdom[v], v)).collect();
    let run = path_maxima(n, &edges, &queries, g)?;
    for (&(_, v), ans) in queries.iter().zip(&run.answers) {
        let (_, e) = ans.ok_or_else(|| Error::Invalid(format!("sdom({v}) = {v}")))?;
        rdom[v] = child[e];
    }
    Ok((rdom, PathMinCounters { link_eval: run.link_eval, batch: run.batch }))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PathMinCounters {
    pub link_eval: LinkEvalCounters,
    pub batch: BatchCounters,
}

/// One top-down pass: idom(v) = sdom(v) when sdom(rdom(v)) = sdom(v), else
/// idom(rdom(v)).
pub fn immediate_dominators(d: &RootedTree, sdom: &[usize], rdom: &[usize]) -> Vec<usize> {
    let mut idom = vec![NIL; d.n + 1];
    for k in 1..=d.n {
        let v = d.order[k];
        if v == d.root {
            continue;
        }
        idom[v] = if sdom[rdom[v]] == sdom[v] { sdom[v] } else { idom[rdom[v]] };
    }
    idom
}

/// Lengauer–Tarjan with the simple link-eval structure.
pub fn lt_idom(g: &Digraph, d: &RootedTree) -> Vec<usize> {
    let n = d.n;
    let mut preds = vec![Vec::new(); n + 1];
    for a in &g.arcs {
        preds[a.v].push(a.u);
    }
    let mut semi: Vec<usize> = (0..=n).collect();
    let mut dom = vec![NIL; n + 1];
    let mut bucket: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut le = SimpleLinkEval::new(n, Order::Min);
    for w in (2..=n).rev() {
        for &v in &preds[w] {
            let e = le.eval(v);
            let cand = if e.is_finite() { e as usize } else { v };
            semi[w] = semi[w].min(cand);
        }
        bucket[semi[w]].push(w);
        let p = d.parent[w];
        le.link(p, w, semi[w] as f64).expect("w is a root");
        for v in std::mem::take(&mut bucket[p]) {
            let u = le.eval_arg(v);
            dom[v] = if semi[u] < semi[v] { u } else { p };
        }
    }
    for w in 2..=n {
        if dom[w] != semi[w] {
            dom[w] = dom[dom[w]];
        }
    }
    dom
}

/// Dominators by removing each vertex in turn and testing reachability.
pub fn naive_idom(g: &Digraph) -> Vec<usize> {
    let n = g.n;
    let r = g.root.unwrap_or(1);
    let out = g.out_arcs();
    let reach_without = |skip: usize| {
        let mut seen = vec![false; n + 1];
        if skip == r {
            return seen;
        }
        seen[r] = true;
        let mut stack = vec![r];
        while let Some(x) = stack.pop() {
            for &ai in &out[x] {
                let y = g.arcs[ai].v;
                if y != skip && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    // dominated[d] = vertices dominated by d (other than d itself)
    let mut doms: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for dv in 1..=n {
        if dv == r {
            continue;
        }
        let seen = reach_without(dv);
        for v in 1..=n {
            if v != dv && !seen[v] {
                doms[v].push(dv);
            }
        }
    }
    // the immediate dominator is the strict dominator with the most strict
    // dominators of its own; dominators of v form a chain
    let mut idom = vec![NIL; n + 1];
    for v in 1..=n {
        if v == r {
            continue;
        }
        idom[v] = doms[v].iter().copied().max_by_key(|&x| doms[x].len()).unwrap_or(r);
    }
    idom
}

/// Linear algorithm on a preorder-numbered flowgraph.
pub fn linear_idom(g: &Digraph, d: &RootedTree, part: &TreePartition) -> Result<(Vec<usize>, DomStats)> {
    let run = semidominators_run(g, d, part)?;
    let (rdom, pm) = relative_dominators(d, &run.sdom, Some(part.g))?;
    let mut stats = run.stats;
    stats.step2_link_eval = pm.link_eval;
    stats.step2_batch = pm.batch;
    Ok((immediate_dominators(d, &run.sdom, &rdom), stats))
}

/// Immediate dominators of a flowgraph in its own vertex ids; the root maps
/// to 0.
pub fn dominators(g: &Digraph, algo: Algo, gsize: Option<usize>) -> Result<Vec<usize>> {
    dominators_run(g, algo, gsize).map(|r| r.0)
}

pub fn dominators_run(g: &Digraph, algo: Algo, gsize: Option<usize>) -> Result<(Vec<usize>, DomStats)> {
    if g.kind != Kind::Flow {
        return Err(Error::Invalid("dominators need a flow graph".into()));
    }
    if algo == Algo::Naive {
        return Ok((naive_idom(g), DomStats::default()));
    }
    let (pg, d, old) = preorder_relabel(g)?;
    let (idom, stats) = match algo {
        Algo::Lt => (lt_idom(&pg, &d), DomStats::default()),
        _ => {
            let part = partition(&d, gsize.unwrap_or_else(|| default_g(g.n)).max(1));
            linear_idom(&pg, &d, &part)?
        }
    };
    let mut out = vec![NIL; g.n + 1];
    for v in 1..=g.n {
        if idom[v] != NIL {
            out[old[v]] = old[idom[v]];
        }
    }
    Ok((out, stats))
}
