//! Counter-based benchmark driver. Every suite generates seeded instances
//! per size, runs the linear algorithm and reports work counters divided by
//! n + m. Wall-clock time is not part of the output, which keeps the CSV
//! deterministic.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::dominators::{dominators_run, Algo};
use crate::dsu::{DsuForest, UnionMode};
use crate::gen::{self, FlowShape};
use crate::graphio::RootedTree;
use crate::intervals::intervals;
use crate::kruskal::{kruskal_tree, kruskal_tree_linear_run, ordered_edges};
use crate::mst::{build_mst_kkt_counted, kruskal_msf, path_maxima, Edge};
use crate::nca::{nca_ahu, nca_linear_run};
use crate::partition::partition;
use crate::topobatch::BatchCounters;
use crate::{default_g, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Nca,
    Mst,
    Intervals,
    Dominators,
    Kruskal,
    DsuMarked,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Nca, Suite::Mst, Suite::Intervals, Suite::Dominators, Suite::Kruskal, Suite::DsuMarked];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Nca => "nca",
            Suite::Mst => "mst",
            Suite::Intervals => "intervals",
            Suite::Dominators => "dominators",
            Suite::Kruskal => "kruskal",
            Suite::DsuMarked => "dsu-lemma5",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub suite: Suite,
    pub n: usize,
    pub m: usize,
    pub counter: &'static str,
    pub value: u64,
}

impl Row {
    pub fn normalized(&self) -> f64 {
        self.value as f64 / (self.n + self.m) as f64
    }
}

pub const CSV_HEADER: &str = "suite,n,m,counter,normalized";

pub fn render_csv(rows: &[Row]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!("{},{},{},{},{:.6}\n", r.suite, r.n, r.m, r.counter, r.normalized()));
    }
    s
}

/// Parses `1k,2k,4096,2^14`; `k` means 1024.
pub fn parse_sizes(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(|p| {
            let p = p.trim();
            let bad = || Error::Invalid(format!("bad size {p:?}"));
            let n = if let Some(e) = p.strip_prefix("2^") {
                let e: u32 = e.parse().map_err(|_| bad())?;
                1usize.checked_shl(e).filter(|_| e < 40).ok_or_else(bad)?
            } else if let Some(k) = p.strip_suffix(['k', 'K']) {
                k.parse::<usize>().map_err(|_| bad())?.checked_mul(1024).ok_or_else(bad)?
            } else {
                p.parse().map_err(|_| bad())?
            };
            if n < 2 {
                return Err(bad());
            }
            Ok(n)
        })
        .collect()
}

fn batch_work(b: &BatchCounters) -> u64 {
    b.instances + b.tokens + b.sort_work + b.canonical_solves + b.transfers
}

/// Seed of one (suite, size) run, so sizes are independent of each other.
fn run_seed(seed: u64, suite: Suite, n: usize) -> u64 {
    let tag = Suite::ALL.iter().position(|&s| s == suite).unwrap_or(0) as u64;
    seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ tag.wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

/// Runs one suite over all sizes; sizes run on separate threads.
pub fn run_suite(suite: Suite, sizes: &[usize], seed: u64) -> Result<Vec<Row>> {
    let results: Vec<Result<Vec<Row>>> = std::thread::scope(|s| {
        let handles: Vec<_> = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| s.spawn(move || run_one(suite, n, run_seed(seed, suite, n), i == 0)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Invalid("bench worker panicked".into()))))
            .collect()
    });
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

fn run_one(suite: Suite, n: usize, seed: u64, spot_check: bool) -> Result<Vec<Row>> {
    let mut r = gen::rng(seed);
    let m = 4 * n;
    let mut rows = Vec::new();
    let mut push = |mm: usize, counter: &'static str, value: u64| rows.push(Row { suite, n, m: mm, counter, value });
    match suite {
        Suite::Nca => {
            let t = gen::random_tree(&mut r, n, 0.3);
            let q = gen::random_queries(&mut r, n, m);
            let run = nca_linear_run(&t, &q, default_g(n))?;
            if spot_check && run.answers != nca_ahu(&t, &q) {
                return Err(Error::Invalid("nca spot check failed".into()));
            }
            let b = batch_work(&run.batch);
            push(m, "find_path_nodes", run.dsu.find_path_nodes);
            push(m, "batch_work", b);
            push(m, "total", (n + m) as u64 + run.dsu.find_path_nodes + b);
        }
        Suite::Mst => {
            let g = gen::random_graph(&mut r, n, m, 1 << 30);
            let edges: Vec<Edge> = g.arcs.iter().map(|a| (a.u, a.v, a.w.unwrap_or(0.0))).collect();
            let tree_ids = kruskal_msf(n, &edges);
            let mut is_tree = vec![false; edges.len()];
            for &i in &tree_ids {
                is_tree[i] = true;
            }
            let tree: Vec<Edge> = tree_ids.iter().map(|&i| edges[i]).collect();
            let queries: Vec<(usize, usize)> = (0..edges.len()).filter(|&i| !is_tree[i]).map(|i| (edges[i].0, edges[i].1)).collect();
            let pm = path_maxima(n, &tree, &queries, None)?;
            let (built, kkt) = build_mst_kkt_counted(&g, seed)?;
            if built != tree_ids {
                return Err(Error::Invalid("mst build disagrees with Kruskal".into()));
            }
            let le = pm.link_eval.compress_nodes + pm.link_eval.link_steps;
            let b = batch_work(&pm.batch);
            let mm = g.m();
            push(mm, "verify_compress_nodes", le);
            push(mm, "verify_batch_work", b);
            push(mm, "build_edges_seen", kkt.edges_seen);
            push(mm, "total", (n + mm) as u64 + le + b + kkt.edges_seen);
        }
        Suite::Intervals => {
            let g = gen::random_flowgraph(&mut r, n, m, FlowShape::default());
            let (_, st) = intervals(&g, None, false)?;
            let finds = st.dsu.find_path_nodes + st.nca.find_path_nodes;
            let b = batch_work(&st.batch);
            let mm = g.m();
            push(mm, "find_path_nodes", finds);
            push(mm, "bag_ops", st.bag_ops + st.stack_pops);
            push(mm, "batch_work", b);
            push(mm, "total", (n + mm) as u64 + finds + st.bag_ops + st.stack_pops + b);
        }
        Suite::Dominators => {
            let g = gen::random_flowgraph(&mut r, n, m, FlowShape::default());
            let (_, st) = dominators_run(&g, Algo::Linear, None)?;
            let finds = st.intervals.dsu.find_path_nodes + st.intervals.nca.find_path_nodes + st.nca.find_path_nodes + st.rmq.find_path_nodes;
            let le = st.link_eval.compress_nodes + st.link_eval.link_steps + st.step2_link_eval.compress_nodes + st.step2_link_eval.link_steps;
            let b = batch_work(&st.intervals.batch) + batch_work(&st.micro_batch) + batch_work(&st.step2_batch);
            let mm = g.m();
            push(mm, "find_path_nodes", finds);
            push(mm, "compress_nodes", le);
            push(mm, "batch_work", b);
            push(mm, "total", (n + mm) as u64 + finds + le + b + st.intervals.bag_ops);
        }
        Suite::Kruskal => {
            let g = gen::ordered_tree(&mut r, n, 0.3);
            let (t, edges) = ordered_edges(&g)?;
            let (k, st) = kruskal_tree_linear_run(&t, &edges, default_g(n))?;
            if spot_check && k != kruskal_tree(&t, &edges)? {
                return Err(Error::Invalid("kruskal spot check failed".into()));
            }
            let b = batch_work(&st.batch);
            let mm = n - 1;
            push(mm, "find_path_nodes", st.dsu.find_path_nodes);
            push(mm, "batch_work", b);
            push(mm, "total", (n + mm) as u64 + st.dsu.find_path_nodes + b);
        }
        Suite::DsuMarked => {
            let t = gen::random_tree(&mut r, n, 0.3);
            let tr = marked_trace(&t, m, &mut r);
            let mut dsu = DsuForest::make_sets(n, UnionMode::ByRank)?;
            for op in &tr.ops {
                match *op {
                    Op::Find(v) => {
                        dsu.find(v);
                    }
                    Op::Unite(p, v) => dsu.unite(p, v)?,
                }
            }
            let finds = tr.finds;
            push(finds, "find_path_nodes", dsu.counters.find_path_nodes);
            push(finds, "marked", tr.marked as u64);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Find(usize),
    /// unite(designated, designated)
    Unite(usize, usize),
}

/// DSU trace with its marked-node count.
#[derive(Debug, Clone)]
pub struct MarkedTrace {
    pub ops: Vec<Op>,
    pub finds: usize,
    pub marked: usize,
}

/// Marked/unmarked trace shaped like the interval analysis: the tops of the
/// left paths of a partition with g = default_g(n) are marked (at most n/g
/// of them). The first batch unites every microtree bottom-up, so unmarked
/// nodes live in sets of at most g nodes; then each path, in decreasing
/// order of its top, unites its hanging sets and its own vertices bottom-up
/// into the top. `m` finds at random already-united vertices are spread
/// over both phases.
pub fn marked_trace<R: Rng>(t: &RootedTree, m: usize, r: &mut R) -> MarkedTrace {
    let n = t.n;
    let g = default_g(n);
    let part = partition(t, g);
    let mut ops = Vec::with_capacity(n + m);
    let mut seen: Vec<usize> = Vec::with_capacity(n);
    let mut finds = 0;
    let per_unite = m / n.max(1);
    let mut add_finds = |ops: &mut Vec<Op>, seen: &[usize], k: usize, finds: &mut usize| {
        for _ in 0..k {
            if *finds < m && !seen.is_empty() {
                ops.push(Op::Find(seen[r.gen_range(0..seen.len())]));
                *finds += 1;
            }
        }
    };
    // microtrees, children before parents
    for k in (1..=n).rev() {
        let v = t.order[k];
        if part.is_fringe(v) {
            seen.push(v);
            let p = t.parent[v];
            if part.micro[v] != v {
                ops.push(Op::Unite(p, v));
            }
            add_finds(&mut ops, &seen, per_unite, &mut finds);
        }
    }
    let mut paths: Vec<_> = part.paths.iter().collect();
    paths.sort_by_key(|p| std::cmp::Reverse(p.top));
    for p in paths {
        // path vertices bottom-up; each absorbs its fringe children first
        let mut chain = Vec::new();
        let mut x = p.bottom;
        loop {
            chain.push(x);
            if x == p.top {
                break;
            }
            x = t.parent[x];
        }
        for &v in &chain {
            seen.push(v);
            for &c in &t.children[v] {
                if part.is_fringe(c) {
                    ops.push(Op::Unite(v, c));
                    add_finds(&mut ops, &seen, per_unite, &mut finds);
                }
            }
            if v != p.top {
                ops.push(Op::Unite(t.parent[v], v));
            }
            add_finds(&mut ops, &seen, per_unite, &mut finds);
        }
        // core children hanging off the path were tops of earlier paths
        for &v in &chain {
            for &c in &t.children[v] {
                if !part.is_fringe(c) && !chain.contains(&c) {
                    ops.push(Op::Unite(p.top, c));
                    add_finds(&mut ops, &seen, per_unite, &mut finds);
                }
            }
        }
    }
    let rest = m - finds;
    add_finds(&mut ops, &seen, rest, &mut finds);
    MarkedTrace { ops, finds, marked: part.paths.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_sizes("1k,2k,4096,2^13").unwrap(), vec![1024, 2048, 4096, 8192]);
        assert!(parse_sizes("1").is_err());
        assert!(parse_sizes("x").is_err());
    }

    #[test]
    fn suites_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }

    #[test]
    fn deterministic_and_spot_checked() {
        for s in Suite::ALL {
            let a = render_csv(&run_suite(s, &[300, 600], 7).unwrap());
            let b = render_csv(&run_suite(s, &[300, 600], 7).unwrap());
            assert_eq!(a, b);
            assert!(a.lines().count() > 2);
        }
    }

    #[test]
    fn marked_trace_is_valid() {
        let mut r = gen::rng(3);
        let t = gen::random_tree(&mut r, 500, 0.3);
        let tr = marked_trace(&t, 2000, &mut r);
        assert_eq!(tr.finds, 2000);
        let unites = tr.ops.iter().filter(|o| matches!(o, Op::Unite(..))).count();
        assert_eq!(unites, 499);
        assert!(tr.marked <= 500 / default_g(500));
    }
}
