//! Seeded random instance generators shared by tests, oracles and benches.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graphio::{Arc, Digraph, Kind, RootedTree};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parent vector of a random tree on 1..=n with parent(v) < v. `depth_bias`
/// in [0,1] is the probability of attaching to v-1, producing long paths.
pub fn random_parents<R: Rng>(rng: &mut R, n: usize, depth_bias: f64) -> Vec<usize> {
    let mut parent = vec![0; n + 1];
    for v in 2..=n {
        parent[v] = if rng.gen_bool(depth_bias) { v - 1 } else { rng.gen_range(1..v) };
    }
    parent
}

/// Random recursive tree, relabelled so ids are preorder numbers.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, depth_bias: f64) -> RootedTree {
    let t = RootedTree::from_parents(&random_parents(rng, n, depth_bias));
    relabel_preorder(&t)
}

pub fn relabel_preorder(t: &RootedTree) -> RootedTree {
    let mut children = vec![Vec::new(); t.n + 1];
    for v in 1..=t.n {
        children[t.pre[v]] = t.children[v].iter().map(|&c| t.pre[c]).collect();
    }
    RootedTree::from_children(1, children)
}

pub fn random_queries<R: Rng>(rng: &mut R, n: usize, q: usize) -> Vec<(usize, usize)> {
    (0..q).map(|_| (rng.gen_range(1..=n), rng.gen_range(1..=n))).collect()
}

/// Tree file (kind `tree`) with edges of `t` in random order and random
/// endpoint orientation; weights are drawn from `0..weight_range` when set.
pub fn tree_digraph<R: Rng>(rng: &mut R, t: &RootedTree, weight_range: Option<u32>) -> Digraph {
    let mut arcs: Vec<Arc> = (1..=t.n)
        .filter(|&v| t.parent[v] != 0)
        .map(|v| {
            let (u, w) = if rng.gen_bool(0.5) { (t.parent[v], v) } else { (v, t.parent[v]) };
            Arc { u, v: w, w: weight_range.map(|r| rng.gen_range(0..r) as f64) }
        })
        .collect();
    arcs.shuffle(rng);
    Digraph { n: t.n, arcs, root: None, kind: Kind::Tree }
}

/// Connected undirected graph: a random spanning tree plus extra random
/// edges, all in shuffled order, with integer weights in `0..weight_range`
/// (small ranges create ties). Self-loops are never generated.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, m: usize, weight_range: u32) -> Digraph {
    let parent = random_parents(rng, n, 0.0);
    let mut arcs = Vec::with_capacity(m.max(n - 1));
    for v in 2..=n {
        arcs.push(Arc { u: parent[v], v, w: Some(rng.gen_range(0..weight_range) as f64) });
    }
    while arcs.len() < m && n >= 2 {
        let u = rng.gen_range(1..=n);
        let v = rng.gen_range(1..=n);
        if u != v {
            arcs.push(Arc { u, v, w: Some(rng.gen_range(0..weight_range) as f64) });
        }
    }
    arcs.shuffle(rng);
    // random relabelling keeps vertex 1 from always being the tree root
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(rng);
    for a in &mut arcs {
        a.u = perm[a.u - 1];
        a.v = perm[a.v - 1];
    }
    Digraph { n, arcs, root: None, kind: Kind::Graph }
}

/// Shape controls for random flowgraphs.
#[derive(Debug, Clone, Copy)]
pub struct FlowShape {
    /// Probability of extending the current deepest path.
    pub depth_bias: f64,
    /// Fractions of extra arcs that go to an ancestor (back) or to an
    /// earlier non-ancestor (cross); the rest are uniform.
    pub back: f64,
    pub cross: f64,
    /// Probability that an extra arc stays within a small id window,
    /// producing dense local structure near the leaves.
    pub local: f64,
}

impl Default for FlowShape {
    fn default() -> Self {
        FlowShape { depth_bias: 0.3, back: 0.3, cross: 0.3, local: 0.3 }
    }
}

/// Flowgraph rooted at 1: a random skeleton tree plus extra arcs (m total),
/// shuffled, then vertex ids permuted with the root kept at 1.
pub fn random_flowgraph<R: Rng>(rng: &mut R, n: usize, m: usize, shape: FlowShape) -> Digraph {
    let parent = random_parents(rng, n, shape.depth_bias);
    let mut arcs = Vec::with_capacity(m.max(n - 1));
    for v in 2..=n {
        arcs.push(Arc { u: parent[v], v, w: None });
    }
    while arcs.len() < m && n >= 2 {
        let u = rng.gen_range(1..=n);
        let r: f64 = rng.gen();
        let v = if rng.gen_bool(shape.local) {
            let lo = u.saturating_sub(4).max(1);
            let hi = (u + 4).min(n);
            rng.gen_range(lo..=hi)
        } else if r < shape.back {
            // an ancestor of u in the skeleton
            let mut a = u;
            let steps = rng.gen_range(0..8);
            for _ in 0..steps {
                if parent[a] != 0 {
                    a = parent[a];
                }
            }
            a
        } else if r < shape.back + shape.cross {
            rng.gen_range(1..=u)
        } else {
            rng.gen_range(1..=n)
        };
        arcs.push(Arc { u, v, w: None });
    }
    arcs.shuffle(rng);
    let mut perm: Vec<usize> = (1..=n).collect();
    perm[1..].shuffle(rng);
    for a in &mut arcs {
        a.u = perm[a.u - 1];
        a.v = perm[a.v - 1];
    }
    Digraph { n, arcs, root: Some(1), kind: Kind::Flow }
}

/// Random tree with a random edge order, as a kind-`tree` file whose line
/// order is the weight order.
pub fn ordered_tree<R: Rng>(rng: &mut R, n: usize, depth_bias: f64) -> Digraph {
    let t = RootedTree::from_parents(&random_parents(rng, n, depth_bias));
    tree_digraph(rng, &t, None)
}
