mod common;

use treepath::dominators::{
    dominators, initial_tags, lt_idom, relative_dominators, semidominators_run, Algo,
};
use treepath::gen::{self, FlowShape};
use treepath::graphio::{ancestor, preorder_relabel, Digraph};
use treepath::partition::partition;

fn shapes() -> Vec<FlowShape> {
    vec![
        FlowShape::default(),
        FlowShape { depth_bias: 0.9, back: 0.2, cross: 0.5, local: 0.2 },
        FlowShape { depth_bias: 0.1, back: 0.1, cross: 0.6, local: 0.6 },
        FlowShape { depth_bias: 0.7, back: 0.5, cross: 0.4, local: 0.0 },
        FlowShape { depth_bias: 0.3, back: 0.0, cross: 0.9, local: 0.1 },
    ]
}

/// Semi-dominators by definition: the smallest u with an arc (u, v) and a
/// high path from v to w.
fn sdom_brute(g: &Digraph) -> Vec<usize> {
    let n = g.n;
    let mut sdom: Vec<usize> = (0..=n).collect();
    for w in 2..=n {
        let high = common::reach_rev(g, w, |x| x > w);
        for a in &g.arcs {
            if high[a.v] {
                sdom[w] = sdom[w].min(a.u);
            }
        }
    }
    sdom
}

fn instance(seed: u64) -> Digraph {
    let mut rng = gen::rng(seed);
    let n = 1 + (seed as usize * 13) % 120;
    let m = n - 1 + (seed as usize * 5) % (3 * n + 1);
    gen::random_flowgraph(&mut rng, n, m, shapes()[seed as usize % 5])
}

#[test]
fn sdom_matches_high_paths_and_lt() {
    for seed in 0..300u64 {
        let fg = instance(seed);
        let (pg, d, _) = preorder_relabel(&fg).unwrap();
        let want = sdom_brute(&pg);
        let t = initial_tags(&pg, &d);
        for w in 1..=pg.n {
            let direct = pg.arcs.iter().filter(|a| a.v == w).map(|a| a.u).chain([w]).min().unwrap();
            assert_eq!(t[w], direct);
        }
        for g in [1, 2, 3, 4, 5] {
            let part = partition(&d, g);
            let run = semidominators_run(&pg, &d, &part).unwrap();
            assert_eq!(run.sdom, want, "seed {seed} g {g}");
            // arc tags: minimum extended tag on (nca, u]
            for a in &run.arc_tags {
                let mut x = a.u;
                let mut best = usize::MAX;
                while x != a.nca {
                    best = best.min(want[x]);
                    x = d.parent[x];
                }
                assert_eq!(a.at, best, "seed {seed} g {g} arc {:?}", (a.u, a.v));
                assert!(ancestor(&d, a.nca, a.mid) && ancestor(&d, a.mid, a.u));
                if a.mid != a.nca {
                    // mid is the deepest vertex of the nca's path above u
                    let p = part.path_of[a.nca];
                    assert_eq!(part.path_of[a.mid], p);
                    let c = part.chosen_child[a.mid];
                    assert!(c == 0 || !ancestor(&d, c, a.u));
                }
            }
            // microtags: prefix minima agree with extended tags
            for w in 1..=pg.n {
                if part.core[w] {
                    continue;
                }
                let (mut x, mut me, mut mm) = (w, usize::MAX, usize::MAX);
                loop {
                    me = me.min(want[x]);
                    mm = mm.min(run.mt[x]);
                    if x == part.micro[w] {
                        break;
                    }
                    x = d.parent[x];
                }
                assert_eq!(me, mm, "seed {seed} g {g} microtag prefix {w}");
            }
        }
    }
}

#[test]
fn rdom_is_path_argmin() {
    for seed in 0..100u64 {
        let fg = instance(seed);
        let (pg, d, _) = preorder_relabel(&fg).unwrap();
        let sdom = sdom_brute(&pg);
        let (rdom, _) = relative_dominators(&d, &sdom, Some(2)).unwrap();
        for v in 2..=pg.n {
            let mut x = v;
            let mut best = usize::MAX;
            while x != sdom[v] {
                best = best.min(sdom[x]);
                x = d.parent[x];
            }
            assert!(ancestor(&d, sdom[v], rdom[v]) && rdom[v] != sdom[v] && ancestor(&d, rdom[v], v), "seed {seed} v {v} sdom {} rdom {} parent {:?}", sdom[v], rdom[v], &d.parent);
            assert_eq!(sdom[rdom[v]], best);
        }
    }
}

#[test]
fn three_way_agreement() {
    for seed in 0..400u64 {
        let fg = instance(seed);
        let want = common::idom_naive(&fg);
        assert_eq!(dominators(&fg, Algo::Naive, None).unwrap(), want, "naive seed {seed}");
        assert_eq!(dominators(&fg, Algo::Lt, None).unwrap(), want, "lt seed {seed}");
        for g in [None, Some(1), Some(2), Some(3), Some(5)] {
            assert_eq!(dominators(&fg, Algo::Linear, g).unwrap(), want, "linear seed {seed} g {g:?}");
        }
        let (pg, d, _) = preorder_relabel(&fg).unwrap();
        let idom = lt_idom(&pg, &d);
        for v in 2..=pg.n {
            assert!(idom[v] < v);
        }
    }
}

#[test]
fn idom_tree_encodes_dominance() {
    for seed in 0..40u64 {
        let fg = instance(500 + seed);
        let n = fg.n;
        let idom = dominators(&fg, Algo::Linear, Some(2)).unwrap();
        let r = fg.root.unwrap();
        for dv in 1..=n {
            let seen = common::reach(&fg, r, |x| x != dv);
            for v in 1..=n {
                let dominated = v == dv || !seen[v];
                let mut x = v;
                while x != 0 && x != dv {
                    x = idom[x];
                }
                assert_eq!(x == dv, dominated, "seed {seed} d {dv} v {v}");
            }
        }
    }
}
