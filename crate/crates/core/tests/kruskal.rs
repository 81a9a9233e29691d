use proptest::prelude::*;
use treepath::gen;
use treepath::graphio::RootedTree;
use treepath::kruskal::{compressed_kruskal, edge_children, find_cache, kruskal_from_graph, kruskal_tree, kruskal_tree_linear_run, ordered_edges};
use treepath::partition::full_partition;

/// Component label of every vertex after each prefix of edges, by
/// relabelling the smaller side.
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

fn check_against_components(seed: u64, n: usize, bias: f64) {
    let mut r = gen::rng(seed);
    let g = gen::ordered_tree(&mut r, n, bias);
    let (t, edges) = ordered_edges(&g).unwrap();
    let k = kruskal_tree(&t, &edges).unwrap();
    let comps = prefix_components(n, &edges);
    let child = edge_children(&t, &edges).unwrap();
    for (i, &v) in child.iter().enumerate() {
        let x = n + i + 1;
        let p = t.parent[v];
        assert_eq!(k.num[x], i + 1);
        assert_eq!(k.leaves(x), members(&comps[i + 1], v), "seed {seed} node {x}");
        assert_eq!(k.leaves(k.left[x]), members(&comps[i], p), "seed {seed} left of {x}");
        assert_eq!(k.leaves(k.right[x]), members(&comps[i], v), "seed {seed} right of {x}");
    }
    assert_eq!(k.parent[k.root()], 0);
}

#[test]
fn nodes_are_prefix_components() {
    for seed in 0..300 {
        let n = 2 + (seed as usize * 7) % 90;
        check_against_components(seed, n, (seed % 5) as f64 / 4.0);
    }
}

fn cache_law(t: &RootedTree, num: &[usize], g: usize) {
    let (f, _) = find_cache(t, num, g).unwrap();
    let fp = full_partition(t, g);
    let key = |v: usize| if v == t.root { usize::MAX } else { num[v] };
    for v in 1..=t.n {
        let mut a = t.parent[v];
        while a != 0 && key(a) <= key(v) {
            a = t.parent[a];
        }
        let want = if a != 0 && fp.micro[a] == fp.micro[v] { a } else { 0 };
        assert_eq!(f[v], want, "v {v} g {g}");
    }
}

#[test]
fn find_cache_is_nearest_larger_ancestor_in_microtree() {
    for seed in 0..200u64 {
        let mut r = gen::rng(seed ^ 0xfeed);
        let n = 2 + (seed as usize * 13) % 120;
        let g = gen::ordered_tree(&mut r, n, (seed % 3) as f64 / 2.0);
        let (t, edges) = ordered_edges(&g).unwrap();
        let child = edge_children(&t, &edges).unwrap();
        let mut num = vec![0; n + 1];
        for (i, &v) in child.iter().enumerate() {
            num[v] = i + 1;
        }
        for gs in [1, 2, 3, 5, 8, 200] {
            cache_law(&t, &num, gs);
        }
    }
}

#[test]
fn linear_finds_are_bounded() {
    for n in [1000, 4000, 16000] {
        let mut r = gen::rng(n as u64);
        let g = gen::ordered_tree(&mut r, n, 0.3);
        let (t, edges) = ordered_edges(&g).unwrap();
        let (lin, st) = kruskal_tree_linear_run(&t, &edges, 4).unwrap();
        assert_eq!(lin, kruskal_tree(&t, &edges).unwrap());
        assert!(st.dsu.finds as usize <= n, "{} live finds for n = {n}", st.dsu.finds);
        assert_eq!(st.dsu.finds + st.cached_finds, (n - 1) as u64);
        let (_, base) = kruskal_from_graph(&g, None).unwrap();
        assert!(st.dsu.find_path_nodes <= base.dsu.find_path_nodes);
    }
}

#[test]
fn compressed_contracts_equal_groups() {
    for seed in 0..100u64 {
        let mut r = gen::rng(seed + 77);
        let n = 2 + (seed as usize * 11) % 60;
        let g = gen::ordered_tree(&mut r, n, 0.4);
        let (t, edges) = ordered_edges(&g).unwrap();
        let mut groups = Vec::new();
        let mut cur = 1;
        for i in 0..edges.len() {
            if i > 0 && (seed as usize + i) % 3 == 0 {
                cur += 1;
            }
            groups.push(cur);
        }
        let c = compressed_kruskal(&t, &edges, &groups).unwrap();
        // after the last edge of a group, the components are exactly the
        // leaf sets of internal nodes of that group or below
        let comps = prefix_components(n, &edges);
        for &x in &c.internal {
            let gx = c.group[x];
            let last = groups.iter().rposition(|&q| q == gx).unwrap();
            let mut leaves = Vec::new();
            let mut stack = vec![x];
            while let Some(y) = stack.pop() {
                if y <= n {
                    leaves.push(y);
                } else {
                    stack.extend(c.children[y].iter().copied());
                }
            }
            leaves.sort_unstable();
            assert_eq!(leaves, members(&comps[last + 1], leaves[0]));
            for &ch in &c.children[x] {
                if ch > n {
                    assert!(c.group[ch] < gx);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn linear_equals_baseline(seed in any::<u64>(), n in 2usize..150, gs in 1usize..20, bias in 0.0f64..1.0) {
        let mut r = gen::rng(seed);
        let g = gen::ordered_tree(&mut r, n, bias);
        let (t, edges) = ordered_edges(&g).unwrap();
        let base = kruskal_tree(&t, &edges).unwrap();
        let (lin, st) = kruskal_tree_linear_run(&t, &edges, gs).unwrap();
        prop_assert_eq!(&lin, &base);
        if n <= gs {
            prop_assert_eq!(st.dsu.finds, 0);
        }
    }
}
