//! Microtree partitions of a rooted tree: the bottom-level fringe/core split
//! with its left-path decomposition, and the full partition where every
//! vertex lies in some microtree of at most g vertices.

use crate::graphio::RootedTree;
use crate::NIL;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftPath {
    /// Shallowest vertex.
    pub top: usize,
    /// Deepest vertex.
    pub bottom: usize,
    /// Members from top to bottom.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePartition {
    pub g: usize,
    /// Microtree root of each fringe vertex; `NIL` for core vertices.
    pub micro: Vec<usize>,
    pub core: Vec<bool>,
    /// Microtree roots in preorder.
    pub roots: Vec<usize>,
    pub paths: Vec<LeftPath>,
    /// Smallest core child of a core vertex, if any.
    pub chosen_child: Vec<usize>,
    /// Index into `paths` for core vertices.
    pub path_of: Vec<usize>,
}

impl TreePartition {
    pub fn is_fringe(&self, v: usize) -> bool {
        !self.core[v]
    }

    /// Members of each microtree in preorder, keyed by position in `roots`.
    pub fn microtree_members(&self, t: &RootedTree) -> Vec<Vec<usize>> {
        let mut idx = vec![usize::MAX; t.n + 1];
        for (i, &r) in self.roots.iter().enumerate() {
            idx[r] = i;
        }
        let mut out = vec![Vec::new(); self.roots.len()];
        for k in 1..=t.n {
            let v = t.order[k];
            if self.micro[v] != NIL {
                out[idx[self.micro[v]]].push(v);
            }
        }
        out
    }
}

/// Splits `t` into bottom-level microtrees of at most `g` vertices (the
/// fringe) and the remaining core. Left paths are left empty.
pub fn fringe_core(t: &RootedTree, g: usize) -> TreePartition {
    assert!(g >= 1, "g must be positive");
    let n = t.n;
    let mut micro = vec![NIL; n + 1];
    let mut core = vec![false; n + 1];
    let mut roots = Vec::new();
    for k in 1..=n {
        let v = t.order[k];
        let p = t.parent[v];
        if t.size[v] > g {
            core[v] = true;
        } else if p != NIL && micro[p] != NIL {
            micro[v] = micro[p];
        } else {
            micro[v] = v;
            roots.push(v);
        }
    }
    TreePartition {
        g,
        micro,
        core,
        roots,
        paths: Vec::new(),
        chosen_child: vec![NIL; n + 1],
        path_of: vec![usize::MAX; n + 1],
    }
}

/// Decomposes the core into maximal left paths: each core vertex continues
/// its path through its smallest core child.
pub fn left_paths(t: &RootedTree, mut part: TreePartition) -> TreePartition {
    let n = t.n;
    part.chosen_child = vec![NIL; n + 1];
    part.path_of = vec![usize::MAX; n + 1];
    part.paths.clear();
    for v in 1..=n {
        if part.core[v] {
            part.chosen_child[v] = t.children[v].iter().copied().find(|&c| part.core[c]).unwrap_or(NIL);
        }
    }
    for k in 1..=n {
        let v = t.order[k];
        if !part.core[v] {
            continue;
        }
        let p = t.parent[v];
        if p != NIL && part.chosen_child[p] == v {
            continue;
        }
        let idx = part.paths.len();
        let mut members = Vec::new();
        let mut x = v;
        while x != NIL {
            part.path_of[x] = idx;
            members.push(x);
            x = part.chosen_child[x];
        }
        let bottom = *members.last().unwrap();
        part.paths.push(LeftPath { top: v, bottom, members });
    }
    part
}

/// Convenience: fringe/core split followed by left paths.
pub fn partition(t: &RootedTree, g: usize) -> TreePartition {
    left_paths(t, fringe_core(t, g))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullPartition {
    pub g: usize,
    /// Residual size after the bottom-up sweep.
    pub s: Vec<usize>,
    /// Microtree root of every vertex.
    pub micro: Vec<usize>,
    pub marked: Vec<bool>,
}

/// Bottom-up sweep: s(v) = 1 + sum of children's s; when s(v) > g every
/// child of v is marked and s(v) resets to 1. Marked vertices and the root
/// head the microtrees.
pub fn full_partition(t: &RootedTree, g: usize) -> FullPartition {
    assert!(g >= 1, "g must be positive");
    let n = t.n;
    let mut s = vec![0; n + 1];
    let mut marked = vec![false; n + 1];
    for k in (1..=n).rev() {
        let v = t.order[k];
        let total: usize = 1 + t.children[v].iter().map(|&c| s[c]).sum::<usize>();
        if total > g {
            for &c in &t.children[v] {
                marked[c] = true;
            }
            s[v] = 1;
        } else {
            s[v] = total;
        }
    }
    let mut micro = vec![NIL; n + 1];
    for k in 1..=n {
        let v = t.order[k];
        let p = t.parent[v];
        micro[v] = if p == NIL || marked[v] { v } else { micro[p] };
    }
    FullPartition { g, s, micro, marked }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> RootedTree {
        let parent: Vec<usize> = (0..=n).map(|v| v.saturating_sub(1)).collect();
        RootedTree::from_parents(&parent)
    }

    #[test]
    fn path_fringe() {
        let t = path(10);
        let p = partition(&t, 3);
        assert_eq!(p.roots, vec![8]);
        for v in 1..=7 {
            assert!(p.core[v]);
        }
        for v in 8..=10 {
            assert_eq!(p.micro[v], 8);
        }
        assert_eq!(p.paths.len(), 1);
        assert_eq!(p.paths[0].top, 1);
        assert_eq!(p.paths[0].bottom, 7);
    }

    #[test]
    fn star_fringe() {
        let t = RootedTree::from_parents(&[0, 0, 1, 1, 1, 1, 1]);
        let p = partition(&t, 3);
        assert_eq!(p.roots, vec![2, 3, 4, 5, 6]);
        assert!(p.core[1]);
        assert_eq!(p.paths.len(), 1);
    }

    #[test]
    fn complete_binary_core() {
        // 7 core vertices, each core leaf carries two leaf children so that
        // the core is exactly the complete binary tree on 1..7
        let mut parent = vec![0, 0, 1, 1, 2, 2, 3, 3];
        for leaf in 4..=7 {
            parent.push(leaf);
            parent.push(leaf);
        }
        let t = RootedTree::from_parents(&parent);
        let p = partition(&t, 2);
        assert_eq!((1..=7).filter(|&v| p.core[v]).count(), 7);
        assert_eq!(p.paths.len(), 4);
        let tops: Vec<_> = p.paths.iter().map(|q| (q.top, q.bottom)).collect();
        assert_eq!(tops, vec![(1, 4), (5, 5), (3, 6), (7, 7)]);
    }

    #[test]
    fn full_partition_path() {
        let t = path(10);
        let f = full_partition(&t, 3);
        let mut sizes = std::collections::BTreeMap::new();
        for v in 1..=10 {
            *sizes.entry(f.micro[v]).or_insert(0) += 1;
        }
        assert_eq!(sizes.into_iter().collect::<Vec<_>>(), vec![(1, 1), (2, 3), (5, 3), (8, 3)]);
    }

    #[test]
    fn full_partition_small() {
        let t = path(3);
        let f = full_partition(&t, 5);
        assert!(f.marked.iter().all(|&m| !m));
        assert!((1..=3).all(|v| f.micro[v] == 1));
    }
}
