//! Disjoint set union with designated elements, full path compression and
//! balanced union (by size or by rank), instrumented with find-path counters.

use crate::{Error, Result, NIL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnionMode {
    BySize,
    ByRank,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DsuCounters {
    pub finds: u64,
    pub find_path_nodes: u64,
    pub unites: u64,
}

/// Nodes are 1..=n. A parent of `NIL` marks a root; size or rank and the
/// designated element are meaningful only at roots.
#[derive(Debug, Clone)]
pub struct DsuForest {
    parent: Vec<usize>,
    weight: Vec<u64>,
    designated: Vec<usize>,
    /// Root of the set a designated element names; stale for others.
    set_of: Vec<usize>,
    mode: UnionMode,
    pub counters: DsuCounters,
    links: Option<Vec<(usize, usize)>>,
}

impl DsuForest {
    pub fn make_sets(n: usize, mode: UnionMode) -> Result<DsuForest> {
        if n == 0 {
            return Err(Error::Invalid("make_sets needs n >= 1".into()));
        }
        let init = match mode {
            UnionMode::BySize => 1,
            UnionMode::ByRank => 0,
        };
        let mut weight = vec![init; n + 1];
        weight[0] = 0;
        Ok(DsuForest {
            parent: vec![NIL; n + 1],
            weight,
            designated: (0..=n).collect(),
            set_of: (0..=n).collect(),
            mode,
            counters: DsuCounters::default(),
            links: None,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> UnionMode {
        self.mode
    }

    /// Starts logging (parent-root, child-root) pairs of every union, which
    /// rebuilds the reference forest.
    pub fn record_links(&mut self) {
        self.links = Some(Vec::new());
    }

    pub fn links(&self) -> &[(usize, usize)] {
        self.links.as_deref().unwrap_or(&[])
    }

    pub fn is_designated(&self, v: usize) -> bool {
        let r = self.set_of[v];
        self.parent[r] == NIL && self.designated[r] == v
    }

    /// Root of `v`'s tree, compressing the traversed path.
    pub fn find_root(&mut self, v: usize) -> usize {
        self.counters.finds += 1;
        let mut r = v;
        let mut nodes = 1;
        while self.parent[r] != NIL {
            r = self.parent[r];
            nodes += 1;
        }
        self.counters.find_path_nodes += nodes;
        let mut x = v;
        while self.parent[x] != NIL && self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    /// Designated element of `v`'s set.
    pub fn find(&mut self, v: usize) -> usize {
        let r = self.find_root(v);
        self.designated[r]
    }

    /// Merges the sets named by designated elements `v` and `w`; `v` names
    /// the result. The heavier root becomes the parent, `v`'s root on ties.
    pub fn unite(&mut self, v: usize, w: usize) -> Result<()> {
        if !self.is_designated(v) {
            return Err(Error::NotDesignated(v));
        }
        if !self.is_designated(w) {
            return Err(Error::NotDesignated(w));
        }
        let (rv, rw) = (self.set_of[v], self.set_of[w]);
        if rv == rw {
            return Err(Error::SameSet(v, w));
        }
        self.counters.unites += 1;
        let (top, low) = if self.weight[rw] > self.weight[rv] { (rw, rv) } else { (rv, rw) };
        match self.mode {
            UnionMode::BySize => self.weight[top] += self.weight[low],
            UnionMode::ByRank => {
                if self.weight[top] == self.weight[low] {
                    self.weight[top] += 1;
                }
            }
        }
        self.weight[low] = 0;
        self.parent[low] = top;
        self.designated[top] = v;
        self.set_of[v] = top;
        if let Some(l) = self.links.as_mut() {
            l.push((top, low));
        }
        Ok(())
    }

    /// unite(find(x), find(y)) for arbitrary nodes.
    pub fn unite_any(&mut self, x: usize, y: usize) -> Result<()> {
        let a = self.find(x);
        let b = self.find(y);
        self.unite(a, b)
    }

    /// Size (by-size) or rank (by-rank) stored at root `r`.
    pub fn root_weight(&self, r: usize) -> u64 {
        self.weight[r]
    }

    pub fn parent_of(&self, v: usize) -> usize {
        self.parent[v]
    }

    /// CSV row `structure,n,ops,find_path_nodes`.
    pub fn stats_row(&self, structure: &str) -> String {
        format!(
            "{},{},{},{}",
            structure,
            self.len(),
            self.counters.finds + self.counters.unites,
            self.counters.find_path_nodes
        )
    }
}

/// Per-height node counts of the forest given by `links` over n nodes;
/// height of a leaf is 0.
pub fn height_profile(n: usize, links: &[(usize, usize)]) -> Vec<usize> {
    let mut children = vec![Vec::new(); n + 1];
    let mut has_parent = vec![false; n + 1];
    for &(p, c) in links {
        children[p].push(c);
        has_parent[c] = true;
    }
    let mut height = vec![0usize; n + 1];
    let mut counts = vec![0usize; 1];
    for r in (1..=n).filter(|&v| !has_parent[v]) {
        let mut stack = vec![(r, 0usize)];
        while let Some(&mut (x, ref mut i)) = stack.last_mut() {
            if *i < children[x].len() {
                let c = children[x][*i];
                *i += 1;
                stack.push((c, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    height[p] = height[p].max(height[x] + 1);
                }
                if counts.len() <= height[x] {
                    counts.resize(height[x] + 1, 0);
                }
                counts[height[x]] += 1;
            }
        }
    }
    counts
}

/// True iff at most n/2^h nodes have height h, for every h.
pub fn two_balanced(n: usize, links: &[(usize, usize)]) -> bool {
    height_profile(n, links)
        .iter()
        .enumerate()
        .all(|(h, &c)| h >= 64 || (c as u128) << h <= n as u128)
}

// ---------------------------------------------------------------------------
// Inverse Ackermann
// ---------------------------------------------------------------------------

/// Saturation cap; any value above 64 already exceeds log2 of a 64-bit n.
const CAP: u64 = 128;

fn ack(i: u32, j: u64) -> u64 {
    if j >= CAP {
        return CAP;
    }
    if i == 1 {
        return if j >= 7 { CAP } else { (1u64 << j).min(CAP) };
    }
    // A(i,1) = A(i-1,2); A(i,j) = A(i-1, A(i,j-1))
    let mut a = ack(i - 1, 2);
    for _ in 2..=j {
        if a >= CAP {
            return CAP;
        }
        a = ack(i - 1, a);
    }
    a
}

/// α(m,n) = min{i ≥ 1 : A(i, ⌊m/n⌋) > log2 n}, with ⌊m/n⌋ raised to 1 when
/// m < n so the recurrence stays defined.
pub fn inverse_ackermann(m: u64, n: u64) -> u32 {
    let n = n.max(2);
    let j = (m / n).max(1);
    let lg = 63 - n.leading_zeros() as u64; // A is integral, so > log2 n iff > floor(log2 n)
    let mut i = 1;
    while ack(i, j) <= lg {
        i += 1;
    }
    i
}
