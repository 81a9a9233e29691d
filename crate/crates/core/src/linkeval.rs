//! Link-eval structures for dynamic path minima (or maxima): the simple
//! compressed forest and the shadow-forest structure with delayed,
//! balanced linking (by size or by rank) and findroot shortcuts.
//!
//! Values are compared as keys `(value, node)`, where `node` is the deeper
//! endpoint of the arc carrying the value. Equal values resolve toward the
//! larger node id, which is the deepest node whenever ids increase along
//! tree paths (the preorder labelling used by every caller here).

use crate::{Error, Result, NIL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkMode {
    BySize,
    ByRank,
}

/// An arc value tagged with the child endpoint of its arc. `k` is the value
/// with its sign flipped for maximum structures, so smaller is always better.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Key {
    k: f64,
    pub node: usize,
}

impl Key {
    const INF: Key = Key { k: f64::INFINITY, node: NIL };

    #[inline]
    fn better(self, other: Key) -> bool {
        self.k < other.k || (self.k == other.k && self.node > other.node)
    }

    #[inline]
    fn min(self, other: Key) -> Key {
        if other.better(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LinkEvalCounters {
    pub links: u64,
    pub evals: u64,
    pub findroots: u64,
    /// Nodes on compressed paths, endpoints included.
    pub compress_nodes: u64,
    /// Subroots touched while linking.
    pub link_steps: u64,
}

/// Common interface of the simple and shadow structures.
pub trait LinkEval {
    fn len(&self) -> usize;
    fn order(&self) -> Order;
    fn link(&mut self, v: usize, w: usize, x: f64) -> Result<()>;
    fn eval_key(&mut self, v: usize) -> Key;
    fn findroot(&mut self, v: usize) -> usize;
    fn counters(&self) -> LinkEvalCounters;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Minimum (maximum) arc value on the root-to-`v` path; ±∞ at a root.
    fn eval(&mut self, v: usize) -> f64 {
        let key = self.eval_key(v);
        match self.order() {
            Order::Min => key.k,
            Order::Max => -key.k,
        }
    }

    /// Deepest node whose parent arc attains the path optimum; `NIL` at a root.
    fn eval_arg(&mut self, v: usize) -> usize {
        self.eval_key(v).node
    }
}

fn signed(order: Order, x: f64) -> f64 {
    match order {
        Order::Min => x,
        Order::Max => -x,
    }
}

// ---------------------------------------------------------------------------
// Simple structure
// ---------------------------------------------------------------------------

/// Path compression directly on the linked forest.
#[derive(Debug, Clone)]
pub struct SimpleLinkEval {
    parent: Vec<usize>,
    value: Vec<Key>,
    order: Order,
    counters: LinkEvalCounters,
    path: Vec<usize>,
}

impl SimpleLinkEval {
    pub fn new(n: usize, order: Order) -> SimpleLinkEval {
        SimpleLinkEval {
            parent: vec![NIL; n + 1],
            value: vec![Key::INF; n + 1],
            order,
            counters: LinkEvalCounters::default(),
            path: Vec::new(),
        }
    }

    /// Compresses the path to `v` and returns its root.
    fn compress(&mut self, v: usize) -> usize {
        self.path.clear();
        let mut x = v;
        while self.parent[x] != NIL {
            self.path.push(x);
            x = self.parent[x];
        }
        let root = x;
        self.counters.compress_nodes += self.path.len() as u64 + 1;
        // path holds v_k .. v_1; v_1 keeps its parent
        for i in (0..self.path.len().saturating_sub(1)).rev() {
            let (vi, prev) = (self.path[i], self.path[i + 1]);
            self.parent[vi] = root;
            self.value[vi] = self.value[vi].min(self.value[prev]);
        }
        root
    }
}

impl LinkEval for SimpleLinkEval {
    fn len(&self) -> usize {
        self.parent.len() - 1
    }

    fn order(&self) -> Order {
        self.order
    }

    fn link(&mut self, v: usize, w: usize, x: f64) -> Result<()> {
        if self.parent[v] != NIL {
            return Err(Error::NotRoot(v));
        }
        if self.parent[w] != NIL {
            return Err(Error::NotRoot(w));
        }
        if v == w {
            return Err(Error::SameSet(v, w));
        }
        self.counters.links += 1;
        self.parent[w] = v;
        self.value[w] = Key { k: signed(self.order, x), node: w };
        Ok(())
    }

    fn eval_key(&mut self, v: usize) -> Key {
        self.counters.evals += 1;
        if self.parent[v] == NIL {
            return Key::INF;
        }
        self.compress(v);
        self.value[v]
    }

    fn findroot(&mut self, v: usize) -> usize {
        self.counters.findroots += 1;
        self.compress(v)
    }

    fn counters(&self) -> LinkEvalCounters {
        self.counters
    }
}

// ---------------------------------------------------------------------------
// Shadow-forest structure
// ---------------------------------------------------------------------------

/// Delayed linking over a shadow forest partitioned into stacked subtrees.
/// `shp` is NIL exactly at subroots; `size` is zero exactly at non-subroots
/// in by-size mode; `rank` is frozen once a node stops being a subroot.
#[derive(Debug, Clone)]
pub struct ShadowLinkEval {
    order: Order,
    mode: LinkMode,
    b: Vec<Key>,
    shp: Vec<usize>,
    shc: Vec<usize>,
    size: Vec<u64>,
    rank: Vec<u32>,
    maxrank: Vec<u32>,
    /// Tree roots of the linked forest.
    is_root: Vec<bool>,
    /// For a non-root subroot: its deepest subroot descendant.
    deep: Vec<usize>,
    /// For a deepest subroot: the root of its tree.
    troot: Vec<usize>,
    /// Shadow parents as set by links only, for balance checks.
    ref_shp: Vec<usize>,
    counters: LinkEvalCounters,
    path: Vec<usize>,
}

impl ShadowLinkEval {
    pub fn new(n: usize, order: Order, mode: LinkMode) -> ShadowLinkEval {
        let mut size = vec![1; n + 1];
        size[0] = 0;
        ShadowLinkEval {
            order,
            mode,
            b: vec![Key::INF; n + 1],
            shp: vec![NIL; n + 1],
            shc: vec![NIL; n + 1],
            size,
            rank: vec![0; n + 1],
            maxrank: vec![0; n + 1],
            is_root: vec![true; n + 1],
            deep: (0..=n).collect(),
            troot: (0..=n).collect(),
            ref_shp: vec![NIL; n + 1],
            counters: LinkEvalCounters::default(),
            path: Vec::new(),
        }
    }

    pub fn mode(&self) -> LinkMode {
        self.mode
    }

    /// Compresses the subtree path to `v` and returns its subroot.
    fn compress(&mut self, v: usize) -> usize {
        self.path.clear();
        let mut x = v;
        while self.shp[x] != NIL {
            self.path.push(x);
            x = self.shp[x];
        }
        let sub = x;
        self.counters.compress_nodes += self.path.len() as u64 + 1;
        for i in (0..self.path.len().saturating_sub(1)).rev() {
            let (vi, prev) = (self.path[i], self.path[i + 1]);
            self.shp[vi] = sub;
            self.b[vi] = self.b[vi].min(self.b[prev]);
        }
        sub
    }

    fn set_shp(&mut self, u: usize, p: usize) {
        self.shp[u] = p;
        self.ref_shp[u] = p;
        self.size[u] = 0;
        self.counters.link_steps += 1;
    }

    /// Deepest subroot of the tree rooted at `r`.
    fn deepest_of_root(&self, r: usize) -> usize {
        if self.shc[r] == NIL {
            r
        } else {
            self.deep[self.shc[r]]
        }
    }

    /// Merges every subtree below root `v` into `v`'s subtree.
    fn flatten(&mut self, v: usize) {
        let mut u = self.shc[v];
        while u != NIL {
            let next = self.shc[u];
            self.shc[u] = NIL;
            self.set_shp(u, v);
            u = next;
        }
        self.shc[v] = NIL;
    }

    /// Hangs the subtree chain starting at `w` under `v`'s subtree, folding
    /// `x` into each former subroot.
    fn absorb(&mut self, v: usize, w: usize, x: Key) {
        let mut u = w;
        while u != NIL {
            let next = self.shc[u];
            self.shc[u] = NIL;
            self.set_shp(u, v);
            self.b[u] = self.b[u].min(x);
            u = next;
        }
    }

    fn subsize(&self, s: usize) -> u64 {
        self.size[s] - if self.shc[s] == NIL { 0 } else { self.size[self.shc[s]] }
    }

    /// Part 2 epilogue shared by both modes: `w`'s chain becomes the subroot
    /// chain below `v`.
    fn attach_below(&mut self, v: usize, w: usize) {
        let d = self.deepest_of_root(w);
        self.shc[v] = w;
        self.deep[w] = d;
        self.troot[d] = v;
    }

    /// Part 3: restores (i) and (ii) after Part 2.
    fn repair(&mut self, v: usize, x: Key) {
        loop {
            let s0 = self.shc[v];
            let s1 = self.shc[s0];
            if s1 == NIL || !x.better(self.b[s1]) {
                break;
            }
            self.counters.link_steps += 1;
            let keep_s0 = match self.mode {
                LinkMode::BySize => self.subsize(s0) >= self.subsize(s1),
                LinkMode::ByRank => self.rank[s0] >= self.rank[s1],
            };
            if keep_s0 {
                if self.mode == LinkMode::ByRank && self.rank[s0] == self.rank[s1] {
                    self.rank[s0] += 1;
                    self.maxrank[v] = self.maxrank[v].max(self.rank[s0]);
                }
                let next = self.shc[s1];
                self.shc[s1] = NIL;
                self.set_shp(s1, s0);
                self.shc[s0] = next;
                if next == NIL {
                    self.deep[s0] = s0;
                    self.troot[s0] = v;
                }
            } else {
                let moved = self.size[s0];
                self.shc[s0] = NIL;
                self.set_shp(s0, s1);
                self.shc[v] = s1;
                self.b[s1] = x;
                if self.mode == LinkMode::BySize {
                    self.size[s1] = moved;
                }
            }
        }
    }

    fn link_by_size(&mut self, v: usize, w: usize, x: Key) {
        let sw = self.size[w];
        if self.size[v] >= sw {
            // Part 1
            self.absorb(v, w, x);
        } else {
            // Part 2, then Part 3
            self.flatten(v);
            self.attach_below(v, w);
            self.repair(v, x);
        }
        self.size[v] += sw;
    }

    fn link_by_rank(&mut self, v: usize, w: usize, x: Key) {
        let (mv, mw) = (self.maxrank[v], self.maxrank[w]);
        if mv == mw {
            // Part 0
            self.rank[v] = mv + 1;
            self.maxrank[v] = mv + 1;
            self.flatten(v);
            let bw = self.b[w];
            self.absorb(v, w, bw);
            self.troot[v] = v;
        } else if mv > mw {
            // Part 1
            self.rank[v] = self.rank[v].max(mw + 1);
            let bw = self.b[w];
            self.absorb(v, w, bw);
        } else {
            // Part 2, then Part 3
            if self.shc[v] != NIL {
                self.rank[v] = mv + 1;
                self.flatten(v);
            }
            self.maxrank[v] = mw;
            self.attach_below(v, w);
            self.repair(v, x);
        }
    }

    // -- verification -------------------------------------------------------

    /// Checks invariants (i), (ii), (iii), stored subroot sizes, and the
    /// subsize laws (by-size: subsize(shp(shp(u))) >= 2 subsize(u); by-rank:
    /// subsize(u) >= 2^((rank(u)-1)/2)) on the link-built shadow forest.
    /// `f_parent` and `f_key` describe the linked forest F.
    fn check(&self, f_parent: &[usize], f_key: &[Key]) -> std::result::Result<(), String> {
        let n = self.shp.len() - 1;
        // (i) against F path minima
        for v in 1..=n {
            let mut want = Key::INF;
            let mut x = v;
            while f_parent[x] != NIL {
                want = want.min(f_key[x]);
                x = f_parent[x];
            }
            let mut got = self.b[v];
            let mut y = v;
            while self.shp[y] != NIL {
                y = self.shp[y];
                got = got.min(self.b[y]);
            }
            if got != want {
                return Err(format!("(i) fails at {v}: {got:?} != {want:?}"));
            }
            if self.shp[v] == NIL {
                // findroot shortcut
                let r = if self.is_root[v] { v } else { self.troot[self.deep[v]] };
                if r != x {
                    return Err(format!("findroot shortcut of subroot {v} gives {r}, want {x}"));
                }
            }
        }
        for v in 1..=n {
            let c = self.shc[v];
            if c != NIL && self.b[v].better(self.b[c]) {
                return Err(format!("(ii) fails at {v}"));
            }
            if self.mode == LinkMode::ByRank && self.shp[v] != NIL && self.rank[self.shp[v]] <= self.rank[v] {
                return Err(format!("(iii) fails at {v}"));
            }
            if self.mode == LinkMode::BySize && (self.size[v] == 0) != (self.shp[v] != NIL) {
                return Err(format!("subroot marker mismatch at {v}"));
            }
        }
        // subsizes on the reference shadow forest
        let mut children = vec![Vec::new(); n + 1];
        for v in 1..=n {
            if self.ref_shp[v] != NIL {
                children[self.ref_shp[v]].push(v);
            }
        }
        let mut sub = vec![0u64; n + 1];
        for v in 1..=n {
            if self.ref_shp[v] == NIL {
                let mut stack = vec![(v, 0usize)];
                while let Some(&mut (x, ref mut i)) = stack.last_mut() {
                    if *i < children[x].len() {
                        let c = children[x][*i];
                        *i += 1;
                        stack.push((c, 0));
                    } else {
                        stack.pop();
                        sub[x] += 1;
                        if let Some(&(p, _)) = stack.last() {
                            sub[p] += sub[x];
                        }
                    }
                }
            }
        }
        for v in 1..=n {
            if self.is_root[v] {
                let mut total = 0;
                let mut s = v;
                let mut chain = Vec::new();
                while s != NIL {
                    chain.push(s);
                    s = self.shc[s];
                }
                for &s in chain.iter().rev() {
                    total += sub[s];
                    if self.mode == LinkMode::BySize && self.size[s] != total {
                        return Err(format!("size({s}) = {} but {total} descendants", self.size[s]));
                    }
                    if self.mode == LinkMode::ByRank && self.rank[s] > self.maxrank[v] {
                        return Err(format!("maxrank({v}) below rank({s})"));
                    }
                }
            }
        }
        for u in 1..=n {
            match self.mode {
                LinkMode::BySize => {
                    let p = self.ref_shp[u];
                    if p != NIL && self.ref_shp[p] != NIL && sub[self.ref_shp[p]] < 2 * sub[u] {
                        return Err(format!("subsize law fails at {u}"));
                    }
                }
                LinkMode::ByRank => {
                    let s = sub[u] as u128;
                    let r = self.rank[u];
                    if r < 120 && 2 * s * s < 1u128 << r {
                        return Err(format!("rank law fails at {u}: subsize {s}, rank {r}"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl LinkEval for ShadowLinkEval {
    fn len(&self) -> usize {
        self.shp.len() - 1
    }

    fn order(&self) -> Order {
        self.order
    }

    fn link(&mut self, v: usize, w: usize, x: f64) -> Result<()> {
        if !self.is_root[v] {
            return Err(Error::NotRoot(v));
        }
        if !self.is_root[w] {
            return Err(Error::NotRoot(w));
        }
        if v == w {
            return Err(Error::SameSet(v, w));
        }
        self.counters.links += 1;
        let key = Key { k: signed(self.order, x), node: w };
        self.b[w] = key;
        self.is_root[w] = false;
        match self.mode {
            LinkMode::BySize => self.link_by_size(v, w, key),
            LinkMode::ByRank => self.link_by_rank(v, w, key),
        }
        Ok(())
    }

    fn eval_key(&mut self, v: usize) -> Key {
        self.counters.evals += 1;
        if self.shp[v] == NIL {
            return self.b[v];
        }
        self.compress(v);
        self.b[v].min(self.b[self.shp[v]])
    }

    fn findroot(&mut self, v: usize) -> usize {
        self.counters.findroots += 1;
        let s = self.compress(v);
        if self.is_root[s] {
            s
        } else {
            self.troot[self.deep[s]]
        }
    }

    fn counters(&self) -> LinkEvalCounters {
        self.counters
    }
}

/// A shadow structure paired with an uncompressed copy of the linked forest,
/// for invariant checking in tests.
#[derive(Debug, Clone)]
pub struct CheckedShadow {
    pub inner: ShadowLinkEval,
    f_parent: Vec<usize>,
    f_key: Vec<Key>,
}

impl CheckedShadow {
    pub fn new(n: usize, order: Order, mode: LinkMode) -> CheckedShadow {
        CheckedShadow {
            inner: ShadowLinkEval::new(n, order, mode),
            f_parent: vec![NIL; n + 1],
            f_key: vec![Key::INF; n + 1],
        }
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        self.inner.check(&self.f_parent, &self.f_key)
    }
}

impl LinkEval for CheckedShadow {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn order(&self) -> Order {
        self.inner.order
    }

    fn link(&mut self, v: usize, w: usize, x: f64) -> Result<()> {
        self.inner.link(v, w, x)?;
        self.f_parent[w] = v;
        self.f_key[w] = Key { k: signed(self.inner.order, x), node: w };
        Ok(())
    }

    fn eval_key(&mut self, v: usize) -> Key {
        self.inner.eval_key(v)
    }

    fn findroot(&mut self, v: usize) -> usize {
        self.inner.findroot(v)
    }

    fn counters(&self) -> LinkEvalCounters {
        self.inner.counters
    }
}
