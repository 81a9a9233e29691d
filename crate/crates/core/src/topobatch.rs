//! Batched topological computations: small labelled instances are encoded
//! as token lists over a shared master list, grouped by a radix sort for
//! variable-length lists, solved once per group, and the canonical solution
//! is transferred to (or re-run against) every duplicate.
//!
//! Vertices of an instance are local indices 0..n in preorder, so the
//! element bijection between a canonical instance and a duplicate is the
//! identity on local indices.

use crate::{Error, Result};

/// A small labelled graph; vertex i is the vertex with preorder number i+1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub vlabels: Vec<usize>,
    /// (tail, head, label) in local indices.
    pub arcs: Vec<(usize, usize, usize)>,
}

impl Instance {
    pub fn new(n: usize) -> Instance {
        Instance { n, vlabels: vec![0; n], arcs: Vec::new() }
    }
}

/// Token list: vertex count, one (preorder, label) pair per vertex, then one
/// (tail, head, label) triple per arc. Endpoint tokens are preorder numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceEncoding {
    pub handle: usize,
    pub tokens: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceGroup {
    pub canonical: usize,
    pub duplicates: Vec<usize>,
}

impl InstanceGroup {
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.canonical).chain(self.duplicates.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BatchCounters {
    pub instances: u64,
    pub tokens: u64,
    /// Bucket insertions and list moves during grouping.
    pub sort_work: u64,
    pub canonical_solves: u64,
    pub transfers: u64,
}

/// Shared master list of `len` positions: max(g, 2^k + 1) for k-bit labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MasterList {
    pub g: usize,
    pub label_bound: usize,
    pub len: usize,
}

impl MasterList {
    /// Labels must be below `label_bound`.
    pub fn new(g: usize, label_bound: usize) -> MasterList {
        let bits = usize::BITS - label_bound.saturating_sub(1).leading_zeros();
        let len = g.max((1usize << bits) + 1);
        MasterList { g, label_bound, len }
    }
}

pub fn encode(handle: usize, inst: &Instance, master: &MasterList, undirected: bool) -> Result<InstanceEncoding> {
    if inst.n > master.g || inst.vlabels.len() != inst.n {
        return Err(Error::Oversize(handle));
    }
    let over = |label: usize| Error::LabelOverflow { instance: handle, label };
    let mut tokens = Vec::with_capacity(1 + 2 * inst.n + 3 * inst.arcs.len());
    tokens.push(inst.n as u32);
    for (i, &l) in inst.vlabels.iter().enumerate() {
        if l >= master.label_bound {
            return Err(over(l));
        }
        tokens.push(i as u32 + 1);
        tokens.push(l as u32);
    }
    for &(a, b, l) in &inst.arcs {
        if a >= inst.n || b >= inst.n {
            return Err(over(a.max(b)));
        }
        if l >= master.label_bound {
            return Err(over(l));
        }
        let (a, b) = if undirected && b < a { (b, a) } else { (a, b) };
        tokens.extend([a as u32 + 1, b as u32 + 1, l as u32]);
    }
    Ok(InstanceEncoding { handle, tokens })
}

/// Groups encodings with identical token lists. Within a group members keep
/// input order, so the first is canonical; groups are ordered by canonical.
pub fn group(encodings: &[InstanceEncoding], master: &MasterList, counters: &mut BatchCounters) -> Vec<InstanceGroup> {
    let k = encodings.len();
    if k == 0 {
        return Vec::new();
    }
    let buckets_len = master.len.max(
        encodings.iter().flat_map(|e| e.tokens.iter()).map(|&t| t as usize + 1).max().unwrap_or(1),
    );
    let maxlen = encodings.iter().map(|e| e.tokens.len()).max().unwrap_or(0);
    counters.instances += k as u64;
    counters.tokens += encodings.iter().map(|e| e.tokens.len() as u64).sum::<u64>();

    // Distinct tokens per position, increasing: bucket (position, token)
    // pairs by token, then stably by position.
    let mut by_token: Vec<Vec<u32>> = vec![Vec::new(); buckets_len];
    for e in encodings {
        for (p, &t) in e.tokens.iter().enumerate() {
            by_token[t as usize].push(p as u32);
            counters.sort_work += 1;
        }
    }
    let mut distinct: Vec<Vec<u32>> = vec![Vec::new(); maxlen];
    for (t, ps) in by_token.iter().enumerate() {
        for &p in ps {
            let d = &mut distinct[p as usize];
            if d.last() != Some(&(t as u32)) {
                d.push(t as u32);
            }
        }
    }
    drop(by_token);

    // Lists by length.
    let mut by_len: Vec<Vec<usize>> = vec![Vec::new(); maxlen + 1];
    for (i, e) in encodings.iter().enumerate() {
        by_len[e.tokens.len()].push(i);
    }

    // Positions from last to first; lists of length exactly p+1 enter in
    // front, shorter lists sort first among equal prefixes.
    let mut queue: Vec<usize> = Vec::with_capacity(k);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); buckets_len];
    for p in (0..maxlen).rev() {
        let mut next: Vec<usize> = by_len[p + 1].clone();
        next.append(&mut queue);
        for &i in &next {
            buckets[encodings[i].tokens[p] as usize].push(i);
            counters.sort_work += 1;
        }
        queue = Vec::with_capacity(next.len());
        for &t in &distinct[p] {
            queue.append(&mut buckets[t as usize]);
        }
    }
    // Zero-length lists first.
    let mut sorted = by_len[0].clone();
    sorted.extend(queue);

    let mut groups: Vec<InstanceGroup> = Vec::new();
    let mut prev: Option<usize> = None;
    for &i in &sorted {
        counters.sort_work += 1;
        match prev {
            Some(j) if encodings[j].tokens == encodings[i].tokens => {
                groups.last_mut().unwrap().duplicates.push(encodings[i].handle);
            }
            _ => groups.push(InstanceGroup { canonical: encodings[i].handle, duplicates: Vec::new() }),
        }
        prev = Some(i);
    }
    // Order groups by canonical handle.
    groups.sort_by_key(|g| g.canonical);
    groups
}

/// A batch of instances sharing one master list.
#[derive(Debug, Clone)]
pub struct Batch {
    pub master: MasterList,
    pub undirected: bool,
    pub instances: Vec<Instance>,
    pub counters: BatchCounters,
}

impl Batch {
    pub fn new(g: usize, label_bound: usize, undirected: bool) -> Batch {
        Batch {
            master: MasterList::new(g, label_bound),
            undirected,
            instances: Vec::new(),
            counters: BatchCounters::default(),
        }
    }

    pub fn push(&mut self, inst: Instance) -> usize {
        self.instances.push(inst);
        self.instances.len() - 1
    }

    pub fn groups(&mut self) -> Result<Vec<InstanceGroup>> {
        let encs = self
            .instances
            .iter()
            .enumerate()
            .map(|(h, inst)| encode(h, inst, &self.master, self.undirected))
            .collect::<Result<Vec<_>>>()?;
        Ok(group(&encs, &self.master, &mut self.counters))
    }

    /// Transfer mode: solves each canonical instance and copies the
    /// solution, expressed in local indices, to every duplicate.
    pub fn solve_transfer<S, F>(&mut self, mut solver: F) -> Result<Vec<S>>
    where
        S: Clone,
        F: FnMut(&Instance) -> Result<S>,
    {
        let groups = self.groups()?;
        let mut out: Vec<Option<S>> = (0..self.instances.len()).map(|_| None).collect();
        for g in &groups {
            let sol = solver(&self.instances[g.canonical]).map_err(|e| wrap(g.canonical, e))?;
            self.counters.canonical_solves += 1;
            for d in &g.duplicates {
                out[*d] = Some(sol.clone());
                self.counters.transfers += 1;
            }
            out[g.canonical] = Some(sol);
        }
        Ok(out.into_iter().map(|s| s.expect("every instance is grouped")).collect())
    }

    /// Run-per-duplicate mode: the canonical solve yields a program that
    /// `run` evaluates against each member's own data (by handle).
    pub fn solve_per_duplicate<P, S, F, R>(&mut self, mut solver: F, mut run: R) -> Result<Vec<S>>
    where
        F: FnMut(&Instance) -> Result<P>,
        R: FnMut(&P, usize) -> S,
    {
        let groups = self.groups()?;
        let mut out: Vec<Option<S>> = (0..self.instances.len()).map(|_| None).collect();
        for g in &groups {
            let prog = solver(&self.instances[g.canonical]).map_err(|e| wrap(g.canonical, e))?;
            self.counters.canonical_solves += 1;
            for h in g.members() {
                out[h] = Some(run(&prog, h));
                self.counters.transfers += 1;
            }
        }
        Ok(out.into_iter().map(|s| s.expect("every instance is grouped")).collect())
    }
}

fn wrap(instance: usize, e: Error) -> Error {
    Error::Invalid(format!("solver failed on instance {instance}: {e}"))
}

/// Dense ranks (from 1) of `keys[i]` among items with the same `group[i]`,
/// by two stable bucket passes. Keys must be below `key_bound`, groups below
/// `group_bound`.
pub fn rank_within_groups(group: &[usize], keys: &[usize], group_bound: usize, key_bound: usize) -> Vec<usize> {
    let n = keys.len();
    let mut by_key: Vec<Vec<usize>> = vec![Vec::new(); key_bound];
    for i in 0..n {
        by_key[keys[i]].push(i);
    }
    let mut by_group: Vec<Vec<usize>> = vec![Vec::new(); group_bound];
    for items in &by_key {
        for &i in items {
            by_group[group[i]].push(i);
        }
    }
    let mut rank = vec![0; n];
    for items in &by_group {
        let mut r = 0;
        let mut last = usize::MAX;
        for &i in items {
            if keys[i] != last {
                r += 1;
                last = keys[i];
            }
            rank[i] = r;
        }
    }
    rank
}
