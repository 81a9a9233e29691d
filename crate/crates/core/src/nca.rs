//! Offline nearest common ancestors: the DSU-based postorder algorithm, the
//! microtree variant that batches same-microtree queries, and range minima
//! answered as NCAs in a Cartesian tree.

use crate::dsu::{DsuCounters, DsuForest, UnionMode};
use crate::graphio::RootedTree;
use crate::partition::fringe_core;
use crate::topobatch::{Batch, BatchCounters, Instance};
use crate::{Error, Result, NIL};

#[derive(Debug, Clone, Default)]
pub struct NcaRun {
    pub answers: Vec<usize>,
    pub dsu: DsuCounters,
    pub batch: BatchCounters,
    pub small: usize,
    pub big: usize,
}

/// Answers the queries whose indices are in `which` with one postorder pass;
/// other entries of `answers` are left untouched.
fn ahu_pass(t: &RootedTree, q: &[(usize, usize)], which: &[usize], answers: &mut [usize]) -> DsuCounters {
    let n = t.n;
    let mut bucket: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for &i in which {
        let (v, w) = q[i];
        bucket[v].push(i);
        if w != v {
            bucket[w].push(i);
        }
    }
    let mut dsu = DsuForest::make_sets(n, UnionMode::ByRank).expect("n >= 1");
    let mut visited = vec![false; n + 1];
    for v in t.postorder() {
        visited[v] = true;
        for &i in &bucket[v] {
            let (a, b) = q[i];
            let w = if a == v { b } else { a };
            if w == v {
                answers[i] = v;
            } else if visited[w] && answers[i] == NIL {
                answers[i] = dsu.find(w);
            }
        }
        let p = t.parent[v];
        if p != NIL {
            dsu.unite(p, v).expect("postorder unites designated roots");
        }
    }
    dsu.counters
}

/// Postorder DSU algorithm. Self-queries are answered without the DSU.
pub fn nca_ahu(t: &RootedTree, q: &[(usize, usize)]) -> Vec<usize> {
    let mut answers = vec![NIL; q.len()];
    let mut which = Vec::new();
    for (i, &(v, w)) in q.iter().enumerate() {
        if v == w {
            answers[i] = v;
        } else {
            which.push(i);
        }
    }
    ahu_pass(t, q, &which, &mut answers);
    answers
}

pub fn nca_linear(t: &RootedTree, q: &[(usize, usize)], g: usize) -> Vec<usize> {
    nca_linear_run(t, q, g).expect("microtree instances respect g").answers
}

/// Microtree variant: big queries go through the DSU pass, small ones are
/// batched per microtree (tree arcs label 0, query arcs label 1) and solved
/// once per isomorphism class.
pub fn nca_linear_run(t: &RootedTree, q: &[(usize, usize)], g: usize) -> Result<NcaRun> {
    let part = fringe_core(t, g);
    let mut run = NcaRun { answers: vec![NIL; q.len()], ..NcaRun::default() };
    let mut big = Vec::new();
    let mut small_of: Vec<Vec<usize>> = vec![Vec::new(); t.n + 1];
    for (i, &(v, w)) in q.iter().enumerate() {
        if v == w {
            run.answers[i] = v;
        } else if part.micro[v] != NIL && part.micro[v] == part.micro[w] {
            small_of[part.micro[v]].push(i);
        } else {
            big.push(i);
        }
    }
    run.big = big.len();
    run.dsu = ahu_pass(t, q, &big, &mut run.answers);

    let members = part.microtree_members(t);
    let mut local = vec![0usize; t.n + 1];
    let mut batch = Batch::new(g, 2, false);
    let mut handles: Vec<(usize, &[usize])> = Vec::new();
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
            inst.arcs.push((local[t.parent[v]], local[v], 0));
        }
        for &i in &small_of[root] {
            let (v, w) = q[i];
            inst.arcs.push((local[v], local[w], 1));
        }
        batch.push(inst);
        handles.push((root, mem));
        run.small += small_of[root].len();
    }
    let sols = batch.solve_transfer(solve_micro_nca)?;
    for ((root, mem), sol) in handles.iter().zip(sols) {
        for (&i, &a) in small_of[*root].iter().zip(&sol) {
            run.answers[i] = mem[a];
        }
    }
    run.batch = batch.counters;
    Ok(run)
}

/// Local NCA of every query arc by walking parent links.
fn solve_micro_nca(inst: &Instance) -> Result<Vec<usize>> {
    let mut parent = vec![usize::MAX; inst.n];
    let mut depth = vec![0; inst.n];
    for &(p, c, l) in &inst.arcs {
        if l == 0 {
            parent[c] = p;
        }
    }
    for v in 1..inst.n {
        // preorder: parents precede children
        if parent[v] >= v {
            return Err(Error::Invalid("microtree arcs are not in preorder".into()));
        }
        depth[v] = depth[parent[v]] + 1;
    }
    Ok(inst
        .arcs
        .iter()
        .filter(|a| a.2 == 1)
        .map(|&(mut a, mut b, _)| {
            while depth[a] > depth[b] {
                a = parent[a];
            }
            while depth[b] > depth[a] {
                b = parent[b];
            }
            while a != b {
                a = parent[a];
                b = parent[b];
            }
            a
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Cartesian trees and range minima
// ---------------------------------------------------------------------------

/// Min-heap-ordered binary tree over positions 1..=len whose in-order is the
/// position order; among equal values the leftmost is the ancestor.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianTree {
    pub values: Vec<f64>,
    pub root: usize,
    pub parent: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

pub fn cartesian_tree(values: &[f64]) -> Result<CartesianTree> {
    if values.is_empty() {
        return Err(Error::Invalid("empty sequence".into()));
    }
    let len = values.len();
    let mut vals = vec![f64::NEG_INFINITY];
    vals.extend_from_slice(values);
    let mut parent = vec![NIL; len + 1];
    let mut left = vec![NIL; len + 1];
    let mut right = vec![NIL; len + 1];
    let mut stack: Vec<usize> = Vec::new();
    for i in 1..=len {
        let mut last = NIL;
        while let Some(&top) = stack.last() {
            if vals[top] > vals[i] {
                last = top;
                stack.pop();
            } else {
                break;
            }
        }
        if last != NIL {
            left[i] = last;
            parent[last] = i;
        }
        if let Some(&top) = stack.last() {
            right[top] = i;
            parent[i] = top;
        }
        stack.push(i);
    }
    Ok(CartesianTree { values: vals, root: stack[0], parent, left, right })
}

impl CartesianTree {
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_rooted(&self) -> RootedTree {
        let children = (0..=self.len())
            .map(|i| {
                if i == 0 {
                    Vec::new()
                } else {
                    [self.left[i], self.right[i]].into_iter().filter(|&c| c != NIL).collect()
                }
            })
            .collect();
        RootedTree::from_children(self.root, children)
    }
}

/// Leftmost minimum position and value of each range, answered offline as
/// NCAs in the Cartesian tree.
pub fn range_min(ct: &CartesianTree, ranges: &[(usize, usize)], g: usize) -> Result<Vec<(usize, f64)>> {
    for &(i, j) in ranges {
        if i == 0 || i > j || j > ct.len() {
            return Err(Error::Invalid(format!("bad range ({i},{j})")));
        }
    }
    let t = ct.to_rooted();
    let ans = nca_linear_run(&t, ranges, g)?.answers;
    Ok(ans.into_iter().map(|p| (p, ct.values[p])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_and_ancestor() {
        let t = RootedTree::from_parents(&[0, 0, 1, 2, 3]);
        let q = [(3, 3), (4, 2), (2, 4), (1, 4)];
        assert_eq!(nca_ahu(&t, &q), vec![3, 2, 2, 1]);
        for g in 1..=5 {
            assert_eq!(nca_linear(&t, &q, g), vec![3, 2, 2, 1]);
        }
    }

    #[test]
    fn siblings() {
        let t = RootedTree::from_parents(&[0, 0, 1, 1, 2, 2, 3]);
        let q = [(4, 5), (4, 6), (5, 3), (6, 6)];
        assert_eq!(nca_ahu(&t, &q), vec![2, 1, 1, 6]);
        assert_eq!(nca_linear(&t, &q, 3), vec![2, 1, 1, 6]);
    }

    #[test]
    fn cartesian_basics() {
        let ct = cartesian_tree(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(ct.root, 2);
        let inc = cartesian_tree(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(inc.root, 1);
        assert_eq!((inc.right[1], inc.right[2], inc.right[3]), (2, 3, 4));
        let ties = cartesian_tree(&[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(ties.root, 2);
        assert!(cartesian_tree(&[]).is_err());
    }

    #[test]
    fn rmq_examples() {
        let ct = cartesian_tree(&[5.0, 4.0, 3.0, 2.0, 1.0]).unwrap();
        assert_eq!(range_min(&ct, &[(1, 5), (3, 3)], 2).unwrap(), vec![(5, 1.0), (3, 3.0)]);
        assert!(range_min(&ct, &[(4, 2)], 2).is_err());
    }
}
