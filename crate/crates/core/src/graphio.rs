//! Graph, flowgraph and tree data model with the line-oriented text format,
//! deterministic DFS preordering and arc classification.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::{Error, Result, NIL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Graph,
    Flow,
    Tree,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Graph => "graph",
            Kind::Flow => "flow",
            Kind::Tree => "tree",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub u: usize,
    pub v: usize,
    pub w: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Digraph {
    pub n: usize,
    pub arcs: Vec<Arc>,
    pub root: Option<usize>,
    pub kind: Kind,
}

impl Digraph {
    pub fn flow(n: usize, root: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph {
            n,
            arcs: arcs.iter().map(|&(u, v)| Arc { u, v, w: None }).collect(),
            root: Some(root),
            kind: Kind::Flow,
        }
    }

    pub fn weighted(kind: Kind, n: usize, edges: &[(usize, usize, f64)]) -> Digraph {
        Digraph {
            n,
            arcs: edges.iter().map(|&(u, v, w)| Arc { u, v, w: Some(w) }).collect(),
            root: None,
            kind,
        }
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.arcs[i].w.unwrap_or(0.0)
    }

    /// Out-arc indices per vertex, in file order.
    pub fn out_arcs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n + 1];
        for (i, a) in self.arcs.iter().enumerate() {
            out[a.u].push(i);
        }
        out
    }

    /// Incident arc indices per vertex, ignoring direction, in file order.
    pub fn incident(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n + 1];
        for (i, a) in self.arcs.iter().enumerate() {
            inc[a.u].push(i);
            if a.v != a.u {
                inc[a.v].push(i);
            }
        }
        inc
    }

    /// Canonical text form; comments are dropped and flowgraphs always carry
    /// an explicit root line.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p {} {} {}", self.kind.as_str(), self.n, self.arcs.len());
        if self.kind == Kind::Flow {
            let _ = writeln!(s, "r {}", self.root.unwrap_or(1));
        }
        for a in &self.arcs {
            match a.w {
                Some(w) => {
                    let _ = writeln!(s, "a {} {} {}", a.u, a.v, w);
                }
                None => {
                    let _ = writeln!(s, "a {} {}", a.u, a.v);
                }
            }
        }
        s
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_id(tok: Option<&str>, n: usize, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| perr(line, "missing vertex id"))?;
    let v: usize = tok
        .parse()
        .map_err(|_| perr(line, format!("bad vertex id `{tok}`")))?;
    if v == 0 || v > n {
        return Err(perr(line, format!("vertex id {v} out of range 1..{n}")));
    }
    Ok(v)
}

/// Parses the `c`/`p`/`r`/`a` text format.
pub fn parse_graph(text: &str) -> Result<Digraph> {
    let mut header: Option<(Kind, usize, usize, usize)> = None;
    let mut root: Option<usize> = None;
    let mut arcs = Vec::new();
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last = line;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        if tag == "c" {
            continue;
        }
        match (tag, header) {
            ("p", None) => {
                let kind = match toks.next() {
                    Some("graph") => Kind::Graph,
                    Some("flow") => Kind::Flow,
                    Some("tree") => Kind::Tree,
                    other => return Err(perr(line, format!("unknown kind {other:?}"))),
                };
                let mut num = || -> Result<usize> {
                    let t = toks.next().ok_or_else(|| perr(line, "short header"))?;
                    t.parse().map_err(|_| perr(line, format!("bad count `{t}`")))
                };
                let n = num()?;
                let m = num()?;
                if toks.next().is_some() {
                    return Err(perr(line, "trailing tokens"));
                }
                if n == 0 {
                    return Err(perr(line, "n must be at least 1"));
                }
                header = Some((kind, n, m, line));
            }
            ("p", Some(_)) => return Err(perr(line, "duplicate header")),
            (_, None) => return Err(perr(line, "header must be the first non-comment line")),
            ("r", Some((kind, n, _, _))) => {
                if kind != Kind::Flow {
                    return Err(perr(line, "root line only allowed for flowgraphs"));
                }
                if root.is_some() {
                    return Err(perr(line, "duplicate root line"));
                }
                let tok = toks.next().ok_or_else(|| perr(line, "missing root"))?;
                root = Some(parse_id(Some(tok), n, line)?);
                if toks.next().is_some() {
                    return Err(perr(line, "trailing tokens"));
                }
            }
            ("a", Some((_, n, m, _))) => {
                if arcs.len() == m {
                    return Err(perr(line, format!("more than {m} arcs")));
                }
                let u = parse_id(toks.next(), n, line)?;
                let v = parse_id(toks.next(), n, line)?;
                let w = match toks.next() {
                    None => None,
                    Some(t) => {
                        let w: f64 = t.parse().map_err(|_| perr(line, format!("bad weight `{t}`")))?;
                        if w.is_nan() {
                            return Err(perr(line, "NaN weight"));
                        }
                        Some(w)
                    }
                };
                if toks.next().is_some() {
                    return Err(perr(line, "trailing tokens"));
                }
                arcs.push(Arc { u, v, w });
            }
            (t, Some(_)) => return Err(perr(line, format!("unknown line type `{t}`"))),
        }
    }
    let (kind, n, m, hline) = header.ok_or_else(|| perr(last.max(1), "missing header"))?;
    if arcs.len() != m {
        return Err(perr(last.max(1), format!("expected {m} arcs, found {}", arcs.len())));
    }
    let g = Digraph {
        n,
        arcs,
        root: if kind == Kind::Flow { Some(root.unwrap_or(1)) } else { None },
        kind,
    };
    match kind {
        Kind::Tree if m + 1 != n => {
            return Err(perr(hline, format!("tree on {n} vertices needs {} arcs", n - 1)))
        }
        Kind::Tree | Kind::Graph => {
            if !undirected_connected(&g) {
                return Err(perr(hline, "graph is not connected"));
            }
        }
        Kind::Flow => {
            if let Some(v) = first_unreachable(&g) {
                return Err(perr(hline, format!("vertex {v} unreachable from root")));
            }
        }
    }
    Ok(g)
}

/// Parses `q u v` query lines; ids must lie in 1..=n.
pub fn parse_queries(text: &str, n: usize) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("q") => {
                let u = parse_id(toks.next(), n, line)?;
                let v = parse_id(toks.next(), n, line)?;
                if toks.next().is_some() {
                    return Err(perr(line, "trailing tokens"));
                }
                out.push((u, v));
            }
            Some(t) => return Err(perr(line, format!("unknown line type `{t}`"))),
        }
    }
    Ok(out)
}

fn undirected_connected(g: &Digraph) -> bool {
    let inc = g.incident();
    let mut seen = vec![false; g.n + 1];
    let mut stack = vec![1];
    seen[1] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &i in &inc[x] {
            let a = g.arcs[i];
            let y = if a.u == x { a.v } else { a.u };
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == g.n
}

fn first_unreachable(g: &Digraph) -> Option<usize> {
    let out = g.out_arcs();
    let r = g.root.unwrap_or(1);
    let mut seen = vec![false; g.n + 1];
    let mut stack = vec![r];
    seen[r] = true;
    while let Some(x) = stack.pop() {
        for &i in &out[x] {
            let y = g.arcs[i].v;
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    (1..=g.n).find(|&v| !seen[v])
}

/// Strong components of the graph on `nodes` with successor lists `succ`
/// (indexed by node id, arcs leaving `nodes` ignored by the caller), listed
/// in topological order of the condensation: every arc between components
/// goes from an earlier component to a later one.
pub fn strong_components(nodes: &[usize], succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // local indices keep the cost proportional to the subgraph
    let local: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let k = nodes.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &x) in nodes.iter().enumerate() {
        for y in &succ[x] {
            if let Some(&j) = local.get(y) {
                out[i].push(j);
                pred[j].push(i);
            }
        }
    }
    let mut seen = vec![false; k];
    let mut finish = Vec::with_capacity(k);
    for s in 0..k {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some(&mut (x, ref mut i)) = stack.last_mut() {
            if *i < out[x].len() {
                let y = out[x][*i];
                *i += 1;
                if !seen[y] {
                    seen[y] = true;
                    stack.push((y, 0));
                }
            } else {
                finish.push(x);
                stack.pop();
            }
        }
    }
    // reversed graph in decreasing finish time yields source components first
    let mut done = vec![false; k];
    let mut comps = Vec::new();
    for &s in finish.iter().rev() {
        if done[s] {
            continue;
        }
        done[s] = true;
        let mut members = vec![s];
        let mut j = 0;
        while j < members.len() {
            let x = members[j];
            j += 1;
            for &y in &pred[x] {
                if !done[y] {
                    done[y] = true;
                    members.push(y);
                }
            }
        }
        comps.push(members.into_iter().map(|i| nodes[i]).collect());
    }
    comps
}

// ---------------------------------------------------------------------------
// Rooted trees
// ---------------------------------------------------------------------------

/// A rooted tree with preorder numbering. Per-vertex vectors have length n+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub n: usize,
    pub root: usize,
    /// Parent id, 0 for the root.
    pub parent: Vec<usize>,
    /// Preorder number in 1..=n.
    pub pre: Vec<usize>,
    /// Vertex with a given preorder number; `order[0]` is unused.
    pub order: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    pub size: Vec<usize>,
}

impl RootedTree {
    /// Builds a tree from parent links; children keep the order given by
    /// `children`, and preorder follows it.
    pub fn from_children(root: usize, children: Vec<Vec<usize>>) -> RootedTree {
        let n = children.len() - 1;
        let mut parent = vec![NIL; n + 1];
        for (p, cs) in children.iter().enumerate() {
            for &c in cs {
                parent[c] = p;
            }
        }
        let mut pre = vec![0; n + 1];
        let mut order = vec![0; n + 1];
        let mut size = vec![1; n + 1];
        size[0] = 0;
        let mut stack = vec![(root, 0usize)];
        let mut k = 0;
        pre[root] = 1;
        order[1] = root;
        k += 1;
        while let Some(&mut (x, ref mut i)) = stack.last_mut() {
            if *i < children[x].len() {
                let c = children[x][*i];
                *i += 1;
                k += 1;
                pre[c] = k;
                order[k] = c;
                stack.push((c, 0));
            } else {
                stack.pop();
                if parent[x] != NIL {
                    size[parent[x]] += size[x];
                }
            }
        }
        assert_eq!(k, n, "parent links do not form a single tree");
        RootedTree { n, root, parent, pre, order, children, size }
    }

    /// Builds a tree from a parent vector (index 0 unused, root has parent 0).
    /// Children are ordered by increasing id.
    pub fn from_parents(parent: &[usize]) -> RootedTree {
        let n = parent.len() - 1;
        let mut children = vec![Vec::new(); n + 1];
        let mut root = NIL;
        for v in 1..=n {
            if parent[v] == NIL {
                assert_eq!(root, NIL, "multiple roots");
                root = v;
            } else {
                children[parent[v]].push(v);
            }
        }
        RootedTree::from_children(root, children)
    }

    /// Roots an undirected tree (kind `tree`) at `root`; children follow
    /// adjacency file order.
    pub fn from_tree_graph(g: &Digraph, root: usize) -> Result<RootedTree> {
        if g.arcs.len() + 1 != g.n {
            return Err(Error::Invalid("not a tree".into()));
        }
        let inc = g.incident();
        let mut children = vec![Vec::new(); g.n + 1];
        let mut seen = vec![false; g.n + 1];
        let mut stack = vec![(root, 0usize)];
        seen[root] = true;
        let mut count = 1;
        while let Some(&mut (x, ref mut i)) = stack.last_mut() {
            if *i < inc[x].len() {
                let a = g.arcs[inc[x][*i]];
                *i += 1;
                let y = if a.u == x { a.v } else { a.u };
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    children[x].push(y);
                    stack.push((y, 0));
                }
            } else {
                stack.pop();
            }
        }
        if count != g.n {
            return Err(Error::Disconnected);
        }
        Ok(RootedTree::from_children(root, children))
    }

    /// Vertices in postorder of the preorder DFS (children left to right).
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n);
        let mut stack = vec![(self.root, 0usize)];
        while let Some(&mut (x, ref mut i)) = stack.last_mut() {
            if *i < self.children[x].len() {
                let c = self.children[x][*i];
                *i += 1;
                stack.push((c, 0));
            } else {
                out.push(x);
                stack.pop();
            }
        }
        out
    }

    pub fn depth(&self) -> Vec<usize> {
        let mut d = vec![0; self.n + 1];
        for k in 2..=self.n {
            let v = self.order[k];
            d[v] = d[self.parent[v]] + 1;
        }
        d
    }

    /// True iff the tree is labelled so that vertex ids are preorder numbers.
    pub fn is_preorder_labelled(&self) -> bool {
        (1..=self.n).all(|v| self.pre[v] == v)
    }
}

/// True iff `u` lies on the root-to-`v` path (reflexive).
pub fn ancestor(t: &RootedTree, u: usize, v: usize) -> bool {
    t.pre[u] <= t.pre[v] && t.pre[v] < t.pre[u] + t.size[u]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcClass {
    Tree,
    Forward,
    Back,
    Cross,
}

/// Deterministic iterative DFS from the root, visiting out-arcs in file
/// order. Self-loops are classified forward; only arcs into a proper
/// ancestor are back arcs.
pub fn dfs_preorder(g: &Digraph) -> Result<(RootedTree, Vec<ArcClass>)> {
    let out = g.out_arcs();
    let root = g.root.unwrap_or(1);
    let mut children = vec![Vec::new(); g.n + 1];
    let mut tree_arc = vec![usize::MAX; g.n + 1];
    let mut seen = vec![false; g.n + 1];
    let mut stack = vec![(root, 0usize)];
    seen[root] = true;
    while let Some(&mut (x, ref mut i)) = stack.last_mut() {
        if *i < out[x].len() {
            let ai = out[x][*i];
            *i += 1;
            let y = g.arcs[ai].v;
            if !seen[y] {
                seen[y] = true;
                tree_arc[y] = ai;
                children[x].push(y);
                stack.push((y, 0));
            }
        } else {
            stack.pop();
        }
    }
    if let Some(v) = (1..=g.n).find(|&v| !seen[v]) {
        return Err(Error::Unreachable(v));
    }
    let t = RootedTree::from_children(root, children);
    let class = g
        .arcs
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if tree_arc[a.v] == i {
                ArcClass::Tree
            } else if ancestor(&t, a.u, a.v) {
                ArcClass::Forward
            } else if ancestor(&t, a.v, a.u) {
                ArcClass::Back
            } else {
                ArcClass::Cross
            }
        })
        .collect();
    Ok((t, class))
}

/// Relabels a flowgraph so that vertex ids equal DFS preorder numbers.
/// Returns the relabelled graph, its DFS tree, and the map new id -> old id.
pub fn preorder_relabel(g: &Digraph) -> Result<(Digraph, RootedTree, Vec<usize>)> {
    let (t, _) = dfs_preorder(g)?;
    let arcs = g
        .arcs
        .iter()
        .map(|a| Arc { u: t.pre[a.u], v: t.pre[a.v], w: a.w })
        .collect();
    let h = Digraph { n: g.n, arcs, root: Some(1), kind: g.kind };
    let (t2, _) = dfs_preorder(&h)?;
    debug_assert!(t2.is_preorder_labelled());
    Ok((h, t2, t.order.clone()))
}
