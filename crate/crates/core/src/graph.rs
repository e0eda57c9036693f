//! Interaction multigraphs: vertices are fermionic modes, edges are allowed
//! direct hops (possibly with several parallel copies) and self-loops add
//! extra gauge pairs at a vertex.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionGraph {
    n: usize,
    /// `(u, v, multiplicity)` with `u < v`, sorted.
    edges: Vec<(usize, usize, usize)>,
    /// `(v, count)`, sorted.
    loops: Vec<(usize, usize)>,
}

/// One traversed edge copy. `forward` means the walk goes from the lower
/// endpoint to the higher one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: usize,
    pub copy: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgePath {
    pub start: usize,
    pub end: usize,
    pub steps: Vec<Step>,
}

impl EdgePath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Vertex sequence of the walk.
    pub fn vertices(&self, g: &InteractionGraph) -> Vec<usize> {
        let mut v = vec![self.start];
        for s in &self.steps {
            let (a, b, _) = g.edges[s.edge];
            v.push(if s.forward { b } else { a });
        }
        v
    }

    /// Checks that consecutive steps chain and the endpoints match.
    pub fn validate(&self, g: &InteractionGraph) -> Result<()> {
        let mut cur = self.start;
        for s in &self.steps {
            let &(a, b, m) = g
                .edges
                .get(s.edge)
                .ok_or_else(|| Error::MissingEdge(format!("edge id {}", s.edge)))?;
            if s.copy >= m {
                return Err(Error::MissingEdge(format!("copy {} of ({a},{b}) with multiplicity {m}", s.copy)));
            }
            let (from, to) = if s.forward { (a, b) } else { (b, a) };
            if from != cur {
                return Err(Error::InvalidParams(format!("path breaks at vertex {cur}")));
            }
            cur = to;
        }
        if cur != self.end {
            return Err(Error::InvalidParams(format!("path ends at {cur}, expected {}", self.end)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathPolicy {
    Shortest,
    ShortestWithCopy(usize),
    /// Copy index `counter mod multiplicity`; the counter advances per request.
    RoundRobin { counter: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisCycle {
    /// Closed walk starting and ending at the same vertex.
    Fundamental(EdgePath),
    /// Copies `copy` and `copy + 1` of one edge.
    MultiEdge { edge: usize, copy: usize },
    SelfLoop { vertex: usize, copy: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum GraphKind {
    Complete(usize),
    Loop { m: usize, multiplicity: usize },
    Line(usize),
    LineWithEndLoops { m: usize, multiplicity: usize },
    /// Complete graph plus extra copies along rotating perfect matchings until
    /// every vertex has the requested (even) incidence.
    CompleteWithIncidence { m: usize, incidence: usize },
    Custom(String),
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    #[serde(default)]
    edges: Vec<[usize; 3]>,
    #[serde(default)]
    loops: Vec<[usize; 2]>,
}

impl InteractionGraph {
    pub fn new(n: usize, edges: &[(usize, usize, usize)], loops: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("graph needs at least one vertex".into()));
        }
        let mut e: Vec<(usize, usize, usize)> = Vec::new();
        for &(u, v, m) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParams(format!("edge ({u},{v}) outside {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidParams(format!("edge ({u},{v}) is a loop; list it under loops")));
            }
            if m == 0 {
                continue;
            }
            let (a, b) = (u.min(v), u.max(v));
            match e.iter_mut().find(|x| x.0 == a && x.1 == b) {
                Some(x) => x.2 += m,
                None => e.push((a, b, m)),
            }
        }
        e.sort();
        let mut l: Vec<(usize, usize)> = Vec::new();
        for &(v, c) in loops {
            if v >= n {
                return Err(Error::InvalidParams(format!("loop at {v} outside {n} vertices")));
            }
            if c == 0 {
                continue;
            }
            match l.iter_mut().find(|x| x.0 == v) {
                Some(x) => x.1 += c,
                None => l.push((v, c)),
            }
        }
        l.sort();
        Ok(InteractionGraph { n, edges: e, loops: l })
    }

    pub fn build(kind: &GraphKind) -> Result<Self> {
        match *kind {
            GraphKind::Complete(m) => {
                let mut e = Vec::new();
                for u in 0..m {
                    for v in u + 1..m {
                        e.push((u, v, 1));
                    }
                }
                Self::new(m, &e, &[])
            }
            GraphKind::Loop { m, multiplicity } => {
                if m < 3 || multiplicity == 0 {
                    return Err(Error::InvalidParams(format!("loop needs M ≥ 3 and d ≥ 1, got {m}, {multiplicity}")));
                }
                let e: Vec<_> = (0..m).map(|i| (i, (i + 1) % m, multiplicity)).collect();
                Self::new(m, &e, &[])
            }
            GraphKind::Line(m) => {
                let e: Vec<_> = (0..m.saturating_sub(1)).map(|i| (i, i + 1, 1)).collect();
                Self::new(m, &e, &[])
            }
            GraphKind::LineWithEndLoops { m, multiplicity } => {
                if m < 2 || multiplicity == 0 {
                    return Err(Error::InvalidParams(format!("line with end loops needs M ≥ 2, got {m}")));
                }
                let e: Vec<_> = (0..m - 1).map(|i| (i, i + 1, multiplicity)).collect();
                let copies = multiplicity.div_ceil(2);
                Self::new(m, &e, &[(0, copies), (m - 1, copies)])
            }
            GraphKind::CompleteWithIncidence { m, incidence } => {
                if m < 2 || m % 2 == 1 || incidence < m - 1 || incidence % 2 == 1 {
                    return Err(Error::InvalidParams(format!(
                        "complete graph with incidence {incidence} needs even M and even incidence ≥ M−1"
                    )));
                }
                let mut e = Vec::new();
                for u in 0..m {
                    for v in u + 1..m {
                        e.push((u, v, 1));
                    }
                }
                // round-robin 1-factorization of K_m
                let rounds = incidence - (m - 1);
                for r in 0..rounds {
                    let f = r % (m - 1);
                    e.push((m - 1, f, 1));
                    for k in 1..m / 2 {
                        let a = (f + k) % (m - 1);
                        let b = (f + m - 1 - k) % (m - 1);
                        e.push((a, b, 1));
                    }
                }
                Self::new(m, &e, &[])
            }
            GraphKind::Custom(ref text) => Self::from_json(text),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: GraphFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let e: Vec<_> = f.edges.iter().map(|x| (x[0], x[1], x[2])).collect();
        let l: Vec<_> = f.loops.iter().map(|x| (x[0], x[1])).collect();
        Self::new(f.n, &e, &l)
    }

    pub fn to_json(&self) -> String {
        let f = GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v, m)| [u, v, m]).collect(),
            loops: self.loops.iter().map(|&(v, c)| [v, c]).collect(),
        };
        serde_json::to_string(&f).expect("serializable")
    }

    /// Vertex-disjoint union; vertices of part `k` are shifted by the sizes of
    /// the earlier parts.
    pub fn disjoint_union(parts: &[InteractionGraph]) -> Result<Self> {
        let mut off = 0;
        let mut e = Vec::new();
        let mut l = Vec::new();
        for g in parts {
            e.extend(g.edges.iter().map(|&(u, v, m)| (u + off, v + off, m)));
            l.extend(g.loops.iter().map(|&(v, c)| (v + off, c)));
            off += g.n;
        }
        Self::new(off, &e, &l)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn self_loops(&self) -> &[(usize, usize)] {
        &self.loops
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = (u.min(v), u.max(v));
        self.edges.binary_search_by(|x| (x.0, x.1).cmp(&(a, b))).ok()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.edge_id(u, v).map(|k| self.edges[k].2).unwrap_or(0)
    }

    /// Total edge copies plus self-loops.
    pub fn edge_copy_count(&self) -> usize {
        self.edges.iter().map(|e| e.2).sum::<usize>() + self.loops.iter().map(|l| l.1).sum::<usize>()
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.loops.iter().find(|l| l.0 == v).map(|l| l.1).unwrap_or(0)
    }

    /// `D(v)`: edge copies at `v` plus two per self-loop.
    pub fn incidence(&self, v: usize) -> usize {
        let e: usize = self.edges.iter().filter(|x| x.0 == v || x.1 == v).map(|x| x.2).sum();
        e + 2 * self.loop_count(v)
    }

    /// Number of distinct neighbours.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|x| x.0 == v || x.1 == v).count()
    }

    /// Distinct neighbours in ascending order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b, _)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        out.sort();
        out
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort();
        }
        adj
    }

    fn bfs(adj: &[Vec<usize>], src: usize) -> Vec<usize> {
        let mut d = vec![usize::MAX; adj.len()];
        d[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if d[w] == usize::MAX {
                    d[w] = d[u] + 1;
                    q.push_back(w);
                }
            }
        }
        d
    }

    pub fn distances_from(&self, src: usize) -> Vec<usize> {
        Self::bfs(&self.adjacency(), src)
    }

    /// Largest pairwise hop distance, `None` if disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let adj = self.adjacency();
        let mut best = 0;
        for s in 0..self.n {
            for d in Self::bfs(&adj, s) {
                if d == usize::MAX {
                    return None;
                }
                best = best.max(d);
            }
        }
        Some(best)
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let d = Self::bfs(&adj, s);
            let comp: Vec<usize> = (0..self.n).filter(|&v| d[v] != usize::MAX).collect();
            for &v in &comp {
                seen[v] = true;
            }
            out.push(comp);
        }
        out
    }

    fn walk(&self, verts: &[usize], copy_of: impl Fn(usize) -> usize) -> Result<EdgePath> {
        let mut steps = Vec::with_capacity(verts.len() - 1);
        for w in verts.windows(2) {
            let id = self.edge_id(w[0], w[1]).expect("adjacent vertices");
            let c = copy_of(id);
            if c >= self.edges[id].2 {
                return Err(Error::MissingEdge(format!(
                    "copy {c} of ({},{}) with multiplicity {}",
                    self.edges[id].0, self.edges[id].1, self.edges[id].2
                )));
            }
            steps.push(Step { edge: id, copy: c, forward: w[0] < w[1] });
        }
        Ok(EdgePath { start: verts[0], end: *verts.last().unwrap(), steps })
    }

    /// Lexicographically smallest shortest vertex sequence from `i` to `j`.
    pub fn shortest_vertices(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        if i >= self.n || j >= self.n {
            return Err(Error::IndexOutOfRange(format!("vertex {i} or {j} of {}", self.n)));
        }
        let adj = self.adjacency();
        let d = Self::bfs(&adj, j);
        if d[i] == usize::MAX {
            return Err(Error::Disconnected(format!("no path from {i} to {j}")));
        }
        let mut verts = vec![i];
        let mut cur = i;
        while cur != j {
            cur = *adj[cur].iter().find(|&&w| d[w] + 1 == d[cur]).expect("BFS layer");
            verts.push(cur);
        }
        Ok(verts)
    }

    /// All shortest vertex sequences from `i` to `j` in lexicographic order,
    /// at most `limit` of them.
    pub fn all_shortest_vertices(&self, i: usize, j: usize, limit: usize) -> Result<Vec<Vec<usize>>> {
        let first = self.shortest_vertices(i, j)?;
        let adj = self.adjacency();
        let d = Self::bfs(&adj, j);
        let mut out = Vec::new();
        let mut stack = vec![vec![i]];
        // depth-first in lexicographic order
        while let Some(p) = stack.pop() {
            if out.len() >= limit {
                break;
            }
            let cur = *p.last().unwrap();
            if cur == j {
                out.push(p);
                continue;
            }
            for &w in adj[cur].iter().rev() {
                if d[w] + 1 == d[cur] {
                    let mut q = p.clone();
                    q.push(w);
                    stack.push(q);
                }
            }
        }
        debug_assert_eq!(out[0], first);
        Ok(out)
    }

    /// Path from `i` to `j` under `policy`; a round-robin policy advances its
    /// counter.
    pub fn path(&self, i: usize, j: usize, policy: &mut PathPolicy) -> Result<EdgePath> {
        if i == j {
            return Err(Error::InvalidParams(format!("path endpoints coincide at {i}")));
        }
        let verts = self.shortest_vertices(i, j)?;
        match policy {
            PathPolicy::Shortest => self.walk(&verts, |_| 0),
            PathPolicy::ShortestWithCopy(c) => {
                let c = *c;
                self.walk(&verts, |_| c)
            }
            PathPolicy::RoundRobin { counter } => {
                let k = *counter;
                *counter += 1;
                self.walk(&verts, |id| k % self.edges[id].2)
            }
        }
    }

    /// Walk along an explicit vertex sequence using the given copy on every
    /// edge.
    pub fn path_through(&self, verts: &[usize], copy: usize) -> Result<EdgePath> {
        if verts.len() < 2 {
            return Err(Error::InvalidParams("path needs two vertices".into()));
        }
        for w in verts.windows(2) {
            if self.edge_id(w[0], w[1]).is_none() {
                return Err(Error::MissingEdge(format!("({},{})", w[0], w[1])));
            }
        }
        self.walk(verts, |_| copy)
    }

    /// Independent cycles: fundamental cycles of a BFS spanning forest over
    /// copy 0 of each edge, one two-cycle per extra copy and one degenerate
    /// cycle per self-loop.
    pub fn cycle_basis(&self) -> Vec<BasisCycle> {
        let adj = self.adjacency();
        let mut parent = vec![usize::MAX; self.n];
        let mut depth = vec![usize::MAX; self.n];
        let mut tree = vec![false; self.edges.len()];
        for root in 0..self.n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut q = VecDeque::from([root]);
            while let Some(u) = q.pop_front() {
                for &w in &adj[u] {
                    if depth[w] == usize::MAX {
                        depth[w] = depth[u] + 1;
                        parent[w] = u;
                        tree[self.edge_id(u, w).unwrap()] = true;
                        q.push_back(w);
                    }
                }
            }
        }
        let to_root = |mut v: usize| {
            let mut p = vec![v];
            while parent[v] != usize::MAX {
                v = parent[v];
                p.push(v);
            }
            p
        };
        let mut out = Vec::new();
        for (id, &(u, v, _)) in self.edges.iter().enumerate() {
            if tree[id] {
                continue;
            }
            // u -> v along the edge, then back to u through the tree
            let pu = to_root(u);
            let pv = to_root(v);
            let lca = *pu.iter().find(|x| pv.contains(x)).expect("same component");
            let mut verts = vec![u];
            for &x in &pv {
                verts.push(x);
                if x == lca {
                    break;
                }
            }
            let down: Vec<usize> = pu.iter().take_while(|&&x| x != lca).copied().collect();
            verts.extend(down.iter().rev());
            let path = self.walk(&verts, |_| 0).expect("copy 0 exists");
            out.push(BasisCycle::Fundamental(path));
        }
        for (id, &(_, _, m)) in self.edges.iter().enumerate() {
            for c in 0..m.saturating_sub(1) {
                out.push(BasisCycle::MultiEdge { edge: id, copy: c });
            }
        }
        for &(v, c) in &self.loops {
            for k in 0..c {
                out.push(BasisCycle::SelfLoop { vertex: v, copy: k });
            }
        }
        out
    }

    /// Removes edges from `complete(m)` until every vertex has degree at most
    /// `target_degree` while all pairs stay within `max_hops`. Greedy with
    /// seeded restarts.
    pub fn prune(m: usize, target_degree: usize, max_hops: usize, seed: u64, restarts: usize) -> Result<Self> {
        if target_degree % 2 == 1 || m == 0 {
            return Err(Error::InvalidParams(format!("target degree {target_degree} must be even")));
        }
        let full = Self::build(&GraphKind::Complete(m))?;
        if target_degree >= m.saturating_sub(1) {
            return Ok(full);
        }
        for r in 0..restarts.max(1) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
            let mut present = vec![vec![true; m]; m];
            for (v, row) in present.iter_mut().enumerate() {
                row[v] = false;
            }
            let mut deg = vec![m - 1; m];
            let ok = loop {
                let worst = (0..m).max_by_key(|&v| (deg[v], std::cmp::Reverse(v))).unwrap();
                if deg[worst] <= target_degree {
                    break true;
                }
                let mut cands: Vec<usize> = (0..m).filter(|&w| present[worst][w]).collect();
                cands.shuffle(&mut rng);
                // prefer dropping edges whose other end is also over budget
                cands.sort_by_key(|&w| std::cmp::Reverse(deg[w]));
                let mut removed = false;
                for w in cands {
                    present[worst][w] = false;
                    present[w][worst] = false;
                    if within_hops(&present, max_hops) {
                        deg[worst] -= 1;
                        deg[w] -= 1;
                        removed = true;
                        break;
                    }
                    present[worst][w] = true;
                    present[w][worst] = true;
                }
                if !removed {
                    break false;
                }
            };
            if ok {
                let mut e = Vec::new();
                for u in 0..m {
                    for v in u + 1..m {
                        if present[u][v] {
                            e.push((u, v, 1));
                        }
                    }
                }
                return Self::new(m, &e, &[]);
            }
        }
        Err(Error::Infeasible(format!(
            "no degree-{target_degree} subgraph of complete({m}) within {max_hops} hops found after {restarts} restarts"
        )))
    }
}

fn within_hops(present: &[Vec<bool>], hops: usize) -> bool {
    let m = present.len();
    for s in 0..m {
        let mut d = vec![usize::MAX; m];
        d[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            if d[u] == hops {
                continue;
            }
            for w in 0..m {
                if present[u][w] && d[w] == usize::MAX {
                    d[w] = d[u] + 1;
                    q.push_back(w);
                }
            }
        }
        if d.contains(&usize::MAX) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_count(g: &InteractionGraph) -> usize {
        g.edge_copy_count() + g.components().len() - g.n_vertices()
    }

    #[test]
    fn complete_seven() {
        let g = InteractionGraph::build(&GraphKind::Complete(7)).unwrap();
        assert_eq!(g.edges().len(), 21);
        assert!((0..7).all(|v| g.incidence(v) == 6));
    }

    #[test]
    fn loop_and_line() {
        let g = InteractionGraph::build(&GraphKind::Loop { m: 5, multiplicity: 1 }).unwrap();
        assert_eq!(g.edges().len(), 5);
        let g = InteractionGraph::build(&GraphKind::Loop { m: 4, multiplicity: 3 }).unwrap();
        assert!((0..4).all(|v| g.incidence(v) == 6));
        let l = InteractionGraph::build(&GraphKind::Line(4)).unwrap();
        assert!(l.cycle_basis().is_empty());
        assert!(InteractionGraph::build(&GraphKind::Loop { m: 2, multiplicity: 1 }).is_err());
    }

    #[test]
    fn end_loops_incidence() {
        let g = InteractionGraph::build(&GraphKind::LineWithEndLoops { m: 4, multiplicity: 2 }).unwrap();
        assert!((0..4).all(|v| g.incidence(v) == 4));
        let cyc = g.cycle_basis();
        let two = cyc.iter().filter(|c| matches!(c, BasisCycle::MultiEdge { .. })).count();
        let selfl = cyc.iter().filter(|c| matches!(c, BasisCycle::SelfLoop { .. })).count();
        assert_eq!((two, selfl), (3, 2));
        assert_eq!(cyc.len(), cycle_count(&g));
    }

    #[test]
    fn incidence_family() {
        for d in 2..=5 {
            let g = InteractionGraph::build(&GraphKind::CompleteWithIncidence { m: 4, incidence: 2 * d }).unwrap();
            assert!((0..4).all(|v| g.incidence(v) == 2 * d), "d={d}");
        }
        assert!(InteractionGraph::build(&GraphKind::CompleteWithIncidence { m: 4, incidence: 5 }).is_err());
    }

    #[test]
    fn shortest_path_loop5() {
        let g = InteractionGraph::build(&GraphKind::Loop { m: 5, multiplicity: 1 }).unwrap();
        let p = g.path(0, 2, &mut PathPolicy::Shortest).unwrap();
        assert_eq!(p.vertices(&g), vec![0, 1, 2]);
        p.validate(&g).unwrap();
        let q = g.path(0, 1, &mut PathPolicy::Shortest).unwrap();
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn round_robin_copies() {
        let g = InteractionGraph::build(&GraphKind::Loop { m: 4, multiplicity: 3 }).unwrap();
        let mut pol = PathPolicy::RoundRobin { counter: 0 };
        let a = g.path(0, 2, &mut pol).unwrap();
        let b = g.path(0, 2, &mut pol).unwrap();
        assert_ne!(a.steps[0].copy, b.steps[0].copy);
        assert_eq!(pol, PathPolicy::RoundRobin { counter: 2 });
        assert!(g.path(0, 2, &mut PathPolicy::ShortestWithCopy(3)).is_err());
    }

    #[test]
    fn disconnected_pair() {
        let a = InteractionGraph::build(&GraphKind::Line(2)).unwrap();
        let g = InteractionGraph::disjoint_union(&[a.clone(), a]).unwrap();
        assert!(matches!(g.path(0, 3, &mut PathPolicy::Shortest), Err(Error::Disconnected(_))));
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn basis_counts() {
        let g = InteractionGraph::build(&GraphKind::Loop { m: 5, multiplicity: 1 }).unwrap();
        let c = g.cycle_basis();
        assert_eq!(c.len(), 1);
        match &c[0] {
            BasisCycle::Fundamental(p) => {
                assert_eq!(p.len(), 5);
                assert_eq!(p.start, p.end);
                p.validate(&g).unwrap();
            }
            _ => panic!(),
        }
        let g = InteractionGraph::build(&GraphKind::Loop { m: 4, multiplicity: 3 }).unwrap();
        assert_eq!(g.cycle_basis().len(), 9);
        let g = InteractionGraph::build(&GraphKind::Complete(7)).unwrap();
        assert_eq!(g.cycle_basis().len(), 21 - 7 + 1);
    }

    #[test]
    fn prune_small_cases() {
        let g = InteractionGraph::prune(3, 2, 1, 0, 10).unwrap();
        assert_eq!(g, InteractionGraph::build(&GraphKind::Complete(3)).unwrap());
        let g = InteractionGraph::prune(7, 4, 2, 0, 200).unwrap();
        assert!((0..7).all(|v| g.degree(v) <= 4));
        assert!(g.diameter().unwrap() <= 2);
        assert!(InteractionGraph::prune(7, 3, 2, 0, 5).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let g = InteractionGraph::build(&GraphKind::LineWithEndLoops { m: 3, multiplicity: 2 }).unwrap();
        let back = InteractionGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert!(InteractionGraph::from_json(r#"{"n":2,"edges":[[0,5,1]]}"#).is_err());
    }
}
