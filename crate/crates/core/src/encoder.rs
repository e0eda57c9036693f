//! Generalized superfast encodings: local Majorana tables per vertex, edge and
//! vertex operators, loop stabilizers, and the Hamiltonian map.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fermion::{mul_monomials, FermionHamiltonian, MajoranaSum};
use crate::gf2::{symplectic, Gf2Basis};
use crate::graph::{BasisCycle, GraphKind, InteractionGraph, PathPolicy};
use crate::pauli::{i_pow, PauliTerm, WeightedPauliSum, DROP_TOL};

/// Local Majorana family placed on every vertex block.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    JwChain,
    /// Cyclic shifts of `Z^k Y I^k` and `Z^k X I^k` on `2k+1` qubits.
    Cyclic(usize),
    TernaryTree,
    /// The same `2m` block-local strings on every vertex.
    Explicit(Vec<PauliTerm>),
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::JwChain => "jw_chain".into(),
            Family::Cyclic(k) => format!("cyclic({k})"),
            Family::TernaryTree => "ternary_tree".into(),
            Family::Explicit(_) => "explicit".into(),
        }
    }

    /// The `2m` local Majoranas on an `m`-qubit block.
    pub fn local_majoranas(&self, m: usize) -> Result<Vec<PauliTerm>> {
        let table = match self {
            Family::JwChain => {
                let mut t = Vec::with_capacity(2 * m);
                for j in 0..m {
                    for c in ['X', 'Y'] {
                        let mut p = PauliTerm::identity(m);
                        for q in 0..j {
                            p.set_letter(q, 'Z');
                        }
                        p.set_letter(j, c);
                        t.push(p);
                    }
                }
                t
            }
            Family::Cyclic(k) => {
                let d = 2 * k + 1;
                if m != d {
                    return Err(Error::FamilyMismatch(format!("cyclic({k}) needs {d}-qubit blocks, got {m}")));
                }
                let shifted = |c: usize, letter: char| {
                    let mut p = PauliTerm::identity(d);
                    for q in 0..*k {
                        p.set_letter((q + c) % d, 'Z');
                    }
                    p.set_letter((k + c) % d, letter);
                    p
                };
                let mut t: Vec<PauliTerm> = (0..d).map(|c| shifted(c, 'Y')).collect();
                t.extend((0..d).rev().map(|c| shifted(c, 'X')));
                t
            }
            Family::TernaryTree => {
                let mut t = Vec::with_capacity(2 * m + 1);
                for j in 0..m {
                    // letters along the root path
                    let mut p = PauliTerm::identity(m);
                    let mut node = j;
                    while node > 0 {
                        let parent = (node - 1) / 3;
                        p.set_letter(parent, ['X', 'Y', 'Z'][(node - 1) % 3]);
                        node = parent;
                    }
                    for (b, c) in ['X', 'Y', 'Z'].into_iter().enumerate() {
                        if 3 * j + 1 + b >= m {
                            let mut leaf = p.clone();
                            leaf.set_letter(j, c);
                            t.push(leaf);
                        }
                    }
                }
                let all_z = t.iter().position(|p| p.letters().chars().all(|c| c == 'Z' || c == 'I')).unwrap();
                t.remove(all_z);
                t
            }
            Family::Explicit(table) => {
                if table.len() != 2 * m || table.iter().any(|p| p.n_qubits() != m) {
                    return Err(Error::FamilyMismatch(format!(
                        "explicit table has {} strings, block needs {} on {m} qubits",
                        table.len(),
                        2 * m
                    )));
                }
                table.clone()
            }
        };
        check_local_table(&table)?;
        Ok(table)
    }
}

fn check_local_table(t: &[PauliTerm]) -> Result<()> {
    for (i, a) in t.iter().enumerate() {
        if a.phase() != 0 || a.is_identity() {
            return Err(Error::InvalidTable(format!("entry {i} ({a}) is not a Hermitian non-identity string")));
        }
        for (j, b) in t.iter().enumerate().skip(i + 1) {
            if a.commutes(b) {
                return Err(Error::InvalidTable(format!("entries {i} ({a}) and {j} ({b}) commute")));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Cycle,
    MultiEdge,
    SelfLoop,
}

#[derive(Clone, Debug)]
pub struct StabilizerSet {
    pub generators: Vec<PauliTerm>,
    pub provenance: Vec<Provenance>,
}

impl StabilizerSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn basis(&self) -> Gf2Basis {
        let mut b = Gf2Basis::new();
        for g in &self.generators {
            b.insert(symplectic(g));
        }
        b
    }

    /// Signed group element equal to `p` up to sign, if `p`'s letters lie in
    /// the group.
    pub fn group_element(&self, p: &PauliTerm) -> Option<PauliTerm> {
        let idx = self.basis().express(&symplectic(p))?;
        let mut acc = PauliTerm::identity(p.n_qubits());
        for k in idx {
            acc = &acc * &self.generators[k];
        }
        Some(acc)
    }

    /// Whether `p` (with its sign) is an element of the stabilizer group.
    pub fn contains(&self, p: &PauliTerm) -> bool {
        self.group_element(p).is_some_and(|g| g == *p)
    }

    pub fn commutes_with_all(&self, p: &PauliTerm) -> bool {
        self.generators.iter().all(|g| g.commutes(p))
    }
}

/// How a Majorana pair `c_{2a} c_{2b}` is routed through the graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Route {
    pub vertices: Vec<usize>,
    /// Edge copy used on every hop.
    pub copy: usize,
}

#[derive(Clone, Debug)]
pub enum Realization {
    Path(PathPolicy),
    /// Searches pairings, shortest paths and edge copies for the lowest weight.
    MinWeight,
    /// Routes per normal-ordered monomial, one per Majorana pair; anything not
    /// listed falls back to shortest paths with copy 0.
    Explicit(HashMap<Vec<u32>, Vec<Route>>),
}

#[derive(Clone, Debug)]
pub struct MappedHamiltonian {
    pub constant: f64,
    pub terms: WeightedPauliSum,
}

impl MappedHamiltonian {
    /// The full operator including the constant as an identity term.
    pub fn with_constant(&self) -> WeightedPauliSum {
        let mut s = WeightedPauliSum::new(self.terms.n_qubits());
        s.add_real(self.constant, &PauliTerm::identity(self.terms.n_qubits()));
        s.add_sum(&self.terms, Complex64::new(1.0, 0.0));
        s
    }
}

#[derive(Clone, Debug)]
pub struct DistanceReport {
    pub distance: Option<usize>,
    pub undetectable_by_weight: BTreeMap<usize, Vec<PauliTerm>>,
}

#[derive(Clone, Debug)]
pub struct Encoding {
    graph: InteractionGraph,
    family: Family,
    offset: Vec<usize>,
    block: Vec<usize>,
    local: Vec<Vec<PauliTerm>>,
    /// `[edge][copy]` → (slot at lower endpoint, slot at upper endpoint)
    edge_slots: Vec<Vec<(usize, usize)>>,
    /// `[loop entry][copy]` → slot pair
    loop_slots: Vec<Vec<(usize, usize)>>,
    edge_neg: Vec<Vec<bool>>,
    loop_neg: Vec<Vec<bool>>,
    vertex_ops: Vec<PauliTerm>,
    n_qubits: usize,
    stabilizers: StabilizerSet,
}

const SCAN_BUDGET: f64 = 1e7;

impl Encoding {
    /// Every connected component is put in its even-parity sector.
    pub fn build(graph: &InteractionGraph, family: Family) -> Result<Self> {
        let comps = graph.components().len();
        Self::build_with_parities(graph, family, &vec![false; comps])
    }

    /// `odd[k]` selects the total fermion parity of component `k` (in
    /// `components()` order). Components with an odd-incidence vertex do not
    /// fix their parity and ignore the request.
    pub fn build_with_parities(graph: &InteractionGraph, family: Family, odd: &[bool]) -> Result<Self> {
        let n = graph.n_vertices();
        let comps = graph.components();
        if odd.len() != comps.len() {
            return Err(Error::InvalidParams(format!("{} parities for {} components", odd.len(), comps.len())));
        }
        if let Family::Cyclic(k) = family {
            let d = 2 * k + 1;
            if n < 3 || (0..n).any(|v| graph.incidence(v) != 2 * d) {
                return Err(Error::FamilyMismatch(format!("cyclic({k}) needs at least 3 vertices of incidence {}", 2 * d)));
            }
        }
        let block: Vec<usize> = (0..n).map(|v| graph.incidence(v).div_ceil(2).max(1)).collect();
        let mut offset = Vec::with_capacity(n);
        let mut acc = 0;
        for &b in &block {
            offset.push(acc);
            acc += b;
        }
        let mut cache: HashMap<usize, Vec<PauliTerm>> = HashMap::new();
        let mut local = Vec::with_capacity(n);
        for &m in &block {
            if !cache.contains_key(&m) {
                cache.insert(m, family.local_majoranas(m)?);
            }
            local.push(cache[&m].clone());
        }

        let edges = graph.edges();
        let mut edge_slots: Vec<Vec<(usize, usize)>> = edges.iter().map(|e| vec![(0, 0); e.2]).collect();
        let mut loop_slots: Vec<Vec<(usize, usize)>> = graph.self_loops().iter().map(|l| vec![(0, 0); l.1]).collect();
        let cyclic = matches!(family, Family::Cyclic(_));
        for v in 0..n {
            let m2 = 2 * block[v];
            let mut fwd = Vec::new();
            let mut bwd = Vec::new();
            for (id, &(a, b, mult)) in edges.iter().enumerate() {
                if a != v && b != v {
                    continue;
                }
                let w = if a == v { b } else { a };
                let forward = if cyclic { w == (v + 1) % n } else { w > v };
                for c in 0..mult {
                    if forward {
                        fwd.push((w, c, id));
                    } else {
                        bwd.push((w, c, id));
                    }
                }
            }
            fwd.sort();
            bwd.sort();
            let mut set = |id: usize, c: usize, slot: usize| {
                let e = &mut edge_slots[id][c];
                if edges[id].0 == v {
                    e.0 = slot;
                } else {
                    e.1 = slot;
                }
            };
            for (k, &(_, c, id)) in fwd.iter().enumerate() {
                set(id, c, k);
            }
            for (k, &(_, c, id)) in bwd.iter().enumerate() {
                set(id, c, m2 - 1 - k);
            }
            let mut next = fwd.len();
            for (li, &(lv, cnt)) in graph.self_loops().iter().enumerate() {
                if lv == v {
                    for c in 0..cnt {
                        loop_slots[li][c] = (next, next + 1);
                        next += 2;
                    }
                }
            }
        }

        let mut enc = Encoding {
            graph: graph.clone(),
            family,
            offset,
            block,
            local,
            edge_neg: edges.iter().map(|e| vec![false; e.2]).collect(),
            loop_neg: graph.self_loops().iter().map(|l| vec![false; l.1]).collect(),
            edge_slots,
            loop_slots,
            vertex_ops: Vec::new(),
            n_qubits: acc,
            stabilizers: StabilizerSet { generators: Vec::new(), provenance: Vec::new() },
        };
        enc.vertex_ops = (0..n).map(|v| enc.compute_vertex_operator(v)).collect();
        enc.stabilizers = enc.compute_stabilizers();
        for (ci, comp) in comps.iter().enumerate() {
            enc.fix_parity(comp, odd[ci]);
        }
        Ok(enc)
    }

    /// The distance-2 code on a line with end self-loops and the
    /// `XI, ZX, ZY, YI` local table.
    pub fn build_2n_n_2(n_modes: usize) -> Result<Self> {
        if n_modes < 2 {
            return Err(Error::InvalidParams(format!("[[2N,N,2]] needs N ≥ 2, got {n_modes}")));
        }
        let g = InteractionGraph::build(&GraphKind::LineWithEndLoops { m: n_modes, multiplicity: 2 })?;
        Self::build(&g, Self::table_2n_n_2())
    }

    pub fn table_2n_n_2() -> Family {
        Family::Explicit(["XI", "ZX", "ZY", "YI"].iter().map(|s| s.parse().unwrap()).collect())
    }

    fn fix_parity(&mut self, comp: &[usize], odd: bool) {
        if comp.iter().any(|&v| self.graph.incidence(v) % 2 == 1) {
            return;
        }
        let mut p = PauliTerm::identity(self.n_qubits);
        for &v in comp {
            p = &p * &self.vertex_ops[v];
        }
        let want = if odd { p.clone().negated() } else { p.clone() };
        if self.stabilizers.contains(&want) {
            return;
        }
        let mut cands: Vec<(bool, usize, usize)> = Vec::new();
        for (id, &(a, _, m)) in self.graph.edges().iter().enumerate() {
            if comp.contains(&a) {
                cands.extend((0..m).map(|c| (true, id, c)));
            }
        }
        for (li, &(v, m)) in self.graph.self_loops().iter().enumerate() {
            if comp.contains(&v) {
                cands.extend((0..m).map(|c| (false, li, c)));
            }
        }
        for &(is_edge, id, c) in cands.iter().rev() {
            let flag = if is_edge { &mut self.edge_neg[id][c] } else { &mut self.loop_neg[id][c] };
            *flag = !*flag;
            self.stabilizers = self.compute_stabilizers();
            if self.stabilizers.contains(&want) {
                return;
            }
            let flag = if is_edge { &mut self.edge_neg[id][c] } else { &mut self.loop_neg[id][c] };
            *flag = !*flag;
        }
        self.stabilizers = self.compute_stabilizers();
    }

    pub fn graph(&self) -> &InteractionGraph {
        &self.graph
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn block_size(&self, v: usize) -> usize {
        self.block[v]
    }

    pub fn qubit_offset(&self, v: usize) -> usize {
        self.offset[v]
    }

    /// Block-local Majorana table of vertex `v`.
    pub fn local_table(&self, v: usize) -> &[PauliTerm] {
        &self.local[v]
    }

    /// Local Majorana `slot` of vertex `v` on the full register.
    pub fn gamma(&self, v: usize, slot: usize) -> PauliTerm {
        self.local[v][slot].embed(self.n_qubits, self.offset[v])
    }

    /// Slot pair `(at lower endpoint, at upper endpoint)` of an edge copy.
    pub fn edge_slots(&self, edge: usize, copy: usize) -> (usize, usize) {
        self.edge_slots[edge][copy]
    }

    fn compute_vertex_operator(&self, v: usize) -> PauliTerm {
        let mut p = PauliTerm::identity(self.n_qubits);
        for s in 0..2 * self.block[v] {
            p = &p * &self.gamma(v, s);
        }
        p.with_phase(0)
    }

    pub fn vertex_operator(&self, v: usize) -> PauliTerm {
        self.vertex_ops[v].clone()
    }

    /// `A` for an edge copy oriented from its lower to its upper endpoint.
    pub fn edge_operator(&self, edge: usize, copy: usize) -> Result<PauliTerm> {
        let &(a, b, m) = self
            .graph
            .edges()
            .get(edge)
            .ok_or_else(|| Error::MissingEdge(format!("edge id {edge}")))?;
        if copy >= m {
            return Err(Error::MissingEdge(format!("copy {copy} of ({a},{b}) with multiplicity {m}")));
        }
        let (s, t) = self.edge_slots[edge][copy];
        let p = &self.gamma(a, s) * &self.gamma(b, t);
        Ok(if self.edge_neg[edge][copy] { p.negated() } else { p })
    }

    /// `A_{from,to}` for a copy; reversing the orientation flips the sign.
    pub fn hop_operator(&self, from: usize, to: usize, copy: usize) -> Result<PauliTerm> {
        let id = self
            .graph
            .edge_id(from, to)
            .ok_or_else(|| Error::MissingEdge(format!("({from},{to})")))?;
        let p = self.edge_operator(id, copy)?;
        Ok(if from < to { p } else { p.negated() })
    }

    /// Operator of self-loop copy `copy` at vertex `v`.
    pub fn loop_operator(&self, v: usize, copy: usize) -> Result<PauliTerm> {
        let li = self
            .graph
            .self_loops()
            .iter()
            .position(|l| l.0 == v && copy < l.1)
            .ok_or_else(|| Error::MissingEdge(format!("self-loop copy {copy} at {v}")))?;
        let (s, t) = self.loop_slots[li][copy];
        let p = (&self.gamma(v, s) * &self.gamma(v, t)).times_i_pow(3);
        Ok(if self.loop_neg[li][copy] { p.negated() } else { p })
    }

    /// `Ã_{ab}` along a vertex route: `i^{L−1} ∏ A`.
    pub fn route_operator(&self, route: &Route) -> Result<PauliTerm> {
        let mut p = PauliTerm::identity(self.n_qubits);
        for w in route.vertices.windows(2) {
            p = &p * &self.hop_operator(w[0], w[1], route.copy)?;
        }
        Ok(p.times_i_pow(((route.vertices.len() - 2) % 4) as u8))
    }

    fn route_with_copies(&self, verts: &[usize], copies: &[usize]) -> PauliTerm {
        let mut p = PauliTerm::identity(self.n_qubits);
        for (w, &c) in verts.windows(2).zip(copies) {
            p = &p * &self.hop_operator(w[0], w[1], c).expect("valid route");
        }
        p.times_i_pow(((verts.len() - 2) % 4) as u8)
    }

    fn compute_stabilizers(&self) -> StabilizerSet {
        let mut gens = Vec::new();
        let mut prov = Vec::new();
        for cyc in self.graph.cycle_basis() {
            let g = match cyc {
                BasisCycle::Fundamental(path) => {
                    let mut p = PauliTerm::identity(self.n_qubits);
                    for s in &path.steps {
                        let a = self.edge_operator(s.edge, s.copy).unwrap();
                        p = &p * &if s.forward { a } else { a.negated() };
                    }
                    prov.push(Provenance::Cycle);
                    p.times_i_pow((path.len() % 4) as u8)
                }
                BasisCycle::MultiEdge { edge, copy } => {
                    prov.push(Provenance::MultiEdge);
                    &self.edge_operator(edge, copy).unwrap() * &self.edge_operator(edge, copy + 1).unwrap()
                }
                BasisCycle::SelfLoop { vertex, copy } => {
                    prov.push(Provenance::SelfLoop);
                    self.loop_operator(vertex, copy).unwrap()
                }
            };
            debug_assert!(g.is_hermitian(), "loop product {g} is not Hermitian");
            gens.push(g);
        }
        StabilizerSet { generators: gens, provenance: prov }
    }

    pub fn stabilizers(&self) -> &StabilizerSet {
        &self.stabilizers
    }

    /// Realizes a normal-ordered Majorana monomial with coefficient `coef` as
    /// a coefficient and Pauli string (phase folded into the coefficient).
    pub fn realize_monomial(
        &self,
        mono: &[u32],
        coef: Complex64,
        policy: &mut Realization,
    ) -> Result<(Complex64, PauliTerm)> {
        let nv = self.graph.n_vertices();
        if let Some(&c) = mono.iter().find(|&&c| c as usize / 2 >= nv) {
            return Err(Error::IndexOutOfRange(format!("Majorana c{c} on a {nv}-vertex graph")));
        }
        // c_{2v+1} = i c_{2v} B_v
        let mut ipow = 0u8;
        let mut evens: Vec<u32> = Vec::new();
        let mut bcount = vec![0usize; nv];
        let mut sign = 1.0;
        for &c in mono {
            let v = c as usize / 2;
            if c % 2 == 1 {
                ipow += 1;
            }
            // move pending B_v right past this c_{2v}
            if bcount[v] % 2 == 1 {
                sign = -sign;
            }
            let (s, e) = mul_monomials(&evens, &[2 * v as u32]);
            sign *= s;
            evens = e;
            if c % 2 == 1 {
                bcount[v] += 1;
            }
        }
        let bs: Vec<usize> = (0..nv).filter(|&v| bcount[v] % 2 == 1).collect();
        let mut bprod = PauliTerm::identity(self.n_qubits);
        for &v in &bs {
            bprod = &bprod * &self.vertex_ops[v];
        }
        let verts: Vec<usize> = evens.iter().map(|&c| c as usize / 2).collect();
        let coef = coef * sign * i_pow(ipow % 4);
        let pairs_op = match policy {
            Realization::MinWeight => self.min_weight_pairs(&verts, &bprod)?,
            Realization::Path(pol) => {
                let mut p = PauliTerm::identity(self.n_qubits);
                for pr in verts.chunks(2) {
                    let path = self.graph.path(pr[0], pr[1], pol)?;
                    let copies: Vec<usize> = path.steps.iter().map(|s| s.copy).collect();
                    let vs = path.vertices(&self.graph);
                    p = &p * &self.route_with_copies(&vs, &copies).times_i_pow(1);
                }
                p
            }
            Realization::Explicit(table) => {
                let routes = table.get(mono);
                let mut p = PauliTerm::identity(self.n_qubits);
                for (k, pr) in verts.chunks(2).enumerate() {
                    let r = match routes.and_then(|r| r.get(k)) {
                        Some(r) => {
                            if r.vertices.first() != Some(&pr[0]) || r.vertices.last() != Some(&pr[1]) {
                                return Err(Error::InvalidParams(format!(
                                    "route {:?} does not join {} and {}",
                                    r.vertices, pr[0], pr[1]
                                )));
                            }
                            r.clone()
                        }
                        None => Route { vertices: self.graph.shortest_vertices(pr[0], pr[1])?, copy: 0 },
                    };
                    p = &p * &self.route_operator(&r)?.times_i_pow(1);
                }
                p
            }
        };
        let term = &pairs_op * &bprod;
        let c = coef * i_pow(term.phase());
        Ok((c, term.with_phase(0)))
    }

    fn pair_candidates(&self, a: usize, b: usize) -> Result<Vec<PauliTerm>> {
        let mut out = Vec::new();
        for verts in self.graph.all_shortest_vertices(a, b, 6)? {
            let mults: Vec<usize> = verts.windows(2).map(|w| self.graph.multiplicity(w[0], w[1])).collect();
            let combos: usize = mults.iter().product();
            if combos <= 64 {
                let mut copies = vec![0; mults.len()];
                loop {
                    out.push(self.route_with_copies(&verts, &copies).times_i_pow(1));
                    let mut k = 0;
                    while k < copies.len() {
                        copies[k] += 1;
                        if copies[k] < mults[k] {
                            break;
                        }
                        copies[k] = 0;
                        k += 1;
                    }
                    if k == copies.len() {
                        break;
                    }
                }
            } else {
                let lo = *mults.iter().min().unwrap();
                for c in 0..lo {
                    out.push(self.route_with_copies(&verts, &vec![c; mults.len()]).times_i_pow(1));
                }
            }
        }
        Ok(out)
    }

    fn min_weight_pairs(&self, verts: &[usize], bprod: &PauliTerm) -> Result<PauliTerm> {
        let pairings: Vec<Vec<usize>> = if verts.len() <= 6 { matchings(verts.len()) } else { vec![(0..verts.len()).collect()] };
        let mut best: Option<PauliTerm> = None;
        let mut last_err = None;
        'outer: for order in pairings {
            let mut acc = bprod.clone();
            let mut ops = PauliTerm::identity(self.n_qubits);
            for pr in order.chunks(2) {
                let cands = match self.pair_candidates(verts[pr[0]], verts[pr[1]]) {
                    Ok(c) => c,
                    Err(e) => {
                        last_err = Some(e);
                        continue 'outer;
                    }
                };
                let pick = cands.into_iter().min_by_key(|c| (&acc * c).weight()).unwrap();
                acc = &acc * &pick;
                ops = &ops * &pick;
            }
            // reordering the even Majoranas into this pairing
            let perm_sign = if inversions(&order) % 2 == 1 { 2 } else { 0 };
            let ops = ops.times_i_pow(perm_sign);
            if best.as_ref().is_none_or(|b| (&ops * bprod).weight() < (b * bprod).weight()) {
                best = Some(ops);
            }
        }
        best.ok_or_else(|| last_err.unwrap_or_else(|| Error::Infeasible("no pairing".into())))
    }

    pub fn map_majorana(&self, sum: &MajoranaSum, policy: &mut Realization) -> Result<WeightedPauliSum> {
        let mut out = WeightedPauliSum::new(self.n_qubits);
        for (mono, &c) in &sum.terms {
            let (coef, p) = self.realize_monomial(mono, c, policy)?;
            out.add(coef, &p);
        }
        Ok(out)
    }

    pub fn map_hamiltonian(&self, h: &FermionHamiltonian, policy: &mut Realization) -> Result<MappedHamiltonian> {
        if h.n_modes() != self.graph.n_vertices() {
            return Err(Error::IndexOutOfRange(format!(
                "Hamiltonian has {} modes, graph has {} vertices",
                h.n_modes(),
                self.graph.n_vertices()
            )));
        }
        let (id, maj) = h.to_majorana();
        let mut terms = self.map_majorana(&maj, policy)?;
        let extra = terms.take_identity();
        let terms = terms.pruned(DROP_TOL);
        if !terms.is_hermitian(1e-9) {
            return Err(Error::NonHermitian("mapped Hamiltonian has complex coefficients".into()));
        }
        Ok(MappedHamiltonian { constant: (id + extra).re, terms })
    }

    /// Exhaustive search for undetectable non-trivial Paulis up to `w_max`.
    pub fn code_distance_scan(&self, w_max: usize) -> Result<DistanceReport> {
        self.code_distance_scan_within(w_max, SCAN_BUDGET)
    }

    /// As [`Self::code_distance_scan`] with an explicit candidate budget.
    pub fn code_distance_scan_within(&self, w_max: usize, budget: f64) -> Result<DistanceReport> {
        let n = self.n_qubits;
        let mut cost = 0.0;
        for w in 1..=w_max.min(n) {
            cost += binom(n, w) * 3f64.powi(w as i32);
        }
        if cost > budget {
            return Err(Error::Budget(format!("{cost:.3e} candidates exceed {budget:.0e}")));
        }
        let basis = self.stabilizers.basis();
        let gens = &self.stabilizers.generators;
        let mut report = DistanceReport { distance: None, undetectable_by_weight: BTreeMap::new() };
        for w in 1..=w_max.min(n) {
            let mut found = Vec::new();
            let mut qs: Vec<usize> = (0..w).collect();
            loop {
                for code in 0..3usize.pow(w as u32) {
                    let mut c = code;
                    let letters: Vec<(usize, char)> = qs
                        .iter()
                        .map(|&q| {
                            let l = ['X', 'Y', 'Z'][c % 3];
                            c /= 3;
                            (q, l)
                        })
                        .collect();
                    let p = PauliTerm::from_sparse(n, &letters);
                    if gens.iter().all(|g| g.commutes(&p)) && !basis.contains(&symplectic(&p)) {
                        found.push(p);
                    }
                }
                if !next_combination(&mut qs, n) {
                    break;
                }
            }
            if !found.is_empty() {
                report.distance.get_or_insert(w);
                report.undetectable_by_weight.insert(w, found);
            }
        }
        Ok(report)
    }

    pub fn dump_json(&self) -> serde_json::Value {
        let blocks: Vec<_> = (0..self.graph.n_vertices())
            .map(|v| {
                json!({
                    "vertex": v,
                    "offset": self.offset[v],
                    "size": self.block[v],
                    "majoranas": self.local[v].iter().map(|p| p.letters()).collect::<Vec<_>>(),
                    "B": self.vertex_ops[v].to_string(),
                })
            })
            .collect();
        let mut edges = Vec::new();
        for (id, &(a, b, m)) in self.graph.edges().iter().enumerate() {
            for c in 0..m {
                edges.push(json!({
                    "tail": a, "head": b, "copy": c,
                    "slots": [self.edge_slots[id][c].0, self.edge_slots[id][c].1],
                    "A": self.edge_operator(id, c).unwrap().to_string(),
                }));
            }
        }
        json!({
            "family": self.family.name(),
            "n_qubits": self.n_qubits,
            "blocks": blocks,
            "edges": edges,
            "stabilizers": self.stabilizers.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn next_combination(qs: &mut [usize], n: usize) -> bool {
    let w = qs.len();
    let mut i = w;
    while i > 0 {
        i -= 1;
        if qs[i] < n - w + i {
            qs[i] += 1;
            for j in i + 1..w {
                qs[j] = qs[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All perfect matchings of `0..n` as flat sequences of ascending pairs.
fn matchings(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = rest[0];
        for k in 1..rest.len() {
            let b = rest[k];
            let mut r: Vec<usize> = rest[1..].to_vec();
            r.remove(k - 1);
            cur.push(a);
            cur.push(b);
            go(&r, cur, out);
            cur.truncate(cur.len() - 2);
        }
    }
    let mut out = Vec::new();
    go(&(0..n).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out
}

fn inversions(seq: &[usize]) -> usize {
    let mut k = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                k += 1;
            }
        }
    }
    k
}
