//! Post-mapping optimization: stabilizer-equivalent weight minimization,
//! JW parity compression, commuting groups and a depth estimate.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoder::Encoding;
use crate::error::{Error, Result};
use crate::gf2::{symplectic, Gf2Basis};
use crate::pauli::{PauliTerm, WeightedPauliSum};
use crate::tableau::{complete_generators, synthesize_prep, Circuit};

/// Exhaustive stabilizer-multiplier search up to this many generators.
pub const EXHAUSTIVE_STABILIZERS: usize = 12;

/// Clifford frame in which the stabilizers become `Z_0 .. Z_{S-1}`.
#[derive(Clone, Debug)]
pub struct LogicalFrame {
    pub frame_circuit: Circuit,
    /// Independent stabilizer generators, in frame order.
    pub stabilizers: Vec<PauliTerm>,
}

impl LogicalFrame {
    pub fn new(n: usize, stabilizers: &[PauliTerm]) -> Result<Self> {
        let mut basis = Gf2Basis::new();
        let indep: Vec<PauliTerm> = stabilizers.iter().filter(|s| basis.insert(symplectic(s))).cloned().collect();
        if indep.is_empty() {
            return Ok(LogicalFrame { frame_circuit: Circuit::new(n), stabilizers: indep });
        }
        let rows = complete_generators(n, &indep)?;
        let frame_circuit = synthesize_prep(&rows)?.inverse();
        Ok(LogicalFrame { frame_circuit, stabilizers: indep })
    }

    pub fn for_encoding(enc: &Encoding) -> Result<Self> {
        Self::new(enc.n_qubits(), &enc.stabilizers().generators)
    }

    pub fn s(&self) -> usize {
        self.stabilizers.len()
    }

    pub fn to_frame(&self, p: &PauliTerm) -> Result<PauliTerm> {
        self.frame_circuit.conjugate(p)
    }

    /// Multiplies `p` by the stabilizers needed to clear its frame image on
    /// the first `S` qubits. Errors if `p` is not logical.
    pub fn canonical(&self, p: &PauliTerm) -> Result<PauliTerm> {
        let img = self.to_frame(p)?;
        let s = self.s();
        if (0..s).any(|k| img.x_bit(k)) {
            return Err(Error::NotLogical(format!("{p} anticommutes with a stabilizer")));
        }
        let mut q = p.clone();
        for k in (0..s).filter(|&k| img.z_bit(k)) {
            q = &q * &self.stabilizers[k];
        }
        Ok(q)
    }

    /// Frame image restricted to the logical qubits `S..n`.
    pub fn logical_part(&self, p: &PauliTerm) -> Result<PauliTerm> {
        let img = self.to_frame(&self.canonical(p)?)?;
        let n = p.n_qubits();
        Ok(img.restrict(&(self.s()..n).collect::<Vec<_>>()))
    }
}

fn better(a: &PauliTerm, b: &PauliTerm) -> bool {
    let (wa, wb) = (a.weight(), b.weight());
    wa < wb || (wa == wb && a.letters() < b.letters())
}

/// Lowest-weight member of `q`'s stabilizer coset.
fn min_representative(q: &PauliTerm, stabs: &[PauliTerm], seeds: &[PauliTerm]) -> PauliTerm {
    let mut best = q.clone();
    if stabs.len() <= EXHAUSTIVE_STABILIZERS {
        let mut cur = q.clone();
        for i in 1u64..(1 << stabs.len()) {
            cur = &cur * &stabs[i.trailing_zeros() as usize];
            if better(&cur, &best) {
                best = cur.clone();
            }
        }
        return best;
    }
    for s in seeds {
        if better(s, &best) {
            best = s.clone();
        }
    }
    loop {
        let step = stabs.iter().map(|s| &best * s).filter(|c| better(c, &best)).reduce(|a, b| if better(&b, &a) { b } else { a });
        match step {
            Some(c) => best = c,
            None => return best,
        }
    }
}

/// Merges terms acting identically on the codespace and rewrites each class
/// to its lowest-weight member.
pub fn logical_reduce(enc: &Encoding, hsum: &WeightedPauliSum) -> Result<WeightedPauliSum> {
    let frame = LogicalFrame::for_encoding(enc)?;
    logical_reduce_with(&frame, hsum)
}

pub fn logical_reduce_with(frame: &LogicalFrame, hsum: &WeightedPauliSum) -> Result<WeightedPauliSum> {
    let mut classes: indexmap::IndexMap<PauliTerm, (Complex64, Vec<PauliTerm>)> = indexmap::IndexMap::new();
    for (t, c) in hsum.iter() {
        let q = frame.canonical(t)?;
        let e = classes.entry(q.unsigned()).or_insert((Complex64::default(), Vec::new()));
        e.0 += c * crate::pauli::i_pow(q.phase());
        e.1.push(t.clone());
    }
    let classes: Vec<_> = classes.into_iter().collect();
    let reps: Vec<(Complex64, PauliTerm)> = classes
        .into_par_iter()
        .map(|(q, (c, members))| {
            let rep = min_representative(&q, &frame.stabilizers, &members);
            (c, rep)
        })
        .collect();
    let mut out = WeightedPauliSum::new(hsum.n_qubits());
    for (c, rep) in reps {
        out.add(c, &rep);
    }
    Ok(out.pruned(crate::pauli::DROP_TOL))
}

/// For a JW Hamiltonian on `2M` qubits (sector-major), replaces a term by its
/// product with the sector parity string whenever that strictly lowers its
/// weight in that sector. Valid on states with the declared parities.
pub fn jw_parity_compress(hsum: &WeightedPauliSum, m: usize, parity_alpha: i8, parity_beta: i8) -> Result<WeightedPauliSum> {
    let n = hsum.n_qubits();
    if n != 2 * m {
        return Err(Error::Dimension(format!("{n} qubits, expected {}", 2 * m)));
    }
    for p in [parity_alpha, parity_beta] {
        if p != 1 && p != -1 {
            return Err(Error::InvalidParams(format!("parity {p} is not ±1")));
        }
    }
    let mut out = WeightedPauliSum::new(n);
    for (t, mut c) in hsum.iter() {
        let mut t = t.clone();
        for (sector, parity) in [(0, parity_alpha), (1, parity_beta)] {
            let qs = sector * m..(sector + 1) * m;
            let (mut zs, mut xy) = (0, 0);
            for q in qs.clone() {
                match t.letter(q) {
                    'Z' => zs += 1,
                    'X' | 'Y' => xy += 1,
                    _ => {}
                }
            }
            let ids = m - zs - xy;
            if zs > ids && xy % 2 == 0 {
                let zstr = PauliTerm::from_sparse(n, &qs.map(|q| (q, 'Z')).collect::<Vec<_>>());
                t = &t * &zstr;
                if parity < 0 {
                    c = -c;
                }
            }
        }
        out.add(c, &t);
    }
    Ok(out.pruned(crate::pauli::DROP_TOL))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupMode {
    General,
    Qubitwise,
    /// Factorized commutation across the split `qubits < split | ≥ split`.
    SpinSeparated { split: usize },
}

fn qubitwise(a: &PauliTerm, b: &PauliTerm) -> bool {
    (0..a.n_qubits()).all(|q| {
        let (x, y) = (a.letter(q), b.letter(q));
        x == 'I' || y == 'I' || x == y
    })
}

fn compatible(a: &PauliTerm, b: &PauliTerm, mode: GroupMode) -> bool {
    match mode {
        GroupMode::General => a.commutes(b),
        GroupMode::Qubitwise => qubitwise(a, b),
        GroupMode::SpinSeparated { split } => {
            let n = a.n_qubits();
            let lo: Vec<usize> = (0..split.min(n)).collect();
            let hi: Vec<usize> = (split.min(n)..n).collect();
            a.restrict(&lo).commutes(&b.restrict(&lo)) && a.restrict(&hi).commutes(&b.restrict(&hi))
        }
    }
}

/// Sorted-insertion greedy grouping: terms by descending |c|, each into the
/// first group it is compatible with.
pub fn group_commuting(hsum: &WeightedPauliSum, mode: GroupMode) -> Vec<WeightedPauliSum> {
    let mut terms: Vec<(PauliTerm, Complex64)> = hsum.iter().map(|(t, c)| (t.clone(), c)).collect();
    terms.sort_by(|a, b| b.1.norm().total_cmp(&a.1.norm()));
    let mut groups: Vec<Vec<(PauliTerm, Complex64)>> = Vec::new();
    for (t, c) in terms {
        match groups.iter_mut().find(|g| g.iter().all(|(u, _)| compatible(&t, u, mode))) {
            Some(g) => g.push((t, c)),
            None => groups.push(vec![(t, c)]),
        }
    }
    groups.into_iter().map(|g| g.into_iter().map(|(t, c)| (c, t)).collect()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthEstimate {
    pub groups: usize,
    pub avg_weight: f64,
    pub estimate: f64,
}

/// Greedy coloring of the support-overlap graph (descending degree);
/// estimate = colors × average weight.
pub fn depth_estimate(hsum: &WeightedPauliSum) -> DepthEstimate {
    let terms: Vec<&PauliTerm> = hsum.iter().map(|(t, _)| t).filter(|t| !t.is_identity()).collect();
    let k = terms.len();
    let adj: Vec<Vec<usize>> = (0..k).map(|i| (0..k).filter(|&j| j != i && terms[i].overlaps(terms[j])).collect()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| adj[b].len().cmp(&adj[a].len()).then(a.cmp(&b)));
    let mut color = vec![usize::MAX; k];
    for &v in &order {
        let used: std::collections::HashSet<usize> = adj[v].iter().map(|&u| color[u]).collect();
        color[v] = (0..).find(|c| !used.contains(c)).unwrap();
    }
    let groups = color.iter().map(|c| c + 1).max().unwrap_or(0);
    let avg_weight = hsum.avg_weight();
    DepthEstimate { groups, avg_weight, estimate: groups as f64 * avg_weight }
}

/// Row of the reduction report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub n_qubits: usize,
    pub terms_before: usize,
    pub terms_after: usize,
    pub avg_weight_before: f64,
    pub max_weight_before: usize,
    pub avg_weight_after: f64,
    pub max_weight_after: usize,
    pub groups: usize,
    pub depth_estimate: f64,
    pub circuit_depth: Option<usize>,
}

impl ReductionReport {
    pub fn new(before: &WeightedPauliSum, after: &WeightedPauliSum, groups: usize) -> Self {
        ReductionReport {
            n_qubits: before.n_qubits(),
            terms_before: before.len(),
            terms_after: after.len(),
            avg_weight_before: before.avg_weight(),
            max_weight_before: before.max_weight(),
            avg_weight_after: after.avg_weight(),
            max_weight_after: after.max_weight(),
            groups,
            depth_estimate: depth_estimate(after).estimate,
            circuit_depth: None,
        }
    }
}
