//! Gates, circuits, Clifford conjugation, stabilizer states and preparation
//! circuit synthesis.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{symplectic, Gf2Basis};
use crate::pauli::PauliTerm;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    /// Square root of X; maps Y to Z.
    SX(usize),
    SXdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    CX(usize, usize),
    CZ(usize, usize),
    Swap(usize, usize),
    /// `exp(−i θ Z / 2)`.
    Rz(f64, usize),
    M(usize),
    /// Two-qubit depolarizing annotation with probability `p`.
    Depol2(f64, usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::SX(q) | Gate::SXdg(q) => vec![q],
            Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::Rz(_, q) | Gate::M(q) => vec![q],
            Gate::CX(a, b) | Gate::CZ(a, b) | Gate::Swap(a, b) | Gate::Depol2(_, a, b) => vec![a, b],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::CX(..) | Gate::CZ(..) | Gate::Swap(..))
    }

    /// `RZ` by a multiple of π/2 counts as Clifford.
    pub fn is_clifford(&self) -> bool {
        match *self {
            Gate::Rz(t, _) => quarter_turns(t).is_some(),
            _ => true,
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::SX(q) => Gate::SXdg(q),
            Gate::SXdg(q) => Gate::SX(q),
            Gate::Rz(t, q) => Gate::Rz(-t, q),
            g => g,
        }
    }
}

fn quarter_turns(t: f64) -> Option<u8> {
    let k = t / FRAC_PI_2;
    let r = k.round();
    if (k - r).abs() < 1e-9 {
        Some(r.rem_euclid(4.0) as u8)
    } else {
        None
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Sdg(q) => write!(f, "SDG {q}"),
            Gate::SX(q) => write!(f, "SX {q}"),
            Gate::SXdg(q) => write!(f, "SXDG {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Y(q) => write!(f, "Y {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
            Gate::CX(a, b) => write!(f, "CX {a} {b}"),
            Gate::CZ(a, b) => write!(f, "CZ {a} {b}"),
            Gate::Swap(a, b) => write!(f, "SWAP {a} {b}"),
            Gate::Rz(t, q) => write!(f, "RZ {t:?} {q}"),
            Gate::M(q) => write!(f, "M {q}"),
            Gate::Depol2(p, a, b) => write!(f, "DEPOL2 {p:?} {a} {b}"),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(line: &str) -> Result<Gate> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse(format!("bad gate line `{line}`"));
        let q = |k: usize| -> Result<usize> { toks.get(k).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let r = |k: usize| -> Result<f64> { toks.get(k).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let want = |n: usize| if toks.len() == n { Ok(()) } else { Err(bad()) };
        let name = toks.first().ok_or_else(bad)?.to_ascii_uppercase();
        let g = match name.as_str() {
            "H" | "S" | "SDG" | "SX" | "SXDG" | "X" | "Y" | "Z" | "M" => {
                want(2)?;
                let a = q(1)?;
                match name.as_str() {
                    "H" => Gate::H(a),
                    "S" => Gate::S(a),
                    "SDG" => Gate::Sdg(a),
                    "SX" => Gate::SX(a),
                    "SXDG" => Gate::SXdg(a),
                    "X" => Gate::X(a),
                    "Y" => Gate::Y(a),
                    "Z" => Gate::Z(a),
                    _ => Gate::M(a),
                }
            }
            "CX" | "CNOT" | "CZ" | "SWAP" => {
                want(3)?;
                let (a, b) = (q(1)?, q(2)?);
                if a == b {
                    return Err(bad());
                }
                match name.as_str() {
                    "CZ" => Gate::CZ(a, b),
                    "SWAP" => Gate::Swap(a, b),
                    _ => Gate::CX(a, b),
                }
            }
            "RZ" => {
                want(3)?;
                Gate::Rz(r(1)?, q(2)?)
            }
            "DEPOL2" => {
                want(4)?;
                let p = r(1)?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(bad());
                }
                Gate::Depol2(p, q(2)?, q(3)?)
            }
            _ => return Err(bad()),
        };
        Ok(g)
    }
}

/// Conjugates `p ↦ g p g†` in place. Fails on non-Clifford rotations and
/// measurement or noise entries.
pub fn conjugate_gate(p: &mut PauliTerm, g: &Gate) -> Result<()> {
    match *g {
        Gate::H(q) => {
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            p.set_bits(q, z, x);
            if x && z {
                p.add_phase(2);
            }
        }
        Gate::S(q) | Gate::Sdg(q) => {
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            p.set_bits(q, x, z ^ x);
            let flip = if matches!(g, Gate::S(_)) { x && z } else { x && !z };
            if flip {
                p.add_phase(2);
            }
        }
        Gate::SX(q) | Gate::SXdg(q) => {
            let (x, z) = (p.x_bit(q), p.z_bit(q));
            p.set_bits(q, x ^ z, z);
            let flip = if matches!(g, Gate::SX(_)) { z && !x } else { x && z };
            if flip {
                p.add_phase(2);
            }
        }
        Gate::X(q) => {
            if p.z_bit(q) {
                p.add_phase(2);
            }
        }
        Gate::Y(q) => {
            if p.x_bit(q) ^ p.z_bit(q) {
                p.add_phase(2);
            }
        }
        Gate::Z(q) => {
            if p.x_bit(q) {
                p.add_phase(2);
            }
        }
        Gate::CX(c, t) => {
            let (xc, zc, xt, zt) = (p.x_bit(c), p.z_bit(c), p.x_bit(t), p.z_bit(t));
            if xc && zt && (xt == zc) {
                p.add_phase(2);
            }
            p.set_bits(t, xt ^ xc, zt);
            p.set_bits(c, xc, zc ^ zt);
        }
        Gate::CZ(a, b) => {
            let (xa, za, xb, zb) = (p.x_bit(a), p.z_bit(a), p.x_bit(b), p.z_bit(b));
            if xa && xb && (za ^ zb) {
                p.add_phase(2);
            }
            p.set_bits(a, xa, za ^ xb);
            p.set_bits(b, xb, zb ^ xa);
        }
        Gate::Swap(a, b) => {
            let (xa, za, xb, zb) = (p.x_bit(a), p.z_bit(a), p.x_bit(b), p.z_bit(b));
            p.set_bits(a, xb, zb);
            p.set_bits(b, xa, za);
        }
        Gate::Rz(t, q) => match quarter_turns(t) {
            Some(k) => {
                for _ in 0..k {
                    conjugate_gate(p, &Gate::S(q))?;
                }
            }
            None => return Err(Error::NonClifford(format!("RZ({t}) on qubit {q}"))),
        },
        Gate::M(_) | Gate::Depol2(..) => return Err(Error::NonClifford(format!("`{g}` has no conjugation action"))),
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit { n_qubits, gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) {
        debug_assert!(g.qubits().iter().all(|&q| q < self.n_qubits), "{g} outside {} qubits", self.n_qubits);
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: &Circuit) {
        self.gates.extend_from_slice(&other.gates);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Gates excluding noise annotations and measurements.
    pub fn gate_count(&self) -> usize {
        self.gates.iter().filter(|g| !matches!(g, Gate::Depol2(..) | Gate::M(_))).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Longest chain of gates sharing qubits, every gate counting one layer.
    /// Noise annotations do not occupy a layer.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for g in &self.gates {
            if matches!(g, Gate::Depol2(..)) {
                continue;
            }
            let qs = g.qubits();
            let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for q in qs {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    /// Depth counting only two-qubit gates.
    pub fn entangling_depth(&self) -> usize {
        let two = Circuit { n_qubits: self.n_qubits, gates: self.gates.iter().filter(|g| g.is_two_qubit()).copied().collect() };
        two.depth()
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(|g| g.is_clifford() && !matches!(g, Gate::M(_)))
    }

    /// Reverse order with every gate inverted; measurement and noise entries
    /// are dropped.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self
                .gates
                .iter()
                .rev()
                .filter(|g| !matches!(g, Gate::M(_) | Gate::Depol2(..)))
                .map(|g| g.inverse())
                .collect(),
        }
    }

    /// `U p U†` where `U` applies the gates in order.
    pub fn conjugate(&self, p: &PauliTerm) -> Result<PauliTerm> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::Dimension(format!("{}-qubit term through {}-qubit circuit", p.n_qubits(), self.n_qubits)));
        }
        let mut out = p.clone();
        for g in &self.gates {
            if matches!(g, Gate::Depol2(..)) {
                continue;
            }
            conjugate_gate(&mut out, g)?;
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# qubits {}\n", self.n_qubits);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the line format. The width comes from a `# qubits n` header if
    /// present, otherwise from the largest index used.
    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut gates = Vec::new();
        let mut width = None;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix('#') {
                let t: Vec<&str> = rest.split_whitespace().collect();
                if t.len() == 2 && t[0] == "qubits" {
                    width = Some(t[1].parse().map_err(|_| Error::Parse(format!("line {}: bad header", k + 1)))?);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let g: Gate = line.parse().map_err(|e| Error::Parse(format!("line {}: {e}", k + 1)))?;
            gates.push(g);
        }
        let used = gates.iter().flat_map(|g| g.qubits()).max().map(|q| q + 1).unwrap_or(0);
        let n = width.unwrap_or(used);
        if used > n {
            return Err(Error::Parse(format!("qubit index {} outside declared width {n}", used - 1)));
        }
        Ok(Circuit { n_qubits: n, gates })
    }
}

/// Full stabilizer tableau with destabilizers.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerState {
    n: usize,
    stabs: Vec<PauliTerm>,
    destabs: Vec<PauliTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    /// `+1` or `−1`.
    pub value: i8,
    pub deterministic: bool,
}

impl StabilizerState {
    pub fn zero(n: usize) -> Self {
        StabilizerState {
            n,
            stabs: (0..n).map(|q| PauliTerm::single(n, q, 'Z')).collect(),
            destabs: (0..n).map(|q| PauliTerm::single(n, q, 'X')).collect(),
        }
    }

    /// `C |0…0⟩` for a Clifford circuit.
    pub fn from_circuit(c: &Circuit) -> Result<Self> {
        let mut s = Self::zero(c.n_qubits);
        s.apply_circuit(c)?;
        Ok(s)
    }

    /// A state whose group contains every given generator with its sign.
    /// Generators must commute pairwise; the rest of the group is filled in
    /// by projecting `|0…0⟩`.
    pub fn from_generators(n: usize, gens: &[PauliTerm]) -> Result<Self> {
        let mut s = Self::zero(n);
        let mut imposed = vec![false; n];
        for g in gens {
            if g.n_qubits() != n {
                return Err(Error::Dimension(format!("{}-qubit generator on {n} qubits", g.n_qubits())));
            }
            if let Some(k) = s.stabs.iter().position(|st| !st.commutes(g)) {
                s.measure_with(g, || 1)?;
                imposed[k] = true;
                continue;
            }
            // g is a product of current rows; make it a row itself so later
            // sign fixes on filler rows cannot move it
            let involved: Vec<usize> = (0..n).filter(|&k| !s.destabs[k].commutes(g)).collect();
            let Some(&k) = involved.iter().find(|&&k| !imposed[k]) else {
                if s.peek(g) == Some(1) {
                    continue;
                }
                return Err(Error::InconsistentConstraints(format!("{g} is fixed to -1 by the other generators")));
            };
            for &j in &involved {
                if j != k {
                    s.destabs[j] = &s.destabs[j] * &s.destabs[k];
                }
            }
            s.stabs[k] = g.clone();
            imposed[k] = true;
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliTerm] {
        &self.stabs
    }

    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        for r in self.stabs.iter_mut().chain(self.destabs.iter_mut()) {
            conjugate_gate(r, g)?;
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        for g in &c.gates {
            if !matches!(g, Gate::Depol2(..)) {
                self.apply(g)?;
            }
        }
        Ok(())
    }

    /// Value of `p` if it (or `−p`) is in the stabilizer group.
    pub fn peek(&self, p: &PauliTerm) -> Option<i8> {
        if self.stabs.iter().any(|s| !s.commutes(p)) {
            return None;
        }
        let mut acc = PauliTerm::identity(self.n);
        for (k, d) in self.destabs.iter().enumerate() {
            if !d.commutes(p) {
                acc = &acc * &self.stabs[k];
            }
        }
        Some(if acc.phase() == p.phase() { 1 } else { -1 })
    }

    fn measure_with(&mut self, p: &PauliTerm, choose: impl FnOnce() -> i8) -> Result<Outcome> {
        if p.n_qubits() != self.n {
            return Err(Error::Dimension(format!("{}-qubit observable on {} qubits", p.n_qubits(), self.n)));
        }
        if !p.is_hermitian() {
            return Err(Error::NonHermitian(format!("cannot measure {p}")));
        }
        let Some(k) = self.stabs.iter().position(|s| !s.commutes(p)) else {
            return Ok(Outcome { value: self.peek(p).unwrap(), deterministic: true });
        };
        let pivot = self.stabs[k].clone();
        for j in 0..self.n {
            if j != k && !self.stabs[j].commutes(p) {
                self.stabs[j] = &self.stabs[j] * &pivot;
            }
            if j != k && !self.destabs[j].commutes(p) {
                self.destabs[j] = &self.destabs[j] * &pivot;
            }
        }
        let v = choose();
        self.destabs[k] = pivot;
        self.stabs[k] = if v == 1 { p.clone() } else { p.clone().negated() };
        Ok(Outcome { value: v, deterministic: false })
    }

    /// Projective measurement with a uniformly random outcome when it is not
    /// determined.
    pub fn measure<R: Rng>(&mut self, p: &PauliTerm, rng: &mut R) -> Result<Outcome> {
        self.measure_with(p, || if rng.random::<bool>() { 1 } else { -1 })
    }

    /// Projects onto the `value` eigenspace of `p`. A determined opposite
    /// outcome is an inconsistency.
    pub fn project(&mut self, p: &PauliTerm, value: i8) -> Result<Outcome> {
        let o = self.measure_with(p, || value)?;
        if o.value != value {
            return Err(Error::InconsistentConstraints(format!("{p} is fixed to {} in this state", o.value)));
        }
        Ok(o)
    }

    /// Group equality including signs.
    pub fn same_group(&self, other: &StabilizerState) -> bool {
        self.n == other.n && other.stabs.iter().all(|s| self.peek(s) == Some(1))
    }
}

/// Canonical generator list of the group generated by `gens`: per qubit an
/// X-type pivot then a Z-type pivot, eliminated from every other row.
pub fn canonical_stabilizers(gens: &[PauliTerm]) -> Vec<PauliTerm> {
    let mut rows: Vec<PauliTerm> = gens.to_vec();
    let Some(n) = rows.first().map(|r| r.n_qubits()) else { return rows };
    let mut min_pivot = 0;
    for q in 0..n {
        for use_x in [true, false] {
            let has = |r: &PauliTerm| if use_x { r.x_bit(q) } else { r.z_bit(q) };
            let Some(pivot) = (min_pivot..rows.len()).find(|&k| has(&rows[k])) else { continue };
            for s in 0..rows.len() {
                if s != pivot && has(&rows[s]) {
                    rows[s] = &rows[s] * &rows[pivot];
                }
            }
            rows.swap(min_pivot, pivot);
            min_pivot += 1;
        }
    }
    rows.retain(|r| !r.is_identity() || r.phase() != 0);
    rows
}

fn check_generators(n: usize, rows: &[PauliTerm]) -> Result<()> {
    if rows.len() != n {
        return Err(Error::InvalidParams(format!("{} generators for {n} qubits", rows.len())));
    }
    let mut b = Gf2Basis::new();
    for (i, r) in rows.iter().enumerate() {
        if r.n_qubits() != n {
            return Err(Error::Dimension(format!("generator {r} on {} qubits", r.n_qubits())));
        }
        if r.phase() % 2 == 1 {
            return Err(Error::NonHermitian(format!("generator {r}")));
        }
        if rows[..i].iter().any(|s| !s.commutes(r)) {
            return Err(Error::NonCommuting(format!("generator {r}")));
        }
        if !b.insert(symplectic(r)) {
            return Err(Error::InvalidParams(format!("generator {r} is dependent")));
        }
    }
    Ok(())
}

/// Circuit `C` with `C Z_k C† = rows[k]` exactly, signs included, for `n`
/// independent commuting Hermitian generators on `n` qubits.
pub fn synthesize_prep(rows: &[PauliTerm]) -> Result<Circuit> {
    let n = rows.first().map(|r| r.n_qubits()).unwrap_or(0);
    check_generators(n, rows)?;
    // G sends the row-reduced generators to Z_k
    let mut work: Vec<PauliTerm> = rows.to_vec();
    let mut g = Circuit::new(n);
    let emit = |g: &mut Circuit, work: &mut Vec<PauliTerm>, gate: Gate| {
        for r in work.iter_mut() {
            conjugate_gate(r, &gate).unwrap();
        }
        g.push(gate);
    };
    for k in 0..n {
        let xpiv = (k..n).find_map(|j| (k..n).find(|&q| work[j].x_bit(q)).map(|q| (j, q)));
        if let Some((j, q)) = xpiv {
            work.swap(j, k);
            if q != k {
                emit(&mut g, &mut work, Gate::Swap(q, k));
            }
            for t in k + 1..n {
                if work[k].x_bit(t) {
                    emit(&mut g, &mut work, Gate::CX(k, t));
                }
            }
            for t in k + 1..n {
                if work[k].z_bit(t) {
                    emit(&mut g, &mut work, Gate::CZ(k, t));
                }
            }
            if work[k].z_bit(k) {
                emit(&mut g, &mut work, Gate::Sdg(k));
            }
            emit(&mut g, &mut work, Gate::H(k));
        } else {
            let (j, q) = (k..n)
                .find_map(|j| (k..n).find(|&q| work[j].z_bit(q)).map(|q| (j, q)))
                .expect("independent generators keep a pivot");
            work.swap(j, k);
            if q != k {
                emit(&mut g, &mut work, Gate::Swap(q, k));
            }
            for t in k + 1..n {
                if work[k].z_bit(t) {
                    emit(&mut g, &mut work, Gate::CX(t, k));
                }
            }
        }
        let pivot = work[k].clone();
        for j in 0..n {
            if j != k && work[j].z_bit(k) {
                work[j] = &work[j] * &pivot;
            }
        }
    }
    // each original row is now a Z-string; a CNOT network supplies those
    let mut t: Vec<Vec<bool>> = Vec::with_capacity(n);
    for r in rows {
        let img = g.conjugate(r)?;
        debug_assert!(img.is_z_only());
        t.push((0..n).map(|q| img.z_bit(q)).collect());
    }
    let mut reduce_ops = Vec::new();
    let mut m = t.clone();
    for i in 0..n {
        if !m[i][i] {
            let j = (i + 1..n).find(|&j| m[i][j]).expect("invertible");
            // column i ^= column j
            for row in m.iter_mut() {
                row[i] ^= row[j];
            }
            reduce_ops.push((i, j));
        }
        for j in 0..n {
            if j != i && m[i][j] {
                for row in m.iter_mut() {
                    row[j] ^= row[i];
                }
                reduce_ops.push((j, i));
            }
        }
    }
    let mut c = Circuit::new(n);
    // appending CX(a, b) xors column b into column a of the Z images
    for &(a, b) in reduce_ops.iter().rev() {
        c.push(Gate::CX(a, b));
    }
    c.extend(&g.inverse());
    let mut fixed = Circuit::new(n);
    for k in 0..n {
        let img = c.conjugate(&PauliTerm::single(n, k, 'Z'))?;
        if img.phase() != rows[k].phase() {
            fixed.push(Gate::X(k));
        }
    }
    fixed.extend(&c);
    debug_assert!((0..n).all(|k| fixed.conjugate(&PauliTerm::single(n, k, 'Z')).unwrap() == rows[k]));
    Ok(fixed)
}

/// Brings `work` to the form with identity X-block by row operations, after
/// Hadamards on the returned qubits. Rows are products of the inputs.
fn graph_form(work: &mut [PauliTerm]) -> Vec<usize> {
    let n = work.len();
    let eliminate = |work: &mut [PauliTerm], r: usize, q: usize, x: bool| {
        let pivot = work[r].clone();
        for j in 0..work.len() {
            let hit = if x { work[j].x_bit(q) } else { work[j].z_bit(q) };
            if j != r && hit {
                work[j] = &work[j] * &pivot;
            }
        }
    };
    let mut rank = 0;
    let mut is_pivot = vec![false; n];
    for q in 0..n {
        if let Some(r) = (rank..n).find(|&r| work[r].x_bit(q)) {
            work.swap(r, rank);
            eliminate(work, rank, q, true);
            is_pivot[q] = true;
            rank += 1;
        }
    }
    // Z-only rows are independent off the X pivots
    let mut flip = Vec::new();
    let mut next = rank;
    for q in (0..n).filter(|&q| !is_pivot[q]) {
        if let Some(r) = (next..n).find(|&r| work[r].z_bit(q)) {
            work.swap(r, next);
            eliminate(&mut work[rank..], next - rank, q, false);
            flip.push(q);
            next += 1;
        }
    }
    debug_assert_eq!(next, n);
    for r in work.iter_mut() {
        for &q in &flip {
            conjugate_gate(r, &Gate::H(q)).unwrap();
        }
    }
    for q in 0..n {
        let r = (q..n).find(|&r| work[r].x_bit(q)).expect("X-block has full rank");
        work.swap(r, q);
        eliminate(work, q, q, true);
    }
    flip
}

/// Prepares the state stabilized by `rows` (signs included) from `|0…0⟩` as
/// Hadamards, one layer of commuting CZs, then single-qubit Cliffords. A
/// fault spreads at most to graph neighbours, unlike [`synthesize_prep`].
pub fn synthesize_state(rows: &[PauliTerm]) -> Result<Circuit> {
    let n = rows.first().map(|r| r.n_qubits()).unwrap_or(0);
    check_generators(n, rows)?;
    let mut work = rows.to_vec();
    let flip = graph_form(&mut work);
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::H(q));
    }
    // greedy edge colouring keeps the CZ layer shallow
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if work[i].z_bit(j) {
                edges.push((i, j));
            }
        }
    }
    let mut colours: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut used: Vec<Vec<bool>> = Vec::new();
    for (a, b) in edges {
        let k = (0..colours.len()).find(|&k| !used[k][a] && !used[k][b]).unwrap_or_else(|| {
            colours.push(Vec::new());
            used.push(vec![false; n]);
            colours.len() - 1
        });
        colours[k].push((a, b));
        used[k][a] = true;
        used[k][b] = true;
    }
    for (a, b) in colours.into_iter().flatten() {
        c.push(Gate::CZ(a, b));
    }
    for q in 0..n {
        if work[q].z_bit(q) {
            c.push(Gate::S(q));
        }
    }
    for q in 0..n {
        if c.conjugate(&PauliTerm::single(n, q, 'Z'))? != work[q] {
            c.push(Gate::Z(q));
        }
    }
    for &q in &flip {
        c.push(Gate::H(q));
    }
    let c = shorten_unentangled(c);
    debug_assert!({
        let mut st = StabilizerState::zero(n);
        st.apply_circuit(&c).unwrap();
        rows.iter().all(|r| st.peek(r) == Some(1))
    });
    Ok(c)
}

/// Replaces the gates on qubits no two-qubit gate touches by the shortest
/// preparation of the same single-qubit state from `|0⟩`.
fn shorten_unentangled(c: Circuit) -> Circuit {
    let n = c.n_qubits;
    let mut entangled = vec![false; n];
    for g in c.gates.iter().filter(|g| g.is_two_qubit()) {
        for q in g.qubits() {
            entangled[q] = true;
        }
    }
    let mut out = Circuit::new(n);
    for q in (0..n).filter(|&q| !entangled[q]) {
        let mut z = PauliTerm::single(n, q, 'Z');
        for g in c.gates.iter().filter(|g| g.qubits() == [q]) {
            conjugate_gate(&mut z, g).expect("preparation gates are Clifford");
        }
        let seq: &[Gate] = match (z.letter(q), z.phase()) {
            ('Z', 0) => &[],
            ('Z', _) => &[Gate::X(q)],
            ('X', 0) => &[Gate::H(q)],
            ('X', _) => &[Gate::X(q), Gate::H(q)],
            ('Y', 0) => &[Gate::H(q), Gate::S(q)],
            _ => &[Gate::H(q), Gate::Sdg(q)],
        };
        for g in seq {
            out.push(*g);
        }
    }
    for g in c.gates {
        if g.qubits().iter().any(|&q| entangled[q]) {
            out.push(g);
        }
    }
    out
}

/// Extends a commuting independent set to `n` generators.
pub fn complete_generators(n: usize, gens: &[PauliTerm]) -> Result<Vec<PauliTerm>> {
    let s = StabilizerState::from_generators(n, gens)?;
    let mut out = gens.to_vec();
    let mut b = Gf2Basis::new();
    for g in gens {
        if !b.insert(symplectic(g)) {
            return Err(Error::InvalidParams(format!("generator {g} is dependent")));
        }
    }
    for g in s.generators() {
        if b.insert(symplectic(g)) {
            out.push(g.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn conj(gs: &[Gate], p: &str) -> PauliTerm {
        let n = p.trim_start_matches(['-', 'i']).len();
        Circuit { n_qubits: n, gates: gs.to_vec() }.conjugate(&pauli(p)).unwrap()
    }

    #[test]
    fn single_qubit_rules() {
        assert_eq!(conj(&[Gate::H(0)], "X"), pauli("Z"));
        assert_eq!(conj(&[Gate::H(0)], "Y"), pauli("-Y"));
        assert_eq!(conj(&[Gate::S(0)], "X"), pauli("Y"));
        assert_eq!(conj(&[Gate::S(0)], "Y"), pauli("-X"));
        assert_eq!(conj(&[Gate::Sdg(0)], "X"), pauli("-Y"));
        assert_eq!(conj(&[Gate::SX(0)], "Y"), pauli("Z"));
        assert_eq!(conj(&[Gate::SX(0)], "Z"), pauli("-Y"));
        assert_eq!(conj(&[Gate::SXdg(0)], "Z"), pauli("Y"));
        assert_eq!(conj(&[Gate::X(0)], "Y"), pauli("-Y"));
        assert_eq!(conj(&[Gate::Rz(std::f64::consts::PI, 0)], "X"), pauli("-X"));
    }

    #[test]
    fn two_qubit_rules() {
        assert_eq!(conj(&[Gate::CX(0, 1)], "XI"), pauli("XX"));
        assert_eq!(conj(&[Gate::CX(0, 1)], "IZ"), pauli("ZZ"));
        assert_eq!(conj(&[Gate::CX(0, 1)], "IY"), pauli("ZY"));
        assert_eq!(conj(&[Gate::CX(0, 1)], "XZ"), pauli("-YY"));
        assert_eq!(conj(&[Gate::CZ(0, 1)], "XI"), pauli("XZ"));
        assert_eq!(conj(&[Gate::CZ(0, 1)], "XY"), pauli("-YX"));
        assert_eq!(conj(&[Gate::Swap(0, 1)], "XZ"), pauli("ZX"));
    }

    #[test]
    fn homomorphism_on_products() {
        let c = Circuit {
            n_qubits: 3,
            gates: vec![Gate::H(0), Gate::CX(0, 2), Gate::S(1), Gate::CZ(1, 2), Gate::SX(2), Gate::Swap(0, 1)],
        };
        for a in ["XYZ", "ZZI", "YIX"] {
            for b in ["IXY", "ZYX", "XXX"] {
                let (pa, pb) = (pauli(a), pauli(b));
                let lhs = c.conjugate(&(&pa * &pb)).unwrap();
                let rhs = &c.conjugate(&pa).unwrap() * &c.conjugate(&pb).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let c = Circuit { n_qubits: 3, gates: vec![Gate::H(0), Gate::CX(0, 1), Gate::Rz(0.25, 2), Gate::Depol2(0.001, 0, 1)] };
        assert_eq!(Circuit::from_text(&c.to_text()).unwrap(), c);
        assert!(Circuit::from_text("CX 0 0").is_err());
        assert!(Circuit::from_text("FOO 1").is_err());
        assert!(Circuit::from_text("# qubits 1\nCX 0 1").is_err());
    }

    #[test]
    fn depth_counts_layers() {
        let c = Circuit { n_qubits: 2, gates: vec![Gate::CX(0, 1), Gate::Rz(0.3, 1), Gate::CX(0, 1)] };
        assert_eq!(c.depth(), 3);
        assert_eq!(c.two_qubit_count(), 2);
    }

    #[test]
    fn measurement_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = StabilizerState::zero(2);
        let o = s.measure(&pauli("ZI"), &mut rng).unwrap();
        assert_eq!(o, Outcome { value: 1, deterministic: true });
        let mut ups = 0;
        for seed in 0..400 {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let mut t = StabilizerState::zero(1);
            t.measure(&pauli("X"), &mut r).unwrap();
            if t.measure(&pauli("Z"), &mut r).unwrap().value == 1 {
                ups += 1;
            }
        }
        // binomial(400, 1/2) within 4σ
        assert!((ups as f64 - 200.0).abs() < 40.0, "{ups}");
        assert!(s.measure(&pauli("iZI"), &mut rng).is_err());
        assert!(matches!(s.project(&pauli("-ZI"), 1), Err(Error::InconsistentConstraints(_))));
    }

    #[test]
    fn bell_prep() {
        let rows = vec![pauli("XX"), pauli("-ZZ")];
        let c = synthesize_prep(&rows).unwrap();
        assert_eq!(c.conjugate(&pauli("ZI")).unwrap(), rows[0]);
        assert_eq!(c.conjugate(&pauli("IZ")).unwrap(), rows[1]);
        let s = StabilizerState::from_circuit(&c).unwrap();
        assert_eq!(s.peek(&pauli("YY")), Some(1));
    }

    #[test]
    fn computational_basis_prep_is_trivial() {
        let rows: Vec<_> = (0..3).map(|q| PauliTerm::single(3, q, 'Z')).collect();
        let c = synthesize_prep(&rows).unwrap();
        for (k, r) in rows.iter().enumerate() {
            assert_eq!(c.conjugate(&PauliTerm::single(3, k, 'Z')).unwrap(), *r);
        }
        assert_eq!(c.two_qubit_count(), 0);
    }

    #[test]
    fn canonical_form_of_triangle_pair() {
        let gens = vec![pauli("XIXIII"), pauli("-ZZZIII"), pauli("IZIIII"), pauli("IIIXIX"), pauli("-IIIZZZ"), pauli("IIIIZI")];
        let canon = canonical_stabilizers(&gens);
        let want = ["XIXIII", "-ZIZIII", "IZIIII", "IIIXIX", "-IIIZIZ", "IIIIZI"];
        assert_eq!(canon, want.iter().map(|s| pauli(s)).collect::<Vec<_>>());
    }
    #[test]
    fn graph_form_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..9 {
            for _ in 0..20 {
                let mut c = Circuit::new(n);
                for _ in 0..4 * n {
                    let a = rng.random_range(0..n);
                    let b = rng.random_range(0..n);
                    c.push(match rng.random_range(0..4) {
                        0 => Gate::H(a),
                        1 => Gate::S(a),
                        2 => Gate::X(a),
                        _ if a != b => Gate::CX(a, b),
                        _ => Gate::Z(a),
                    });
                }
                let rows: Vec<_> = (0..n).map(|k| c.conjugate(&PauliTerm::single(n, k, 'Z')).unwrap()).collect();
                let st = StabilizerState::from_circuit(&synthesize_state(&rows).unwrap()).unwrap();
                assert!(rows.iter().all(|r| st.peek(r) == Some(1)));
            }
        }
        let bell = synthesize_state(&[pauli("XX"), pauli("-ZZ")]).unwrap();
        assert_eq!(bell.two_qubit_count(), 1);
        let basis = synthesize_state(&[pauli("-ZI"), pauli("IX")]).unwrap();
        assert_eq!(basis.gates, vec![Gate::X(0), Gate::H(1)]);
    }
}
