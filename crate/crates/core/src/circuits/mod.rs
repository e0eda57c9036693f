//! Circuit synthesis: Trotter steps, state preparation, rotation-measurement
//! circuits, Gaussian orbital rotations and the rotor transform.

mod fgu;
mod prep;
mod rotor;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::encoder::{Encoding, Realization, Route};
use crate::error::{Error, Result};
use crate::fermion::FermionHamiltonian;
use crate::pauli::{PauliTerm, WeightedPauliSum};
use crate::tableau::{Circuit, Gate};

pub use fgu::{fgu_orbital_rotation, majorana_matrix, standard_orbital_rotation, FguEncoding};
pub use prep::{encode_state, naive_rotation, rotation_measurement, support_overlap, RotationMeasurement};
pub use rotor::{rotor_circuits, rotor_encoding, rotor_mode_transform, RotorReport};

/// Which qubit pairs may host a two-qubit gate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connectivity {
    AllToAll,
    /// `positions[q]` is the place of qubit `q` on the line.
    Linear { positions: Vec<usize> },
    Square { rows: usize, cols: usize },
}

impl Connectivity {
    pub fn linear(n: usize) -> Self {
        Connectivity::Linear { positions: (0..n).collect() }
    }

    /// Line order `q0 q1 q3 q2 q4 q5 q7 q6 …` on `2·n_modes` qubits.
    pub fn interleaved(n_modes: usize) -> Self {
        Self::from_order(&interleaved_order(2 * n_modes))
    }

    /// A line visiting `order[0], order[1], …`.
    pub fn from_order(order: &[usize]) -> Self {
        let mut positions = vec![0; order.len()];
        for (k, &q) in order.iter().enumerate() {
            positions[q] = k;
        }
        Connectivity::Linear { positions }
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        match self {
            Connectivity::AllToAll => true,
            Connectivity::Linear { positions } => match (positions.get(a), positions.get(b)) {
                (Some(&pa), Some(&pb)) => pa.abs_diff(pb) == 1,
                _ => false,
            },
            Connectivity::Square { rows, cols } => {
                if a >= rows * cols || b >= rows * cols {
                    return false;
                }
                let (ra, ca) = (a / cols, a % cols);
                let (rb, cb) = (b / cols, b % cols);
                ra.abs_diff(rb) + ca.abs_diff(cb) == 1
            }
        }
    }

    /// Whether every two-qubit gate acts on an adjacent pair.
    pub fn admits(&self, c: &Circuit) -> bool {
        c.gates.iter().filter(|g| g.is_two_qubit() && !matches!(g, Gate::Depol2(..))).all(|g| {
            let q = g.qubits();
            self.adjacent(q[0], q[1])
        })
    }
}

pub(crate) fn interleaved_order(n: usize) -> Vec<usize> {
    (0..n).map(|k| if k % 4 == 2 { k + 1 } else if k % 4 == 3 { k - 1 } else { k }).filter(|&q| q < n).collect()
}

/// `exp(−i φ P)`: basis change, ascending CX ladder onto the last support
/// qubit, `RZ(2φ)`, and the mirror image. The sign of `p` is folded into `φ`.
pub fn pauli_rotation(p: &PauliTerm, phi: f64) -> Result<Circuit> {
    let phi = match p.phase() {
        0 => phi,
        2 => -phi,
        _ => return Err(Error::NonHermitian(format!("rotation about {p}"))),
    };
    let mut c = Circuit::new(p.n_qubits());
    let support = p.support();
    let Some(&last) = support.last() else { return Ok(c) };
    let mut basis = Vec::new();
    for &q in &support {
        match p.letter(q) {
            'X' => basis.push(Gate::H(q)),
            'Y' => basis.push(Gate::SX(q)),
            _ => {}
        }
    }
    for &g in &basis {
        c.push(g);
    }
    for w in support.windows(2) {
        c.push(Gate::CX(w[0], w[1]));
    }
    c.push(Gate::Rz(2.0 * phi, last));
    for w in support.windows(2).rev() {
        c.push(Gate::CX(w[0], w[1]));
    }
    for g in basis.iter().rev() {
        c.push(g.inverse());
    }
    Ok(c)
}

fn real_terms(h: &WeightedPauliSum) -> Result<Vec<(PauliTerm, f64)>> {
    let mut out = Vec::with_capacity(h.len());
    for (p, c) in h.iter() {
        if c.im.abs() > 1e-12 {
            return Err(Error::InvalidParams(format!("complex coefficient {c} on {p}")));
        }
        if p.phase() % 2 == 1 {
            return Err(Error::NonHermitian(format!("term {p}")));
        }
        if !p.is_identity() {
            out.push((p.clone(), c.re));
        }
    }
    Ok(out)
}

/// Emission order of the Trotter step: terms are packed first-fit into
/// layers of support-disjoint terms and the layers are emitted in turn.
/// Identity terms only contribute a global phase and are dropped.
pub fn trotter_order(h: &WeightedPauliSum) -> Result<Vec<(PauliTerm, f64)>> {
    let terms = real_terms(h)?;
    let mut layers: Vec<(Vec<u64>, Vec<usize>)> = Vec::new();
    for (k, (p, _)) in terms.iter().enumerate() {
        let s = p.support_words();
        match layers.iter_mut().find(|(used, _)| used.iter().zip(&s).all(|(a, b)| a & b == 0)) {
            Some((used, members)) => {
                for (a, b) in used.iter_mut().zip(&s) {
                    *a |= b;
                }
                members.push(k);
            }
            None => layers.push((s, vec![k])),
        }
    }
    Ok(layers.into_iter().flat_map(|(_, m)| m).map(|k| terms[k].clone()).collect())
}

/// One first-order step `∏ exp(−i c dt P)` in [`trotter_order`].
pub fn trotter_step(h: &WeightedPauliSum, dt: f64) -> Result<Circuit> {
    let mut c = Circuit::new(h.n_qubits());
    for (p, coef) in trotter_order(h)? {
        c.extend(&pauli_rotation(&p, coef * dt)?);
    }
    Ok(c)
}

/// Per-monomial route choices that give the shallowest Trotter step.
#[derive(Clone, Debug)]
pub struct DepthChoice {
    pub realization: Realization,
    pub terms: WeightedPauliSum,
    pub depth: usize,
}

const EXHAUSTIVE_CHOICES: usize = 4096;

/// Searches shortest paths and edge copies for every hopping monomial.
/// Exhaustive when the product of choice counts is at most 4096, otherwise
/// one greedy pass in monomial order.
pub fn min_depth_realization(enc: &Encoding, h: &FermionHamiltonian) -> Result<DepthChoice> {
    let (_, maj) = h.to_majorana();
    let g = enc.graph();
    let mut monos: Vec<Vec<u32>> = Vec::new();
    let mut options: Vec<Vec<Route>> = Vec::new();
    for mono in maj.terms.keys() {
        if mono.len() != 2 || mono[0] / 2 == mono[1] / 2 {
            continue;
        }
        let (a, b) = (mono[0] as usize / 2, mono[1] as usize / 2);
        let mut opts = Vec::new();
        for verts in g.all_shortest_vertices(a, b, 8)? {
            let copies = verts.windows(2).map(|w| g.multiplicity(w[0], w[1])).min().unwrap_or(1);
            opts.extend((0..copies).map(|copy| Route { vertices: verts.clone(), copy }));
        }
        if opts.len() > 1 {
            monos.push(mono.clone());
            options.push(opts);
        }
    }
    let evaluate = |choice: &[usize]| -> Result<(Realization, WeightedPauliSum, usize)> {
        let map: HashMap<Vec<u32>, Vec<Route>> =
            monos.iter().zip(choice).zip(&options).map(|((m, &k), o)| (m.clone(), vec![o[k].clone()])).collect();
        let mut real = Realization::Explicit(map);
        let terms = enc.map_hamiltonian(h, &mut real)?.terms;
        let depth = trotter_step(&terms, 1.0)?.depth();
        Ok((real, terms, depth))
    };
    let total = options.iter().try_fold(1usize, |acc, o| acc.checked_mul(o.len()).filter(|&t| t <= EXHAUSTIVE_CHOICES));
    let mut choice = vec![0; options.len()];
    let mut best = evaluate(&choice)?;
    if total.is_some() {
        loop {
            // odometer increment
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
            let cand = evaluate(&choice)?;
            if cand.2 < best.2 {
                best = cand;
            }
        }
    } else {
        for k in 0..options.len() {
            let mut keep = choice[k];
            for alt in 1..options[k].len() {
                choice[k] = alt;
                let cand = evaluate(&choice)?;
                if cand.2 < best.2 {
                    best = cand;
                    keep = alt;
                }
            }
            choice[k] = keep;
        }
    }
    Ok(DepthChoice { realization: best.0, terms: best.1, depth: best.2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::Family;
    use crate::graph::{GraphKind, InteractionGraph};
    use crate::pauli::pauli;
    use crate::sim::dense::{apply_pauli_into, dense_pauli_matrix};
    use crate::sim::StateVector;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    /// Dense unitary of a circuit, column by column.
    pub(crate) fn circuit_unitary(c: &Circuit) -> DMatrix<Complex64> {
        let d = 1usize << c.n_qubits;
        let mut u = DMatrix::zeros(d, d);
        for col in 0..d {
            let mut amps = vec![Complex64::default(); d];
            amps[col] = Complex64::new(1.0, 0.0);
            let mut s = StateVector::from_amplitudes(c.n_qubits, amps).unwrap();
            s.run(c).unwrap();
            for (r, a) in s.amplitudes().iter().enumerate() {
                u[(r, col)] = *a;
            }
        }
        u
    }

    fn pauli_exp(p: &PauliTerm, phi: f64) -> DMatrix<Complex64> {
        let d = 1usize << p.n_qubits();
        let mut m = DMatrix::zeros(d, d);
        let mut col = vec![Complex64::default(); d];
        let mut out = vec![Complex64::default(); d];
        for j in 0..d {
            col.iter_mut().for_each(|a| *a = Complex64::default());
            col[j] = Complex64::new(1.0, 0.0);
            out.iter_mut().for_each(|a| *a = Complex64::default());
            apply_pauli_into(p, Complex64::new(0.0, -phi.sin()), &col, &mut out);
            out[j] += phi.cos();
            for (i, a) in out.iter().enumerate() {
                m[(i, j)] = *a;
            }
        }
        m
    }

    fn op_norm_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).singular_values().max()
    }

    #[test]
    fn single_zz_term() {
        let mut h = WeightedPauliSum::new(2);
        h.add_real(0.7, &pauli("ZZ"));
        let c = trotter_step(&h, 0.1).unwrap();
        assert_eq!(c.two_qubit_count(), 2);
        assert_eq!(c.gates.iter().filter(|g| matches!(g, Gate::Rz(..))).count(), 1);
        assert_eq!(c.depth(), 3);
    }

    #[test]
    fn rotation_matches_exponential() {
        for s in ["XYZ", "-YIX", "ZXY", "IYI"] {
            let p = pauli(s);
            let u = circuit_unitary(&pauli_rotation(&p, 0.37).unwrap());
            assert!(op_norm_diff(&u, &pauli_exp(&p, 0.37)) < 1e-12, "{s}");
        }
    }

    #[test]
    fn trotter_matches_ordered_product() {
        let mut h = WeightedPauliSum::new(4);
        for (c, s) in [(0.3, "XZXI"), (-0.2, "IYYI"), (0.5, "ZIIZ"), (0.1, "IIXY"), (0.4, "YIZI")] {
            h.add_real(c, &pauli(s));
        }
        let dt = 0.05;
        let u = circuit_unitary(&trotter_step(&h, dt).unwrap());
        let mut want = DMatrix::<Complex64>::identity(16, 16);
        for (p, c) in trotter_order(&h).unwrap() {
            want = pauli_exp(&p, c * dt) * want;
        }
        assert!(op_norm_diff(&u, &want) < 1e-9);
        // the order is a permutation of the input terms
        assert_eq!(trotter_order(&h).unwrap().len(), 5);
        let _ = dense_pauli_matrix(&h).unwrap();
    }

    #[test]
    fn complex_coefficients_rejected() {
        let mut h = WeightedPauliSum::new(1);
        h.add(Complex64::new(0.0, 1.0), &pauli("X"));
        assert!(matches!(trotter_step(&h, 0.1), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn connectivity_adjacency() {
        let c = Connectivity::interleaved(2);
        assert!(c.adjacent(1, 3) && c.adjacent(3, 2) && !c.adjacent(1, 2));
        let sq = Connectivity::Square { rows: 2, cols: 3 };
        assert!(sq.adjacent(0, 3) && sq.adjacent(4, 5) && !sq.adjacent(2, 3) && !sq.adjacent(1, 1));
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(sq.adjacent(a, b), sq.adjacent(b, a));
            }
        }
    }

    fn long_hops() -> FermionHamiltonian {
        let mut h = FermionHamiltonian::new(4, 1).unwrap();
        for (i, j) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
            h.add_one_body(0, i, j, 1.0).unwrap();
        }
        h
    }

    #[test]
    fn hopping_depths() {
        let h = long_hops();
        let jw = Encoding::build(&InteractionGraph::build(&GraphKind::Line(4)).unwrap(), Family::JwChain).unwrap();
        let mapped = jw.map_hamiltonian(&h, &mut Realization::MinWeight).unwrap();
        assert_eq!(trotter_step(&mapped.terms, 0.1).unwrap().depth(), 27);

        let g = InteractionGraph::build(&GraphKind::Loop { m: 4, multiplicity: 3 }).unwrap();
        let enc = Encoding::build(&g, Family::Cyclic(1)).unwrap();
        let route = |v: &[usize], copy| vec![Route { vertices: v.to_vec(), copy }];
        let routes: HashMap<Vec<u32>, Vec<Route>> = [
            (vec![0, 5], route(&[0, 1, 2], 0)),
            (vec![1, 4], route(&[0, 1, 2], 2)),
            (vec![2, 7], route(&[1, 2, 3], 2)),
            (vec![3, 6], route(&[1, 2, 3], 0)),
        ]
        .into_iter()
        .collect();
        let mapped = enc.map_hamiltonian(&h, &mut Realization::Explicit(routes)).unwrap();
        assert_eq!(trotter_step(&mapped.terms, 0.1).unwrap().depth(), 21);
        let best = min_depth_realization(&enc, &h).unwrap();
        assert!(best.depth <= 21);
    }
}
