use std::collections::{HashSet, VecDeque};

use num_complex::Complex64;
use serde::Serialize;

use crate::circuits::trotter_step;
use crate::encoder::{Encoding, Family, Realization};
use crate::error::{Error, Result};
use crate::fermion::FermionHamiltonian;
use crate::graph::{GraphKind, InteractionGraph};
use crate::pauli::{PauliTerm, WeightedPauliSum};
use crate::tableau::{Circuit, Gate};

/// `N` rotor lines with end loops under the `[[2N,N,2]]` table, each rotor
/// in the odd-parity sector of its single particle.
pub fn rotor_encoding(n_rotors: usize, d_m: usize) -> Result<Encoding> {
    let line = InteractionGraph::build(&GraphKind::LineWithEndLoops { m: d_m, multiplicity: 2 })?;
    let g = InteractionGraph::disjoint_union(&vec![line; n_rotors])?;
    Encoding::build_with_parities(&g, Encoding::table_2n_n_2(), &vec![true; n_rotors])
}

fn check_kind(enc: &Encoding) -> Result<()> {
    if *enc.family() != Encoding::table_2n_n_2() {
        return Err(Error::WrongEncoding(format!("rotor transform needs [[2N,N,2]], got {}", enc.family().name())));
    }
    Ok(())
}

fn place(template: &[Gate], a: usize, b: usize, c: &mut Circuit) {
    for g in template {
        c.push(match *g {
            Gate::H(0) => Gate::H(a),
            Gate::H(_) => Gate::H(b),
            Gate::S(0) => Gate::S(a),
            Gate::S(_) => Gate::S(b),
            Gate::X(0) => Gate::X(a),
            Gate::X(_) => Gate::X(b),
            Gate::Z(0) => Gate::Z(a),
            Gate::Z(_) => Gate::Z(b),
            Gate::CX(0, _) => Gate::CX(a, b),
            Gate::CX(..) => Gate::CX(b, a),
            other => other,
        });
    }
}

fn on_every_mode(enc: &Encoding, template: &[Gate]) -> Circuit {
    let mut c = Circuit::new(enc.n_qubits());
    for v in 0..enc.graph().n_vertices() {
        let off = enc.qubit_offset(v);
        place(template, off, off + 1, &mut c);
    }
    c
}

/// Mixed-parity Majorana pairs `c_{2i} c_{2j+1}`, `c_{2i+1} c_{2j}` across
/// every edge.
fn mixed_pairs(enc: &Encoding) -> Result<Vec<PauliTerm>> {
    let mut out = Vec::new();
    for &(a, b, _) in enc.graph().edges() {
        for mono in [[2 * a as u32, 2 * b as u32 + 1], [2 * a as u32 + 1, 2 * b as u32]] {
            out.push(enc.realize_monomial(&mono, Complex64::new(1.0, 0.0), &mut Realization::MinWeight)?.1);
        }
    }
    Ok(out)
}

/// Products of `p` with every subset of the stabilizer generators that
/// overlap it (at most 2^12 of them).
fn local_variants(p: &PauliTerm, stabs: &[PauliTerm]) -> Vec<PauliTerm> {
    let near: Vec<&PauliTerm> = stabs.iter().filter(|s| s.overlaps(p)).take(12).collect();
    let mut out = vec![p.clone()];
    for s in near {
        let more: Vec<PauliTerm> = out.iter().map(|v| v * s).collect();
        out.extend(more);
    }
    out
}

/// Lowest-weight image under `layer` of a codespace-equivalent of `p`.
fn lightest_image(layer: &Circuit, p: &PauliTerm, stabs: &[PauliTerm]) -> Result<PauliTerm> {
    let mut best: Option<PauliTerm> = None;
    for v in local_variants(p, stabs) {
        let img = layer.conjugate(&v)?;
        if best.as_ref().is_none_or(|b| img.weight() < b.weight()) {
            best = Some(img);
        }
    }
    Ok(best.expect("at least p itself"))
}

/// The 2-qubit Clifford applied to every mode that turns the mixed-parity
/// hopping pairs into weight-2 strings (after multiplying by nearby
/// stabilizers), maps the signed stabilizer group onto itself, and squares
/// to a Pauli. Found by breadth-first search over `H`, `S`, `CX`, `X`, `Z`
/// words; returned as a circuit on the qubits of `mode`.
pub fn rotor_mode_transform(enc: &Encoding, mode: usize) -> Result<Circuit> {
    check_kind(enc)?;
    if mode >= enc.graph().n_vertices() {
        return Err(Error::IndexOutOfRange(format!("mode {mode} of {}", enc.graph().n_vertices())));
    }
    let template = search_template(enc)?;
    let off = enc.qubit_offset(mode);
    let mut c = Circuit::new(enc.n_qubits());
    place(&template, off, off + 1, &mut c);
    Ok(c)
}

fn search_template(enc: &Encoding) -> Result<Vec<Gate>> {
    let pairs = mixed_pairs(enc)?;
    let stabs = enc.stabilizers();
    let moves = [Gate::H(0), Gate::H(1), Gate::S(0), Gate::S(1), Gate::CX(0, 1), Gate::CX(1, 0), Gate::X(0), Gate::X(1), Gate::Z(0), Gate::Z(1)];
    let gens: Vec<PauliTerm> = ["XI", "ZI", "IX", "IZ"].iter().map(|s| s.parse().unwrap()).collect();
    let acceptable = |t: &[Gate]| -> Result<bool> {
        let twice = Circuit { n_qubits: 2, gates: t.iter().chain(t).copied().collect() };
        for g in &gens {
            if twice.conjugate(g)?.unsigned() != *g {
                return Ok(false);
            }
        }
        let all = on_every_mode(enc, t);
        for p in &pairs {
            if lightest_image(&all, p, &stabs.generators)?.weight() != 2 {
                return Ok(false);
            }
        }
        for s in &stabs.generators {
            if !stabs.contains(&all.conjugate(s)?) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let key = |t: &[Gate]| -> Result<Vec<PauliTerm>> {
        let c = Circuit { n_qubits: 2, gates: t.to_vec() };
        gens.iter().map(|g| c.conjugate(g)).collect()
    };
    let mut seen: HashSet<Vec<PauliTerm>> = HashSet::new();
    let mut queue: VecDeque<Vec<Gate>> = VecDeque::new();
    seen.insert(key(&[])?);
    queue.push_back(Vec::new());
    while let Some(t) = queue.pop_front() {
        if !t.is_empty() && acceptable(&t)? {
            return Ok(t);
        }
        for g in moves {
            let mut next = t.clone();
            next.push(g);
            if seen.insert(key(&next)?) {
                queue.push_back(next);
            }
        }
    }
    Err(Error::Infeasible("no 2-qubit Clifford meets the rotor transform conditions".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct RotorReport {
    pub n_rotors: usize,
    pub d_m: usize,
    pub depth_jw: usize,
    pub depth_gse: usize,
    pub gates_jw: usize,
    pub gates_gse: usize,
    pub two_qubit_jw: usize,
    pub two_qubit_gse: usize,
    /// Terms realized after the mode transform.
    pub transformed_terms: usize,
    #[serde(skip)]
    pub jw: Circuit,
    #[serde(skip)]
    pub gse: Circuit,
}

/// One Trotter step of the rotor model under JW and under `[[2N,N,2]]`.
/// The `[[2N,N,2]]` step runs the terms the mode transform cannot lighten,
/// then a transform layer, the lightened terms, and the inverse layer.
pub fn rotor_circuits(n_rotors: usize, d_m: usize, g: f64, dt: f64) -> Result<RotorReport> {
    let h = FermionHamiltonian::rotor(n_rotors, d_m, g, 0.0)?;
    let m = n_rotors * d_m;
    let jw_enc = Encoding::build(&InteractionGraph::build(&GraphKind::Line(m))?, Family::JwChain)?;
    let jw_terms = jw_enc.map_hamiltonian(&h, &mut Realization::MinWeight)?.terms;
    let jw = trotter_step(&jw_terms, dt)?;

    let enc = rotor_encoding(n_rotors, d_m)?;
    let terms = enc.map_hamiltonian(&h, &mut Realization::MinWeight)?.terms;
    let template = search_template(&enc)?;
    let layer = on_every_mode(&enc, &template);
    let n = enc.n_qubits();
    let (mut plain, mut moved) = (WeightedPauliSum::new(n), WeightedPauliSum::new(n));
    for (p, c) in terms.iter() {
        let img = lightest_image(&layer, p, &enc.stabilizers().generators)?;
        if img.weight() < p.weight() {
            moved.add(c, &img);
        } else {
            plain.add(c, p);
        }
    }
    let mut gse = trotter_step(&plain, dt)?;
    if !moved.is_empty() {
        gse.extend(&layer);
        gse.extend(&trotter_step(&moved, dt)?);
        gse.extend(&layer.inverse());
    }
    Ok(RotorReport {
        n_rotors,
        d_m,
        depth_jw: jw.depth(),
        depth_gse: gse.depth(),
        gates_jw: jw.gate_count(),
        gates_gse: gse.gate_count(),
        two_qubit_jw: jw.two_qubit_count(),
        two_qubit_gse: gse.two_qubit_count(),
        transformed_terms: moved.len(),
        jw,
        gse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_conditions() {
        let enc = rotor_encoding(2, 3).unwrap();
        let t = rotor_mode_transform(&enc, 1).unwrap();
        assert!(!t.is_empty());
        let mut all = Circuit::new(enc.n_qubits());
        for v in 0..6 {
            all.extend(&rotor_mode_transform(&enc, v).unwrap());
        }
        let mut twice = all.clone();
        twice.extend(&all);
        let stabs = enc.stabilizers();
        for q in 0..enc.n_qubits() {
            for l in ['X', 'Z'] {
                let p = PauliTerm::single(enc.n_qubits(), q, l);
                assert_eq!(twice.conjugate(&p).unwrap().unsigned(), p);
            }
        }
        for s in &stabs.generators {
            assert!(stabs.contains(&all.conjugate(s).unwrap()));
        }
        for p in mixed_pairs(&enc).unwrap() {
            assert_eq!(lightest_image(&all, &p, &stabs.generators).unwrap().weight(), 2);
        }
    }

    #[test]
    fn transformed_two_body_terms_have_weight_four() {
        let h = FermionHamiltonian::rotor(2, 3, 1.0, 0.0).unwrap();
        let enc = rotor_encoding(2, 3).unwrap();
        let terms = enc.map_hamiltonian(&h, &mut Realization::MinWeight).unwrap().terms;
        let layer = on_every_mode(&enc, &search_template(&enc).unwrap());
        for (p, _) in terms.iter() {
            let w = p.weight().min(lightest_image(&layer, p, &enc.stabilizers().generators).unwrap().weight());
            assert!(w <= 4, "{p} keeps weight {w}");
        }
    }

    #[test]
    fn lightened_terms_act_as_the_originals() {
        let h = FermionHamiltonian::rotor(2, 3, 1.0, 0.0).unwrap();
        let enc = rotor_encoding(2, 3).unwrap();
        let stabs = enc.stabilizers();
        let terms = enc.map_hamiltonian(&h, &mut Realization::MinWeight).unwrap().terms;
        let layer = on_every_mode(&enc, &search_template(&enc).unwrap());
        let back = layer.inverse();
        for (p, _) in terms.iter() {
            let img = lightest_image(&layer, p, &stabs.generators).unwrap();
            let diff = &back.conjugate(&img).unwrap() * p;
            assert!(diff.is_identity() && diff.phase() == 0 || stabs.contains(&diff), "{p}");
        }
    }

    #[test]
    fn one_particle_per_rotor() {
        let enc = rotor_encoding(2, 3).unwrap();
        let occ = [false, true, false, false, false, true];
        assert!(crate::circuits::encode_state(&enc, &occ).is_ok());
    }

    #[test]
    fn jw_encoding_rejected() {
        let enc = Encoding::build(&InteractionGraph::build(&GraphKind::Line(3)).unwrap(), Family::JwChain).unwrap();
        assert!(matches!(rotor_mode_transform(&enc, 0), Err(Error::WrongEncoding(_))));
    }
}
