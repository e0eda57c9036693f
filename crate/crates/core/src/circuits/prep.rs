use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::encoder::Encoding;
use crate::error::{Error, Result};
use crate::gf2::{symplectic, Gf2Basis};
use crate::pauli::PauliTerm;
use crate::tableau::{canonical_stabilizers, complete_generators, synthesize_prep, synthesize_state, Circuit};

/// Prepares the codespace state with `⟨B_v⟩ = (−1)^{n_v}`.
pub fn encode_state(enc: &Encoding, occupation: &[bool]) -> Result<Circuit> {
    let nv = enc.graph().n_vertices();
    if occupation.len() != nv {
        return Err(Error::Dimension(format!("{} occupations for {nv} modes", occupation.len())));
    }
    let mut constraints: Vec<(PauliTerm, Option<i8>)> = enc.stabilizers().generators.iter().map(|s| (s.clone(), Some(1))).collect();
    for (v, &occ) in occupation.iter().enumerate() {
        constraints.push((enc.vertex_operator(v), Some(if occ { -1 } else { 1 })));
    }
    let rows = signed_rows(enc.n_qubits(), &constraints, &mut ChaCha8Rng::seed_from_u64(0))?;
    synthesize_state(&complete_generators(enc.n_qubits(), &rows)?)
}

/// Sequentially imposes `±p` (the sign drawn from `rng` when not given),
/// keeping the independent rows. A constraint already fixed to the other
/// sign is an inconsistency; an undetermined one is a fresh row.
fn signed_rows<R: rand::Rng>(n: usize, constraints: &[(PauliTerm, Option<i8>)], rng: &mut R) -> Result<Vec<PauliTerm>> {
    let mut basis = Gf2Basis::new();
    let mut by_tag: Vec<Option<PauliTerm>> = Vec::new();
    let mut rows = Vec::new();
    for (p, value) in constraints {
        if p.n_qubits() != n {
            return Err(Error::Dimension(format!("{} on {n} qubits", p)));
        }
        if p.is_identity() {
            continue;
        }
        if let Some(r) = rows.iter().find(|r: &&PauliTerm| !r.commutes(p)) {
            return Err(Error::NonCommuting(format!("{p} and {r}")));
        }
        let v = symplectic(p);
        if let Some(idx) = basis.express(&v) {
            let mut acc = PauliTerm::identity(n);
            for k in idx {
                acc = &acc * by_tag[k].as_ref().expect("only independent rows appear in a combination");
            }
            let fixed = if acc == *p { 1 } else { -1 };
            if value.is_some_and(|w| w != fixed) {
                return Err(Error::InconsistentConstraints(format!("{p} is fixed to {fixed}")));
            }
            continue;
        }
        basis.insert(v);
        let sign = value.unwrap_or_else(|| if rng.random::<bool>() { 1 } else { -1 });
        let row = if sign == 1 { p.clone() } else { p.clone().negated() };
        by_tag.push(Some(row.clone()));
        rows.push(row);
    }
    Ok(rows)
}

/// A Clifford that sends a commuting term group and every stabilizer to
/// Z-only strings.
#[derive(Clone, Debug, Serialize)]
pub struct RotationMeasurement {
    #[serde(skip)]
    pub circuit: Circuit,
    /// Image of each group term, in input order, sign included.
    #[serde(skip)]
    pub z_images: Vec<PauliTerm>,
    #[serde(skip)]
    pub stab_images: Vec<PauliTerm>,
    /// Group images sharing support with some stabilizer image.
    pub overlap: usize,
}

fn check_group(stabs: &[PauliTerm], group: &[PauliTerm]) -> Result<()> {
    for (i, p) in group.iter().enumerate() {
        if p.phase() % 2 == 1 {
            return Err(Error::NonHermitian(format!("group term {p}")));
        }
        if let Some(q) = group[..i].iter().find(|q| !q.commutes(p)) {
            return Err(Error::NonCommuting(format!("{p} and {q}")));
        }
        if let Some(s) = stabs.iter().find(|s| !s.commutes(p)) {
            return Err(Error::NotLogical(format!("{p} anticommutes with stabilizer {s}")));
        }
    }
    Ok(())
}

pub fn support_overlap(images: &[PauliTerm], stab_images: &[PauliTerm]) -> usize {
    images.iter().filter(|p| stab_images.iter().any(|s| s.overlaps(p))).count()
}

fn images_through(
    circuit: Circuit,
    group: &[PauliTerm],
    stabs: &[PauliTerm],
) -> Result<RotationMeasurement> {
    let image = |p: &PauliTerm| -> Result<PauliTerm> {
        let z = circuit.conjugate(p)?;
        if !z.is_z_only() {
            return Err(Error::NotLogical(format!("{p} maps to {z}, not a Z string")));
        }
        Ok(z)
    };
    let z_images = group.iter().map(image).collect::<Result<Vec<_>>>()?;
    let stab_images = stabs.iter().map(image).collect::<Result<Vec<_>>>()?;
    let overlap = support_overlap(&z_images, &stab_images);
    Ok(RotationMeasurement { circuit, z_images, stab_images, overlap })
}

/// Starts in the codespace, measures the group terms and then the
/// stabilizers, and returns the inverse of the resulting state's
/// preparation circuit. Stabilizer images keep their weight wherever the
/// row-reduced state allows it.
pub fn rotation_measurement(enc: &Encoding, group: &[PauliTerm]) -> Result<RotationMeasurement> {
    rotation_measurement_with(enc.n_qubits(), &enc.stabilizers().generators, group)
}

pub fn rotation_measurement_with(n: usize, stabs: &[PauliTerm], group: &[PauliTerm]) -> Result<RotationMeasurement> {
    check_group(stabs, group)?;
    let mut constraints: Vec<(PauliTerm, Option<i8>)> = stabs.iter().map(|s| (s.clone(), Some(1))).collect();
    constraints.extend(group.iter().map(|p| (p.clone(), None)));
    let rows = signed_rows(n, &constraints, &mut ChaCha8Rng::seed_from_u64(0))?;
    let rows = canonical_stabilizers(&complete_generators(n, &rows)?);
    let circuit = synthesize_prep(&rows)?.inverse();
    images_through(circuit, group, stabs)
}

/// Baseline: the stabilizers and then the independent group terms become
/// `Z_0, Z_1, …` directly.
pub fn naive_rotation(n: usize, stabs: &[PauliTerm], group: &[PauliTerm]) -> Result<RotationMeasurement> {
    check_group(stabs, group)?;
    let mut basis = Gf2Basis::new();
    let mut rows = Vec::new();
    for p in stabs.iter().chain(group) {
        if !p.is_identity() && basis.insert(symplectic(p)) {
            rows.push(p.unsigned());
        }
    }
    let rows = complete_generators(n, &rows)?;
    let circuit = synthesize_prep(&rows)?.inverse();
    images_through(circuit, group, stabs)
}
