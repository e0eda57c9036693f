//! Brute-force oracles: Pauli sums and fermionic Hamiltonians as dense
//! matrices, and spectra restricted to a codespace or to parity sectors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fermion::FermionHamiltonian;
use crate::pauli::{i_pow, PauliTerm, WeightedPauliSum};

pub const MAX_DENSE_QUBITS: usize = 14;
pub const MAX_DENSE_MODES: usize = 12;

fn masks(p: &PauliTerm) -> (u64, u64, u8) {
    let (x, z) = (p.x_words()[0], p.z_words()[0]);
    let ys = (x & z).count_ones() as u8;
    (x, z, (p.phase() + ys) & 3)
}

/// `P |ψ⟩` accumulated into `out` with weight `c`.
pub fn apply_pauli_into(p: &PauliTerm, c: Complex64, psi: &[Complex64], out: &mut [Complex64]) {
    let (x, z, ph) = masks(p);
    let f = c * i_pow(ph);
    for (b, a) in psi.iter().enumerate() {
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        let s = if (b as u64 & z).count_ones() % 2 == 1 { -f } else { f };
        out[(b as u64 ^ x) as usize] += s * a;
    }
}

pub fn apply_sum(h: &WeightedPauliSum, psi: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); psi.len()];
    for (p, c) in h.iter() {
        apply_pauli_into(p, c, psi, &mut out);
    }
    out
}

fn guard_qubits(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::ResourceGuard(format!("{n} qubits exceed the dense limit of {MAX_DENSE_QUBITS}")));
    }
    Ok(())
}

pub fn dense_pauli_matrix(h: &WeightedPauliSum) -> Result<DMatrix<Complex64>> {
    let n = h.n_qubits();
    guard_qubits(n)?;
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for (p, c) in h.iter() {
        let (x, z, ph) = masks(p);
        let f = c * i_pow(ph);
        for b in 0..dim {
            let s = if (b as u64 & z).count_ones() % 2 == 1 { -f } else { f };
            m[((b as u64 ^ x) as usize, b)] += s;
        }
    }
    Ok(m)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn project(stabs: &[PauliTerm], v: &mut Vec<Complex64>) {
    for s in stabs {
        let mut w = v.clone();
        apply_pauli_into(s, Complex64::new(1.0, 0.0), v, &mut w);
        for (a, b) in v.iter_mut().zip(&w) {
            *a = b * 0.5;
        }
    }
}

/// Orthonormal basis of the joint +1 eigenspace of `stabs`, from projected
/// random vectors.
pub fn codespace_basis(n: usize, stabs: &[PauliTerm], seed: u64) -> Result<Vec<Vec<Complex64>>> {
    guard_qubits(n)?;
    let dim = 1usize << n;
    let mut rank_basis = crate::gf2::Gf2Basis::new();
    for s in stabs {
        rank_basis.insert(crate::gf2::symplectic(s));
    }
    let target = 1usize << (n - rank_basis.rank());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(target);
    let mut attempts = 0;
    while basis.len() < target {
        attempts += 1;
        if attempts > 4 * target + 16 {
            return Err(Error::InconsistentConstraints("stabilizers have no common +1 eigenspace".into()));
        }
        let mut v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        project(stabs, &mut v);
        for _ in 0..2 {
            for b in &basis {
                let ov: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (y, x) in v.iter_mut().zip(b) {
                    *y -= ov * x;
                }
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for a in &mut v {
                *a /= norm;
            }
            basis.push(v);
        }
    }
    Ok(basis)
}

/// Eigenvalues of `h` compressed to the joint +1 eigenspace of `stabs`.
pub fn spectrum_in_codespace(h: &WeightedPauliSum, stabs: &[PauliTerm]) -> Result<Vec<f64>> {
    let basis = codespace_basis(h.n_qubits(), stabs, 7)?;
    let d = basis.len();
    let images: Vec<Vec<Complex64>> = basis.iter().map(|b| apply_sum(h, b)).collect();
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = basis[i].iter().zip(&images[j]).map(|(a, b)| a.conj() * b).sum();
        }
    }
    Ok(hermitian_eigenvalues(m))
}

/// Sign and target of `a†_p` / `a_p` on an occupation bitstring; modes are
/// ordered by global index.
fn ladder(state: u64, p: usize, create: bool) -> Option<(f64, u64)> {
    let occ = (state >> p) & 1 == 1;
    if occ == create {
        return None;
    }
    let below = (state & ((1u64 << p) - 1)).count_ones();
    Some((if below % 2 == 0 { 1.0 } else { -1.0 }, state ^ (1 << p)))
}

/// Applies `∏ ops` right to left: `ops = [(mode, create)]` in written order.
fn apply_string(state: u64, ops: &[(usize, bool)]) -> Option<(f64, u64)> {
    let mut s = state;
    let mut sign = 1.0;
    for &(p, c) in ops.iter().rev() {
        let (f, t) = ladder(s, p, c)?;
        sign *= f;
        s = t;
    }
    Some((sign, s))
}

/// Entries of `H` on Fock states: `(row, col, value)`.
fn fock_entries(h: &FermionHamiltonian, states: &[u64]) -> Vec<(u64, u64, f64)> {
    let m = h.modes_per_sector();
    let mut out = Vec::new();
    for &b in states {
        out.push((b, b, h.constant));
        for ((s, i, j), v) in h.one_body() {
            if let Some((f, t)) = apply_string(b, &[(s * m + i, true), (s * m + j, false)]) {
                out.push((t, b, f * v));
            }
        }
        for ((s, s2, i, j, k, l), v) in h.two_body() {
            let ops = [(s * m + i, true), (s * m + j, false), (s2 * m + k, true), (s2 * m + l, false)];
            if let Some((f, t)) = apply_string(b, &ops) {
                out.push((t, b, f * v));
            }
        }
    }
    out
}

pub fn dense_fermion_matrix(h: &FermionHamiltonian) -> Result<DMatrix<f64>> {
    let n = h.n_modes();
    if n > MAX_DENSE_MODES {
        return Err(Error::ResourceGuard(format!("{n} modes exceed the dense limit of {MAX_DENSE_MODES}")));
    }
    let dim = 1usize << n;
    let states: Vec<u64> = (0..dim as u64).collect();
    let mut mat = DMatrix::zeros(dim, dim);
    for (r, c, v) in fock_entries(h, &states) {
        mat[(r as usize, c as usize)] += v;
    }
    Ok(mat)
}

/// Spectrum of `h` on Fock states whose occupation parity over each listed
/// mode set matches (`true` = odd).
pub fn fermion_spectrum(h: &FermionHamiltonian, parities: &[(Vec<usize>, bool)]) -> Result<Vec<f64>> {
    let n = h.n_modes();
    if n > MAX_DENSE_MODES {
        return Err(Error::ResourceGuard(format!("{n} modes exceed the dense limit of {MAX_DENSE_MODES}")));
    }
    let states: Vec<u64> = (0..1u64 << n)
        .filter(|&b| parities.iter().all(|(modes, odd)| modes.iter().filter(|&&q| (b >> q) & 1 == 1).count() % 2 == *odd as usize))
        .collect();
    let index: std::collections::HashMap<u64, usize> = states.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let d = states.len();
    let mut mat = DMatrix::<f64>::zeros(d, d);
    for (r, c, v) in fock_entries(h, &states) {
        let Some(&ri) = index.get(&r) else {
            return Err(Error::InvalidParams("Hamiltonian mixes the requested parity sectors".into()));
        };
        mat[(ri, index[&c])] += v;
    }
    let mut v: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(v)
}

/// Energy of an occupation-number basis state.
pub fn fock_energy(h: &FermionHamiltonian, occupation: &[bool]) -> f64 {
    let b = occupation.iter().enumerate().fold(0u64, |acc, (q, &o)| acc | ((o as u64) << q));
    fock_entries(h, &[b]).into_iter().filter(|(r, _, _)| *r == b).map(|(_, _, v)| v).sum()
}

/// `⟨ψ|H|ψ⟩` for a normalized vector.
pub fn expectation(h: &WeightedPauliSum, psi: &[Complex64]) -> f64 {
    let hp = apply_sum(h, psi);
    psi.iter().zip(&hp).map(|(a, b)| (a.conj() * b).re).sum()
}

pub fn to_dvector(v: &[Complex64]) -> DVector<Complex64> {
    DVector::from_column_slice(v)
}
