//! Row echelon bookkeeping over GF(2) with combination tracking.

use crate::pauli::PauliTerm;

/// Symplectic bit vector `[x words.., z words..]` of a Pauli term.
pub fn symplectic(p: &PauliTerm) -> Vec<u64> {
    let mut v = p.x_words().to_vec();
    v.extend_from_slice(p.z_words());
    v
}

fn xor_into(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| 64 * i + w.trailing_zeros() as usize)
}

fn bit(v: &[u64], k: usize) -> bool {
    (v[k / 64] >> (k % 64)) & 1 == 1
}

fn set_bit(v: &mut Vec<u64>, k: usize) {
    if v.len() <= k / 64 {
        v.resize(k / 64 + 1, 0);
    }
    v[k / 64] |= 1 << (k % 64);
}

/// Incrementally built basis. Every stored row remembers which inserted
/// vectors it is the sum of.
#[derive(Clone, Debug, Default)]
pub struct Gf2Basis {
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
    inserted: usize,
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors offered to `insert`, independent or not.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Adds `v` as input number `inserted()`. Returns whether it was
    /// independent of the earlier inputs.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let tag = self.inserted;
        self.inserted += 1;
        let (res, mut combo) = self.reduce(&v);
        set_bit(&mut combo, tag);
        match lowest_bit(&res) {
            Some(p) => {
                self.rows.push((p, res, combo));
                true
            }
            None => false,
        }
    }

    /// Residual of `v` after elimination and the set of inputs whose sum was
    /// removed.
    pub fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let mut r = v.to_vec();
        let mut combo = Vec::new();
        for (p, row, c) in &self.rows {
            if bit(&r, *p) {
                xor_into(&mut r, row);
                if combo.len() < c.len() {
                    combo.resize(c.len(), 0);
                }
                xor_into(&mut combo, c);
            }
        }
        (r, combo)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).0.iter().all(|&w| w == 0)
    }

    /// Indices of inputs summing to `v`, if it lies in the span.
    pub fn express(&self, v: &[u64]) -> Option<Vec<usize>> {
        let (r, combo) = self.reduce(v);
        if r.iter().any(|&w| w != 0) {
            return None;
        }
        Some((0..combo.len() * 64).filter(|&k| bit(&combo, k)).collect())
    }
}
