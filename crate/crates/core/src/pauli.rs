//! Phase-tracked Pauli strings in symplectic form and weighted sums of them.
//!
//! A [`PauliTerm`] stores one X-bit and one Z-bit per qubit packed into `u64`
//! words plus a phase exponent `k` meaning an overall factor `i^k`. The letter
//! at a qubit is `I`, `X`, `Z` or `Y` for `(x, z)` equal to `(0,0)`, `(1,0)`,
//! `(0,1)` and `(1,1)`. `Y` is a genuine Pauli letter, not `XZ`.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// The four powers of `i` as complex numbers.
pub fn i_pow(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliTerm {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliTerm {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliTerm { n, x: vec![0; w], z: vec![0; w], phase: 0 }
    }

    /// A single letter (`'I'`, `'X'`, `'Y'`, `'Z'`) on qubit `q`.
    pub fn single(n: usize, q: usize, letter: char) -> Self {
        let mut p = Self::identity(n);
        p.set_letter(q, letter);
        p
    }

    pub fn from_bits(n: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Self {
        assert_eq!(x.len(), words_for(n));
        assert_eq!(z.len(), words_for(n));
        let mut p = PauliTerm { n, x, z, phase: phase & 3 };
        p.mask_tail();
        p
    }

    /// Builds a term from `(qubit, letter)` pairs.
    pub fn from_sparse(n: usize, letters: &[(usize, char)]) -> Self {
        let mut p = Self::identity(n);
        for &(q, c) in letters {
            p.set_letter(q, c);
        }
        p
    }

    fn mask_tail(&mut self) {
        let r = self.n % 64;
        if r != 0 {
            let m = (1u64 << r) - 1;
            if let Some(w) = self.x.last_mut() {
                *w &= m;
            }
            if let Some(w) = self.z.last_mut() {
                *w &= m;
            }
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q >> 6] >> (q & 63)) & 1 == 1
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q >> 6] >> (q & 63)) & 1 == 1
    }

    #[inline]
    pub fn set_bits(&mut self, q: usize, x: bool, z: bool) {
        let (w, b) = (q >> 6, 1u64 << (q & 63));
        if x {
            self.x[w] |= b;
        } else {
            self.x[w] &= !b;
        }
        if z {
            self.z[w] |= b;
        } else {
            self.z[w] &= !b;
        }
    }

    pub fn letter(&self, q: usize) -> char {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    pub fn set_letter(&mut self, q: usize, c: char) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (x, z) = match c {
            'I' => (false, false),
            'X' => (true, false),
            'Z' => (false, true),
            'Y' => (true, true),
            _ => panic!("bad Pauli letter {c}"),
        };
        self.set_bits(q, x, z);
    }

    pub fn with_phase(mut self, k: u8) -> Self {
        self.phase = k & 3;
        self
    }

    /// Multiplies the overall factor by `i^k`.
    pub fn times_i_pow(mut self, k: u8) -> Self {
        self.phase = (self.phase + k) & 3;
        self
    }

    /// In-place version of [`PauliTerm::times_i_pow`].
    #[inline]
    pub fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    pub fn negated(self) -> Self {
        self.times_i_pow(2)
    }

    /// The same letters with phase `+1`.
    pub fn unsigned(&self) -> Self {
        let mut p = self.clone();
        p.phase = 0;
        p
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// Hermitian iff the overall factor is real.
    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    pub fn is_z_only(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.x_bit(q) || self.z_bit(q)).collect()
    }

    /// Bitmask words of the support.
    pub fn support_words(&self) -> Vec<u64> {
        self.x.iter().zip(&self.z).map(|(a, b)| a | b).collect()
    }

    pub fn overlaps(&self, other: &PauliTerm) -> bool {
        self.x
            .iter()
            .zip(&self.z)
            .zip(other.x.iter().zip(&other.z))
            .any(|((a, b), (c, d))| (a | b) & (c | d) != 0)
    }

    /// Same letters, ignoring phase.
    pub fn same_letters(&self, other: &PauliTerm) -> bool {
        self.x == other.x && self.z == other.z
    }

    fn check_width(&self, other: &PauliTerm) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "Pauli widths differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn try_mul(&self, other: &PauliTerm) -> Result<PauliTerm> {
        self.check_width(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliTerm) -> PauliTerm {
        // letter = i^{xz} X^x Z^z, so the product picks up
        // |x1 z1| + |x2 z2| + 2|z1 x2| - |x3 z3| powers of i
        let mut acc: i64 = self.phase as i64 + other.phase as i64;
        let w = self.x.len();
        let mut x = vec![0u64; w];
        let mut z = vec![0u64; w];
        for k in 0..w {
            let (x1, z1, x2, z2) = (self.x[k], self.z[k], other.x[k], other.z[k]);
            let (x3, z3) = (x1 ^ x2, z1 ^ z2);
            acc += (x1 & z1).count_ones() as i64;
            acc += (x2 & z2).count_ones() as i64;
            acc += 2 * (z1 & x2).count_ones() as i64;
            acc -= (x3 & z3).count_ones() as i64;
            x[k] = x3;
            z[k] = z3;
        }
        PauliTerm { n: self.n, x, z, phase: acc.rem_euclid(4) as u8 }
    }

    pub fn try_commutes(&self, other: &PauliTerm) -> Result<bool> {
        self.check_width(other)?;
        Ok(self.commutes_unchecked(other))
    }

    /// Symplectic inner product is zero. Panics on width mismatch.
    pub fn commutes(&self, other: &PauliTerm) -> bool {
        assert_eq!(self.n, other.n, "Pauli widths differ");
        self.commutes_unchecked(other)
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &PauliTerm) -> bool {
        let mut par = 0u32;
        for k in 0..self.x.len() {
            par ^= ((self.x[k] & other.z[k]) ^ (self.z[k] & other.x[k])).count_ones() & 1;
        }
        par == 0
    }

    /// Restriction of the letters to `qubits` (in that order); phase kept.
    pub fn restrict(&self, qubits: &[usize]) -> PauliTerm {
        let mut p = PauliTerm::identity(qubits.len());
        for (k, &q) in qubits.iter().enumerate() {
            p.set_bits(k, self.x_bit(q), self.z_bit(q));
        }
        p.phase = self.phase;
        p
    }

    /// Places this term on `n` qubits starting at `offset`.
    pub fn embed(&self, n: usize, offset: usize) -> PauliTerm {
        let mut p = PauliTerm::identity(n);
        for q in 0..self.n {
            p.set_bits(q + offset, self.x_bit(q), self.z_bit(q));
        }
        p.phase = self.phase;
        p
    }

    /// The adjoint: letters are Hermitian, so only the phase conjugates.
    pub fn adjoint(&self) -> PauliTerm {
        let mut p = self.clone();
        p.phase = (4 - p.phase) & 3;
        p
    }

    /// Letters only, qubit 0 leftmost.
    pub fn letters(&self) -> String {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    /// Compact form such as `-X0Z1X2`, handy in messages.
    pub fn sparse_string(&self) -> String {
        let mut s = String::from(match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        });
        if self.is_identity() {
            s.push('I');
        }
        for q in self.support() {
            s.push(self.letter(q));
            s.push_str(&q.to_string());
        }
        s
    }

    /// Lexicographic key on (z bits, x bits) used for sorted output.
    pub fn sort_key(&self) -> (Vec<u64>, Vec<u64>) {
        (
            self.z.iter().rev().copied().collect(),
            self.x.iter().rev().copied().collect(),
        )
    }
}

impl std::ops::Mul for &PauliTerm {
    type Output = PauliTerm;
    fn mul(self, rhs: &PauliTerm) -> PauliTerm {
        assert_eq!(self.n, rhs.n, "Pauli widths differ");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{pre}{}", self.letters())
    }
}

impl fmt::Debug for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliTerm({self})")
    }
}

impl FromStr for PauliTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.replace('\u{2212}', "-");
        let mut rest = s.as_str();
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase = (phase + 1) & 3;
            rest = r;
        }
        if rest.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string in {s:?}")));
        }
        let mut p = PauliTerm::identity(rest.chars().count());
        for (q, c) in rest.chars().enumerate() {
            match c {
                'I' | 'X' | 'Y' | 'Z' => p.set_letter(q, c),
                _ => return Err(Error::Parse(format!("illegal character {c:?} in {s:?}"))),
            }
        }
        p.phase = phase;
        Ok(p)
    }
}

/// Shorthand for parsing a literal in tests and examples. Panics on bad input.
pub fn pauli(s: &str) -> PauliTerm {
    s.parse().expect("valid Pauli literal")
}

/// Weighted sum of Pauli strings with complex coefficients.
///
/// Stored terms always carry phase `+1`; any phase of an inserted term is
/// folded into its coefficient. Entries keep insertion order, which is what
/// circuit synthesis consumes; [`WeightedPauliSum::sorted`] gives the
/// canonical lexicographic order used for files.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPauliSum {
    n: usize,
    terms: IndexMap<PauliTerm, Complex64>,
}

pub const DROP_TOL: f64 = 1e-12;

impl WeightedPauliSum {
    pub fn new(n: usize) -> Self {
        WeightedPauliSum { n, terms: IndexMap::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, coef: Complex64, term: &PauliTerm) {
        assert_eq!(term.n_qubits(), self.n, "term width differs from sum width");
        let c = coef * i_pow(term.phase());
        *self.terms.entry(term.unsigned()).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn add_real(&mut self, coef: f64, term: &PauliTerm) {
        self.add(Complex64::new(coef, 0.0), term);
    }

    pub fn add_sum(&mut self, other: &WeightedPauliSum, scale: Complex64) {
        for (t, c) in other.iter() {
            self.add(c * scale, t);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliTerm, Complex64)> {
        self.terms.iter().map(|(t, c)| (t, *c))
    }

    pub fn coefficient(&self, term: &PauliTerm) -> Complex64 {
        let c = self.terms.get(&term.unsigned()).copied().unwrap_or_default();
        c * i_pow((4 - term.phase()) & 3)
    }

    /// Drops entries with `|c| < tol`, preserving order.
    pub fn pruned(&self, tol: f64) -> WeightedPauliSum {
        let terms = self.terms.iter().filter(|(_, c)| c.norm() >= tol).map(|(t, c)| (t.clone(), *c)).collect();
        WeightedPauliSum { n: self.n, terms }
    }

    /// Lexicographic order on (z bits, x bits).
    pub fn sorted(&self) -> WeightedPauliSum {
        let mut v: Vec<_> = self.terms.iter().map(|(t, c)| (t.clone(), *c)).collect();
        v.sort_by_key(|(t, _)| t.sort_key());
        WeightedPauliSum { n: self.n, terms: v.into_iter().collect() }
    }

    /// Removes the identity component and returns its coefficient.
    pub fn take_identity(&mut self) -> Complex64 {
        let id = PauliTerm::identity(self.n);
        self.terms.shift_remove(&id).unwrap_or_default()
    }

    pub fn identity_coefficient(&self) -> Complex64 {
        self.coefficient(&PauliTerm::identity(self.n))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    pub fn adjoint(&self) -> WeightedPauliSum {
        let terms = self.terms.iter().map(|(t, c)| (t.clone(), c.conj())).collect();
        WeightedPauliSum { n: self.n, terms }
    }

    pub fn scaled(&self, s: Complex64) -> WeightedPauliSum {
        let terms = self.terms.iter().map(|(t, c)| (t.clone(), c * s)).collect();
        WeightedPauliSum { n: self.n, terms }
    }

    /// Operator product of two sums.
    pub fn product(&self, other: &WeightedPauliSum) -> WeightedPauliSum {
        let mut out = WeightedPauliSum::new(self.n);
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add(ca * cb, &(a * b));
            }
        }
        out
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(|t| t.weight()).max().unwrap_or(0)
    }

    /// Mean weight over non-identity terms.
    pub fn avg_weight(&self) -> f64 {
        let ws: Vec<usize> = self.terms.keys().filter(|t| !t.is_identity()).map(|t| t.weight()).collect();
        if ws.is_empty() {
            0.0
        } else {
            ws.iter().sum::<usize>() as f64 / ws.len() as f64
        }
    }

    /// Text format: one `<re> <im> <letters>` line per term.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (t, c) in self.iter() {
            s.push_str(&format!("{:.17e} {:.17e} {}\n", c.re, c.im, t.letters()));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<WeightedPauliSum> {
        let mut out: Option<WeightedPauliSum> = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ctx = |m: String| Error::Parse(format!("line {}: {m}", lineno + 1));
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(ctx(format!("expected `<re> <im> <string>`, got {line:?}")));
            }
            let re: f64 = parts[0].parse().map_err(|e| ctx(format!("{e}")))?;
            let im: f64 = parts[1].parse().map_err(|e| ctx(format!("{e}")))?;
            let t: PauliTerm = parts[2].parse().map_err(|e: Error| ctx(e.to_string()))?;
            let sum = out.get_or_insert_with(|| WeightedPauliSum::new(t.n_qubits()));
            if t.n_qubits() != sum.n {
                return Err(ctx(format!("width {} differs from {}", t.n_qubits(), sum.n)));
            }
            sum.add(Complex64::new(re, im), &t);
        }
        out.ok_or_else(|| Error::Parse("no terms".into()))
    }
}

impl FromIterator<(Complex64, PauliTerm)> for WeightedPauliSum {
    fn from_iter<I: IntoIterator<Item = (Complex64, PauliTerm)>>(iter: I) -> Self {
        let mut it = iter.into_iter().peekable();
        let n = it.peek().map(|(_, t)| t.n_qubits()).unwrap_or(0);
        let mut s = WeightedPauliSum::new(n);
        for (c, t) in it {
            s.add(c, &t);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xz_is_minus_i_y() {
        let p = &pauli("X") * &pauli("Z");
        assert_eq!(p, pauli("-iY"));
    }

    #[test]
    fn involution() {
        let a = pauli("XY");
        assert_eq!(&a * &a, PauliTerm::identity(2));
    }

    #[test]
    fn letter_products() {
        assert_eq!(&pauli("Y") * &pauli("Z"), pauli("iX"));
        assert_eq!(&pauli("Z") * &pauli("Y"), pauli("-iX"));
        assert_eq!(&pauli("X") * &pauli("Y"), pauli("iZ"));
        assert_eq!(&pauli("Y") * &pauli("X"), pauli("-iZ"));
        assert_eq!(&pauli("Z") * &pauli("X"), pauli("iY"));
    }

    #[test]
    fn commutation_basics() {
        assert!(pauli("XI").commutes(&pauli("IZ")));
        assert!(!pauli("X").commutes(&pauli("Z")));
        assert!(pauli("XX").commutes(&pauli("ZZ")));
    }

    #[test]
    fn width_mismatch_is_error() {
        assert!(matches!(pauli("X").try_mul(&pauli("XX")), Err(Error::Dimension(_))));
        assert!(pauli("X").try_commutes(&pauli("XX")).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(pauli("-ZIZIII").weight(), 2);
        assert_eq!(PauliTerm::identity(38).weight(), 0);
    }

    #[test]
    fn roundtrip_format() {
        for s in ["iXYZI", "-iZ", "-XX", "IIII"] {
            assert_eq!(pauli(s).to_string(), s);
        }
        assert_eq!(pauli("+XY").to_string(), "XY");
        assert_eq!(pauli("\u{2212}ZIZ").to_string(), "-ZIZ");
        assert!("XQ".parse::<PauliTerm>().is_err());
    }

    #[test]
    fn wide_terms_cross_word_boundary() {
        let mut a = PauliTerm::identity(130);
        a.set_letter(0, 'X');
        a.set_letter(64, 'Y');
        a.set_letter(129, 'Z');
        let mut b = PauliTerm::identity(130);
        b.set_letter(64, 'Z');
        b.set_letter(129, 'X');
        let ab = &a * &b;
        let ba = &b * &a;
        assert!(a.commutes(&b));
        assert_eq!(ab, ba);
        assert_eq!(ab.letter(64), 'X');
        assert_eq!(ab.letter(129), 'Y');
    }

    #[test]
    fn sum_folds_phases_and_combines() {
        let mut s = WeightedPauliSum::new(2);
        s.add_real(1.0, &pauli("-XY"));
        s.add_real(3.0, &pauli("XY"));
        s.add_real(0.5, &pauli("iZZ"));
        assert_eq!(s.len(), 2);
        assert_eq!(s.coefficient(&pauli("XY")), Complex64::new(2.0, 0.0));
        assert_eq!(s.coefficient(&pauli("ZZ")), Complex64::new(0.0, 0.5));
        assert!(!s.is_hermitian(1e-12));
    }

    #[test]
    fn sum_text_roundtrip() {
        let mut s = WeightedPauliSum::new(3);
        s.add_real(0.25, &pauli("XIZ"));
        s.add(Complex64::new(-1.5, 0.125), &pauli("YYI"));
        let back = WeightedPauliSum::from_text(&format!("# header\n\n{}", s.to_text())).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn sorted_is_lexicographic_on_z_then_x() {
        let mut s = WeightedPauliSum::new(2);
        for t in ["ZZ", "XI", "IZ", "YI"] {
            s.add_real(1.0, &pauli(t));
        }
        let order: Vec<String> = s.sorted().iter().map(|(t, _)| t.letters()).collect();
        assert_eq!(order, vec!["XI", "YI", "IZ", "ZZ"]);
    }
}
