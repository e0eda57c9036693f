//! Second-quantized Hamiltonians in chemist ordering and their Majorana form.
//!
//! Mode `i` of sector `σ` has global index `σ·M + i`. Majoranas follow
//! `c_{2g} = a†_g + a_g`, `c_{2g+1} = i(a†_g − a_g)` so that
//! `B_g = −i c_{2g} c_{2g+1} = 1 − 2 n_g`.

use std::collections::BTreeMap;
use std::path::Path;

use indexmap::IndexMap;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-10;

type OneKey = (usize, usize, usize);
type TwoKey = (usize, usize, usize, usize, usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct FermionHamiltonian {
    m: usize,
    sectors: usize,
    pub constant: f64,
    one_body: IndexMap<OneKey, f64>,
    two_body: IndexMap<TwoKey, f64>,
}

/// `coefficient · Π a†_{σ,i} a_{σ,j}` over the listed factors.
#[derive(Clone, Debug, PartialEq)]
pub struct HopTerm {
    pub coefficient: Complex64,
    pub factors: Vec<(usize, usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianFile {
    #[serde(rename = "M")]
    m: usize,
    sectors: usize,
    #[serde(default)]
    constant: f64,
    #[serde(default)]
    h: Vec<Vec<f64>>,
    #[serde(default, rename = "V")]
    v: Vec<Vec<f64>>,
}

fn as_index(x: f64, what: &str) -> Result<usize> {
    if x < 0.0 || x.fract() != 0.0 || !x.is_finite() {
        return Err(Error::Schema(format!("{what} must be a non-negative integer, got {x}")));
    }
    Ok(x as usize)
}

impl FermionHamiltonian {
    pub fn new(m: usize, sectors: usize) -> Result<Self> {
        if m == 0 || !(1..=2).contains(&sectors) {
            return Err(Error::InvalidParams(format!("M={m}, sectors={sectors}")));
        }
        Ok(FermionHamiltonian { m, sectors, constant: 0.0, one_body: IndexMap::new(), two_body: IndexMap::new() })
    }

    pub fn modes_per_sector(&self) -> usize {
        self.m
    }

    pub fn n_sectors(&self) -> usize {
        self.sectors
    }

    pub fn n_modes(&self) -> usize {
        self.m * self.sectors
    }

    pub fn one_body(&self) -> impl Iterator<Item = ((usize, usize, usize), f64)> + '_ {
        self.one_body.iter().map(|(k, v)| (*k, *v))
    }

    pub fn two_body(&self) -> impl Iterator<Item = (TwoKey, f64)> + '_ {
        self.two_body.iter().map(|(k, v)| (*k, *v))
    }

    fn check_mode(&self, s: usize, i: usize) -> Result<()> {
        if s >= self.sectors || i >= self.m {
            return Err(Error::IndexOutOfRange(format!(
                "sector {s}, mode {i} (sectors={}, M={})",
                self.sectors, self.m
            )));
        }
        Ok(())
    }

    /// Every coefficient, the constant included, times `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let mut out = self.clone();
        out.constant *= k;
        out.one_body.values_mut().for_each(|v| *v *= k);
        out.two_body.values_mut().for_each(|v| *v *= k);
        out
    }

    /// Adds `val · a†_{σ,i} a_{σ,j}`.
    pub fn add_one_body(&mut self, s: usize, i: usize, j: usize, val: f64) -> Result<()> {
        self.check_mode(s, i)?;
        self.check_mode(s, j)?;
        *self.one_body.entry((s, i, j)).or_insert(0.0) += val;
        Ok(())
    }

    /// Adds `val · a†_{σ,i} a_{σ,j} a†_{σ',k} a_{σ',l}`.
    #[allow(clippy::too_many_arguments)]
    pub fn add_two_body(&mut self, s: usize, s2: usize, i: usize, j: usize, k: usize, l: usize, val: f64) -> Result<()> {
        self.check_mode(s, i)?;
        self.check_mode(s, j)?;
        self.check_mode(s2, k)?;
        self.check_mode(s2, l)?;
        *self.two_body.entry((s, s2, i, j, k, l)).or_insert(0.0) += val;
        Ok(())
    }

    /// Symmetrizes `h_ij = h_ji` and `V_ijkl = V_jilk`, failing if any pair
    /// differs by more than the tolerance, and rejects two-body tables whose
    /// same-sector reordering leaves a non-Hermitian one-body remainder.
    pub fn enforce_hermitian(&mut self) -> Result<()> {
        let keys: Vec<OneKey> = self.one_body.keys().copied().collect();
        for (s, i, j) in keys {
            let a = self.one_body[&(s, i, j)];
            let b = self.one_body.get(&(s, j, i)).copied().unwrap_or(0.0);
            if (a - b).abs() > HERMITICITY_TOL {
                return Err(Error::Hermiticity(format!("h[{s}][{i}][{j}]={a} but h[{s}][{j}][{i}]={b}")));
            }
            let avg = 0.5 * (a + b);
            self.one_body.insert((s, i, j), avg);
            if i != j {
                self.one_body.insert((s, j, i), avg);
            }
        }
        let keys: Vec<TwoKey> = self.two_body.keys().copied().collect();
        for (s, s2, i, j, k, l) in keys {
            let a = self.two_body[&(s, s2, i, j, k, l)];
            let b = self.two_body.get(&(s, s2, j, i, l, k)).copied().unwrap_or(0.0);
            if (a - b).abs() > HERMITICITY_TOL {
                return Err(Error::Hermiticity(format!(
                    "V[{s},{s2}][{i}{j}{k}{l}]={a} but V[{s},{s2}][{j}{i}{l}{k}]={b}"
                )));
            }
            let avg = 0.5 * (a + b);
            self.two_body.insert((s, s2, i, j, k, l), avg);
            if (i, k) != (j, l) {
                self.two_body.insert((s, s2, j, i, l, k), avg);
            }
        }
        // a†_l a_k a†_j a_i differs from a†_j a_i a†_l a_k by one-body terms
        // inside a sector; those must cancel for the operator to be Hermitian.
        let mut rem: BTreeMap<OneKey, f64> = BTreeMap::new();
        for (&(s, s2, i, j, k, l), &v) in &self.two_body {
            if s != s2 {
                continue;
            }
            if k == j {
                *rem.entry((s, l, i)).or_insert(0.0) += v;
            }
            if i == l {
                *rem.entry((s, j, k)).or_insert(0.0) -= v;
            }
        }
        if let Some(((s, p, q), v)) = rem.iter().find(|(_, v)| v.abs() > HERMITICITY_TOL) {
            return Err(Error::Hermiticity(format!(
                "two-body table is not self-adjoint: reordering leaves {v} on a†[{s}][{p}] a[{s}][{q}]"
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: HamiltonianFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let mut h = FermionHamiltonian::new(f.m, f.sectors).map_err(|e| Error::Schema(e.to_string()))?;
        h.constant = f.constant;
        for row in &f.h {
            if row.len() != 4 {
                return Err(Error::Schema(format!("h entry needs [sigma,i,j,val], got {row:?}")));
            }
            let s = as_index(row[0], "sigma")?;
            let i = as_index(row[1], "i")?;
            let j = as_index(row[2], "j")?;
            h.add_one_body(s, i, j, row[3])?;
        }
        for row in &f.v {
            if row.len() != 7 {
                return Err(Error::Schema(format!("V entry needs [sigma,sigma2,i,j,k,l,val], got {row:?}")));
            }
            let idx: Vec<usize> =
                row[..6].iter().map(|&x| as_index(x, "V index")).collect::<Result<_>>()?;
            h.add_two_body(idx[0], idx[1], idx[2], idx[3], idx[4], idx[5], row[6])?;
        }
        h.enforce_hermitian()?;
        Ok(h)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Schema(m) => Error::Schema(format!("{}: {m}", path.as_ref().display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let f = HamiltonianFile {
            m: self.m,
            sectors: self.sectors,
            constant: self.constant,
            h: self.one_body.iter().map(|(&(s, i, j), &v)| vec![s as f64, i as f64, j as f64, v]).collect(),
            v: self
                .two_body
                .iter()
                .map(|(&(s, s2, i, j, k, l), &v)| vec![s as f64, s2 as f64, i as f64, j as f64, k as f64, l as f64, v])
                .collect(),
        };
        serde_json::to_string_pretty(&f).expect("serializable")
    }

    /// One hop term per nonzero integral, in table order.
    pub fn hop_expansion(&self) -> Vec<HopTerm> {
        let mut out = Vec::with_capacity(self.one_body.len() + self.two_body.len());
        for (&(s, i, j), &v) in &self.one_body {
            if v != 0.0 {
                out.push(HopTerm { coefficient: Complex64::new(v, 0.0), factors: vec![(s, i, j)] });
            }
        }
        for (&(s, s2, i, j, k, l), &v) in &self.two_body {
            if v != 0.0 {
                out.push(HopTerm { coefficient: Complex64::new(v, 0.0), factors: vec![(s, i, j), (s2, k, l)] });
            }
        }
        out
    }

    pub fn nonzero_count(&self) -> usize {
        self.one_body.values().filter(|v| **v != 0.0).count() + self.two_body.values().filter(|v| **v != 0.0).count()
    }

    /// `C − Σ m_i² n_i + (g/4) Σ_rotor pairs (3 a†_i a_{i+1} a†_k a_{k+1} + 3 h.c.
    /// − a†_i a_{i+1} a†_{k+1} a_k − h.c.)` on `N·d_m` modes in one sector.
    ///
    /// Rotor `n` owns modes `n·d_m .. (n+1)·d_m`; mode `n·d_m + t` carries
    /// angular momentum `t − (d_m−1)/2`. Couplings run over neighbouring rotor
    /// pairs `(n, n+1)` with `i` in rotor `n+1` and `k` in rotor `n`, each with
    /// its upper neighbour inside the same rotor.
    pub fn rotor(n_rotors: usize, d_m: usize, g: f64, c: f64) -> Result<Self> {
        if d_m % 2 == 0 || n_rotors == 0 || d_m == 0 {
            return Err(Error::InvalidParams(format!("rotor needs odd d_m and N ≥ 1, got N={n_rotors}, d_m={d_m}")));
        }
        let mut h = FermionHamiltonian::new(n_rotors * d_m, 1)?;
        h.constant = c;
        let half = (d_m as i64 - 1) / 2;
        for n in 0..n_rotors {
            for t in 0..d_m {
                let mi = t as i64 - half;
                let i = n * d_m + t;
                if mi != 0 {
                    h.add_one_body(0, i, i, -((mi * mi) as f64))?;
                }
            }
        }
        if g != 0.0 {
            let w = g / 4.0;
            for n in 0..n_rotors.saturating_sub(1) {
                for i in (n + 1) * d_m..(n + 2) * d_m - 1 {
                    for k in n * d_m..(n + 1) * d_m - 1 {
                        h.add_two_body(0, 0, i, i + 1, k, k + 1, 3.0 * w)?;
                        h.add_two_body(0, 0, i + 1, i, k + 1, k, 3.0 * w)?;
                        h.add_two_body(0, 0, i, i + 1, k + 1, k, -w)?;
                        h.add_two_body(0, 0, i + 1, i, k, k + 1, -w)?;
                    }
                }
            }
        }
        h.enforce_hermitian()?;
        Ok(h)
    }

    /// Random real Hamiltonian with the permutational symmetry of molecular
    /// integrals, so it is Hermitian and particle-number conserving.
    pub fn random_chemist<R: Rng>(m: usize, sectors: usize, density: f64, rng: &mut R) -> Self {
        let mut h = FermionHamiltonian::new(m, sectors).expect("valid sizes");
        h.constant = rng.random_range(-1.0..1.0);
        let mut hm = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in i..m {
                if i == j || rng.random::<f64>() < density {
                    let v = rng.random_range(-1.0..1.0);
                    hm[i][j] = v;
                    hm[j][i] = v;
                }
            }
        }
        // V_ijkl = V_jilk = V_klij = V_lkji with i<->j pair symmetry for real orbitals
        let mut v = BTreeMap::new();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let key = canonical_eri(i, j, k, l);
                        if v.contains_key(&key) {
                            continue;
                        }
                        let val = if rng.random::<f64>() < density { rng.random_range(-0.5..0.5) } else { 0.0 };
                        v.insert(key, val);
                    }
                }
            }
        }
        for s in 0..sectors {
            for i in 0..m {
                for j in 0..m {
                    if hm[i][j] != 0.0 {
                        h.add_one_body(s, i, j, hm[i][j]).unwrap();
                    }
                }
            }
        }
        for s in 0..sectors {
            for s2 in 0..sectors {
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            for l in 0..m {
                                let val = v[&canonical_eri(i, j, k, l)];
                                if val != 0.0 {
                                    h.add_two_body(s, s2, i, j, k, l, 0.5 * val).unwrap();
                                }
                            }
                        }
                    }
                }
            }
        }
        h.enforce_hermitian().expect("symmetric by construction");
        h
    }

    /// Expands into Majorana monomials; returns the identity part separately.
    pub fn to_majorana(&self) -> (Complex64, MajoranaSum) {
        let mut sum = MajoranaSum::default();
        for hop in self.hop_expansion() {
            let mut acc = MajoranaSum::scalar(hop.coefficient);
            for &(s, i, j) in &hop.factors {
                let p = s * self.m + i;
                let q = s * self.m + j;
                acc = acc.product(&hop_majorana(p, q));
            }
            sum.add_sum(&acc);
        }
        let id = sum.terms.shift_remove(&Vec::new()).unwrap_or_default();
        (id + self.constant, sum.pruned(1e-12))
    }
}

fn canonical_eri(i: usize, j: usize, k: usize, l: usize) -> (usize, usize, usize, usize) {
    let a = (i.min(j), i.max(j));
    let b = (k.min(l), k.max(l));
    let (p, q) = if a <= b { (a, b) } else { (b, a) };
    (p.0, p.1, q.0, q.1)
}

/// `a†_p a_q = (c_{2p} − i c_{2p+1})(c_{2q} + i c_{2q+1}) / 4`.
pub fn hop_majorana(p: usize, q: usize) -> MajoranaSum {
    let cp = [(2 * p as u32, Complex64::new(0.5, 0.0)), (2 * p as u32 + 1, Complex64::new(0.0, -0.5))];
    let cq = [(2 * q as u32, Complex64::new(0.5, 0.0)), (2 * q as u32 + 1, Complex64::new(0.0, 0.5))];
    let mut s = MajoranaSum::default();
    for &(a, ca) in &cp {
        for &(b, cb) in &cq {
            let (sign, mono) = mul_monomials(&[a], &[b]);
            s.add(ca * cb * sign, mono);
        }
    }
    s
}

/// Product of two normal-ordered Majorana monomials (ascending indices).
/// Returns the sign and the ordered symmetric difference.
pub fn mul_monomials(a: &[u32], b: &[u32]) -> (f64, Vec<u32>) {
    let mut swaps = 0usize;
    for &y in b {
        swaps += a.iter().filter(|&&x| x > y).count();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    (if swaps % 2 == 0 { 1.0 } else { -1.0 }, out)
}

/// Linear combination of normal-ordered Majorana monomials, insertion ordered.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MajoranaSum {
    pub terms: IndexMap<Vec<u32>, Complex64>,
}

impl MajoranaSum {
    pub fn scalar(c: Complex64) -> Self {
        let mut s = MajoranaSum::default();
        s.terms.insert(Vec::new(), c);
        s
    }

    pub fn add(&mut self, c: Complex64, mono: Vec<u32>) {
        *self.terms.entry(mono).or_default() += c;
    }

    pub fn add_sum(&mut self, other: &MajoranaSum) {
        for (m, c) in &other.terms {
            self.add(*c, m.clone());
        }
    }

    pub fn product(&self, other: &MajoranaSum) -> MajoranaSum {
        let mut out = MajoranaSum::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (s, m) = mul_monomials(a, b);
                out.add(ca * cb * s, m);
            }
        }
        out
    }

    pub fn pruned(&self, tol: f64) -> MajoranaSum {
        MajoranaSum { terms: self.terms.iter().filter(|(_, c)| c.norm() >= tol).map(|(m, c)| (m.clone(), *c)).collect() }
    }
}
