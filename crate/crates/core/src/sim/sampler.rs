//! Noisy shot sampling: bit-parallel Pauli frames against a tableau
//! reference for Clifford circuits, statevector trajectories otherwise.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::pauli::PauliTerm;
use crate::sim::statevector::StateVector;
use crate::tableau::{Circuit, Gate, StabilizerState};

const MAGIC: &[u8; 8] = b"GSESMP01";
const SHARD_SHOTS: usize = 64 * 128;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    /// Two-qubit depolarizing probability after every two-qubit gate.
    pub p: f64,
    /// Classical readout flip probability.
    pub readout: f64,
}

impl NoiseModel {
    pub fn new(p: f64, readout: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&readout) {
            return Err(Error::InvalidParams(format!("noise probabilities ({p}, {readout}) outside [0, 1]")));
        }
        Ok(NoiseModel { p, readout })
    }

    pub fn noiseless() -> Self {
        NoiseModel { p: 0.0, readout: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub n_columns: usize,
    pub shots: usize,
    pub seed: u64,
    pub p: f64,
    pub circuit_hash: [u8; 8],
    /// Row-major, `stride()` words per shot.
    rows: Vec<u64>,
}

pub fn circuit_hash(c: &Circuit) -> [u8; 8] {
    let d = Sha256::digest(c.to_text().as_bytes());
    let mut h = [0u8; 8];
    h.copy_from_slice(&d[..8]);
    h
}

impl SampleSet {
    pub fn empty(n_columns: usize, seed: u64, p: f64, circuit_hash: [u8; 8]) -> Self {
        SampleSet { n_columns, shots: 0, seed, p, circuit_hash, rows: Vec::new() }
    }

    pub fn stride(&self) -> usize {
        self.n_columns.div_ceil(64).max(1)
    }

    pub fn bit(&self, shot: usize, col: usize) -> bool {
        (self.rows[shot * self.stride() + col / 64] >> (col % 64)) & 1 == 1
    }

    pub fn row(&self, shot: usize) -> &[u64] {
        let s = self.stride();
        &self.rows[shot * s..(shot + 1) * s]
    }

    pub fn push_row(&mut self, row: &[u64]) {
        debug_assert_eq!(row.len(), self.stride());
        self.rows.extend_from_slice(row);
        self.shots += 1;
    }

    /// Parity of the listed columns in one shot.
    pub fn parity(&self, shot: usize, cols: &[usize]) -> bool {
        cols.iter().fold(false, |acc, &c| acc ^ self.bit(shot, c))
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.n_columns as u64).to_le_bytes())?;
        w.write_all(&(self.shots as u64).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&self.p.to_le_bytes())?;
        w.write_all(&self.circuit_hash)?;
        for word in &self.rows {
            w.write_all(&word.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.write_to(&mut v).expect("in-memory write");
        v
    }

    pub fn read_from(r: &mut impl Read) -> Result<SampleSet> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Parse("not a sample file".into()));
        }
        let mut u = [0u8; 8];
        let mut next = |r: &mut dyn Read| -> Result<[u8; 8]> {
            r.read_exact(&mut u)?;
            Ok(u)
        };
        let n_columns = u64::from_le_bytes(next(r)?) as usize;
        let shots = u64::from_le_bytes(next(r)?) as usize;
        let seed = u64::from_le_bytes(next(r)?);
        let p = f64::from_le_bytes(next(r)?);
        let circuit_hash = next(r)?;
        let mut s = SampleSet::empty(n_columns, seed, p, circuit_hash);
        let words = shots * s.stride();
        s.rows.reserve(words);
        for _ in 0..words {
            s.rows.push(u64::from_le_bytes(next(r)?));
        }
        s.shots = shots;
        Ok(s)
    }
}

/// Expected parity of a set of measurement columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheck {
    pub columns: Vec<usize>,
    pub odd: bool,
}

/// Keeps shots passing every check; returns them with the acceptance
/// fraction.
pub fn postselect(samples: &SampleSet, checks: &[ParityCheck]) -> Result<(SampleSet, f64)> {
    if let Some(c) = checks.iter().flat_map(|c| &c.columns).find(|&&c| c >= samples.n_columns) {
        return Err(Error::IndexOutOfRange(format!("column {c} of {}", samples.n_columns)));
    }
    let mut kept = SampleSet::empty(samples.n_columns, samples.seed, samples.p, samples.circuit_hash);
    for s in 0..samples.shots {
        if checks.iter().all(|c| samples.parity(s, &c.columns) == c.odd) {
            kept.push_row(samples.row(s));
        }
    }
    let acc = if samples.shots == 0 { 0.0 } else { kept.shots as f64 / samples.shots as f64 };
    Ok((kept, acc))
}

fn measured_columns(c: &Circuit) -> usize {
    c.gates.iter().filter(|g| matches!(g, Gate::M(_))).count()
}

/// Reference outcomes from one noiseless tableau run.
fn reference(c: &Circuit, seed: u64) -> Result<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = StabilizerState::zero(c.n_qubits);
    let mut out = Vec::new();
    for g in &c.gates {
        match g {
            Gate::M(q) => {
                let o = st.measure(&PauliTerm::single(c.n_qubits, *q, 'Z'), &mut rng)?;
                out.push(o.value == -1);
            }
            Gate::Depol2(..) => {}
            g => st.apply(g)?,
        }
    }
    Ok(out)
}

struct Frames {
    x: Vec<u64>,
    z: Vec<u64>,
}

fn depolarize<R: Rng>(f: &mut Frames, a: usize, b: usize, p: f64, rng: &mut R) {
    if p <= 0.0 {
        return;
    }
    let mut apply = |lane: usize, rng: &mut R| {
        let k = rng.random_range(1..16u32);
        let bit = 1u64 << lane;
        if k & 1 != 0 {
            f.x[a] ^= bit;
        }
        if k & 2 != 0 {
            f.z[a] ^= bit;
        }
        if k & 4 != 0 {
            f.x[b] ^= bit;
        }
        if k & 8 != 0 {
            f.z[b] ^= bit;
        }
    };
    if p >= 1.0 {
        for lane in 0..64 {
            apply(lane, rng);
        }
        return;
    }
    let geo = Geometric::new(p).expect("0 < p < 1");
    let mut lane = geo.sample(rng);
    while lane < 64 {
        apply(lane as usize, rng);
        lane += 1 + geo.sample(rng);
    }
}

fn flip_mask<R: Rng>(q: f64, rng: &mut R) -> u64 {
    if q <= 0.0 {
        return 0;
    }
    (0..64).fold(0u64, |m, l| if rng.random::<f64>() < q { m | (1 << l) } else { m })
}

/// Runs 64 shots at once; returns one word per measured column.
fn frame_batch<R: Rng>(c: &Circuit, noise: &NoiseModel, refbits: &[bool], rng: &mut R) -> Vec<u64> {
    let n = c.n_qubits;
    let mut f = Frames { x: vec![0; n], z: (0..n).map(|_| rng.random()).collect() };
    let mut out = Vec::with_capacity(refbits.len());
    for g in &c.gates {
        match *g {
            Gate::H(q) => std::mem::swap(&mut f.x[q], &mut f.z[q]),
            Gate::S(q) | Gate::Sdg(q) => f.z[q] ^= f.x[q],
            Gate::SX(q) | Gate::SXdg(q) => f.x[q] ^= f.z[q],
            Gate::Rz(t, q) => {
                let k = (t / std::f64::consts::FRAC_PI_2).round() as i64;
                if k.rem_euclid(2) == 1 {
                    f.z[q] ^= f.x[q];
                }
            }
            Gate::X(_) | Gate::Y(_) | Gate::Z(_) => {}
            Gate::CX(a, b) => {
                f.x[b] ^= f.x[a];
                f.z[a] ^= f.z[b];
                depolarize(&mut f, a, b, noise.p, rng);
            }
            Gate::CZ(a, b) => {
                f.z[a] ^= f.x[b];
                f.z[b] ^= f.x[a];
                depolarize(&mut f, a, b, noise.p, rng);
            }
            Gate::Swap(a, b) => {
                f.x.swap(a, b);
                f.z.swap(a, b);
                depolarize(&mut f, a, b, noise.p, rng);
            }
            Gate::Depol2(p, a, b) => depolarize(&mut f, a, b, p, rng),
            Gate::M(q) => {
                let r = if refbits[out.len()] { u64::MAX } else { 0 };
                out.push(r ^ f.x[q] ^ flip_mask(noise.readout, rng));
                f.z[q] = rng.random();
            }
        }
    }
    out
}

fn shard_rng(seed: u64, shard: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(shard as u64 + 1);
    r
}

fn assemble(n_columns: usize, shots: usize, seed: u64, noise: &NoiseModel, c: &Circuit, chunks: Vec<Vec<u64>>) -> SampleSet {
    let mut set = SampleSet::empty(n_columns, seed, noise.p, circuit_hash(c));
    let stride = set.stride();
    set.rows = Vec::with_capacity(shots * stride);
    for ch in chunks {
        set.rows.extend(ch);
    }
    set.rows.truncate(shots * stride);
    set.shots = shots;
    set
}

/// Samples a Clifford circuit's `M` outcomes. Deterministic in `seed`
/// regardless of the worker count.
pub fn sample(c: &Circuit, noise: &NoiseModel, shots: usize, seed: u64) -> Result<SampleSet> {
    if let Some(g) = c.gates.iter().find(|g| !g.is_clifford()) {
        return Err(Error::NonClifford(format!("`{g}` in sampled circuit")));
    }
    let cols = measured_columns(c);
    let refbits = reference(c, seed)?;
    let stride = cols.div_ceil(64).max(1);
    let n_shards = shots.div_ceil(SHARD_SHOTS);
    let chunks: Vec<Vec<u64>> = (0..n_shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = shard_rng(seed, shard);
            let todo = SHARD_SHOTS.min(shots - shard * SHARD_SHOTS);
            let mut rows = vec![0u64; todo * stride];
            for b in 0..todo.div_ceil(64) {
                let words = frame_batch(c, noise, &refbits, &mut rng);
                for (col, w) in words.iter().enumerate() {
                    let mut bits = *w;
                    while bits != 0 {
                        let lane = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let s = b * 64 + lane;
                        if s < todo {
                            rows[s * stride + col / 64] |= 1 << (col % 64);
                        }
                    }
                }
            }
            rows
        })
        .collect();
    Ok(assemble(cols, shots, seed, noise, c, chunks))
}

/// Sampling for circuits with arbitrary rotations: `trajectories` noisy
/// statevector runs, each contributing an equal share of the shots. `M`
/// entries must all come after the last gate on their qubit.
pub fn sample_statevector(c: &Circuit, noise: &NoiseModel, shots: usize, seed: u64, trajectories: usize) -> Result<SampleSet> {
    let measured: Vec<usize> = c.gates.iter().filter_map(|g| if let Gate::M(q) = g { Some(*q) } else { None }).collect();
    let cols = measured.len();
    let stride = cols.div_ceil(64).max(1);
    let t = trajectories.clamp(1, shots.max(1));
    let noisy = noise.p > 0.0 || c.gates.iter().any(|g| matches!(g, Gate::Depol2(..)));
    let t = if noisy { t } else { 1 };
    let chunks: Vec<Vec<u64>> = (0..t)
        .into_par_iter()
        .map(|k| -> Result<Vec<u64>> {
            let mut rng = shard_rng(seed, k);
            let mut sv = StateVector::zero(c.n_qubits)?;
            let fault = |sv: &mut StateVector, a: usize, b: usize, p: f64, rng: &mut ChaCha8Rng| {
                if p > 0.0 && rng.random::<f64>() < p {
                    let code = rng.random_range(1..16u32);
                    let mut e = PauliTerm::identity(c.n_qubits);
                    e.set_bits(a, code & 1 != 0, code & 2 != 0);
                    e.set_bits(b, code & 4 != 0, code & 8 != 0);
                    sv.apply_pauli(&e.with_phase(0));
                }
            };
            for g in &c.gates {
                match *g {
                    Gate::M(_) => {}
                    Gate::Depol2(p, a, b) => fault(&mut sv, a, b, p, &mut rng),
                    g => {
                        sv.apply(&g)?;
                        if g.is_two_qubit() {
                            let q = g.qubits();
                            fault(&mut sv, q[0], q[1], noise.p, &mut rng);
                        }
                    }
                }
            }
            let share = shots / t + usize::from(k < shots % t);
            let draws = sv.sample(share, &mut rng);
            let mut rows = vec![0u64; share * stride];
            for (s, b) in draws.into_iter().enumerate() {
                for (col, &q) in measured.iter().enumerate() {
                    let mut bit = (b >> q) & 1 == 1;
                    if noise.readout > 0.0 && rng.random::<f64>() < noise.readout {
                        bit = !bit;
                    }
                    if bit {
                        rows[s * stride + col / 64] |= 1 << (col % 64);
                    }
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(assemble(cols, shots, seed, noise, c, chunks))
}
