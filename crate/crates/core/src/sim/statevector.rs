//! Plain statevector simulation for circuits with arbitrary `RZ` angles.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::PauliTerm;
use crate::sim::dense::apply_pauli_into;
use crate::tableau::{Circuit, Gate};

pub const MAX_STATEVECTOR_QUBITS: usize = 24;

#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_STATEVECTOR_QUBITS {
            return Err(Error::ResourceGuard(format!("{n} qubits exceed statevector limit {MAX_STATEVECTOR_QUBITS}")));
        }
        let mut amps = vec![Complex64::default(); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::Dimension(format!("{} amplitudes for {n} qubits", amps.len())));
        }
        Ok(StateVector { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn one(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                let (a0, a1) = (self.amps[b], self.amps[b | bit]);
                self.amps[b] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[b | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Applies a gate; measurement and noise entries are rejected.
    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = FRAC_1_SQRT_2;
        match *g {
            Gate::H(q) => self.one(q, [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]),
            Gate::S(q) => self.one(q, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]),
            Gate::Sdg(q) => self.one(q, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]]),
            Gate::SX(q) => self.one(q, [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]]),
            Gate::SXdg(q) => self.one(q, [[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]]),
            Gate::X(q) => self.one(q, [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
            Gate::Y(q) => self.one(q, [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
            Gate::Z(q) => self.one(q, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]),
            Gate::Rz(t, q) => {
                let e = Complex64::from_polar(1.0, t / 2.0);
                self.one(q, [[e.conj(), c(0.0, 0.0)], [c(0.0, 0.0), e]])
            }
            Gate::CX(a, b) => {
                let (ba, bb) = (1usize << a, 1usize << b);
                for k in 0..self.amps.len() {
                    if k & ba != 0 && k & bb == 0 {
                        self.amps.swap(k, k | bb);
                    }
                }
            }
            Gate::CZ(a, b) => {
                let m = (1usize << a) | (1usize << b);
                for k in 0..self.amps.len() {
                    if k & m == m {
                        self.amps[k] = -self.amps[k];
                    }
                }
            }
            Gate::Swap(a, b) => {
                let (ba, bb) = (1usize << a, 1usize << b);
                for k in 0..self.amps.len() {
                    if k & ba != 0 && k & bb == 0 {
                        self.amps.swap(k, (k ^ ba) | bb);
                    }
                }
            }
            Gate::M(_) | Gate::Depol2(..) => {
                return Err(Error::InvalidParams(format!("`{g}` is not unitary")));
            }
        }
        Ok(())
    }

    /// Applies every unitary gate, skipping noise annotations and
    /// measurements.
    pub fn run(&mut self, c: &Circuit) -> Result<()> {
        if c.n_qubits != self.n {
            return Err(Error::Dimension(format!("{}-qubit circuit on {} qubits", c.n_qubits, self.n)));
        }
        for g in &c.gates {
            if !matches!(g, Gate::M(_) | Gate::Depol2(..)) {
                self.apply(g)?;
            }
        }
        Ok(())
    }

    /// Multiplies by a Pauli in place.
    pub fn apply_pauli(&mut self, p: &PauliTerm) {
        let mut out = vec![Complex64::default(); self.amps.len()];
        apply_pauli_into(p, Complex64::new(1.0, 0.0), &self.amps, &mut out);
        self.amps = out;
    }

    pub fn expectation(&self, p: &PauliTerm) -> f64 {
        let mut out = vec![Complex64::default(); self.amps.len()];
        apply_pauli_into(p, Complex64::new(1.0, 0.0), &self.amps, &mut out);
        self.amps.iter().zip(&out).map(|(a, b)| (a.conj() * b).re).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Draws computational-basis outcomes; bit `q` of each value is qubit `q`.
    pub fn sample<R: Rng>(&self, shots: usize, rng: &mut R) -> Vec<u64> {
        let probs = self.probabilities();
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in probs {
            acc += p;
            cdf.push(acc);
        }
        (0..shots)
            .map(|_| {
                let u = rng.random::<f64>() * acc;
                cdf.partition_point(|&c| c < u).min(cdf.len() - 1) as u64
            })
            .collect()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}
