use nalgebra::DMatrix;

use crate::circuits::{interleaved_order, pauli_rotation, Connectivity};
use crate::encoder::{Encoding, Family, Realization};
use crate::error::{Error, Result};
use crate::graph::GraphKind;
use crate::graph::InteractionGraph;
use crate::tableau::{Circuit, Gate};

/// Encodings that support orbital-rotation synthesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FguEncoding {
    Jw,
    TwoNN2,
}

impl FguEncoding {
    pub fn build(self, n_modes: usize) -> Result<Encoding> {
        match self {
            FguEncoding::Jw => Encoding::build(&InteractionGraph::build(&GraphKind::Line(n_modes))?, Family::JwChain),
            FguEncoding::TwoNN2 => Encoding::build_2n_n_2(n_modes),
        }
    }

    fn detect(enc: &Encoding) -> Result<Self> {
        let nv = enc.graph().n_vertices();
        if *enc.family() == Family::JwChain && enc.n_qubits() == nv && *enc.graph() == InteractionGraph::build(&GraphKind::Line(nv))? {
            return Ok(FguEncoding::Jw);
        }
        if *enc.family() == Encoding::table_2n_n_2() && enc.n_qubits() == 2 * nv {
            return Ok(FguEncoding::TwoNN2);
        }
        Err(Error::WrongEncoding(format!("orbital rotations need JW on a line or [[2N,N,2]], got {}", enc.family().name())))
    }

    /// Majorana order along which neighbouring pairs are cheap.
    fn chain(self, n_modes: usize) -> Vec<usize> {
        match self {
            FguEncoding::Jw => (0..2 * n_modes).collect(),
            FguEncoding::TwoNN2 => interleaved_order(2 * n_modes),
        }
    }
}

fn check_orthogonal(u: &DMatrix<f64>) -> Result<()> {
    if !u.is_square() {
        return Err(Error::Dimension(format!("{}×{} rotation", u.nrows(), u.ncols())));
    }
    let dev = (u.transpose() * u - DMatrix::identity(u.nrows(), u.nrows())).abs().max();
    if dev > 1e-10 {
        return Err(Error::NonOrthogonal(format!("‖UᵀU − I‖ = {dev:.3e}")));
    }
    Ok(())
}

/// Majorana-space action of `a'_i = Σ_j U_ij a_j`: columns are the images
/// of `c_0, c_1, …`.
pub fn majorana_matrix(u: &DMatrix<f64>) -> DMatrix<f64> {
    let m = u.nrows();
    let mut t = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            t[(2 * j, 2 * i)] = u[(i, j)];
            t[(2 * j + 1, 2 * i + 1)] = u[(i, j)];
        }
    }
    t
}

/// `exp(α/2 c_a c_b)`, which rotates `c_a → cos α c_a − sin α c_b`.
fn majorana_rotation(enc: &Encoding, a: usize, b: usize, alpha: f64) -> Result<Circuit> {
    let (lo, hi) = (a.min(b) as u32, a.max(b) as u32);
    let (coef, p) = enc.realize_monomial(&[lo, hi], num_complex::Complex64::new(1.0, 0.0), &mut Realization::MinWeight)?;
    let kappa = if a > b { -coef } else { coef };
    debug_assert!(kappa.re.abs() < 1e-9 && (kappa.im.abs() - 1.0).abs() < 1e-9);
    pauli_rotation(&p, -kappa.im * alpha / 2.0)
}

fn check_connectivity(c: Circuit, conn: &Connectivity) -> Result<Circuit> {
    if !conn.admits(&c) {
        return Err(Error::Infeasible("circuit needs a two-qubit gate between non-adjacent qubits".into()));
    }
    Ok(c)
}

/// Orbital rotation `V` with `V a_i V† = Σ_j U_ij a_j`, by Givens
/// elimination along the Majorana chain using only neighbouring chain pairs
/// as generators. Running `V(U₂)` and then `V(U₁)` gives `V(U₂U₁)`.
pub fn fgu_orbital_rotation(u: &DMatrix<f64>, enc: &Encoding, conn: &Connectivity) -> Result<Circuit> {
    check_orthogonal(u)?;
    let kind = FguEncoding::detect(enc)?;
    let m = u.nrows();
    if m != enc.graph().n_vertices() {
        return Err(Error::Dimension(format!("{m}-mode rotation on {} modes", enc.graph().n_vertices())));
    }
    let chain = kind.chain(m);
    let t = majorana_matrix(u);
    let n = 2 * m;
    let mut w = DMatrix::from_fn(n, n, |r, c| t[(chain[r], chain[c])]);
    let mut rots: Vec<(usize, f64)> = Vec::new();
    for c in 0..n {
        for r in (c + 1..n).rev() {
            let (x0, x1) = (w[(r - 1, c)], w[(r, c)]);
            if x1.abs() < 1e-14 {
                continue;
            }
            let th = x1.atan2(x0);
            let (s, co) = th.sin_cos();
            for k in 0..n {
                let (a, b) = (w[(r - 1, k)], w[(r, k)]);
                w[(r - 1, k)] = co * a + s * b;
                w[(r, k)] = -s * a + co * b;
            }
            rots.push((r, th));
        }
    }
    let mut circ = Circuit::new(enc.n_qubits());
    for &(r, th) in rots.iter().rev() {
        circ.extend(&majorana_rotation(enc, chain[r - 1], chain[r], -th)?);
    }
    check_connectivity(circ, conn)
}

/// Baseline: mode-space Givens elimination against a pivot row on a JW
/// line, bringing each partner mode next to the pivot with fermionic swaps
/// and swapping it back afterwards.
pub fn standard_orbital_rotation(u: &DMatrix<f64>, enc: &Encoding, conn: &Connectivity) -> Result<Circuit> {
    check_orthogonal(u)?;
    if FguEncoding::detect(enc)? != FguEncoding::Jw {
        return Err(Error::WrongEncoding("the swap-routed baseline runs on a JW line".into()));
    }
    let m = u.nrows();
    if m != enc.graph().n_vertices() {
        return Err(Error::Dimension(format!("{m}-mode rotation on {} modes", enc.graph().n_vertices())));
    }
    let mut a = u.transpose();
    let mut rots: Vec<(usize, usize, f64)> = Vec::new();
    for c in 0..m {
        for r in c + 1..m {
            let (x0, x1) = (a[(c, c)], a[(r, c)]);
            if x1.abs() < 1e-14 {
                continue;
            }
            let th = x1.atan2(x0);
            let (s, co) = th.sin_cos();
            for k in 0..m {
                let (p, q) = (a[(c, k)], a[(r, k)]);
                a[(c, k)] = co * p + s * q;
                a[(r, k)] = -s * p + co * q;
            }
            rots.push((c, r, th));
        }
    }
    let mut circ = Circuit::new(enc.n_qubits());
    for i in 0..m {
        if a[(i, i)] < 0.0 {
            circ.extend(&majorana_rotation(enc, 2 * i, 2 * i + 1, std::f64::consts::PI)?);
        }
    }
    let fswap = |circ: &mut Circuit, k: usize| {
        circ.push(Gate::Swap(k, k + 1));
        circ.push(Gate::CZ(k, k + 1));
    };
    for &(c, r, th) in rots.iter().rev() {
        for k in (c + 1..r).rev() {
            fswap(&mut circ, k);
        }
        circ.extend(&majorana_rotation(enc, 2 * c, 2 * c + 2, -th)?);
        circ.extend(&majorana_rotation(enc, 2 * c + 1, 2 * c + 3, -th)?);
        for k in c + 1..r {
            fswap(&mut circ, k);
        }
    }
    check_connectivity(circ, conn)
}
