//! Maps a random two-sector Hamiltonian with JW and with a loop encoding and
//! prints qubit counts and Pauli weights.

use gseforge::cli::{build_encoding, cmd_map};
use gseforge::encoder::Realization;
use gseforge::fermion::FermionHamiltonian;
use rand::SeedableRng;

fn main() -> gseforge::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let h = FermionHamiltonian::random_chemist(4, 2, 0.6, &mut rng);
    for (graph, family) in [("line:4", "jw"), ("loop:4:3", "cyclic:1"), ("complete:4", "jw")] {
        let enc = build_encoding(graph, family, 2, 0)?;
        let out = cmd_map(&h, &enc, &mut Realization::MinWeight, true)?;
        let r = &out.report;
        println!(
            "{graph:>10} {family:<8} qubits {:>3}  stabilizers {:>2}  terms {:>4}  max weight {:>2}  avg weight {:.2}",
            r.n_qubits,
            r.stabilizers,
            out.terms.len(),
            out.terms.max_weight(),
            out.terms.avg_weight()
        );
    }
    Ok(())
}
