//! Stabilizer reduction on a loop encoding, and parity compression on JW.

use gseforge::cli::build_encoding;
use gseforge::encoder::Realization;
use gseforge::fermion::FermionHamiltonian;
use gseforge::reduce::{jw_parity_compress, logical_reduce};
use rand::SeedableRng;

fn main() -> gseforge::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    let m = 6;
    let h = FermionHamiltonian::random_chemist(m, 2, 0.5, &mut rng);

    let enc = build_encoding("loop:6:3", "cyclic:1", 2, 0)?;
    let mapped = enc.map_hamiltonian(&h, &mut Realization::Path(gseforge::graph::PathPolicy::Shortest))?;
    let reduced = logical_reduce(&enc, &mapped.terms)?;
    println!("loop(6,3): avg weight {:.2} -> {:.2}", mapped.terms.avg_weight(), reduced.avg_weight());

    let jw = build_encoding("line:6", "jw", 2, 0)?;
    let terms = jw.map_hamiltonian(&h, &mut Realization::MinWeight)?.terms;
    let small = jw_parity_compress(&terms, m, 1, 1)?;
    println!("JW: max weight {} -> {} (bound {})", terms.max_weight(), small.max_weight(), m + 2);
    Ok(())
}
