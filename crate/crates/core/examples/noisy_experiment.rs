//! Noisy energy estimation with post-selection on codes of growing distance.

use gseforge::cli::{build_encoding, cmd_experiment, ExperimentSpec};
use gseforge::fermion::FermionHamiltonian;
use gseforge::sim::NoiseModel;
use rand::SeedableRng;

fn main() -> gseforge::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut h = FermionHamiltonian::random_chemist(4, 2, 1.0, &mut rng).scaled(0.1);
    for s in 0..2 {
        for (i, e) in [-2.0, -1.5, 1.5, 2.0].into_iter().enumerate() {
            h.add_one_body(s, i, i, e)?;
        }
    }
    let occ = [true, true, false, false, true, true, false, false];
    for (g, f) in [("loop:4:2", "jw"), ("loop:4:3", "cyclic:1"), ("loop:4:5", "cyclic:2")] {
        let enc = build_encoding(g, f, 2, 0)?;
        let spec = ExperimentSpec { occupation: &occ, shots: 200_000, noise: NoiseModel::new(0.001, 0.0)?, ansatz_layers: 10, seed: 1 };
        let r = cmd_experiment(&h, &enc, &spec)?;
        println!(
            "{g:>9} {f:<8} qubits {:>2}  E {:.4} ± {:.4}  exact {:.4}  kept {:.3}",
            r.n_qubits, r.energy, r.stderr, r.exact, r.acceptance
        );
    }
    Ok(())
}
