//! Orbital rotations: Majorana-space network versus the swap-routed Givens
//! baseline, and the occupations they produce.

use gseforge::circuits::{encode_state, fgu_orbital_rotation, standard_orbital_rotation, Connectivity, FguEncoding};
use gseforge::sim::StateVector;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> gseforge::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for m in [4, 6, 8, 10] {
        let u = DMatrix::from_fn(m, m, |_, _| StandardNormal.sample(&mut rng)).qr().q();
        let gse = FguEncoding::TwoNN2.build(m)?;
        let c = fgu_orbital_rotation(&u, &gse, &Connectivity::interleaved(m))?;
        let jw = FguEncoding::Jw.build(m)?;
        let b = standard_orbital_rotation(&u, &jw, &Connectivity::linear(m))?;
        println!("M={m:>2}  fgu depth {:>4}  baseline depth {:>5}", c.depth(), b.depth());
        if m == 4 {
            let occ = [true, true, false, false];
            let mut sv = StateVector::zero(gse.n_qubits())?;
            sv.run(&encode_state(&gse, &occ)?)?;
            sv.run(&c)?;
            let n: Vec<f64> = (0..m).map(|v| (1.0 - sv.expectation(&gse.vertex_operator(v))) / 2.0).collect();
            let want: Vec<f64> = (0..m).map(|k| u[(0, k)].powi(2) + u[(1, k)].powi(2)).collect();
            println!("  occupations {n:.4?}\n  expected    {want:.4?}");
        }
    }
    Ok(())
}
