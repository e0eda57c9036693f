//! Rotor-model Trotter steps on JW and on [[2N,N,2]] blocks.

use gseforge::circuits::rotor_circuits;

fn main() -> gseforge::Result<()> {
    for n in [2, 3] {
        for dm in [3, 5] {
            let r = rotor_circuits(n, dm, 1.0, 0.1)?;
            println!(
                "N={n} d_m={dm}: depth {} vs {} ({:.2}), gates {} vs {}",
                r.depth_gse,
                r.depth_jw,
                r.depth_gse as f64 / r.depth_jw as f64,
                r.gates_gse,
                r.gates_jw
            );
        }
    }
    Ok(())
}
