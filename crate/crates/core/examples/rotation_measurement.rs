//! Measures a commuting group together with the stabilizers on Z-only
//! readouts.

use gseforge::circuits::{naive_rotation, rotation_measurement};
use gseforge::encoder::{Encoding, Family};
use gseforge::graph::{GraphKind, InteractionGraph};
use gseforge::pauli;

fn main() -> gseforge::Result<()> {
    let t = InteractionGraph::build(&GraphKind::Complete(3))?;
    let enc = Encoding::build(&InteractionGraph::disjoint_union(&[t.clone(), t])?, Family::JwChain)?;
    let mut group = Vec::new();
    for off in [0, 3] {
        for s in ["XIX", "YIY", "ZIZ", "IZI", "XZX", "YZY"] {
            group.push(pauli(s).embed(6, off));
        }
    }
    let r = rotation_measurement(&enc, &group)?;
    for (p, z) in group.iter().zip(&r.z_images) {
        println!("{p} -> {z}");
    }
    for s in &r.stab_images {
        println!("stabilizer -> {s}");
    }
    let naive = naive_rotation(6, &enc.stabilizers().generators, &group)?;
    println!("overlap {} of {} (naive {}), depth {}", r.overlap, group.len(), naive.overlap, r.circuit.depth());
    Ok(())
}
