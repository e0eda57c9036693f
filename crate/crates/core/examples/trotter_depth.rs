//! Trotter depth of two long-range hops on JW versus a loop encoding with
//! hand-picked routes.

use std::collections::HashMap;

use gseforge::circuits::{min_depth_realization, trotter_step};
use gseforge::encoder::{Encoding, Family, Realization, Route};
use gseforge::fermion::FermionHamiltonian;
use gseforge::graph::{GraphKind, InteractionGraph};

fn main() -> gseforge::Result<()> {
    let mut h = FermionHamiltonian::new(4, 1)?;
    for (i, j) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
        h.add_one_body(0, i, j, 1.0)?;
    }
    let jw = Encoding::build(&InteractionGraph::build(&GraphKind::Line(4))?, Family::JwChain)?;
    let t = trotter_step(&jw.map_hamiltonian(&h, &mut Realization::MinWeight)?.terms, 0.1)?;
    println!("JW depth {}", t.depth());

    let enc = Encoding::build(&InteractionGraph::build(&GraphKind::Loop { m: 4, multiplicity: 3 })?, Family::Cyclic(1))?;
    let route = |v: &[usize], copy| vec![Route { vertices: v.to_vec(), copy }];
    let routes: HashMap<Vec<u32>, Vec<Route>> = [
        (vec![0, 5], route(&[0, 1, 2], 0)),
        (vec![1, 4], route(&[0, 1, 2], 2)),
        (vec![2, 7], route(&[1, 2, 3], 2)),
        (vec![3, 6], route(&[1, 2, 3], 0)),
    ]
    .into_iter()
    .collect();
    let t = trotter_step(&enc.map_hamiltonian(&h, &mut Realization::Explicit(routes))?.terms, 0.1)?;
    println!("loop(4,3) depth {} with chosen routes", t.depth());
    println!("loop(4,3) depth {} from the search", min_depth_realization(&enc, &h)?.depth);
    Ok(())
}
