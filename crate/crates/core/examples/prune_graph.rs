//! Thins a complete interaction graph to bounded degree and diameter.

use gseforge::encoder::{Encoding, Family};
use gseforge::graph::InteractionGraph;

fn main() -> gseforge::Result<()> {
    for (m, deg, hops) in [(8, 4, 2), (12, 4, 3), (16, 6, 2)] {
        let g = InteractionGraph::prune(m, deg, hops, 0, 64)?;
        let enc = Encoding::build(&g, Family::JwChain)?;
        println!(
            "complete({m}) -> {} edges, diameter {:?}, {} qubits instead of {}",
            g.edges().len(),
            g.diameter(),
            enc.n_qubits(),
            m * (m - 1) / 2
        );
    }
    Ok(())
}
