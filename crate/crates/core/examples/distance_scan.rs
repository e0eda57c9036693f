//! Code distances by exhaustive low-weight search.

use gseforge::cli::build_encoding;
use gseforge::encoder::Encoding;

fn main() -> gseforge::Result<()> {
    for n in 3..=6 {
        let r = Encoding::build_2n_n_2(n)?.code_distance_scan(2)?;
        println!("[[{},{n},2]]: distance {:?}", 2 * n, r.distance);
    }
    for (g, f, w) in [("complete:7", "jw", 3), ("complete:7", "cyclic:1", 3), ("loop:4:5", "cyclic:2", 4)] {
        let enc = build_encoding(g, f, 1, 0)?;
        let r = enc.code_distance_scan(w)?;
        let counts: Vec<String> = r.undetectable_by_weight.iter().map(|(w, v)| format!("{} of weight {w}", v.len())).collect();
        println!("{g} {f}: {} qubits, distance {:?}, undetectable {}", enc.n_qubits(), r.distance, counts.join(", "));
    }
    Ok(())
}
