//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use gseforge::circuits::{
    encode_state, fgu_orbital_rotation, naive_rotation, rotation_measurement, rotor_circuits, standard_orbital_rotation,
    trotter_step, Connectivity, FguEncoding,
};
use gseforge::cli::{build_encoding, cmd_experiment, cmd_map, ExperimentSpec};
use gseforge::encoder::{Encoding, Family, Provenance, Realization, Route};
use gseforge::fermion::FermionHamiltonian;
use gseforge::graph::{BasisCycle, GraphKind, InteractionGraph};
use gseforge::reduce::jw_parity_compress;
use gseforge::sim::dense::{fermion_spectrum, spectrum_in_codespace};
use gseforge::sim::{estimate_occupations, sample_statevector, NoiseModel, TermImage};
use gseforge::tableau::Gate;
use gseforge::{pauli, PauliTerm};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn within(v: Verdict, t: Duration, limit: Option<Duration>) -> Verdict {
    match limit {
        Some(l) if t > l => Verdict { pass: false, detail: format!("{}; runtime {:.1?} over {:.0?}", v.detail, t, l) },
        _ => v,
    }
}

fn enc(graph: &str, family: &str, sectors: usize) -> Encoding {
    build_encoding(graph, family, sectors, 0).unwrap()
}

/// Encodings exercised by the algebraic checks.
fn algebra_zoo() -> Vec<(String, Encoding)> {
    let mut out = Vec::new();
    for (g, f) in [
        ("line:6", "jw"),
        ("complete:5", "jw"),
        ("complete:6", "jw"),
        ("loop:5:3", "cyclic:1"),
        ("loop:4:5", "cyclic:2"),
        ("loop:4:7", "cyclic:3"),
        ("loop:3:9", "cyclic:4"),
        ("complete:7", "cyclic:1"),
        ("complete:4", "ternary"),
        ("complete:5", "ternary"),
        ("incidence:6:6", "ternary"),
    ] {
        out.push((format!("{g}+{f}"), enc(g, f, 1)));
    }
    for n in [3, 4, 6] {
        out.push((format!("[[{},{n},2]]", 2 * n), Encoding::build_2n_n_2(n).unwrap()));
    }
    out.push(("2×loop:4:3+cyclic:1".into(), enc("loop:4:3", "cyclic:1", 2)));
    out
}

/// Directed edge copies `(i, j, copy)` in both orientations.
fn hops(e: &Encoding) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for &(a, b, m) in e.graph().edges() {
        for c in 0..m {
            out.push((a, b, c));
            out.push((b, a, c));
        }
    }
    out
}

fn sign_exponent(pairs: &[(usize, usize)]) -> usize {
    pairs.iter().filter(|(a, b)| a == b).count()
}

fn c1_algebra() -> Verdict {
    let zoo = algebra_zoo();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut probes, mut bad) = (0usize, Vec::new());
    let id = |p: &PauliTerm| PauliTerm::identity(p.n_qubits());
    while probes < 3000 {
        let (name, e) = &zoo[rng.random_range(0..zoo.len())];
        let h = hops(e);
        let nv = e.graph().n_vertices();
        let (i, j, c) = h[rng.random_range(0..h.len())];
        let (k, l, d) = h[rng.random_range(0..h.len())];
        let v = rng.random_range(0..nv);
        let w = rng.random_range(0..nv);
        let a = e.hop_operator(i, j, c).unwrap();
        let a2 = e.hop_operator(k, l, d).unwrap();
        let bv = e.vertex_operator(v);
        let bw = e.vertex_operator(w);
        let mut fail = |what: &str| bad.push(format!("{name}: {what}"));
        if !bv.is_hermitian() || &bv * &bv != id(&bv) {
            fail("B not a Hermitian involution");
        }
        if !bv.commutes(&bw) {
            fail("B_v, B_w anticommute");
        }
        if !a.is_hermitian() || &a * &a != id(&a) {
            fail("A not a Hermitian involution");
        }
        if e.hop_operator(j, i, c).unwrap() != a.clone().negated() {
            fail("A_ji ≠ −A_ij");
        }
        if a.commutes(&bv) != (sign_exponent(&[(i, v), (j, v)]) % 2 == 0) {
            fail("A B sign");
        }
        let same_copy_edge = (i.min(j), i.max(j), c) == (k.min(l), k.max(l), d);
        if !same_copy_edge && a.commutes(&a2) != (sign_exponent(&[(i, k), (i, l), (j, k), (j, l)]) % 2 == 0) {
            fail("A A sign");
        }
        probes += 1;
    }
    verdict(
        bad.is_empty(),
        format!("{probes} probes over {} encodings, {} violations {:?}", zoo.len(), bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    )
}

fn closed_walk_product(e: &Encoding, verts: &[usize], copies: &[usize]) -> PauliTerm {
    let mut p = PauliTerm::identity(e.n_qubits());
    for (w, &c) in verts.windows(2).zip(copies) {
        p = &p * &e.hop_operator(w[0], w[1], c).unwrap();
    }
    p.times_i_pow(((verts.len() - 1) % 4) as u8)
}

fn c2_loops() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut checked, mut bad) = (0usize, Vec::new());
    for (name, e) in algebra_zoo() {
        let g = e.graph();
        for cyc in g.cycle_basis() {
            let (verts, copies) = match cyc {
                BasisCycle::Fundamental(path) => (path.vertices(g), path.steps.iter().map(|s| s.copy).collect::<Vec<_>>()),
                BasisCycle::MultiEdge { edge, copy } => {
                    let (a, b, _) = g.edges()[edge];
                    (vec![a, b, a], vec![copy, copy + 1])
                }
                BasisCycle::SelfLoop { .. } => continue,
            };
            let p = closed_walk_product(&e, &verts, &copies);
            checked += 1;
            if !e.stabilizers().contains(&p) {
                bad.push(format!("{name}: basis cycle {verts:?}"));
            }
        }
        for _ in 0..100 {
            let start = rng.random_range(0..g.n_vertices());
            let mut verts = vec![start];
            for _ in 0..rng.random_range(1..8) {
                let nb = g.neighbors(*verts.last().unwrap());
                verts.push(nb[rng.random_range(0..nb.len())]);
            }
            let back = g.shortest_vertices(*verts.last().unwrap(), start).unwrap();
            verts.extend_from_slice(&back[1..]);
            if verts.len() < 3 {
                continue;
            }
            let copies: Vec<usize> = verts.windows(2).map(|w| rng.random_range(0..g.multiplicity(w[0], w[1]))).collect();
            let p = closed_walk_product(&e, &verts, &copies);
            checked += 1;
            if !e.stabilizers().contains(&p) {
                bad.push(format!("{name}: walk {verts:?} copies {copies:?}"));
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} closed walks, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn c3_weight_six() -> Verdict {
    let mut detail = Vec::new();
    let mut pass = true;
    for m in [4, 6] {
        for d in [3, 5, 7, 9] {
            let e = enc(&format!("loop:{m}:{d}"), &format!("cyclic:{}", (d - 1) / 2), 1);
            let s = e.stabilizers();
            let w: BTreeSet<usize> = s
                .generators
                .iter()
                .zip(&s.provenance)
                .filter(|(_, p)| **p == Provenance::MultiEdge)
                .map(|(g, _)| g.weight())
                .collect();
            let n = s.provenance.iter().filter(|p| **p == Provenance::MultiEdge).count();
            pass &= n == m * (d - 1) && w == BTreeSet::from([6]);
            detail.push(format!("M{m}d{d}:{n}×{w:?}"));
        }
    }
    verdict(pass, detail.join(" "))
}

fn c4_golden() -> Verdict {
    let jw = enc("line:4", "jw", 1);
    let gse = enc("loop:4:3", "cyclic:1", 1);
    let cases = [
        (&gse, [0, 1, 2], 0, "Z0 Y1 Z4 Y7 Z8"),
        (&gse, [1, 2, 3], 2, "Y3 Z5 Z6 Y9 Z10"),
        (&jw, [0, 1, 2], 0, "X0 Z1 X2"),
        (&jw, [1, 2, 3], 0, "X1 Z2 X3"),
    ];
    let mut phases = BTreeSet::new();
    let mut letters_ok = true;
    let mut got = Vec::new();
    for (e, [a, b, c], copy, want) in cases {
        let p = &(&e.hop_operator(a, b, copy).unwrap() * &e.hop_operator(b, c, copy).unwrap()) * &e.vertex_operator(c);
        let want: Vec<(usize, char)> = want
            .split(' ')
            .map(|t| (t[1..].parse().unwrap(), t.chars().next().unwrap()))
            .collect();
        letters_ok &= p.unsigned() == PauliTerm::from_sparse(e.n_qubits(), &want);
        phases.insert(p.phase());
        got.push(format!("{}{}", if p.phase() == 2 { "−" } else { "+" }, p.sparse_string()));
    }
    let one_sign = phases.len() == 1 && (phases.contains(&0) || phases.contains(&2));
    verdict(letters_ok && one_sign, format!("{} (printed all −; common sign {:?})", got.join(", "), phases))
}

fn codespace_parities(e: &Encoding) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    for comp in e.graph().components() {
        let mut prod = PauliTerm::identity(e.n_qubits());
        for &v in &comp {
            prod = &prod * &e.vertex_operator(v);
        }
        if let Some(g) = e.stabilizers().group_element(&prod) {
            out.push((comp, g != prod));
        }
    }
    out
}

fn c5_spectra() -> Verdict {
    let cases: [(&str, &str, usize, usize); 8] = [
        ("line:3", "jw", 2, 3),
        ("complete:3", "jw", 2, 3),
        ("loop:3:2", "jw", 2, 3),
        ("line-loops:3:2", "2n-n-2", 2, 3),
        ("line:4", "jw", 2, 4),
        ("loop:4:3", "cyclic:1", 1, 4),
        ("incidence:4:4", "ternary", 1, 4),
        ("line-loops:4:2", "2n-n-2", 1, 4),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let (mut worst, mut count, mut bad) = (0.0f64, 0usize, Vec::new());
    for (g, f, sectors, m) in cases {
        let e = enc(g, f, sectors);
        assert!(e.n_qubits() <= 14, "{g} has {} qubits", e.n_qubits());
        let parities = codespace_parities(&e);
        for k in 0..3 {
            let h = FermionHamiltonian::random_chemist(m, sectors, 0.7, &mut rng);
            let mut policy = if k == 2 { Realization::Path(gseforge::graph::PathPolicy::Shortest) } else { Realization::MinWeight };
            let mapped = e.map_hamiltonian(&h, &mut policy).unwrap();
            let mut got = spectrum_in_codespace(&mapped.with_constant(), &e.stabilizers().generators).unwrap();
            got.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let want = fermion_spectrum(&h, &parities).unwrap();
            count += 1;
            if got.len() != want.len() {
                bad.push(format!("{g}+{f}: {} vs {} levels", got.len(), want.len()));
                continue;
            }
            let d = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(d);
            if d >= 1e-9 {
                bad.push(format!("{g}+{f}: |Δ| {d:.2e}"));
            }
        }
    }
    verdict(bad.is_empty() && count >= 20, format!("{count} Hamiltonians, max |Δ| {worst:.2e} {bad:?}"))
}

fn hopping_example() -> FermionHamiltonian {
    let mut h = FermionHamiltonian::new(4, 1).unwrap();
    for (i, j) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
        h.add_one_body(0, i, j, 1.0).unwrap();
    }
    h
}

fn c6_depth() -> Verdict {
    let h = hopping_example();
    let jw = enc("line:4", "jw", 1);
    let d_jw = trotter_step(&jw.map_hamiltonian(&h, &mut Realization::MinWeight).unwrap().terms, 0.1).unwrap().depth();
    let gse = enc("loop:4:3", "cyclic:1", 1);
    let route = |v: &[usize], copy| vec![Route { vertices: v.to_vec(), copy }];
    let routes: HashMap<Vec<u32>, Vec<Route>> = [
        (vec![0, 5], route(&[0, 1, 2], 0)),
        (vec![1, 4], route(&[0, 1, 2], 2)),
        (vec![2, 7], route(&[1, 2, 3], 2)),
        (vec![3, 6], route(&[1, 2, 3], 0)),
    ]
    .into_iter()
    .collect();
    let mapped = gse.map_hamiltonian(&h, &mut Realization::Explicit(routes)).unwrap();
    let d_gse = trotter_step(&mapped.terms, 0.1).unwrap().depth();
    verdict(d_jw == 27 && d_gse == 21, format!("JW {d_jw}, GSE {d_gse}"))
}

fn c7_distances() -> Verdict {
    let mut detail = Vec::new();
    let mut pass = true;
    for n in 3..=8 {
        let r = Encoding::build_2n_n_2(n).unwrap().code_distance_scan(2).unwrap();
        pass &= r.distance == Some(2);
        detail.push(format!("N{n}:d{:?}", r.distance.unwrap_or(0)));
    }
    let e = enc("complete:7", "cyclic:1", 1);
    let r = e.code_distance_scan(3).unwrap();
    let got: BTreeSet<String> = r.undetectable_by_weight.get(&3).into_iter().flatten().map(|p| p.letters()).collect();
    let want: BTreeSet<String> = (0..7).map(|v| e.vertex_operator(v).unsigned().letters()).collect();
    pass &= r.distance == Some(3) && got == want;
    detail.push(format!("K7+cyclic(1): d{:?}, weight-3 = {{B_i}}: {}", r.distance.unwrap_or(0), got == want));
    let j = enc("complete:7", "jw", 1).code_distance_scan(3).unwrap();
    let counts: Vec<_> = j.undetectable_by_weight.iter().map(|(w, v)| format!("w{w}:{}", v.len())).collect();
    detail.push(format!("K7+jw: d{:?} {}", j.distance.unwrap_or(0), counts.join(",")));
    verdict(pass, detail.join(" "))
}

fn jw_two_sector(m: usize) -> Encoding {
    enc(&format!("line:{m}"), "jw", 2)
}

fn sector_string(n: usize, qs: std::ops::Range<usize>, parity: i8) -> PauliTerm {
    let p = PauliTerm::from_sparse(n, &qs.map(|q| (q, 'Z')).collect::<Vec<_>>());
    if parity < 0 {
        p.negated()
    } else {
        p
    }
}

fn c8_compression() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let (mut instances, mut worst_excess, mut bad) = (0usize, i64::MIN, Vec::new());
    for m in 4..=8 {
        let e = jw_two_sector(m);
        for _ in 0..10 {
            let h = FermionHamiltonian::random_chemist(m, 2, 0.6, &mut rng);
            let terms = e.map_hamiltonian(&h, &mut Realization::MinWeight).unwrap().terms;
            let pa = if rng.random::<bool>() { 1 } else { -1 };
            let pb = if rng.random::<bool>() { 1 } else { -1 };
            let w = jw_parity_compress(&terms, m, pa, pb).unwrap().max_weight();
            worst_excess = worst_excess.max(w as i64 - (m as i64 + 2));
            if w > m + 2 {
                bad.push(format!("M{m}: weight {w}"));
            }
            instances += 1;
        }
    }
    let mut worst = 0.0f64;
    let e = jw_two_sector(2);
    for _ in 0..10 {
        let h = FermionHamiltonian::random_chemist(2, 2, 1.0, &mut rng);
        let mapped = e.map_hamiltonian(&h, &mut Realization::MinWeight).unwrap();
        let full = mapped.with_constant();
        for (pa, pb) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
            let sector = [sector_string(4, 0..2, pa), sector_string(4, 2..4, pb)];
            let small = jw_parity_compress(&full, 2, pa, pb).unwrap();
            let e_small = spectrum_in_codespace(&small, &sector).unwrap()[0];
            let e_full = spectrum_in_codespace(&full, &sector).unwrap()[0];
            let oracle = fermion_spectrum(&h, &[(vec![0, 1], pa < 0), (vec![2, 3], pb < 0)]).unwrap()[0];
            let d = (e_small - e_full).abs().max((e_small - oracle).abs());
            worst = worst.max(d);
            if d >= 1e-9 {
                bad.push(format!("ground shift {d:.2e}"));
            }
        }
    }
    verdict(
        bad.is_empty() && instances >= 50,
        format!("{instances} instances, max weight − (M+2) = {worst_excess}; 40 sector grounds, max |Δ| {worst:.2e} {bad:?}"),
    )
}

fn c9_rotation() -> Verdict {
    let t = InteractionGraph::build(&GraphKind::Complete(3)).unwrap();
    let e = Encoding::build(&InteractionGraph::disjoint_union(&[t.clone(), t]).unwrap(), Family::JwChain).unwrap();
    let mut group = Vec::new();
    for off in [0, 3] {
        for s in ["XIX", "YIY", "ZIZ", "IZI", "XZX", "YZY"] {
            group.push(pauli(s).embed(6, off));
        }
    }
    let r = rotation_measurement(&e, &group).unwrap();
    let z_only = r.z_images.iter().chain(&r.stab_images).all(|p| p.is_z_only());
    let simg: BTreeSet<String> = r.stab_images.iter().map(|s| s.unsigned().letters()).collect();
    let want: BTreeSet<String> = ["IZZIII", "IIIIZZ"].into_iter().map(String::from).collect();
    let naive = naive_rotation(6, &e.stabilizers().generators, &group).unwrap();
    verdict(
        z_only && simg == want && r.overlap >= 10 && naive.overlap < r.overlap,
        format!("Z-only {z_only}, stabilizer images {simg:?}, overlap {}/12, naive {}/12", r.overlap, naive.overlap),
    )
}

fn c10_noise_sweep() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut h = FermionHamiltonian::random_chemist(4, 2, 1.0, &mut rng).scaled(0.1);
    for s in 0..2 {
        for (i, e) in [-2.0, -1.5, 1.5, 2.0].into_iter().enumerate() {
            h.add_one_body(s, i, i, e).unwrap();
        }
    }
    let occ = [true, true, false, false, true, true, false, false];
    let mut rows = Vec::new();
    for (g, f) in [("loop:4:2", "jw"), ("loop:4:3", "cyclic:1"), ("loop:4:5", "cyclic:2"), ("loop:4:7", "cyclic:3")] {
        let e = enc(g, f, 2);
        let spec = ExperimentSpec {
            occupation: &occ,
            shots: 1_000_000,
            noise: NoiseModel::new(0.001, 0.0).unwrap(),
            ansatz_layers: 10,
            seed: 1,
        };
        let r = cmd_experiment(&h, &e, &spec).unwrap();
        rows.push((r.abs_error, r.stderr, r.acceptance));
    }
    let err = |k: usize| rows[k].0;
    let improves = err(2) < err(0) && err(1) < err(0);
    let sigma = (rows[2].1.powi(2) + rows[3].1.powi(2)).sqrt();
    let flat = (err(3) - err(2)).abs() < sigma;
    let acc_down = rows.windows(2).all(|w| w[1].2 < w[0].2);
    let table: Vec<_> = rows.iter().zip(2..).map(|((e, s, a), d)| format!("d{d}: |ΔE| {e:.4}±{s:.4} acc {a:.3}")).collect();
    verdict(
        improves && flat && acc_down,
        format!(
            "{}; improves {improves}, |Δ(d4→d5)| {:.4} vs σ {sigma:.4}: {flat}, acceptance decreasing {acc_down}",
            table.join(", "),
            (err(3) - err(2)).abs()
        ),
    )
}

fn random_orthogonal(m: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(m, m, |_, _| StandardNormal.sample(&mut rng));
    g.qr().q()
}

fn sampled_occupations(e: &Encoding, occ: &[bool], u: &DMatrix<f64>, conn: &Connectivity, shots: usize) -> (Vec<f64>, Vec<f64>) {
    let mut c = encode_state(e, occ).unwrap();
    c.extend(&fgu_orbital_rotation(u, e, conn).unwrap());
    for q in 0..e.n_qubits() {
        c.push(Gate::M(q));
    }
    let s = sample_statevector(&c, &NoiseModel::noiseless(), shots, 3, 1).unwrap();
    let images: Vec<TermImage> = (0..occ.len())
        .map(|v| {
            let b = e.vertex_operator(v);
            assert!(b.is_z_only());
            TermImage { coefficient: 1.0, sign: if b.phase() == 2 { -1.0 } else { 1.0 }, columns: b.support() }
        })
        .collect();
    let o = estimate_occupations(&s, &images, None).unwrap();
    (o.values, o.stderr)
}

fn c11_fgu() -> Verdict {
    let shots = 100_000;
    let mut worst = 0.0f64;
    let mut pass = true;
    for m in [4, 6, 8] {
        let u = random_orthogonal(m, 40 + m as u64);
        let occ: Vec<bool> = (0..m).map(|i| i % 2 == 0 && i < 2 * (m / 4) * 2).collect();
        let want: Vec<f64> = (0..m).map(|k| (0..m).filter(|&j| occ[j]).map(|j| u[(j, k)].powi(2)).sum()).collect();
        for (kind, conn) in [(FguEncoding::TwoNN2, Connectivity::interleaved(m)), (FguEncoding::Jw, Connectivity::linear(m))] {
            let e = kind.build(m).unwrap();
            let (got, _) = sampled_occupations(&e, &occ, &u, &conn, shots);
            for (g, w) in got.iter().zip(&want) {
                let sigma = (w * (1.0 - w) / shots as f64).sqrt().max(1.0 / shots as f64);
                let z = (g - w).abs() / sigma;
                worst = worst.max(z);
                pass &= z <= 5.0;
            }
        }
    }
    let sizes = [4, 6, 8, 10, 12, 14];
    let series = |f: &dyn Fn(usize) -> usize| sizes.iter().map(|&m| f(m)).collect::<Vec<_>>();
    let gse = series(&|m| {
        let e = FguEncoding::TwoNN2.build(m).unwrap();
        fgu_orbital_rotation(&random_orthogonal(m, m as u64), &e, &Connectivity::interleaved(m)).unwrap().depth()
    });
    let base = series(&|m| {
        let e = FguEncoding::Jw.build(m).unwrap();
        standard_orbital_rotation(&random_orthogonal(m, m as u64), &e, &Connectivity::linear(m)).unwrap().depth()
    });
    let diffs = |s: &[usize]| s.windows(2).map(|w| w[1] as f64 - w[0] as f64).collect::<Vec<_>>();
    let (dg, db) = (diffs(&gse), diffs(&base));
    let mean = dg.iter().sum::<f64>() / dg.len() as f64;
    let linear = dg.windows(2).all(|w| (w[1] - w[0]).abs() <= 0.1 * mean);
    let superlinear = db.windows(2).all(|w| w[1] > w[0]);
    verdict(
        pass && linear && superlinear,
        format!("max deviation {worst:.2}σ at {shots} shots; depth M={sizes:?}: FGU {gse:?} (linear {linear}), baseline {base:?} (superlinear {superlinear})"),
    )
}

fn c12_rotor() -> Verdict {
    let mut pass = true;
    let mut detail = Vec::new();
    for n in [2, 3] {
        for dm in [3, 5] {
            let r = rotor_circuits(n, dm, 1.0, 0.1).unwrap();
            let depth = r.depth_gse as f64 / r.depth_jw as f64;
            let gates = r.gates_gse as f64 / r.gates_jw as f64;
            pass &= depth <= 0.6 && (0.9..=1.3).contains(&gates);
            detail.push(format!("N{n}d{dm}: depth {depth:.2} gates {gates:.2}"));
        }
    }
    verdict(pass, detail.join(", "))
}

fn c13_qubit_counts() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let h = FermionHamiltonian::random_chemist(19, 2, 0.002, &mut rng);
    let gse = cmd_map(&h, &enc("complete:19", "jw", 2), &mut Realization::MinWeight, false).unwrap().report;
    let jw = cmd_map(&h, &enc("line:19", "jw", 2), &mut Realization::MinWeight, false).unwrap().report;
    verdict(
        gse.n_qubits == 342 && gse.qubits_per_sector == 171 && jw.n_qubits == 38 && jw.qubits_per_sector == 19,
        format!(
            "complete(19): {} qubits ({} per sector); line(19) JW: {} qubits; {} terms",
            gse.n_qubits, gse.qubits_per_sector, jw.n_qubits, h.nonzero_count()
        ),
    )
}

type Check = (&'static str, fn() -> Verdict, Option<u64>);

fn main() {
    let checks: [Check; 13] = [
        ("majorana algebra", c1_algebra, Some(30)),
        ("loop stabilizers", c2_loops, None),
        ("multi-edge stabilizer weight", c3_weight_six, None),
        ("golden strings", c4_golden, None),
        ("codespace spectra", c5_spectra, Some(300)),
        ("trotter depth", c6_depth, None),
        ("code distances", c7_distances, Some(120)),
        ("parity compression", c8_compression, None),
        ("rotation measurement", c9_rotation, None),
        ("noise sweep", c10_noise_sweep, Some(600)),
        ("orbital rotations", c11_fgu, None),
        ("rotor circuits", c12_rotor, None),
        ("qubit counts", c13_qubit_counts, None),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (k, (name, f, limit)) in checks.iter().enumerate() {
        if only.is_some_and(|o| o != k + 1) {
            continue;
        }
        let t = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        let el = t.elapsed();
        let v = within(v, el, limit.map(Duration::from_secs));
        if !v.pass {
            failed += 1;
        }
        println!("{:>2} {:<29} {} ({:.1?}) {}", k + 1, name, if v.pass { "PASS" } else { "FAIL" }, el, v.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
