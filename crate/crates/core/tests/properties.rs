use gseforge::fermion::FermionHamiltonian;
use gseforge::reduce::jw_parity_compress;
use gseforge::cli::build_encoding;
use gseforge::encoder::Realization;
use gseforge::sim::dense::dense_fermion_matrix;
use gseforge::sim::StateVector;
use gseforge::tableau::{synthesize_state, Circuit, Gate, StabilizerState};
use gseforge::{PauliTerm, WeightedPauliSum};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn letters(n: usize) -> impl Strategy<Value = PauliTerm> {
    (proptest::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(ls, ph)| {
        let s: String = ls.iter().map(|&l| ['I', 'X', 'Y', 'Z'][l as usize]).collect();
        s.parse::<PauliTerm>().unwrap().with_phase(ph)
    })
}

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    (0..n, 0..n, 0u8..8).prop_map(|(a, b, k)| match k {
        0 => Gate::H(a),
        1 => Gate::S(a),
        2 => Gate::Sdg(a),
        3 => Gate::SX(a),
        4 => Gate::X(a),
        5 if a != b => Gate::CX(a, b),
        6 if a != b => Gate::CZ(a, b),
        7 if a != b => Gate::Swap(a, b),
        _ => Gate::Z(a),
    })
}

fn circuit(n: usize, len: usize) -> impl Strategy<Value = Circuit> {
    proptest::collection::vec(gate(n), 0..len).prop_map(move |gs| {
        let mut c = Circuit::new(n);
        for g in gs {
            c.push(g);
        }
        c
    })
}

proptest! {
    #[test]
    fn product_is_associative((a, b, c) in (letters(70), letters(70), letters(70))) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn commutation_matches_products((a, b) in (letters(9), letters(9))) {
        prop_assert_eq!(a.commutes(&b), &a * &b == &b * &a);
        prop_assert!((&a * &b).weight() <= a.weight() + b.weight());
    }

    #[test]
    fn hermitian_strings_square_to_identity(a in letters(65)) {
        let h = a.unsigned();
        prop_assert!(h.is_hermitian());
        prop_assert_eq!(&h * &h, PauliTerm::identity(65));
    }

    #[test]
    fn conjugation_is_a_homomorphism((c, a, b) in (circuit(6, 30), letters(6), letters(6))) {
        let lhs = c.conjugate(&(&a * &b)).unwrap();
        let rhs = &c.conjugate(&a).unwrap() * &c.conjugate(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(c.inverse().conjugate(&c.conjugate(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn conjugated_z_stabilizes_the_statevector(c in circuit(5, 25)) {
        let mut sv = StateVector::zero(5).unwrap();
        sv.run(&c).unwrap();
        for k in 0..5 {
            let p = c.conjugate(&PauliTerm::single(5, k, 'Z')).unwrap();
            prop_assert!((sv.expectation(&p) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn synthesized_states_carry_their_stabilizers(c in circuit(7, 40)) {
        let rows: Vec<_> = (0..7).map(|k| c.conjugate(&PauliTerm::single(7, k, 'Z')).unwrap()).collect();
        let prep = synthesize_state(&rows).unwrap();
        let st = StabilizerState::from_circuit(&prep).unwrap();
        for r in &rows {
            prop_assert_eq!(st.peek(r), Some(1));
        }
    }

    #[test]
    fn circuit_text_round_trips(c in circuit(5, 20)) {
        prop_assert_eq!(Circuit::from_text(&c.to_text()).unwrap().gates, c.gates);
    }

    #[test]
    fn sum_text_round_trips(terms in proptest::collection::vec((letters(5), -2.0f64..2.0), 1..12)) {
        let mut s = WeightedPauliSum::new(5);
        for (p, c) in &terms {
            s.add(Complex64::new(*c, 0.0), &p.unsigned());
        }
        let back = WeightedPauliSum::from_text(&s.to_text()).unwrap();
        prop_assert_eq!(back.len(), s.len());
        for (p, c) in s.iter() {
            prop_assert!((back.coefficient(p) - c).norm() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parity_compression_bounds_weight(m in 2usize..7, seed in any::<u64>(), pa in prop::bool::ANY, pb in prop::bool::ANY) {
        let h = FermionHamiltonian::random_chemist(m, 2, 0.5, &mut ChaCha8Rng::seed_from_u64(seed));
        let enc = build_encoding(&format!("line:{m}"), "jw", 2, 0).unwrap();
        let terms = enc.map_hamiltonian(&h, &mut Realization::MinWeight).unwrap().terms;
        let out = jw_parity_compress(&terms, m, if pa { 1 } else { -1 }, if pb { 1 } else { -1 }).unwrap();
        prop_assert!(out.max_weight() <= m + 2);
        prop_assert!(out.len() <= terms.len());
    }

    #[test]
    fn hamiltonian_json_round_trips(m in 1usize..5, seed in any::<u64>()) {
        let h = FermionHamiltonian::random_chemist(m, 2, 0.5, &mut ChaCha8Rng::seed_from_u64(seed));
        let back = FermionHamiltonian::from_json(&h.to_json()).unwrap();
        let d = dense_fermion_matrix(&back).unwrap() - dense_fermion_matrix(&h).unwrap();
        prop_assert!(d.abs().max() < 1e-12);
    }
}
