mod common;

use common::{c, pauli_dense};
use proptest::prelude::*;
use xxchain::experiments::{flow_logicals, flow_snapshots};
use xxchain::pauli::{bias_check, equivalent_modulo, verify_flow, Letter, PauliString, Phase};

fn ps(s: &str) -> PauliString {
    s.parse().unwrap()
}

fn pauli(max_n: usize) -> impl Strategy<Value = PauliString> {
    (1..=max_n).prop_flat_map(|n| {
        let m = (1u64 << n) - 1;
        (Just(n), any::<u64>(), any::<u64>(), 0u32..4)
            .prop_map(move |(n, x, z, k)| PauliString::from_masks(n, x & m, z & m, Phase::from_power(k)))
    })
}

/// Two or three strings on a common qubit count.
fn pauli_triple(max_n: usize) -> impl Strategy<Value = (PauliString, PauliString, PauliString)> {
    (1..=max_n).prop_flat_map(|n| {
        let m = (1u64 << n) - 1;
        let one = move || {
            (any::<u64>(), any::<u64>(), 0u32..4)
                .prop_map(move |(x, z, k)| PauliString::from_masks(n, x & m, z & m, Phase::from_power(k)))
        };
        (one(), one(), one())
    })
}

#[test]
fn parse_places_letters_by_position() {
    let p = ps("IIX;IIXXII");
    assert_eq!(p.n_qubits(), 9);
    let xs: Vec<usize> = (0..9).filter(|&q| p.letter(q) == Letter::X).collect();
    assert_eq!(xs, vec![2, 5, 6]);
    assert_eq!(p.weight(), 3);
    assert_eq!(p.phase(), Phase::ONE);
}

#[test]
fn identity_string() {
    let p = ps("III;IIIIII");
    assert!(p.is_identity());
    assert_eq!(p.phase(), Phase::ONE);
    assert_eq!(p, PauliString::identity(9));
}

#[test]
fn display_round_trips_with_separator() {
    assert_eq!(ps("ZZZ;IIIIII").to_string(), "ZZZ;IIIIII");
    assert_eq!(ps("-iXY;Z").to_string(), "-iXY;Z");
}

#[test]
fn parse_rejects_bad_input() {
    assert!("IXQ".parse::<PauliString>().is_err());
    assert!("".parse::<PauliString>().is_err());
    assert!(PauliString::parse("XX", 3).is_err());
}

#[test]
fn products_from_the_flow() {
    assert_eq!(ps("IIX;IIIIII").multiply(&ps("III;IIXXII")), ps("IIX;IIXXII"));
    assert_eq!(ps("IIX;IIXXII").multiply(&ps("III;IIXIII")), ps("IIX;IIIXII"));
}

#[test]
fn single_qubit_products() {
    assert_eq!(ps("X").multiply(&ps("Y")), ps("iZ"));
    assert_eq!(ps("Y").multiply(&ps("X")), ps("-iZ"));
    assert_eq!(ps("Z").multiply(&ps("X")), ps("iY"));
    assert_eq!(ps("Y").multiply(&ps("Y")), ps("I"));
}

#[test]
fn commutation_examples() {
    assert!(ps("ZZ").commutes(&ps("XX")));
    assert!(!ps("ZI").commutes(&ps("XI")));
}

#[test]
fn size_mismatch_is_an_error() {
    assert!(ps("XX").try_multiply(&ps("XXX")).is_err());
    assert!(ps("XX").try_commutes(&ps("X")).is_err());
}

#[test]
fn control_parity_commutes_with_every_snapshot_term() {
    let zc = ps("ZZZ;IIIIII");
    let snaps = flow_snapshots(3);
    assert_eq!(snaps.len(), 4);
    for (k, terms) in snaps.iter().enumerate() {
        for t in terms {
            assert!(zc.commutes(t), "H{} term {t}", k + 1);
        }
    }
}

fn reps(report: &xxchain::pauli::FlowReport, name: &str) -> Vec<String> {
    report.flow(name).unwrap().steps.iter().map(|s| s.representative.to_string()).collect()
}

#[test]
fn flow_length_three_matches_quoted_strings() {
    let report = verify_flow(&flow_snapshots(3), &flow_logicals(3));
    assert!(report.pass);
    assert_eq!(reps(&report, "Xc"), ["IIX;IIIIII", "IIX;IIXXII", "IIX;IIIXII"]);
    assert_eq!(reps(&report, "Zc"), ["ZZZ;IIIIII"]);
    assert_eq!(reps(&report, "Zt"), ["III;IIIZZZ", "III;ZZZZZZ", "ZZZ;IIIZZZ"]);
    for f in &report.flows {
        assert_eq!(f.sign, Some(Phase::ONE), "{}", f.name);
    }
}

#[test]
fn flow_tableau_is_cnot_for_short_and_long_chains() {
    for l in [2, 4] {
        let report = verify_flow(&flow_snapshots(l), &flow_logicals(l));
        assert!(report.pass, "L={l}");
        assert!(bias_check(&report), "L={l}");
    }
}

#[test]
fn bias_holds_for_reconstructed_schedules() {
    for l in [2, 3] {
        assert!(bias_check(&verify_flow(&flow_snapshots(l), &flow_logicals(l))));
    }
}

#[test]
fn corrupted_parity_flow_breaks_bias() {
    let mut report = verify_flow(&flow_snapshots(3), &flow_logicals(3));
    let zt = report.flows.iter_mut().find(|f| f.name == "Zt").unwrap();
    zt.steps[0].representative = ps("III;IIIZXZ");
    assert!(!bias_check(&report));
}

#[test]
fn wrong_logicals_fail_the_tableau() {
    let mut logicals = flow_logicals(2);
    std::mem::swap(&mut logicals.x_c, &mut logicals.x_t);
    assert!(!verify_flow(&flow_snapshots(2), &logicals).pass);
}

#[test]
fn equivalence_modulo_stabilizers() {
    let terms = vec![ps("XXI"), ps("IXX")];
    assert_eq!(equivalent_modulo(&ps("XII"), &ps("IXI"), &terms), Some(Phase::ONE));
    assert_eq!(equivalent_modulo(&ps("XII"), &ps("-IIX"), &terms), Some(Phase::MINUS_ONE));
    assert_eq!(equivalent_modulo(&ps("XII"), &ps("ZII"), &terms), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn associativity((a, b, d) in pauli_triple(8)) {
        prop_assert_eq!(a.multiply(&b).multiply(&d), a.multiply(&b.multiply(&d)));
    }

    #[test]
    fn identity_and_inverse(p in pauli(8)) {
        let id = PauliString::identity(p.n_qubits());
        prop_assert_eq!(p.multiply(&id), p.clone());
        prop_assert_eq!(id.multiply(&p), p.clone());
        // p·p = phase² · I
        let sq = p.multiply(&p);
        prop_assert!(sq.is_identity());
        prop_assert_eq!(sq.phase(), p.phase() * p.phase());
    }

    #[test]
    fn commutation_matches_product_order((a, b, _) in pauli_triple(8)) {
        let ab = a.multiply(&b);
        let ba = b.multiply(&a);
        prop_assert!(ab.same_letters(&ba));
        let expected = if a.commutes(&b) { Phase::ONE } else { Phase::MINUS_ONE };
        prop_assert_eq!(ab.phase(), ba.phase() * expected);
        prop_assert_eq!(a.commutes(&b), b.commutes(&a));
    }

    #[test]
    fn display_parse_round_trip(p in pauli(12)) {
        let back: PauliString = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn product_matches_dense_oracle((a, b, _) in pauli_triple(4)) {
        let lhs = pauli_dense(&a.multiply(&b));
        let rhs = pauli_dense(&a) * pauli_dense(&b);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn hermitian_iff_real_phase(p in pauli(4)) {
        let m = pauli_dense(&p);
        let herm = (m.adjoint() - &m).norm() < 1e-12;
        prop_assert_eq!(herm, p.phase().is_real());
        // Every string is unitary.
        let dim = m.nrows();
        let id = nalgebra::DMatrix::<num_complex::Complex64>::identity(dim, dim);
        prop_assert!((m.adjoint() * &m - id).norm() < 1e-12);
    }

    #[test]
    fn commutation_matches_dense_oracle((a, b, _) in pauli_triple(4)) {
        let (ma, mb) = (pauli_dense(&a), pauli_dense(&b));
        let comm = (&ma * &mb - &mb * &ma).norm() < 1e-12;
        prop_assert_eq!(comm, a.commutes(&b));
    }
}

#[test]
fn phase_arithmetic() {
    assert_eq!(Phase::I * Phase::I, Phase::MINUS_ONE);
    assert_eq!(Phase::I.conj(), Phase::MINUS_I);
    assert_eq!(Phase::from_power(7), Phase::MINUS_I);
    let (re, im) = Phase::MINUS_I.value();
    assert_eq!(c(re, im), c(0.0, -1.0));
}
