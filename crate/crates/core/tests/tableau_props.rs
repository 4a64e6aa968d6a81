use pauli_synth::tableau::{self, h_col, h_row};
use pauli_synth::{verify, Circuit, CliffordGate, CliffordTableau, QubitPermutation, Topology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_gate(rng: &mut ChaCha8Rng, q: usize) -> CliffordGate {
    let a = rng.random_range(0..q);
    let b = (a + rng.random_range(1..q)) % q;
    match rng.random_range(0..6) {
        0 => CliffordGate::H(a),
        1 => CliffordGate::S(a),
        2 => CliffordGate::Sdg(a),
        3 => CliffordGate::V(a),
        4 => CliffordGate::Vdg(a),
        _ => CliffordGate::cnot(a, b),
    }
}

#[test]
fn prepend_keeps_tableau_symplectic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut t = CliffordTableau::identity(6);
    for _ in 0..500 {
        t.prepend(random_gate(&mut rng, 6));
        assert!(t.is_symplectic());
    }
}

#[test]
fn cnot_count_is_quadratic_in_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for q in [2usize, 4, 8, 12, 16] {
        for topo in [Topology::complete(q), Topology::line(q), Topology::cycle(q.max(3)), Topology::grid(2, q / 2)] {
            if topo.num_qubits() != q {
                continue;
            }
            for _ in 0..5 {
                let mut t = CliffordTableau::identity(q);
                for _ in 0..20 * q * q {
                    t.prepend(random_gate(&mut rng, q));
                }
                for allow in [false, true] {
                    let s = tableau::synthesize(&t, &topo, allow).unwrap();
                    assert!(s.circuit.conforms(&topo));
                    worst = worst.max(s.circuit.cnot_count() as f64 / (q * q) as f64);
                }
            }
        }
    }
    assert!(worst <= 8.0, "CNOTs / q^2 reached {worst}");
}

#[test]
fn complete_graph_without_permutation_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let q = rng.random_range(2..=5);
        let mut c = Circuit::new(q);
        for _ in 0..60 {
            c.append(random_gate(&mut rng, q)).unwrap();
        }
        let t = CliffordTableau::from_circuit(&c).unwrap();
        let s = tableau::synthesize(&t, &Topology::complete(q), false).unwrap();
        assert!(s.permutation.is_identity());
        let same = verify::equivalent(
            &verify::circuit_unitary(&s.circuit).unwrap(),
            &verify::circuit_unitary(&c).unwrap(),
            &QubitPermutation::identity(q),
            1e-9,
        )
        .unwrap();
        assert!(same);
    }
}

#[test]
fn permutation_mode_never_costs_more_on_pure_permutations() {
    // a wire permutation built from swaps is free with relabelling
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let q = 5;
        let mut c = Circuit::new(q);
        for _ in 0..6 {
            let a = rng.random_range(0..q - 1);
            for (x, y) in [(a, a + 1), (a + 1, a), (a, a + 1)] {
                c.append(CliffordGate::cnot(x, y)).unwrap();
            }
        }
        let t = CliffordTableau::from_circuit(&c).unwrap();
        let s = tableau::synthesize(&t, &Topology::line(q), true).unwrap();
        assert_eq!(s.circuit.cnot_count(), 0);
    }
}

#[test]
fn h_row_total_is_invariant_under_row_relabelling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut t = CliffordTableau::identity(4);
    for _ in 0..40 {
        t.prepend(random_gate(&mut rng, 4));
    }
    let total: usize = (0..4).map(|r| h_row(&t, r)).sum();
    // relabelling physical wires with a swap leaves the summed footprint
    let mut swapped = t.clone();
    for (x, y) in [(0, 1), (1, 0), (0, 1)] {
        swapped.prepend(CliffordGate::cnot(x, y));
    }
    assert_eq!(total, (0..4).map(|r| h_row(&swapped, r)).sum::<usize>());
    let identity = CliffordTableau::identity(3);
    assert!((0..3).all(|c| h_col(&identity, c, &Topology::line(3)) == 0));
}
