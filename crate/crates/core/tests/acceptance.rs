//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use pauli_synth::bench::{self, BenchmarkConfig, Method, RandomSpec};
use pauli_synth::pauli::conjugate_letter;
use pauli_synth::synth::{naive_synthesize, synthesize, Mode, SynthConfig};
use pauli_synth::tableau::{self, CliffordTableau};
use pauli_synth::verify;
use pauli_synth::{Circuit, CliffordGate, Gate, PauliLetter, PauliPolynomial, PauliString, QubitPermutation, Topology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_clifford(rng: &mut ChaCha8Rng, q: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(q);
    for _ in 0..len {
        let a = rng.random_range(0..q);
        let gate = match rng.random_range(0..if q > 1 { 6 } else { 5 }) {
            0 => CliffordGate::H(a),
            1 => CliffordGate::S(a),
            2 => CliffordGate::Sdg(a),
            3 => CliffordGate::V(a),
            4 => CliffordGate::Vdg(a),
            _ => {
                let mut b = rng.random_range(0..q - 1);
                if b >= a {
                    b += 1;
                }
                CliffordGate::cnot(a, b)
            }
        };
        c.append(gate).unwrap();
    }
    c
}

/// Five single-qubit gates on four letters and CNOT (both orientations) on
/// sixteen letter pairs, each compared with `G† P G` computed densely.
fn conjugation_table() -> Outcome {
    let mut cases = 0;
    let mut mismatches = Vec::new();
    let singles = [CliffordGate::H(0), CliffordGate::S(0), CliffordGate::Sdg(0), CliffordGate::V(0), CliffordGate::Vdg(0)];
    let mut check = |gate: CliffordGate, letters: Vec<PauliLetter>| {
        let n = letters.len();
        let g = verify::circuit_unitary(&Circuit::from_gates(n, vec![Gate::from(gate)]).unwrap()).unwrap();
        let p = verify::pauli_matrix(&PauliString::new(letters.clone())).unwrap();
        let dense = g.matrix().adjoint() * p * g.matrix();
        let (want, want_flip) = verify::identify_pauli(&dense, n).unwrap();
        // qubit-indexed strings exercise the reversed CNOT orientation
        let (got, got_flip) = match gate {
            CliffordGate::Cnot { control: 1, .. } => {
                let mut s = PauliString::new(letters.clone());
                let flip = s.conjugate(gate);
                (s.letters().to_vec(), flip)
            }
            _ => conjugate_letter(gate, &letters),
        };
        cases += 1;
        if got != want.letters() || got_flip != want_flip {
            mismatches.push(format!("{gate:?} on {letters:?}"));
        }
    };
    for gate in singles {
        for l in PauliLetter::ALL {
            check(gate, vec![l]);
        }
    }
    for a in PauliLetter::ALL {
        for b in PauliLetter::ALL {
            check(CliffordGate::cnot(0, 1), vec![a, b]);
            check(CliffordGate::cnot(1, 0), vec![a, b]);
        }
    }
    outcome(cases == 5 * 4 + 2 * 16 && mismatches.is_empty(), format!("{cases} cases, mismatches: {mismatches:?}"))
}

fn end_to_end_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for i in 0..200u64 {
        let q = rng.random_range(2..=5);
        let n = rng.random_range(1..=20);
        let topo = if i % 2 == 0 { Topology::complete(q) } else { Topology::line(q) };
        let mode = if i % 4 < 2 { Mode::ArbitraryOrder } else { Mode::CommutingSets };
        let cfg = SynthConfig { mode, ..SynthConfig::default() };
        let poly = bench::random_polynomial(&RandomSpec::new(q, n, 1000 + i)).unwrap();
        let r = synthesize(&poly, &topo, &cfg).unwrap();
        let mut d = verify::check_synthesis(&poly, &r).unwrap();
        if mode == Mode::CommutingSets {
            // source order too, since only commuting gadgets were swapped
            let expected = verify::polynomial_unitary(&poly).unwrap();
            let actual = verify::circuit_unitary(&r.circuit).unwrap();
            d = d.max(verify::distance_up_to_phase(&actual, &expected, &r.permutation).unwrap());
        }
        worst = worst.max(d);
        if d > 1e-9 {
            failures.push(i);
        }
    }
    outcome(failures.is_empty(), format!("200 instances, worst distance {worst:.2e}, failing: {failures:?}"))
}

fn architecture_conformance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = Vec::new();
    let mut total_cnots = 0;
    for i in 0..1000u64 {
        let topo = match i % 3 {
            0 => Topology::line(rng.random_range(2..=16)),
            1 => Topology::cycle(rng.random_range(3..=16)),
            _ => {
                let rows = rng.random_range(1..=4);
                Topology::grid(rows, rng.random_range(2..=4))
            }
        };
        let n = rng.random_range(1..=40);
        let poly = bench::random_polynomial(&RandomSpec::new(topo.num_qubits(), n, 5000 + i)).unwrap();
        let allow_permutation = i % 5 != 0;
        let cfg = SynthConfig { allow_permutation, ..SynthConfig::default() };
        let r = synthesize(&poly, &topo, &cfg).unwrap();
        let naive = naive_synthesize(&poly, &topo).unwrap();
        total_cnots += r.circuit.cnot_count();
        if !r.circuit.conforms(&topo) || !naive.circuit.conforms(&topo) {
            bad.push(i);
        }
    }
    outcome(bad.is_empty(), format!("1000 instances, {total_cnots} CNOTs, non-conforming: {bad:?}"))
}

fn tableau_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    for i in 0..200 {
        let q = rng.random_range(1..=5);
        let len = rng.random_range(0..=100);
        let c = random_clifford(&mut rng, q, len);
        let topo = if i % 2 == 0 { Topology::complete(q) } else { Topology::line(q) };
        let t = CliffordTableau::from_circuit(&c).unwrap();
        let target = verify::circuit_unitary(&c).unwrap();
        for allow in [false, true] {
            let s = tableau::synthesize(&t, &topo, allow).unwrap();
            let residual = CliffordTableau::from_circuit(&s.circuit.inverse().concat(&c).unwrap()).unwrap();
            let residual_ok = (0..2 * q).all(|r| !residual.sign(r))
                && residual.as_permutation().as_ref() == Some(&s.permutation)
                && (allow || s.permutation.is_identity());
            let u = verify::circuit_unitary(&s.circuit).unwrap();
            let equivalent = verify::equivalent(&u, &target, &s.permutation, 1e-9).unwrap();
            if !(residual_ok && equivalent && s.circuit.conforms(&topo)) {
                failures.push((i, allow));
            }
        }
    }
    outcome(failures.is_empty(), format!("200 circuits x 2 modes, failing: {failures:?}"))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn complexity_envelopes() -> Outcome {
    let mut worst_ratio: f64 = 0.0;
    let mut violations = Vec::new();
    let topologies = [
        Topology::complete(4),
        Topology::line(8),
        Topology::cycle(12),
        Topology::complete(16),
        Topology::grid(4, 4),
        Topology::line(16),
    ];
    for (ti, topo) in topologies.iter().enumerate() {
        let q = topo.num_qubits();
        for n in [10, 50, 100, 250, 500] {
            for seed in 0..2u64 {
                let poly = bench::random_polynomial(&RandomSpec::new(q, n, 31 * seed + ti as u64)).unwrap();
                let r = synthesize(&poly, topo, &SynthConfig::default()).unwrap();
                let bound = 6 * (n * q + q * q);
                let ratio = r.circuit.cnot_count() as f64 / (n * q + q * q) as f64;
                worst_ratio = worst_ratio.max(ratio);
                if r.circuit.cnot_count() > bound {
                    violations.push((q, n, seed));
                }
            }
        }
    }

    // wall time against n at fixed q, medians over a few seeds
    let topo = Topology::grid(4, 4);
    let ns = [50usize, 100, 200, 400];
    let mut points = Vec::new();
    for &n in &ns {
        let times: Vec<f64> = (0..5u64)
            .map(|seed| {
                let poly = bench::random_polynomial(&RandomSpec::new(16, n, 77 + seed)).unwrap();
                let start = Instant::now();
                let r = synthesize(&poly, &topo, &SynthConfig::default()).unwrap();
                std::hint::black_box(&r);
                start.elapsed().as_secs_f64()
            })
            .collect();
        points.push(((n as f64).ln(), median(times).ln()));
    }
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let slope = points.iter().map(|&(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum::<f64>();
    outcome(
        violations.is_empty() && slope < 3.0,
        format!("max CNOTs/(nq+q^2) = {worst_ratio:.3} (bound 6), violations {violations:?}; time slope {slope:.2} (< 3)"),
    )
}

fn improvement_claim() -> Outcome {
    let cfg = BenchmarkConfig::new(
        vec![Method::Naive, Method::Proposed],
        vec![("complete:5".into(), Topology::complete(5))],
        vec![100],
        20,
    );
    let rows = bench::run_benchmark(&cfg).unwrap();
    let mean = |m: Method, f: fn(&bench::ExperimentRow) -> usize| {
        let v: Vec<f64> = rows.iter().filter(|r| r.method == m).map(|r| f(r) as f64).collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let (nc, pc) = (mean(Method::Naive, |r| r.cnots), mean(Method::Proposed, |r| r.cnots));
    let (nd, pd) = (mean(Method::Naive, |r| r.cnot_depth), mean(Method::Proposed, |r| r.cnot_depth));
    outcome(
        rows.len() == 40 && pc <= 0.8 * nc && pd <= 0.8 * nd,
        format!("mean CNOTs {pc:.1} vs naive {nc:.1} (ratio {:.3}); CNOT depth {pd:.1} vs {nd:.1} (ratio {:.3})", pc / nc, pd / nd),
    )
}

fn trotter_parity() -> Outcome {
    let polys: Vec<PauliPolynomial> = (0..20u64)
        .map(|seed| bench::random_polynomial(&RandomSpec::new(6, 160, 900 + seed).with_angles(&bench::TROTTER_ANGLES)).unwrap())
        .collect();
    let ts = bench::timesteps(17);
    let rows = bench::run_trotter_error(
        &polys,
        &[Method::Naive, Method::Proposed],
        &ts,
        &Topology::complete(6),
        &SynthConfig::default(),
        1,
    )
    .unwrap();
    let naive = bench::mean_infidelity(&rows, Method::Naive);
    let proposed = bench::mean_infidelity(&rows, Method::Proposed);
    let t0_ok = rows.iter().filter(|r| r.timestep == 0.0).all(|r| (r.overlap_abs - 1.0).abs() < 1e-9);
    outcome(
        rows.len() == 20 * 17 * 2 && t0_ok && proposed <= 2.0 * naive,
        format!("mean 1-|overlap|: proposed {proposed:.3e}, naive {naive:.3e} (ratio {:.3})", proposed / naive),
    )
}

fn worked_example() -> Outcome {
    let poly = PauliPolynomial::from_terms(&[(0.3, "IIZZ"), (PI / 5.0, "YXZX"), (-0.7, "IIYZ"), (1.1, "YXZI")]);
    let topo = Topology::line(4);
    let r = synthesize(&poly, &topo, &SynthConfig::default()).unwrap();
    let d = verify::check_synthesis(&poly, &r).unwrap();
    let pos = |i: usize| r.emitted_order.iter().position(|&e| e == i).unwrap();
    let adjacent = pos(0).abs_diff(pos(2)) == 1 && pos(1).abs_diff(pos(3)) == 1;
    outcome(
        d <= 1e-9 && adjacent && r.circuit.conforms(&topo),
        format!("distance {d:.2e}, emitted order {:?}, {} CNOTs", r.emitted_order, r.circuit.cnot_count()),
    )
}

fn permutation_direction() -> Outcome {
    let c = Circuit::from_gates(
        2,
        vec![Gate::Cnot { control: 0, target: 1 }, Gate::Cnot { control: 1, target: 0 }, Gate::Cnot { control: 0, target: 1 }],
    )
    .unwrap();
    let t = CliffordTableau::from_circuit(&c).unwrap();
    let s = tableau::synthesize(&t, &Topology::line(2), true).unwrap();
    let swap = QubitPermutation::new(vec![1, 0]).unwrap();
    outcome(s.circuit.cnot_count() == 0 && s.permutation == swap, format!("swap -> {:?}", s.permutation.as_slice()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 conjugation table vs dense oracle", conjugation_table, Duration::from_secs(1)),
        ("2 end-to-end unitary equivalence", end_to_end_equivalence, Duration::from_secs(120)),
        ("3 architecture conformance", architecture_conformance, Duration::from_secs(300)),
        ("4 tableau round-trip", tableau_round_trip, Duration::from_secs(120)),
        ("5 complexity envelopes", complexity_envelopes, Duration::from_secs(900)),
        ("6 improvement over naive baseline", improvement_claim, Duration::from_secs(300)),
        ("7 product-formula error parity", trotter_parity, Duration::from_secs(1200)),
        ("8 four-qubit worked example", worked_example, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.2}s / {}s budget]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    let o = permutation_direction();
    println!("{} permutation direction check: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    if !o.pass {
        failed += 1;
    }
    if failed > 0 {
        eprintln!("{failed} acceptance check(s) failed");
        std::process::exit(1);
    }
}
