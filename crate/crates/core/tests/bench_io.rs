use pauli_synth::bench::{self, BenchmarkConfig, Method};
use pauli_synth::{Circuit, Gate, Topology};

/// Minimal reader for the QASM subset this crate writes.
fn parse_qasm(text: &str) -> Circuit {
    let qubit = |s: &str| -> usize { s.trim().trim_start_matches("q[").trim_end_matches(']').parse().unwrap() };
    let mut circuit = None;
    for line in text.lines() {
        let line = line.trim().trim_end_matches(';');
        if line.starts_with("OPENQASM") || line.starts_with("include") || line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("qreg ") {
            circuit = Some(Circuit::new(qubit(rest)));
            continue;
        }
        let (op, args) = line.split_once(' ').unwrap();
        let c = circuit.as_mut().expect("qreg first");
        let gate = match op {
            "h" => Gate::H(qubit(args)),
            "s" => Gate::S(qubit(args)),
            "sdg" => Gate::Sdg(qubit(args)),
            "sx" => Gate::V(qubit(args)),
            "sxdg" => Gate::Vdg(qubit(args)),
            "cx" => {
                let (a, b) = args.split_once(',').unwrap();
                Gate::Cnot { control: qubit(a), target: qubit(b) }
            }
            rz if rz.starts_with("rz(") => Gate::Rz(qubit(args), rz[3..rz.len() - 1].parse().unwrap()),
            other => panic!("unexpected op {other}"),
        };
        c.append(gate).unwrap();
    }
    circuit.unwrap()
}

#[test]
fn benchmark_rows_and_persisted_qasm_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = BenchmarkConfig::new(
        vec![Method::Naive, Method::Proposed],
        vec![("line:4".into(), Topology::line(4)), ("grid:2x3".into(), Topology::grid(2, 3))],
        vec![5, 20],
        3,
    );
    cfg.emit_qasm = Some(dir.path().to_path_buf());
    let rows = bench::run_benchmark(&cfg).unwrap();
    assert_eq!(rows.len(), 2 * 2 * 2 * 3);
    for row in &rows {
        let text = std::fs::read_to_string(dir.path().join(bench::qasm_file_name(row))).unwrap();
        let m = parse_qasm(&text).metrics();
        assert_eq!((m.cnot_count, m.depth, m.two_qubit_depth), (row.cnots, row.depth, row.cnot_depth), "{row:?}");
    }
}

#[test]
fn benchmark_is_deterministic_apart_from_timing() {
    let cfg = BenchmarkConfig::new(
        vec![Method::Proposed, Method::Naive],
        vec![("cycle:5".into(), Topology::cycle(5))],
        vec![10],
        4,
    );
    let strip = |mut rows: Vec<bench::ExperimentRow>| {
        rows.iter_mut().for_each(|r| r.wall_time_ms = 0.0);
        rows
    };
    let a = strip(bench::run_benchmark(&cfg).unwrap());
    let b = strip(bench::run_benchmark(&cfg).unwrap());
    assert_eq!(a, b);
}

#[test]
fn complete_five_suite_has_forty_rows_and_proposed_wins() {
    let cfg = BenchmarkConfig::new(
        vec![Method::Naive, Method::Proposed],
        vec![("complete:5".into(), Topology::complete(5))],
        vec![100],
        20,
    );
    let rows = bench::run_benchmark(&cfg).unwrap();
    assert_eq!(rows.len(), 40);
    let mean = |m: Method| rows.iter().filter(|r| r.method == m).map(|r| r.cnots as f64).sum::<f64>() / 20.0;
    assert!(mean(Method::Proposed) < mean(Method::Naive));
}

#[test]
fn csv_file_has_metadata_then_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let cfg = BenchmarkConfig::new(vec![Method::Naive], vec![("line:2".into(), Topology::line(2))], vec![3], 2);
    let rows = bench::run_benchmark(&cfg).unwrap();
    bench::write_experiment_csv_file(&rows, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    assert_eq!(lines.next().unwrap(), bench::EXPERIMENT_HEADER.join(","));
    assert_eq!(lines.count(), 2);
}

#[test]
fn unwritable_csv_path_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    assert!(bench::write_experiment_csv_file(&[], &path).is_err());
}
