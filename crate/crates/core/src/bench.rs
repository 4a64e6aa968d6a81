//! Seeded random instances, benchmark orchestration and CSV output.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::{index, IndexedRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{PauliGadget, PauliLetter, PauliPolynomial, PauliString};
use crate::synth::{self, SynthConfig, SynthesisResult};
use crate::topology::Topology;
use crate::verify;

/// Recorded in CSV metadata so runs can be reproduced.
pub const RNG_IDENTITY: &str = "ChaCha8Rng (rand_chacha 0.9) seeded with seed_from_u64";

pub const DEFAULT_ANGLES: [f64; 5] = [PI, PI / 2.0, PI / 4.0, PI / 8.0, PI / 16.0];
pub const TROTTER_ANGLES: [f64; 3] = [PI / 32.0, PI / 64.0, PI / 128.0];

/// Registers up to this size are checked against the dense oracle before a
/// row is reported.
pub const VERIFY_MAX_QUBITS: usize = 5;
const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub num_qubits: usize,
    pub num_gadgets: usize,
    pub angle_set: Vec<f64>,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(num_qubits: usize, num_gadgets: usize, seed: u64) -> Self {
        RandomSpec { num_qubits, num_gadgets, angle_set: DEFAULT_ANGLES.to_vec(), seed }
    }

    pub fn with_angles(mut self, angles: &[f64]) -> Self {
        self.angle_set = angles.to_vec();
        self
    }

    fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 || self.num_gadgets == 0 {
            return Err(Error::InvalidArgument("qubit and gadget counts must be positive".into()));
        }
        if self.angle_set.is_empty() {
            return Err(Error::InvalidArgument("angle set is empty".into()));
        }
        Ok(())
    }
}

/// Each gadget gets a leg count uniform in `1..=q`, distinct uniform leg
/// positions, uniform letters from {X, Y, Z} and a uniform angle.
pub fn random_polynomial(spec: &RandomSpec) -> Result<PauliPolynomial> {
    spec.validate()?;
    let q = spec.num_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let letters = [PauliLetter::X, PauliLetter::Y, PauliLetter::Z];
    let mut poly = PauliPolynomial::new(q);
    for _ in 0..spec.num_gadgets {
        let legs = rng.random_range(1..=q);
        let mut string = PauliString::identity(q);
        for pos in index::sample(&mut rng, q, legs) {
            string.set(pos, *letters.choose(&mut rng).expect("non-empty"));
        }
        let angle = *spec.angle_set.choose(&mut rng).expect("validated");
        poly.push(PauliGadget::new(angle, string))?;
    }
    Ok(poly)
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash)]
pub enum Method {
    Naive,
    Proposed,
}

impl Method {
    pub fn run(self, poly: &PauliPolynomial, topo: &Topology, cfg: &SynthConfig) -> Result<SynthesisResult> {
        match self {
            Method::Naive => synth::naive_synthesize(poly, topo),
            Method::Proposed => synth::synthesize(poly, topo, cfg),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Naive => "naive",
            Method::Proposed => "proposed",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "proposed" => Ok(Method::Proposed),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub method: Method,
    pub topology: String,
    pub q: usize,
    pub n: usize,
    pub seed: u64,
    pub cnots: usize,
    pub depth: usize,
    pub cnot_depth: usize,
    pub wall_time_ms: f64,
}

pub const EXPERIMENT_HEADER: [&str; 9] = ["method", "topology", "q", "n", "seed", "cnots", "depth", "cnot_depth", "wall_time_ms"];

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub methods: Vec<Method>,
    /// `(label, topology)` pairs; the label is written to the CSV.
    pub topologies: Vec<(String, Topology)>,
    pub gadget_counts: Vec<usize>,
    pub repeats: u64,
    pub base_seed: u64,
    pub synth: SynthConfig,
    pub angle_set: Vec<f64>,
    /// Directory receiving one QASM file per row.
    pub emit_qasm: Option<std::path::PathBuf>,
}

impl BenchmarkConfig {
    pub fn new(methods: Vec<Method>, topologies: Vec<(String, Topology)>, gadget_counts: Vec<usize>, repeats: u64) -> Self {
        BenchmarkConfig {
            methods,
            topologies,
            gadget_counts,
            repeats,
            base_seed: 0,
            synth: SynthConfig::default(),
            angle_set: DEFAULT_ANGLES.to_vec(),
            emit_qasm: None,
        }
    }
}

/// File name used for a row's QASM under `emit_qasm`.
pub fn qasm_file_name(row: &ExperimentRow) -> String {
    let topo: String = row.topology.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '-' }).collect();
    format!("{}_{}_n{}_s{}.qasm", row.method, topo, row.n, row.seed)
}

/// One row per (method, topology, gadget count, seed). Tasks run in
/// parallel; rows come back in task order.
pub fn run_benchmark(cfg: &BenchmarkConfig) -> Result<Vec<ExperimentRow>> {
    if cfg.methods.is_empty() {
        return Err(Error::InvalidArgument("no methods given".into()));
    }
    if let Some(dir) = &cfg.emit_qasm {
        std::fs::create_dir_all(dir)?;
    }
    let mut instances = Vec::new();
    for (label, topo) in &cfg.topologies {
        for &n in &cfg.gadget_counts {
            for r in 0..cfg.repeats {
                let seed = cfg.base_seed.wrapping_add(r);
                let spec = RandomSpec::new(topo.num_qubits(), n, seed).with_angles(&cfg.angle_set);
                instances.push((label.as_str(), topo, spec));
            }
        }
    }
    let tasks: Vec<_> = instances.iter().flat_map(|inst| cfg.methods.iter().map(move |&m| (inst, m))).collect();
    tasks
        .par_iter()
        .map(|&((label, topo, spec), method)| {
            let poly = random_polynomial(spec)?;
            let start = Instant::now();
            let result = method.run(&poly, topo, &cfg.synth)?;
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            if !result.circuit.conforms(topo) {
                return Err(Error::InvalidArgument(format!("{method} produced a non-conforming circuit")));
            }
            if topo.num_qubits() <= VERIFY_MAX_QUBITS {
                let d = verify::check_synthesis(&poly, &result)?;
                if d > VERIFY_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "{method} on {label} seed {} failed equivalence (distance {d:e})",
                        spec.seed
                    )));
                }
            }
            let m = result.circuit.metrics();
            let row = ExperimentRow {
                method,
                topology: label.to_string(),
                q: topo.num_qubits(),
                n: spec.num_gadgets,
                seed: spec.seed,
                cnots: m.cnot_count,
                depth: m.depth,
                cnot_depth: m.two_qubit_depth,
                wall_time_ms,
            };
            if let Some(dir) = &cfg.emit_qasm {
                std::fs::write(dir.join(qasm_file_name(&row)), result.circuit.to_qasm2())?;
            }
            Ok(row)
        })
        .collect()
}

fn metadata_line(out: &mut impl Write, extra: &str) -> Result<()> {
    writeln!(out, "# rng: {RNG_IDENTITY}{extra}")?;
    Ok(())
}

/// Writes a `#` metadata line followed by the CSV table.
pub fn write_experiment_csv(rows: &[ExperimentRow], mut out: impl Write) -> Result<()> {
    metadata_line(&mut out, "")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EXPERIMENT_HEADER)?;
    for r in rows {
        w.write_record([
            r.method.to_string(),
            r.topology.clone(),
            r.q.to_string(),
            r.n.to_string(),
            r.seed.to_string(),
            r.cnots.to_string(),
            r.depth.to_string(),
            r.cnot_depth.to_string(),
            format!("{:.3}", r.wall_time_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_experiment_csv_file(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    write_experiment_csv(rows, std::fs::File::create(path)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrotterRow {
    pub instance: usize,
    pub method: Method,
    pub timestep: f64,
    /// `|<0| U_exact U_circuit† |0>|`.
    pub overlap_abs: f64,
    /// Max-norm distance between the exact and circuit operators, up to phase.
    pub operator_distance: f64,
}

pub const TROTTER_HEADER: [&str; 5] = ["instance", "method", "timestep", "overlap_abs", "operator_distance"];

/// `count` evenly spaced points covering `[0, 2π]`.
pub fn timesteps(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|i| 2.0 * PI * i as f64 / (count - 1) as f64).collect(),
    }
}

/// For every polynomial, timestep and method: synthesizes the polynomial with
/// angles scaled by `t / repetitions` and measures the overlap with the exact
/// evolution.
pub fn run_trotter_error(
    polys: &[PauliPolynomial],
    methods: &[Method],
    timesteps: &[f64],
    topo: &Topology,
    cfg: &SynthConfig,
    repetitions: usize,
) -> Result<Vec<TrotterRow>> {
    if methods.is_empty() {
        return Err(Error::InvalidArgument("no methods given".into()));
    }
    let tasks: Vec<(usize, f64)> = (0..polys.len()).flat_map(|i| timesteps.iter().map(move |&t| (i, t))).collect();
    let rows: Vec<Vec<TrotterRow>> = tasks
        .par_iter()
        .map(|&(i, t)| {
            let poly = &polys[i];
            let trotter = verify::TrotterConfig::new(t, repetitions)?;
            let exact = verify::exact_unitary(poly, t)?;
            methods
                .iter()
                .map(|&method| {
                    let result = method.run(&trotter.step_polynomial(poly), topo, cfg)?;
                    let o = verify::overlap_with_exact(&exact, &result.circuit, &result.permutation, repetitions)?;
                    let step = verify::logical_unitary(&result.circuit, &result.permutation)?;
                    let mut total = verify::DenseUnitary::identity(poly.num_qubits())?;
                    for _ in 0..repetitions {
                        total = total.then(&step);
                    }
                    let id = crate::tableau::QubitPermutation::identity(poly.num_qubits());
                    let operator_distance = verify::distance_up_to_phase(&total, &exact, &id)?;
                    Ok(TrotterRow { instance: i, method, timestep: t, overlap_abs: o.norm(), operator_distance })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_trotter_csv(rows: &[TrotterRow], mut out: impl Write) -> Result<()> {
    metadata_line(&mut out, "")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TROTTER_HEADER)?;
    for r in rows {
        w.write_record([
            r.instance.to_string(),
            r.method.to_string(),
            format!("{:.6}", r.timestep),
            format!("{:.12}", r.overlap_abs),
            format!("{:.3e}", r.operator_distance),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Mean of `1 - |overlap|` per method.
pub fn mean_infidelity(rows: &[TrotterRow], method: Method) -> f64 {
    let vals: Vec<f64> = rows.iter().filter(|r| r.method == method).map(|r| 1.0 - r.overlap_abs).collect();
    vals.iter().sum::<f64>() / vals.len().max(1) as f64
}
