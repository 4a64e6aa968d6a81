use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pauli_synth::bench::{self, BenchmarkConfig, Method, RandomSpec};
use pauli_synth::synth::{Mode, SynthConfig, SynthesisResult};
use pauli_synth::{verify, PauliPolynomial, Topology};

#[derive(Parser)]
#[command(name = "pauli-synth", version, about = "Architecture-aware Pauli polynomial synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a polynomial file into OpenQASM 2.0.
    Synth(SynthArgs),
    /// Synthesize a polynomial file and check it against the dense oracle.
    Verify(VerifyArgs),
    /// Run the random-instance benchmark and write a CSV.
    Bench(BenchArgs),
    /// Measure product-formula error of each ordering and write a CSV.
    TrotterError(TrotterArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodArg {
    Naive,
    Proposed,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Naive => Method::Naive,
            MethodArg::Proposed => Method::Proposed,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Arbitrary,
    CommutingSets,
}

#[derive(Args)]
struct SynthOptions {
    /// complete:N, line:N, cycle:N, grid:RxC, star:N or file:PATH
    #[arg(long)]
    topology: String,
    #[arg(long, value_enum, default_value = "proposed")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "arbitrary")]
    mode: ModeArg,
    /// Weight of idle letters in the qubit-selection cost.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Undo the final qubit permutation with gates.
    #[arg(long)]
    no_permutation: bool,
}

impl SynthOptions {
    fn config(&self) -> anyhow::Result<SynthConfig> {
        if self.k == 0 {
            bail!("--k must be positive");
        }
        let mode = match self.mode {
            ModeArg::Arbitrary => Mode::ArbitraryOrder,
            ModeArg::CommutingSets => Mode::CommutingSets,
        };
        Ok(SynthConfig { k: self.k, mode, allow_permutation: !self.no_permutation })
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Polynomial file: a `qubits N` header then `angle PAULISTRING` lines.
    input: PathBuf,
    #[command(flatten)]
    opts: SynthOptions,
    /// QASM output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Metrics output path; stderr when omitted.
    #[arg(long)]
    metrics_out: Option<PathBuf>,
    /// Also run the dense equivalence check (at most 5 qubits).
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    #[command(flatten)]
    opts: SynthOptions,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// Repeatable.
    #[arg(long, required = true)]
    topology: Vec<String>,
    /// Repeatable; both methods when omitted.
    #[arg(long, value_enum)]
    method: Vec<MethodArg>,
    /// Gadget counts, repeatable.
    #[arg(long = "gadgets", short = 'n', required = true)]
    gadgets: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    repeats: u64,
    /// Seed of the first repeat; repeat r uses seed + r.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "arbitrary")]
    mode: ModeArg,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
    /// Directory for one QASM file per row.
    #[arg(long)]
    emit_qasm: Option<PathBuf>,
}

#[derive(Args)]
struct TrotterArgs {
    /// Polynomial files; random instances are generated when none are given.
    #[arg(long)]
    input: Vec<PathBuf>,
    #[arg(long, default_value_t = 6)]
    qubits: usize,
    #[arg(long, default_value_t = 160)]
    gadgets: usize,
    #[arg(long, default_value_t = 20)]
    instances: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of evenly spaced timesteps in [0, 2π].
    #[arg(long, default_value_t = 17)]
    timesteps: usize,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    /// Defaults to the complete graph on the polynomial's qubits.
    #[arg(long)]
    topology: Option<String>,
    #[arg(long, value_enum)]
    method: Vec<MethodArg>,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(anyhow::Error),
    Check(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn read_polynomial(path: &Path) -> anyhow::Result<PauliPolynomial> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    PauliPolynomial::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn topology(spec: &str) -> anyhow::Result<Topology> {
    Topology::from_preset(spec).with_context(|| format!("topology `{spec}`"))
}

fn methods(args: &[MethodArg]) -> Vec<Method> {
    if args.is_empty() {
        vec![Method::Naive, Method::Proposed]
    } else {
        args.iter().map(|&m| m.into()).collect()
    }
}

fn run_synthesis(input: &Path, opts: &SynthOptions) -> anyhow::Result<(PauliPolynomial, Topology, SynthesisResult)> {
    let poly = read_polynomial(input)?;
    let topo = topology(&opts.topology)?;
    let result = Method::from(opts.method).run(&poly, &topo, &opts.config()?)?;
    Ok((poly, topo, result))
}

fn metrics_line(r: &SynthesisResult) -> String {
    format!(
        "cnots={} depth={} cnot_depth={} gates={} permutation={:?} order={:?}",
        r.metrics.cnot_count,
        r.metrics.depth,
        r.metrics.two_qubit_depth,
        r.circuit.len(),
        r.permutation.as_slice(),
        r.emitted_order
    )
}

fn check(poly: &PauliPolynomial, r: &SynthesisResult, tol: f64) -> Result<String, Failure> {
    let d = verify::check_synthesis(poly, r).map_err(|e| Failure::Usage(e.into()))?;
    if d <= tol {
        Ok(format!("PASS equivalence distance {d:.3e} (tol {tol:e})"))
    } else {
        Err(Failure::Check(format!("FAIL equivalence distance {d:.3e} (tol {tol:e})")))
    }
}

fn synth(args: SynthArgs) -> Result<(), Failure> {
    let (poly, topo, result) = run_synthesis(&args.input, &args.opts)?;
    if !result.circuit.conforms(&topo) {
        return Err(Failure::Check("synthesized circuit violates the topology".into()));
    }
    let qasm = result.circuit.to_qasm2();
    match &args.out {
        Some(path) => fs::write(path, &qasm).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{qasm}"),
    }
    let line = metrics_line(&result);
    match &args.metrics_out {
        Some(path) => fs::write(path, format!("{line}\n")).with_context(|| format!("writing {}", path.display()))?,
        None => eprintln!("{line}"),
    }
    if args.verify {
        eprintln!("{}", check(&poly, &result, 1e-9)?);
    }
    Ok(())
}

fn verify_cmd(args: VerifyArgs) -> Result<(), Failure> {
    let (poly, topo, result) = run_synthesis(&args.input, &args.opts)?;
    if !result.circuit.conforms(&topo) {
        return Err(Failure::Check("FAIL circuit violates the topology".into()));
    }
    println!("{}", metrics_line(&result));
    println!("{}", check(&poly, &result, args.tol)?);
    Ok(())
}

fn bench_cmd(args: BenchArgs) -> Result<(), Failure> {
    if args.k == 0 {
        return Err(Failure::Usage(anyhow::anyhow!("--k must be positive")));
    }
    let topologies = args.topology.iter().map(|s| Ok((s.clone(), topology(s)?))).collect::<anyhow::Result<Vec<_>>>()?;
    let mut cfg = BenchmarkConfig::new(methods(&args.method), topologies, args.gadgets.clone(), args.repeats);
    cfg.base_seed = args.seed;
    cfg.synth.k = args.k;
    cfg.synth.mode = match args.mode {
        ModeArg::Arbitrary => Mode::ArbitraryOrder,
        ModeArg::CommutingSets => Mode::CommutingSets,
    };
    cfg.emit_qasm = args.emit_qasm.clone();
    let rows = bench::run_benchmark(&cfg).context("benchmark")?;
    bench::write_experiment_csv_file(&rows, &args.out).with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

fn trotter_cmd(args: TrotterArgs) -> Result<(), Failure> {
    let polys = if args.input.is_empty() {
        (0..args.instances)
            .map(|i| {
                let spec = RandomSpec::new(args.qubits, args.gadgets, args.seed + i).with_angles(&bench::TROTTER_ANGLES);
                bench::random_polynomial(&spec)
            })
            .collect::<Result<Vec<_>, _>>()
            .context("generating instances")?
    } else {
        args.input.iter().map(|p| read_polynomial(p)).collect::<anyhow::Result<Vec<_>>>()?
    };
    let Some(q) = polys.first().map(|p| p.num_qubits()) else {
        return Err(Failure::Usage(anyhow::anyhow!("no polynomials")));
    };
    if polys.iter().any(|p| p.num_qubits() != q) {
        return Err(Failure::Usage(anyhow::anyhow!("all polynomials must have the same qubit count")));
    }
    let topo = match &args.topology {
        Some(s) => topology(s)?,
        None => Topology::complete(q),
    };
    let cfg = SynthConfig { k: args.k, ..SynthConfig::default() };
    let methods = methods(&args.method);
    let rows = bench::run_trotter_error(&polys, &methods, &bench::timesteps(args.timesteps), &topo, &cfg, args.repetitions)
        .context("trotter error run")?;
    let file = fs::File::create(&args.out).with_context(|| format!("writing {}", args.out.display()))?;
    bench::write_trotter_csv(&rows, std::io::BufWriter::new(file)).context("writing csv")?;
    let mut err = std::io::stderr();
    for m in methods {
        let _ = writeln!(err, "{m}: mean 1-|overlap| = {:.6e}", bench::mean_infidelity(&rows, m));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::TrotterError(a) => trotter_cmd(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
