use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cpq_core::error::{EXIT_DATA, EXIT_INTERNAL, EXIT_USAGE};
use cpq_core::graph::{write_edgelist, write_matrix_market};
use cpq_core::harness::{
    bench, default_bench_methods, load_input, resolve_order, run_method, sweep, OrderSpec,
    RunConfig,
};
use cpq_core::{
    build_q, build_qhat, export_qubo, planted_partition, sample_sbm, Error, Graph, GraphFormat,
    ObjectiveKind, Partition, QuboFileFormat, SbmSpec,
};

#[derive(Parser)]
#[command(name = "cpq", version, about = "Core-periphery partitioning via a normalized QUBO objective")]
struct Cli {
    /// Log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one method and print the result as JSON.
    Partition(PartitionArgs),
    /// Run several methods and write a comparison report.
    Bench(BenchArgs),
    /// Objective values as nodes are added to the core in a given order.
    Sweep(SweepArgs),
    /// Write the QUBO of a graph in minimization form.
    Export(ExportArgs),
    /// Sample a stochastic block model graph.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Edgelist,
    Matrixmarket,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Edgelist => GraphFormat::EdgeList,
            FormatArg::Matrixmarket => GraphFormat::MatrixMarket,
        }
    }
}

#[derive(Args)]
struct GraphSource {
    /// Graph file.
    #[arg(long, conflicts_with = "sbm")]
    input: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "edgelist")]
    format: FormatArg,

    /// Sample the graph from SBM N,M,P1,P2,P3 instead of reading a file.
    #[arg(long)]
    sbm: Option<String>,

    /// Drop isolated nodes (the default for --input).
    #[arg(long, conflicts_with = "keep_isolated")]
    drop_isolated: bool,

    /// Keep isolated nodes of an input file.
    #[arg(long)]
    keep_isolated: bool,

    /// Master seed; falls back to CPQ_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

struct Loaded {
    graph: Graph,
    dropped: usize,
    planted: Option<Partition>,
    seed: u64,
}

impl GraphSource {
    fn seed(&self) -> Result<u64, Failure> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var("CPQ_SEED") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("CPQ_SEED={v:?} is not an unsigned integer"))),
            Err(_) => Ok(0),
        }
    }

    fn load(&self) -> Result<Loaded, Failure> {
        let seed = self.seed()?;
        match (&self.input, &self.sbm) {
            (Some(path), None) => {
                let drop = !self.keep_isolated;
                let (graph, dropped) = load_input(path, self.format.into(), drop)?;
                Ok(Loaded {
                    graph,
                    dropped: dropped.len(),
                    planted: None,
                    seed,
                })
            }
            (None, Some(text)) => {
                let mut spec: SbmSpec = text.parse()?;
                spec.seed = seed;
                let mut graph = sample_sbm(&spec)?;
                let mut planted = planted_partition(&spec);
                let mut dropped = 0;
                if self.drop_isolated {
                    let keep: Vec<usize> = (0..graph.n()).filter(|&i| graph.degree(i) > 0).collect();
                    dropped = graph.n() - keep.len();
                    planted = Partition::new(keep.iter().map(|&i| planted.is_core(i)).collect());
                    graph = graph.induced_subgraph(&keep);
                }
                Ok(Loaded {
                    graph,
                    dropped,
                    planted: Some(planted),
                    seed,
                })
            }
            _ => Err(Failure::usage("exactly one of --input or --sbm is required")),
        }
    }
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    source: GraphSource,

    /// anneal-q, anneal-qhat, exhaustive, degree, eig-a, eig-q, nonlin-pm,
    /// h-index, gen-be (or planted with --sbm).
    #[arg(long)]
    method: String,

    /// Annealing reads.
    #[arg(long)]
    samples: Option<usize>,

    /// Annealing sweeps per read.
    #[arg(long)]
    sweeps: Option<usize>,

    /// Also write the JSON result here.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Include wall time in the output.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    source: GraphSource,

    /// Comma-separated methods; all applicable methods when omitted.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,

    #[arg(long)]
    samples: Option<usize>,

    #[arg(long)]
    sweeps: Option<usize>,

    /// CSV report path (stdout when omitted).
    #[arg(long)]
    csv: Option<PathBuf>,

    /// JSON report path.
    #[arg(long)]
    json: Option<PathBuf>,

    /// Run methods concurrently; output order is unchanged.
    #[arg(long)]
    parallel: bool,

    /// Record wall times (makes output differ between runs).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepObjective {
    Normalized,
    Unnormalized,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: GraphSource,

    /// original, degree, eig-a, nonlin-pm or file:PATH.
    #[arg(long, default_value = "original")]
    order: String,

    #[arg(long, value_enum, default_value = "normalized")]
    objective: SweepObjective,

    /// CSV path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixArg {
    Q,
    Qhat,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuboFormatArg {
    Qubo,
    Json,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    source: GraphSource,

    #[arg(long, value_enum, default_value = "q")]
    matrix: MatrixArg,

    #[arg(long = "qubo-format", value_enum, default_value = "json")]
    qubo_format: QuboFormatArg,

    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    /// N,M,P1,P2,P3
    #[arg(long)]
    sbm: String,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, value_enum, default_value = "edgelist")]
    format: FormatArg,

    /// Graph file; the spec is written next to it with a `.json` extension.
    #[arg(long)]
    output: PathBuf,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_DATA,
        message: format!("I/O error on {}: {e}", path.display()),
    }
}

/// Runs `f` against the file at `path`, or stdout when absent.
fn with_output<F>(path: Option<&Path>, f: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> Result<(), Failure>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| io_failure(p, e))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| io_failure(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush().map_err(|e| io_failure(Path::new("<stdout>"), e))
        }
    }
}

fn write_json(w: &mut dyn Write, value: &serde_json::Value) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: e.to_string(),
    })?;
    writeln!(w).map_err(|e| io_failure(Path::new("<output>"), e))
}

fn cmd_partition(args: PartitionArgs) -> Result<(), Failure> {
    let method = args.method.parse()?;
    let loaded = args.source.load()?;
    let g = &loaded.graph;
    let q = build_q(g)?;
    let cfg = RunConfig {
        seed: loaded.seed,
        samples: args.samples,
        sweeps: args.sweeps,
    };
    let mut result = run_method(g, &q, method, &cfg, loaded.planted.as_ref())?;
    if !args.timing {
        result.wall_time = None;
    }
    let value = serde_json::to_value(&result).expect("result serializes");
    if let Some(path) = &args.output {
        with_output(Some(path), |w| write_json(w, &value))?;
    }
    with_output(None, |w| write_json(w, &value))
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let loaded = args.source.load()?;
    let g = &loaded.graph;
    let methods = if args.methods.is_empty() {
        default_bench_methods(g.n(), loaded.planted.is_some())
    } else {
        args.methods.iter().map(|m| m.trim().to_owned()).collect()
    };
    let cfg = RunConfig {
        seed: loaded.seed,
        samples: args.samples,
        sweeps: args.sweeps,
    };
    let report = bench(g, &methods, &cfg, loaded.planted.as_ref(), loaded.dropped, args.parallel)?;
    for r in report.results.iter().filter(|r| r.error.is_some()) {
        eprintln!("warning: {} failed: {}", r.method, r.error.as_deref().unwrap_or(""));
    }
    if let Some(path) = &args.json {
        let value = report.to_json(args.timing);
        with_output(Some(path), |w| write_json(w, &value))?;
    }
    with_output(args.csv.as_deref(), |w| Ok(report.write_csv(w, args.timing)?))
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let order_spec: OrderSpec = args.order.parse()?;
    let loaded = args.source.load()?;
    let order = resolve_order(&loaded.graph, &order_spec)?;
    let kind = match args.objective {
        SweepObjective::Normalized => ObjectiveKind::Normalized,
        SweepObjective::Unnormalized => ObjectiveKind::Unnormalized,
    };
    let out = sweep(&loaded.graph, &order, kind)?;
    if !out.was_scaled {
        eprintln!("warning: curve maximum is not positive; value_scaled repeats value");
    }
    with_output(args.output.as_deref(), |w| Ok(out.write_csv(w)?))
}

fn cmd_export(args: ExportArgs) -> Result<(), Failure> {
    let loaded = args.source.load()?;
    let q = match args.matrix {
        MatrixArg::Q => build_q(&loaded.graph)?,
        MatrixArg::Qhat => build_qhat(&loaded.graph)?,
    };
    let format = match args.qubo_format {
        QuboFormatArg::Qubo => QuboFileFormat::QuboText,
        QuboFormatArg::Json => QuboFileFormat::Json,
    };
    export_qubo(&q, &args.output, format)?;
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let mut spec: SbmSpec = args.sbm.parse()?;
    spec.seed = GraphSource {
        input: None,
        format: args.format,
        sbm: None,
        drop_isolated: false,
        keep_isolated: false,
        seed: args.seed,
    }
    .seed()?;
    let g = sample_sbm(&spec)?;
    let path = &args.output;
    with_output(Some(path), |w| {
        match args.format {
            FormatArg::Edgelist => write_edgelist(&g, w),
            FormatArg::Matrixmarket => write_matrix_market(&g, w),
        }
        .map_err(|e| io_failure(path, e))
    })?;
    let sidecar = path.with_extension("json");
    let meta = json!({
        "model": "sbm",
        "spec": spec,
        "format": GraphFormat::from(args.format).to_string(),
        "nodes": g.n(),
        "edges": g.num_edges(),
        "core": (0..spec.m).map(|i| i.to_string()).collect::<Vec<_>>(),
    });
    with_output(Some(&sidecar), |w| write_json(w, &meta))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("CPQ_LOG")
        .init();

    let outcome = match cli.command {
        Command::Partition(a) => cmd_partition(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Export(a) => cmd_export(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
