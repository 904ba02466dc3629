use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nulla_cert::{read_cert, verify, write_cert, Provenance};
use nulla_core::assemble::{
    coloring_schedule, generic_schedule, isolate_subgraph, nulla_prove, stats, validate_schedule, NullaOutcome,
    ProveOptions, Pruning, Verdict,
};
use nulla_core::encode::{build_coloring_system, target_candidates, AltTarget, Cutters, EncodingOptions};
use nulla_core::graphs::{write_dimacs, Graph};
use nulla_core::linsolve::{SolverConfig, DEFAULT_MEMORY_BUDGET};
use nulla_core::symmetry::{group_order, nulla_prove_symmetric, PermutationSet, DEFAULT_ORDER_CAP};
use nulla_poly::{FieldSpec, PolySystem};
use thiserror::Error;

mod input;

const EXIT_NO_CERTIFICATE: u8 = 10;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Assemble(#[from] nulla_core::assemble::AssembleError),
    #[error(transparent)]
    Symmetry(#[from] nulla_core::symmetry::SymmetryError),
    #[error(transparent)]
    Encode(#[from] nulla_core::encode::EncodeError),
}

/// Proves graph non-colorability and polynomial-system infeasibility with
/// Nullstellensatz certificates over GF(p).
#[derive(Parser)]
#[command(name = "nulla", version)]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Worker threads for assembly and elimination.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a certificate degree by degree.
    Prove(ProveArgs),
    /// Check a certificate file; exits 0 if valid, 1 if not, 2 if unreadable.
    Verify { certificate: PathBuf },
    /// Predicted and actual matrix sizes at one degree.
    Stats(StatsArgs),
    /// Print the polynomial system, one `tag polynomial` per line.
    Encode(EncodeArgs),
    /// Print a generated graph in DIMACS format.
    Gen {
        /// Generator, e.g. `kneser:8,3`, `mycielski:7`, `wheel:5`, `random:16,0.27`.
        spec: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct SourceArgs {
    /// Graph generator spec, e.g. `complete:4` or `kneser:8,3`.
    #[arg(long, group = "source")]
    gen: Option<String>,
    /// Graph in DIMACS `.col` format.
    #[arg(long, group = "source")]
    input: Option<PathBuf>,
    /// Polynomial system, one polynomial per line.
    #[arg(long, group = "source")]
    system: Option<PathBuf>,
}

#[derive(Args)]
struct EncodingArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of colors.
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Field characteristic.
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Variable count for `--system` (default: largest index used).
    #[arg(long)]
    n_vars: Option<usize>,
    /// Seed for `random:n,p` generators given without one.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = CutterArg::None)]
    cutters: CutterArg,
    /// Keep every vertex polynomial.
    #[arg(long, conflicts_with = "preprocess")]
    no_preprocess: bool,
    /// Drop redundant vertex polynomials (the default without `--symmetry`).
    #[arg(long)]
    preprocess: bool,
    /// Permutation generators in cycle notation, one per line.
    #[arg(long)]
    symmetry: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CutterArg {
    None,
    Triangles,
    Cliques,
}

#[derive(Args)]
struct ProveArgs {
    #[command(flatten)]
    enc: EncodingArgs,
    /// Largest degree to try.
    #[arg(long, default_value_t = 4, conflicts_with = "degrees")]
    max_degree: u32,
    /// Explicit comma-separated degree schedule, e.g. `1,4`.
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<u32>>,
    /// `none`, `rows` or `graded:k` (default: graded for graphs, rows for systems).
    #[arg(long)]
    pruning: Option<Pruning>,
    /// Right-hand side: `off`, a monomial such as `x1*x2*x3`, or `auto:<degree>`.
    #[arg(long, default_value = "off")]
    alt_g: String,
    /// Where to write the certificate.
    #[arg(long, default_value = "certificate.json")]
    out: PathBuf,
    /// Write the subgraph used by the certificate as DIMACS.
    #[arg(long)]
    isolate: Option<PathBuf>,
    /// Byte budget for assembled matrices; accepts K/M/G/T suffixes.
    #[arg(long, value_parser = input::parse_bytes)]
    memory_budget: Option<u64>,
    /// With `--symmetry`, re-solve the full system when an orbit solve is inconclusive.
    #[arg(long)]
    fallback_full: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    enc: EncodingArgs,
    #[arg(long, default_value_t = 1)]
    degree: u32,
    #[arg(long)]
    pruning: Option<Pruning>,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    enc: EncodingArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// The polynomial system to work on, with its graph when there is one.
struct Problem {
    sys: PolySystem,
    graph: Option<Graph>,
    perms: Option<PermutationSet>,
    k: u32,
}

impl Problem {
    fn default_pruning(&self) -> Pruning {
        if self.graph.is_some() {
            Pruning::Graded(self.k)
        } else {
            Pruning::OccurringRows
        }
    }
}

fn field(p: u32) -> Result<FieldSpec, CliError> {
    FieldSpec::new(p).map_err(|e| CliError::Usage(format!("--p: {e}")))
}

fn load(enc: &EncodingArgs) -> Result<Problem, CliError> {
    let field = field(enc.p)?;
    if enc.symmetry.is_some() && enc.preprocess {
        return Err(CliError::Usage(
            "--symmetry needs the full encoding; preprocessing breaks invariance (drop --preprocess)".into(),
        ));
    }
    let graph = match (&enc.source.gen, &enc.source.input) {
        (Some(spec), _) => Some(input::graph_from_spec(spec, enc.seed)?),
        (_, Some(path)) => Some(input::graph_from_dimacs(path)?),
        _ => None,
    };
    let sys = match (&graph, &enc.source.system) {
        (Some(g), _) => {
            let mut opts = EncodingOptions::new(enc.k, field)?;
            opts.preprocess = !enc.no_preprocess && enc.symmetry.is_none();
            opts.cutters = match enc.cutters {
                CutterArg::None => Cutters::None,
                CutterArg::Triangles => Cutters::Triangles,
                CutterArg::Cliques => Cutters::Cliques,
            };
            build_coloring_system(g, &opts)?
        }
        (None, Some(path)) => input::parse_system(&input::read_file(path)?, field, enc.n_vars)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        (None, None) => unreachable!("clap requires a source"),
    };
    let perms = match &enc.symmetry {
        Some(path) => Some(
            PermutationSet::parse_cycles(sys.n_vars(), &input::read_file(path)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        ),
        None => None,
    };
    Ok(Problem { sys, graph, perms, k: enc.k })
}

fn alt_target(text: &str, sys: &PolySystem) -> Result<AltTarget, CliError> {
    let text = text.trim();
    if text == "off" {
        return Ok(AltTarget::Off);
    }
    if let Some(deg) = text.strip_prefix("auto:") {
        let deg = deg
            .parse()
            .map_err(|_| CliError::Usage(format!("--alt-g: `{text}` needs an integer degree")))?;
        return Ok(AltTarget::Auto(deg));
    }
    Ok(AltTarget::Monomial(input::parse_monomial(text, sys.n_vars(), sys.field())?))
}

fn cmd_prove(args: &ProveArgs) -> Result<u8, CliError> {
    let problem = load(&args.enc)?;
    let sys = &problem.sys;
    let schedule = match &args.degrees {
        Some(d) => d.clone(),
        None if problem.graph.is_some() => coloring_schedule(problem.k, args.max_degree),
        None => generic_schedule(args.max_degree),
    };
    validate_schedule(&schedule).map_err(|e| CliError::Usage(format!("degree schedule: {e}")))?;
    let targets = target_candidates(&alt_target(&args.alt_g, sys)?, sys.n_vars(), sys.field())?;
    let opts = ProveOptions {
        pruning: args.pruning.unwrap_or_else(|| problem.default_pruning()),
        memory_budget: args.memory_budget.unwrap_or(DEFAULT_MEMORY_BUDGET),
        solver: SolverConfig {
            memory_budget: args.memory_budget.unwrap_or(DEFAULT_MEMORY_BUDGET),
            ..SolverConfig::default()
        },
        provenance: Provenance {
            graph_fingerprint: problem.graph.as_ref().map(Graph::fingerprint),
            ..Provenance::default()
        },
    };
    log::info!("{} polynomials in {} variables over {}", sys.len(), sys.n_vars(), sys.field());

    let outcome: NullaOutcome = match &problem.perms {
        Some(perms) => {
            if group_order(perms, DEFAULT_ORDER_CAP).is_none() {
                eprintln!(
                    "note: group order exceeds {DEFAULT_ORDER_CAP}; certificates stay sound but a failed orbit solve is inconclusive"
                );
            }
            nulla_prove_symmetric(sys, &schedule, &targets, perms, &opts, args.fallback_full)?
        }
        None => nulla_prove(sys, &schedule, &targets, &opts)?,
    };
    let mut out = std::io::stdout().lock();
    for s in &outcome.stats {
        let _ = writeln!(out, "{s}");
    }
    match &outcome.verdict {
        Verdict::Infeasible { certificate, degree, target_index } => {
            input::write_file(&args.out, &write_cert(certificate))?;
            let _ = writeln!(
                out,
                "infeasible: certificate of degree {degree} for g = {} written to {}",
                targets[*target_index],
                args.out.display()
            );
            if let Some(path) = &args.isolate {
                let g = problem
                    .graph
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("--isolate needs a graph input".into()))?;
                let sub = isolate_subgraph(certificate, g)?;
                input::write_file(path, &write_dimacs(&sub))?;
                let _ = writeln!(out, "isolated {} edges written to {}", sub.n_edges(), path.display());
            }
            Ok(0)
        }
        Verdict::NoCertificateUpTo(d) => {
            let _ = writeln!(out, "no certificate up to degree {d}: feasibility not decided");
            Ok(EXIT_NO_CERTIFICATE)
        }
    }
}

fn cmd_verify(path: &Path) -> u8 {
    let cert = match input::read_file(path).and_then(|t| read_cert(&t).map_err(|e| CliError::Input(e.to_string()))) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    match verify(&cert) {
        Ok(true) => {
            println!("valid: {} terms, degree {}, over {}", cert.entries().len(), cert.degree(), cert.field());
            0
        }
        Ok(false) => {
            println!("invalid: the coefficients do not sum to the target");
            1
        }
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            EXIT_USAGE
        }
    }
}

fn cmd_stats(args: &StatsArgs) -> Result<u8, CliError> {
    let problem = load(&args.enc)?;
    let pruning = args.pruning.unwrap_or_else(|| problem.default_pruning());
    let s = stats(&problem.sys, args.degree, pruning)?;
    println!("{s}");
    Ok(0)
}

fn cmd_encode(args: &EncodeArgs) -> Result<u8, CliError> {
    let problem = load(&args.enc)?;
    let text: String = problem.sys.iter().map(|(t, p)| format!("{t} {p}\n")).collect();
    match &args.out {
        Some(path) => input::write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_gen(spec: &str, seed: Option<u64>, out: Option<&Path>) -> Result<u8, CliError> {
    let text = write_dimacs(&input::graph_from_spec(spec, seed)?);
    match out {
        Some(path) => input::write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let result = match &cli.command {
        Command::Prove(a) => cmd_prove(a),
        Command::Verify { certificate } => Ok(cmd_verify(certificate)),
        Command::Stats(a) => cmd_stats(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Gen { spec, seed, out } => cmd_gen(spec, *seed, out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
