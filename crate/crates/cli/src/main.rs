//! `sqroot`: decide, reduce, generate and verify square-root instances.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sqroot::generate::{plant_root, reduce_biclique_cover, BicliqueCoverInstance, Shape};
use sqroot::graph::Graph;
use sqroot::instance::{Instance, Witness};
use sqroot::io::{
    format_edge_list, format_metadata, format_witness, parse_edge_list, parse_vertex_list, parse_witness,
};
use sqroot::oracle::{OracleConfig, OracleMode};
use sqroot::reduction::{reduce, ReductionOutcomeError};
use sqroot::search::SearchLimits;
use sqroot::solver::SolveOptions;
use sqroot::variant::{Variant, VariantKind};

const FORMATS: &str = "\
FILE FORMATS
  Edge list: lines starting with `#` are comments and blank lines are
  ignored. The first remaining line is `n m`, followed by exactly m lines
  `u v` with u != v and 0 <= u, v < n, each edge once. Output always has
  u < v, edges in lexicographic order.

  Witness: line 1 is `n`; line 2 lists the modulator S as space-separated
  vertex ids (the line is empty when S is empty); every further line is an
  edge `u v` of the root H.

  Metadata sidecar (.meta): one `key=value` per line.

  Shape (gen planted): TOML with keys k, isolated, type1, type2, type3,
  modulator_density (0..=1), shared_signature (bool), connected (bool,
  default true). Only k is required.

  Sides (gen biclique): whitespace-separated ids of the left side X of B;
  every other vertex of B is on the right side Y.

EXIT CODES
  0  YES (verify: witness valid; reduce and gen: success)
  1  NO (verify: witness invalid; reduce: rejected)
  2  inconclusive, a search budget ran out
  3  input error: unreadable or malformed file, bad flags, unsupported size";

#[derive(Parser)]
#[command(name = "sqroot", version, about = "Square roots close to a matching or a clique", after_long_help = FORMATS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether G has a root of the requested kind.
    Solve(SolveArgs),
    /// Decide by brute force over edge subsets; for small graphs only.
    Oracle(OracleArgs),
    /// Apply the pair rules to (G, p, q, k) and print the reduced instance.
    Reduce(ReduceArgs),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Check a witness against G and a variant.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// |S| = k, H - S is p isolated vertices plus q disjoint edges.
    Dpq,
    /// |S| <= k, H - S edgeless.
    Vc,
    /// |S| = k, H - S a perfect matching.
    Matching,
    /// |S| <= k, H - S of maximum degree one.
    DegreeOne,
    /// |S| = k, H - S complete.
    Clique,
}

impl From<VariantArg> for VariantKind {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Dpq => VariantKind::Dpq,
            VariantArg::Vc => VariantKind::VertexCover,
            VariantArg::Matching => VariantKind::Matching,
            VariantArg::DegreeOne => VariantKind::DegreeOne,
            VariantArg::Clique => VariantKind::Clique,
        }
    }
}

#[derive(Args)]
struct ProblemArgs {
    /// Edge-list file of G.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "dpq")]
    variant: VariantArg,
    /// Isolated vertices of H - S (dpq only).
    #[arg(long)]
    p: Option<usize>,
    /// Edges of H - S (dpq only).
    #[arg(long)]
    q: Option<usize>,
    /// Modulator size.
    #[arg(long)]
    k: usize,
}

impl ProblemArgs {
    fn variant(&self) -> Result<Variant, Failure> {
        let kind = VariantKind::from(self.variant);
        match (kind, self.p, self.q) {
            (VariantKind::Dpq, Some(p), Some(q)) => Ok(kind.with(p, q, self.k)),
            (VariantKind::Dpq, _, _) => Err(Failure::input("--variant dpq needs --p and --q")),
            (_, None, None) => Ok(kind.with(0, 0, self.k)),
            _ => Err(Failure::input(format!(
                "--p and --q only apply to --variant dpq, not {kind}"
            ))),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Write the witness here on YES.
    #[arg(long)]
    witness_out: Option<PathBuf>,
    /// Wall-clock limit for the search.
    #[arg(long)]
    budget_seconds: Option<f64>,
    /// Limit on candidates passed to the feasibility check.
    #[arg(long)]
    budget_candidates: Option<u64>,
    /// Search threads; the answer and witness do not depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Every edge subset of G.
    Pure,
    /// Edge subsets with forced-edge propagation.
    Propagating,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Write the witness here on YES.
    #[arg(long)]
    witness_out: Option<PathBuf>,
    /// Refuse graphs with more edges than this (exit 3).
    #[arg(long, default_value_t = 20)]
    edge_cap: usize,
    #[arg(long, value_enum, default_value = "pure")]
    mode: ModeArg,
}

#[derive(Args)]
struct ReduceArgs {
    /// Edge-list file of G (connected, at least 3 vertices).
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    /// Modulator size, at least 1.
    #[arg(long)]
    k: usize,
    /// Write the reduced edge list here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Vertex-cover root instance from a biclique-cover instance (B, k).
    ///
    /// Output numbering: X (left side, in sides-file order) is 0..|X|, then
    /// Y (remaining vertices of B in increasing order), then Z (k vertices),
    /// then u, v, w, u', v', w'. The root parameter is k + 4.
    Biclique(BicliqueArgs),
    /// Square of a random root with a prescribed modulator profile.
    Planted(PlantedArgs),
}

#[derive(Args)]
struct BicliqueArgs {
    /// Edge-list file of the bipartite graph B.
    #[arg(long)]
    input: PathBuf,
    /// Left side of B.
    #[arg(long)]
    sides: PathBuf,
    /// Number of bicliques.
    #[arg(long)]
    k: usize,
    /// Write PREFIX.el and PREFIX.meta instead of printing to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlantedArgs {
    /// Shape file.
    #[arg(long)]
    shape: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Write PREFIX.el, PREFIX.witness and PREFIX.meta instead of printing
    /// to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Witness file.
    #[arg(long)]
    witness: PathBuf,
}

/// A run that ends without a decision.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

const YES: u8 = 0;
const NO: u8 = 1;
const INCONCLUSIVE: u8 = 2;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    parse_edge_list(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn report(witness: Option<Witness>, out: Option<&Path>) -> Result<u8, Failure> {
    match witness {
        Some(w) => {
            println!("YES");
            if let Some(path) = out {
                write(path, &format_witness(&w))?;
            }
            Ok(YES)
        }
        None => {
            println!("NO");
            Ok(NO)
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<u8, Failure> {
    let variant = args.problem.variant()?;
    let g = read_graph(&args.problem.input)?;
    let max_time = match args.budget_seconds {
        Some(s) if !s.is_finite() || s < 0.0 => return Err(Failure::input("--budget-seconds must be non-negative")),
        s => s.map(Duration::from_secs_f64),
    };
    let options = SolveOptions {
        limits: SearchLimits {
            max_candidates: args.budget_candidates,
            max_time,
        },
        workers: args.workers,
    };
    match variant.solve(&g, options) {
        Ok(out) => {
            let s = out.stats;
            eprintln!(
                "configurations={} nodes={} candidates={}",
                s.configurations, s.nodes, s.candidates
            );
            report(out.witness, args.witness_out.as_deref())
        }
        Err(e) if e.is_inconclusive() => {
            println!("INCONCLUSIVE");
            eprintln!("{e}");
            Ok(INCONCLUSIVE)
        }
        Err(e) => Err(Failure::input(e.to_string())),
    }
}

fn run_oracle(args: OracleArgs) -> Result<u8, Failure> {
    let variant = args.problem.variant()?;
    let g = read_graph(&args.problem.input)?;
    if g.edge_count() > args.edge_cap {
        return Err(Failure::input(format!(
            "graph has {} edges, above the oracle cap of {}",
            g.edge_count(),
            args.edge_cap
        )));
    }
    let config = OracleConfig {
        edge_cap: args.edge_cap,
        mode: match args.mode {
            ModeArg::Pure => OracleMode::Pure,
            ModeArg::Propagating => OracleMode::Propagating,
        },
    };
    let found = variant.oracle(&g, config).map_err(|e| Failure::input(e.to_string()))?;
    report(found, args.witness_out.as_deref())
}

fn run_reduce(args: ReduceArgs) -> Result<u8, Failure> {
    let g = read_graph(&args.input)?;
    let (n, m) = (g.vertex_count(), g.edge_count());
    let inst = Instance::new(g, args.p, args.q, args.k).map_err(|e| Failure::input(e.to_string()))?;
    let reduced = match reduce(&inst) {
        Ok(r) => r,
        Err(ReductionOutcomeError::Rejected(r)) => {
            println!("NO: {r}");
            return Ok(NO);
        }
        Err(ReductionOutcomeError::Precondition(e)) => return Err(Failure::input(e.to_string())),
    };
    let r = &reduced.instance;
    let ids: Vec<String> = reduced.original_ids.iter().map(ToString::to_string).collect();
    let mut comments = vec![format!("input n={n} m={m} p={} q={} k={}", inst.p, inst.q, inst.k)];
    comments.extend(reduced.trace.steps.iter().map(ToString::to_string));
    comments.push(format!("reduced p={} q={} k={}", r.p, r.q, r.k));
    comments.push(format!("original ids: {}", ids.join(" ")));
    let text = format_edge_list(&r.graph, &comments);
    match &args.out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(YES)
}

fn emit(prefix: Option<&Path>, files: &[(&str, String)], stdout: String) -> Result<u8, Failure> {
    match prefix {
        Some(prefix) => {
            for (ext, text) in files {
                write(&with_extension(prefix, ext), text)?;
            }
        }
        None => print!("{stdout}"),
    }
    Ok(YES)
}

fn run_biclique(args: BicliqueArgs) -> Result<u8, Failure> {
    let b = read_graph(&args.input)?;
    let left =
        parse_vertex_list(&read(&args.sides)?).map_err(|e| Failure::input(format!("{}: {e}", args.sides.display())))?;
    let right: Vec<usize> = (0..b.vertex_count()).filter(|v| !left.contains(v)).collect();
    let bc = BicliqueCoverInstance::new(b, left, right, args.k).map_err(|e| Failure::input(e.to_string()))?;
    let red = reduce_biclique_cover(&bc);
    let l = &red.layout;
    let span = |part: &[usize]| match part {
        [] => "none".to_string(),
        [a, .., b] => format!("{a}..={b}"),
        [a] => a.to_string(),
    };
    let meta = [
        ("n", red.graph.vertex_count().to_string()),
        ("m", red.graph.edge_count().to_string()),
        ("variant", "vc".to_string()),
        ("k", red.parameter.to_string()),
        ("bicliques", bc.k.to_string()),
        ("x", span(&l.x)),
        ("y", span(&l.y)),
        ("z", span(&l.z)),
        ("u", l.u.to_string()),
        ("v", l.v.to_string()),
        ("w", l.w.to_string()),
        ("u2", l.u2.to_string()),
        ("v2", l.v2.to_string()),
        ("w2", l.w2.to_string()),
    ];
    let comments: Vec<String> = meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
    emit(
        args.out.as_deref(),
        &[
            ("el", format_edge_list(&red.graph, &[])),
            ("meta", format_metadata(meta)),
        ],
        format_edge_list(&red.graph, &comments),
    )
}

fn run_planted(args: PlantedArgs) -> Result<u8, Failure> {
    let shape = Shape::parse(&read(&args.shape)?).map_err(|e| Failure::input(e.to_string()))?;
    let planted = plant_root(&shape, args.seed).map_err(|e| Failure::input(e.to_string()))?;
    let meta = planted.metadata();
    let comments: Vec<String> = meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let g = &planted.instance.graph;
    emit(
        args.out.as_deref(),
        &[
            ("el", format_edge_list(g, &[])),
            ("witness", format_witness(&planted.witness)),
            ("meta", format_metadata(meta)),
        ],
        format_edge_list(g, &comments),
    )
}

fn run_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let variant = args.problem.variant()?;
    let g = read_graph(&args.problem.input)?;
    let w =
        parse_witness(&read(&args.witness)?).map_err(|e| Failure::input(format!("{}: {e}", args.witness.display())))?;
    match variant.verify(&w, &g) {
        Ok(()) => {
            println!("VALID");
            Ok(YES)
        }
        Err(defect) => {
            println!("INVALID: {defect}");
            Ok(NO)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Reduce(a) => run_reduce(a),
        Command::Gen(GenCommand::Biclique(a)) => run_biclique(a),
        Command::Gen(GenCommand::Planted(a)) => run_planted(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
