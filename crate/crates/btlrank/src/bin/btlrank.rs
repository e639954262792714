//! Command-line front end: graph generation, outcome simulation, MLE
//! fitting, bound reports, and the built-in Monte Carlo experiments.
//!
//! Exit codes: 0 success, 2 malformed input or invalid parameters,
//! 3 numerical failure.

use btlrank::bounds::{full_report, BoundInputs};
use btlrank::error::BtlError;
use btlrank::estimators::{fit, FitConfig};
use btlrank::experiments::{self, ExperimentConfig, ExperimentId};
use btlrank::graph::{self, BridgeSpec, ComparisonGraph, IslandParams};
use btlrank::model::{linear_theta, simulate, BtlParameters, ComparisonData};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "btlrank", version, about = "Ranking from pairwise comparisons on arbitrary graph topologies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graph operations.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Simulate comparison outcomes on a graph.
    Simulate(SimulateArgs),
    /// Fit the (regularized) maximum-likelihood estimate to comparison data.
    Fit(FitArgs),
    /// Evaluate error-bound formulas for a graph.
    Bounds(BoundsArgs),
    /// Run a built-in Monte Carlo experiment recipe.
    Experiment(ExperimentArgs),
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Generate a comparison graph and write it as JSON.
    Gen(GraphGenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Topology {
    Complete,
    Path,
    Star,
    Cycle,
    Banded,
    Cayley,
    Bipartite,
    ErdosRenyi,
    Island,
    Barbell,
}

#[derive(Args)]
struct GraphGenArgs {
    /// Graph family to generate.
    #[arg(long)]
    topology: Topology,
    /// Node count (for island: nodes per island; for barbell: nodes per clique).
    #[arg(long)]
    n: usize,
    /// Edge or bridge density (erdos-renyi, barbell).
    #[arg(long)]
    p: Option<f64>,
    /// Secondary size parameter: band width (banded), neighbor radius
    /// (cayley), first-side size (bipartite), island count (island).
    #[arg(long)]
    k: Option<usize>,
    /// Island overlap size.
    #[arg(long)]
    overlap: Option<usize>,
    /// Seed for randomized topologies.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Input graph JSON.
    #[arg(long)]
    graph: PathBuf,
    /// Comparisons per edge.
    #[arg(long = "L")]
    l: u64,
    /// Spread of the default equal-gap score vector.
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Optional JSON array of scores, overriding the equal-gap default.
    #[arg(long)]
    theta: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Input comparison-data JSON.
    #[arg(long)]
    data: PathBuf,
    /// Regularization weight: a nonnegative real, or "auto" for
    /// sqrt(n_max / L).
    #[arg(long, default_value = "auto")]
    rho: String,
    /// Stopping threshold on the gradient sup-norm.
    #[arg(long, default_value_t = 1e-8)]
    grad_tol: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct BoundsArgs {
    /// Input graph JSON.
    #[arg(long)]
    graph: PathBuf,
    /// Comparisons per edge.
    #[arg(long = "L")]
    l: u64,
    /// Max score gap over all pairs.
    #[arg(long)]
    kappa: f64,
    /// Max score gap over edges; defaults to kappa.
    #[arg(long)]
    kappa_e: Option<f64>,
    /// Emit every implemented bound, with NA markers where assumptions
    /// fail. Present for scriptability; always on.
    #[arg(long, default_value_t = true)]
    all: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Recipe: island-additivity, barbell-ratio, banded-compare, or
    /// path-L-sweep.
    id: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated sweep grid; recipe default when omitted.
    #[arg(long)]
    sweep: Option<String>,
    /// Problem-size override (meaning depends on the recipe).
    #[arg(long)]
    n: Option<usize>,
    /// Comparisons-per-edge override.
    #[arg(long = "L")]
    l: Option<u64>,
    /// Score-spread override.
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_output(out: &Option<PathBuf>, text: &str) -> btlrank::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn graph_gen(args: &GraphGenArgs) -> btlrank::Result<()> {
    let need_k = |what: &str| {
        args.k
            .ok_or_else(|| BtlError::Validation(format!("--k is required for {what}")))
    };
    let need_p = |what: &str| {
        args.p
            .ok_or_else(|| BtlError::Validation(format!("--p is required for {what}")))
    };
    let g = match args.topology {
        Topology::Complete => graph::complete(args.n)?,
        Topology::Path => graph::path(args.n)?,
        Topology::Star => graph::star(args.n)?,
        Topology::Cycle => graph::cycle(args.n)?,
        Topology::Banded => graph::banded(args.n, need_k("banded")?)?,
        Topology::Cayley => graph::cayley(args.n, need_k("cayley")?)?,
        Topology::Bipartite => {
            let m1 = need_k("bipartite")?;
            if m1 >= args.n {
                return Err(BtlError::Validation("--k must be < --n for bipartite".into()));
            }
            graph::complete_bipartite(m1, args.n - m1)?
        }
        Topology::ErdosRenyi => graph::erdos_renyi(args.n, need_p("erdos-renyi")?, args.seed)?,
        Topology::Island => {
            let k = args.k.unwrap_or(3);
            let overlap = args.overlap.unwrap_or((args.n / 10).max(2));
            graph::island(IslandParams::new(k, args.n, overlap)?)?
        }
        Topology::Barbell => {
            let bridge = match args.p {
                Some(p) => BridgeSpec::Density(p),
                None => BridgeSpec::Count(args.k.unwrap_or(1)),
            };
            graph::barbell(args.n, args.n, &bridge, args.seed)?
        }
    };
    let mut text = g.to_json_string();
    text.push('\n');
    write_output(&args.out, &text)
}

fn run_simulate(args: &SimulateArgs) -> btlrank::Result<()> {
    let g = ComparisonGraph::read_json(&args.graph)?;
    let theta = match &args.theta {
        Some(path) => {
            let raw: Vec<f64> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            BtlParameters::centered(raw)?
        }
        None => linear_theta(g.n(), args.kappa)?,
    };
    let data = simulate(&g, &theta, args.l, args.seed)?;
    let mut text = data.to_json_string();
    text.push('\n');
    write_output(&args.out, &text)
}

fn run_fit(args: &FitArgs) -> btlrank::Result<()> {
    let data = ComparisonData::read_json(&args.data)?;
    let config = match args.rho.as_str() {
        "auto" => FitConfig::auto(),
        raw => {
            let rho: f64 = raw
                .parse()
                .map_err(|_| BtlError::Validation(format!("--rho must be a real or \"auto\", got {raw:?}")))?;
            FitConfig::with_rho(rho)
        }
    }
    .grad_tol(args.grad_tol);
    let result = fit(&data, &config)?;
    let mut text = result.to_json_string();
    text.push('\n');
    write_output(&args.out, &text)
}

fn run_bounds(args: &BoundsArgs) -> btlrank::Result<()> {
    let g = ComparisonGraph::read_json(&args.graph)?;
    let kappa_e = args.kappa_e.unwrap_or(args.kappa);
    let spectral = btlrank::spectral_summary(&g);
    let inputs = BoundInputs::new(spectral, args.l, args.kappa, kappa_e)?;
    let report = full_report(&g, &inputs);
    let text = match args.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = String::from("bound,value\n");
            for (name, value) in &report.values {
                let cell = match value.value() {
                    Some(v) => experiments::fmt_float(v),
                    None => "NA".into(),
                };
                s.push_str(&format!("{name},{cell}\n"));
            }
            s
        }
    };
    write_output(&args.out, &text)
}

fn run_experiment(args: &ExperimentArgs) -> btlrank::Result<()> {
    let id: ExperimentId = args.id.parse()?;
    let sweep = match &args.sweep {
        Some(raw) => raw
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| BtlError::Validation(format!("bad sweep value: {tok:?}")))
            })
            .collect::<btlrank::Result<Vec<f64>>>()?,
        None => ExperimentConfig::default_sweep(id),
    };
    let mut config = ExperimentConfig::new(id, args.trials, args.seed, sweep)?;
    config.n = args.n;
    config.comparisons_per_edge = args.l;
    config.kappa = args.kappa;
    let table = experiments::run(&config)?;
    let text = match args.format {
        OutputFormat::Csv => table.to_csv_string(),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "header": table.header,
                "rows": table.rows,
            }))?;
            s.push('\n');
            s
        }
    };
    write_output(&args.out, &text)
}

fn exit_code_for(err: &BtlError) -> u8 {
    match err {
        BtlError::Numerical(_) | BtlError::MleNonexistent => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Graph(GraphCommand::Gen(args)) => graph_gen(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Fit(args) => run_fit(args),
        Command::Bounds(args) => run_bounds(args),
        Command::Experiment(args) => run_experiment(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("btlrank: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
