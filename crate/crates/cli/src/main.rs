//! `frevival`: fractional revival of quantum walks from the command line.
//!
//! Exit status is 0 when the requested revival (or transfer peak) was
//! found, 3 when the analysis ran but found none, and 1 on any error.

mod time;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frevival::constructions::{ConstructionRecipe, PredictionCheck};
use frevival::report::{self, Tolerances};
use frevival::{Error, Execution, WeightedGraph};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "frevival", version, about = "Fractional revival in continuous-time quantum walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    tols: TolArgs,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Run every fan-out on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct Input {
    /// Graph file (JSON with `n` and `edges`, `loops`, or `matrix`).
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Construction recipe: inline JSON, or a path to a JSON file.
    #[arg(long, global = true)]
    recipe: Option<String>,
}

#[derive(Args, Debug)]
struct TolArgs {
    /// Residual threshold for revival and classification.
    #[arg(long, global = true, env = "FREVIVAL_TOL", default_value_t = 1e-8)]
    tol: f64,
    /// Eigenvalue clustering tolerance; default scales with the largest row sum.
    #[arg(long, global = true)]
    cluster_tol: Option<f64>,
    /// Threshold below which `E_r P E_s` counts as zero.
    #[arg(long, global = true)]
    zero_tol: Option<f64>,
    /// Largest denominator accepted when rationalizing eigenvalue ratios.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_denominator: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal commuting partition, ratio condition and revival time for a subset.
    Analyze {
        /// Comma-separated vertices (indices or labels).
        #[arg(long)]
        subset: String,
        /// Check this time instead of searching (`1.5`, `pi/4`, `2pi/3`).
        #[arg(long)]
        time: Option<String>,
    },
    /// Fractional cospectrality and revival between two vertices.
    Pair {
        #[arg(long)]
        pair: String,
    },
    /// Column of `U(t)` for one starting vertex.
    Evolve {
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        time: String,
    },
    /// Build a recipe and check its predicted revivals.
    Construct {
        /// Skip verification of the predictions.
        #[arg(long)]
        no_verify: bool,
    },
    /// Amplitude of the best partner vertex over a time grid.
    Sweep {
        #[arg(long)]
        vertex: String,
        /// `START:STOP:STEPS`, inclusive of both ends.
        #[arg(long)]
        grid: String,
        /// Two-vertex concentration reported as a peak.
        #[arg(long, default_value_t = 0.99)]
        threshold: f64,
    },
}

enum Outcome {
    Found,
    NotFound,
}

fn request(msg: impl Into<String>) -> Error {
    Error::Request(msg.into())
}

fn read_recipe(arg: &str) -> Result<ConstructionRecipe, Error> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| request(format!("cannot read recipe {arg}: {e}")))?
    };
    Ok(ConstructionRecipe::from_json_str(&text)?)
}

fn load_graph(input: &Input) -> Result<WeightedGraph, Error> {
    match (&input.graph, &input.recipe) {
        (Some(_), Some(_)) => Err(request("--graph and --recipe are mutually exclusive")),
        (Some(path), None) => {
            let text =
                fs::read_to_string(path).map_err(|e| request(format!("cannot read {}: {e}", path.display())))?;
            Ok(WeightedGraph::from_json_str(&text)?)
        }
        (None, Some(recipe)) => read_recipe(recipe)?
            .build()?
            .graph
            .ok_or_else(|| request("this recipe describes parameters only and has no graph")),
        (None, None) => Err(request("one of --graph or --recipe is required")),
    }
}

fn vertex(g: &WeightedGraph, token: &str) -> Result<usize, Error> {
    g.resolve_vertex(token).ok_or_else(|| request(format!("unknown vertex {token:?}")))
}

fn vertex_list(g: &WeightedGraph, list: &str) -> Result<Vec<usize>, Error> {
    let mut out = list.split(',').filter(|t| !t.trim().is_empty()).map(|t| vertex(g, t)).collect::<Result<Vec<_>, _>>()?;
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(request("empty vertex list"));
    }
    Ok(out)
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, steps] = parts.as_slice() else {
        return Err(request(format!("grid {text:?} is not START:STOP:STEPS")));
    };
    let steps: usize = steps.trim().parse().map_err(|_| request(format!("bad step count {steps:?}")))?;
    if steps == 0 {
        return Err(request("grid needs at least one step"));
    }
    Ok(report::time_grid(time::parse(start)?, time::parse(stop)?, steps))
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("reports serialize")),
        Format::Text => print!("{}", text()),
    }
}

fn construct_text(value: &Value, checks: &[PredictionCheck]) -> String {
    let mut out = String::new();
    if let Some(n) = value["graph"]["n"].as_u64() {
        out.push_str(&format!("graph: {n} vertices\n"));
    } else {
        out.push_str("graph: none (parameters only)\n");
    }
    if !value["details"].is_null() {
        out.push_str(&format!("details: {}\n", value["details"]));
    }
    for c in checks {
        out.push_str(&format!(
            "K = {:?} at tau = {}: expected {:?}, got {:?}, off-block residual {:.3e} [{}]\n",
            c.prediction.subset,
            report::sig12(c.prediction.tau),
            c.prediction.expected_kind,
            c.kind,
            c.off_block_residual,
            if c.passed { "ok" } else { "FAILED" }
        ));
    }
    out
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let tols = Tolerances {
        tol: cli.tols.tol,
        cluster_tol: cli.tols.cluster_tol,
        zero_tol: cli.tols.zero_tol,
        max_denominator: cli.tols.max_denominator,
    };
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let found = |b: bool| if b { Outcome::Found } else { Outcome::NotFound };
    match &cli.command {
        Command::Analyze { subset, time } => {
            let g = load_graph(&cli.input)?;
            let k = vertex_list(&g, subset)?;
            let t = time.as_deref().map(time::parse).transpose()?;
            let r = report::analyze(&g, &k, t, &tols)?;
            emit(cli.format, &r, || r.to_text());
            Ok(found(r.found()))
        }
        Command::Pair { pair } => {
            let g = load_graph(&cli.input)?;
            let tokens: Vec<&str> = pair.split(',').collect();
            let [a, b] = tokens.as_slice() else {
                return Err(request(format!("--pair expects two vertices, got {pair:?}")));
            };
            let r = report::pair(&g, vertex(&g, a)?, vertex(&g, b)?, &tols, exec)?;
            emit(cli.format, &r, || r.to_text());
            Ok(found(r.found()))
        }
        Command::Evolve { vertex: v, time } => {
            let g = load_graph(&cli.input)?;
            let r = report::evolve(&g, vertex(&g, v)?, time::parse(time)?, &tols)?;
            emit(cli.format, &r, || r.to_text());
            Ok(Outcome::Found)
        }
        Command::Construct { no_verify } => {
            if cli.input.graph.is_some() {
                return Err(request("construct builds from --recipe and does not read --graph"));
            }
            let recipe = cli.input.recipe.as_deref().ok_or_else(|| request("construct needs --recipe"))?;
            let c = read_recipe(recipe)?.build()?;
            let checks = if *no_verify { Vec::new() } else { c.verify(tols.tol, exec)? };
            let mut value = c.to_json();
            value["checks"] = json!(checks);
            emit(cli.format, &value, || construct_text(&value, &checks));
            Ok(found(checks.iter().all(|c| c.passed)))
        }
        Command::Sweep { vertex: v, grid, threshold } => {
            let g = load_graph(&cli.input)?;
            let grid = parse_grid(grid)?;
            let r = report::sweep(&g, vertex(&g, v)?, &grid, *threshold, &tols, exec)?;
            emit(cli.format, &r, || r.to_text());
            Ok(found(!r.concentration_peaks.is_empty()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Outcome::Found) => ExitCode::SUCCESS,
        Ok(Outcome::NotFound) => ExitCode::from(3),
        Err(e) => {
            match cli.format {
                Format::Json => eprintln!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"error": {"code": e.code(), "message": e.to_string()}}))
                        .expect("error serializes")
                ),
                Format::Text => eprintln!("error[{}]: {e}", e.code()),
            }
            ExitCode::from(1)
        }
    }
}
