//! `bist`: model checking, frame correspondence, proof checking, bounded
//! search, filtration and morphology for bi-intuitionistic stable tense logic.
//!
//! Exit codes: 0 positive verdict, 1 negative verdict, 2 usage or input
//! error, 3 internal failure.

mod commands;
mod report;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::{ErrorReport, Outcome, RunReport, TOOL, VERSION};

#[derive(Debug, Parser)]
#[command(name = "bist", version, about = "Bi-intuitionistic stable tense logic toolkit")]
struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock time in the report (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate formulas on a model.
    Check {
        model: PathBuf,
        /// Formula text; omit when using --formula-file.
        formula: Option<String>,
        /// File with one formula per line (`#` starts a comment line).
        #[arg(long, conflicts_with = "formula")]
        formula_file: Option<PathBuf>,
        /// Only report truth at this state label.
        #[arg(long)]
        state: Option<String>,
    },
    /// Check a frame condition on a model's frame, as an inclusion and as modal validity.
    Frame {
        model: PathBuf,
        /// Row name (`transitive`, `weak Euclidean`, ...) or inclusion text (`LC;R <= H`).
        spec: String,
    },
    /// Check a derivation or provability certificate file.
    Prove {
        file: PathBuf,
        /// Also check every line for validity on all frames up to this size.
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// Look for a countermodel on frames up to a size bound.
    Search {
        formula: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Comma-separated row names or inclusions, or a file with one per line.
        #[arg(long)]
        sigma: Option<String>,
        /// Write a found countermodel to this model file.
        #[arg(long)]
        emit_model: Option<PathBuf>,
    },
    /// Filtrate a model through the subformula closure of the given formulas.
    Filtrate {
        model: PathBuf,
        #[arg(required = true)]
        formulas: Vec<String>,
        /// Use the transitive variant (requires transitive R).
        #[arg(long)]
        transitive: bool,
        /// Write the filtrated model to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dilation, erosion, opening and closing of a set; grid graph generation.
    Morph {
        #[command(subcommand)]
        op: MorphOp,
    },
    /// Check the bounded-morphism conditions for a map and truth preservation.
    Bmorph {
        model1: PathBuf,
        model2: PathBuf,
        /// JSON object from source labels to target labels.
        map: PathBuf,
        /// Maximal formula depth for the preservation check.
        #[arg(default_value_t = 3)]
        depth: usize,
        /// Atoms of the checked formulas, comma-separated (default: all valuated atoms).
        #[arg(long)]
        vars: Option<String>,
    },
    /// Print the registry of frame conditions with their modal forms.
    Table,
}

#[derive(Debug, Subcommand)]
enum MorphOp {
    Dilate(SetArgs),
    Erode(SetArgs),
    Open(SetArgs),
    Close(SetArgs),
    /// Build the 4-adjacency grid graph of a black-and-white image as a model.
    Grid {
        /// Size as `WxH`.
        size: String,
        /// Black pixels as `x,y;x,y;...`.
        #[arg(long, default_value = "")]
        black: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SetArgs {
    #[arg(long)]
    model: PathBuf,
    /// Comma-separated state labels.
    #[arg(long, conflicts_with = "atom", required_unless_present = "atom")]
    set: Option<String>,
    /// Use the valuation of this atom as the set.
    #[arg(long)]
    atom: Option<String>,
    /// Require H to be a hypergraph, the set a subgraph and R stable.
    #[arg(long)]
    strict: bool,
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    use commands::*;
    match command {
        Command::Check {
            model,
            formula,
            formula_file,
            state,
        } => check(&model, formula.as_deref(), formula_file.as_deref(), state.as_deref()),
        Command::Frame { model, spec } => frame(&model, &spec),
        Command::Prove { file, sweep } => prove(&file, sweep),
        Command::Search {
            formula,
            bound,
            sigma,
            emit_model,
        } => search(&formula, bound, sigma.as_deref(), emit_model.as_deref()),
        Command::Filtrate {
            model,
            formulas,
            transitive,
            out,
        } => filtrate(&model, &formulas, transitive, out.as_deref()),
        Command::Morph { op } => match op {
            MorphOp::Dilate(a) => morph(MorphKind::Dilate, &a.model, a.set.as_deref(), a.atom.as_deref(), a.strict),
            MorphOp::Erode(a) => morph(MorphKind::Erode, &a.model, a.set.as_deref(), a.atom.as_deref(), a.strict),
            MorphOp::Open(a) => morph(MorphKind::Open, &a.model, a.set.as_deref(), a.atom.as_deref(), a.strict),
            MorphOp::Close(a) => morph(MorphKind::Close, &a.model, a.set.as_deref(), a.atom.as_deref(), a.strict),
            MorphOp::Grid { size, black, out } => grid(&size, &black, out.as_deref()),
        },
        Command::Bmorph {
            model1,
            model2,
            map,
            depth,
            vars,
        } => bmorph(&model1, &model2, &map, depth, vars.as_deref()),
        Command::Table => Ok(table()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let (json, timing) = (cli.json, cli.timing);

    let outcome = match catch_unwind(AssertUnwindSafe(|| run(cli.command))) {
        Ok(Ok(outcome)) => outcome,
        Ok(Err(e)) => {
            if json {
                let report = ErrorReport {
                    tool: TOOL,
                    version: VERSION,
                    command: echo,
                    verdict: "input_error",
                    error: format!("{e:#}"),
                };
                println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            }
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
        Err(_) => {
            eprintln!("internal failure");
            return ExitCode::from(3);
        }
    };

    let timing_ms = timing.then(|| start.elapsed().as_secs_f64() * 1000.0);
    if json {
        let report = RunReport {
            tool: TOOL,
            version: VERSION,
            command: echo,
            verdict: outcome.verdict,
            result: outcome.result,
            timing_ms,
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    } else {
        print!("{}", outcome.text);
        if let Some(ms) = timing_ms {
            println!("time: {ms:.1} ms");
        }
    }
    ExitCode::from(outcome.verdict.exit_code() as u8)
}
