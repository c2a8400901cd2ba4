use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use ddbar_core::bicomplex::format::write_bicomplex;
use ddbar_core::bicomplex::{CohomologyReport, ReportOptions};
use ddbar_core::error::AnalysisError;
use ddbar_core::lie::{builtin, builtin_names, write_model};
use ddbar_core::random::{run_random, RandomConfig};
use ddbar_core::search::{parse_constraints, run_search, SearchConfig};

mod input;
mod render;

use render::{parse_checks, Check};

/// Exit 1 for inputs that parse but violate the rules, exit 2 for anything
/// that cannot be read or parsed.
pub enum Failure {
    Validation(Vec<String>),
    Input(anyhow::Error),
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Invalid(v) => Failure::Validation(v),
            other => Failure::Validation(vec![other.to_string()]),
        }
    }
}

#[derive(Parser)]
#[command(name = "ddbar", version, about = "Exact Dolbeault, Bott-Chern, Aeppli and de Rham cohomology of double complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse a model or bicomplex file, or a builtin model.
    Analyze(AnalyzeArgs),
    /// Run the invariant suite on seeded random bicomplexes.
    Random(RandomArgs),
    /// Search conjugation-symmetric assemblies for prescribed verdicts.
    Search(SearchArgs),
    /// List builtin models, or print one as a model file.
    Builtin(BuiltinArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Model (`dphi` field present) or bicomplex file.
    file: Option<PathBuf>,
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    /// `all` or a comma list of lemma, inequalities, hodge, spectral, sequences.
    #[arg(long, default_value = "all")]
    checks: String,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
    /// Last spectral page to compute.
    #[arg(long)]
    r_max: Option<usize>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    /// Pieces live in the grid `0..=size`; 0 gives empty complexes.
    #[arg(long, default_value_t = 3)]
    size: usize,
    /// Attach a conjugation (`--conj false` to disable).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    conj: bool,
    /// Skip the Laplacian checks.
    #[arg(long)]
    no_hodge: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Comma list of degenerate_e1, hodge_symmetric, lemma_fails.
    #[arg(long, default_value = "")]
    constraints: String,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest p and q used by the pieces.
    #[arg(long, default_value_t = 2)]
    max_degree: usize,
    /// Largest number of conjugation orbits combined.
    #[arg(long, default_value_t = 3)]
    max_orbits: usize,
    /// Write the bicomplex file here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuiltinArgs {
    #[arg(long)]
    list: bool,
    name: Option<String>,
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Input),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let checks = parse_checks(&args.checks).map_err(|e| Failure::Input(anyhow!(e)))?;
    let input = match (&args.file, &args.builtin) {
        (Some(path), None) => input::from_file(path)?,
        (None, Some(name)) => input::from_builtin(name)?,
        _ => return Err(Failure::Input(anyhow!("give a file or --builtin NAME"))),
    };
    let opts = ReportOptions {
        hodge: checks.contains(&Check::Hodge),
        r_max: args.r_max.filter(|&r| r >= 1),
    };
    let report = CohomologyReport::compute_with_metric(&input.bicomplex, &opts, Some(&input.metric))?;
    let text = if args.json {
        serde_json::to_string_pretty(&report).expect("serializable") + "\n"
    } else {
        render::render(&input.label, &report, &checks)
    };
    emit(&text, args.out.as_deref())
}

fn random(args: RandomArgs) -> Result<(), Failure> {
    let config = RandomConfig {
        seed: args.seed,
        cases: args.cases,
        size: args.size,
        conjugation: args.conj,
        hodge: !args.no_hodge,
    };
    let summary = run_random(&config);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    } else {
        println!(
            "random: seed {}, {} cases, size {}, conjugation {}: {} passed, {} failed",
            config.seed,
            config.cases,
            config.size,
            if config.conjugation { "on" } else { "off" },
            summary.passed,
            summary.failed
        );
        if let Some(f) = &summary.first_failure {
            println!("first failure: case {} (case seed {})", f.case, f.case_seed);
            println!("  pieces: {}", f.pieces.join(" "));
            for name in &f.failures {
                println!("  failed: {name}");
            }
        }
    }
    if summary.all_passed() {
        Ok(())
    } else {
        Err(Failure::Validation(vec![format!("{} random cases failed", summary.failed)]))
    }
}

fn search(args: SearchArgs) -> Result<(), Failure> {
    let constraints = parse_constraints(&args.constraints).map_err(|e| Failure::Input(anyhow!(e)))?;
    if args.budget == 0 {
        return Err(Failure::Input(anyhow!("--budget must be positive")));
    }
    let config = SearchConfig {
        constraints,
        budget: args.budget,
        seed: args.seed,
        max_degree: args.max_degree,
        max_orbits: args.max_orbits,
    };
    let outcome = run_search(&config);
    let Some(found) = outcome.found else {
        eprintln!("none within budget ({} assemblies)", outcome.tried);
        return Ok(());
    };
    let pieces: Vec<String> = found.pieces.iter().map(ToString::to_string).collect();
    eprintln!("found after {} assemblies: {}", outcome.tried, pieces.join(" "));
    emit(&(write_bicomplex(&found.bicomplex) + "\n"), args.out.as_deref())
}

fn builtin_cmd(args: BuiltinArgs) -> Result<(), Failure> {
    match (&args.name, args.list) {
        (Some(name), _) => {
            let s = builtin(name).map_err(|e| Failure::Input(e.into()))?;
            println!("{}", write_model(&s));
        }
        (None, _) => {
            for name in builtin_names() {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Random(a) => random(a),
        Command::Search(a) => search(a),
        Command::Builtin(a) => builtin_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(violations)) => {
            eprintln!("validation failed:");
            for v in violations {
                eprintln!("  {v}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
