use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use liemod_cli::commands::{
    cmd_charclass, cmd_check, cmd_cohomology, cmd_decompose, cmd_deform, cmd_derived_bracket,
    cmd_ops, Workspace,
};
use liemod_cli::{doc, parse_k_range, render, to_json_string, CliError};

/// Exact computations with Lie algebra modules: cohomology, decompositions,
/// module operations, deformations, and Chern-Simons type invariants.
#[derive(Parser)]
#[command(name = "liemod", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Markdown,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the document: Jacobi, Q^2 = 0, Leibniz spot checks, metrics,
    /// task references.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
    },
    /// Betti numbers and class representatives of a module.
    Cohomology {
        #[arg(long)]
        input: PathBuf,
        /// module name, or @adjoint for the adjoint module
        #[arg(long)]
        module: String,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
    },
    /// Decompose a module into a superconnection; multiple seeds produce
    /// different splittings and the gauge transformations relating them.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        module: String,
        /// seeded random splitting; repeatable
        #[arg(long)]
        seed: Vec<u64>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
    },
    /// Construct tensor / sum / dual modules and emit their documents.
    Ops {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        op: String,
        #[arg(long)]
        module: String,
        #[arg(long)]
        other: Option<String>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
    },
    /// One deformation-extension step from a degree-1 cocycle.
    Deform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        derivation: String,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
    },
    /// Chern-Simons forms: a module pair, or one module against its metric
    /// adjoint.
    Charclass {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        module: String,
        #[arg(long)]
        other: Option<String>,
        /// `id` for the identity metric or `doc` for the document's metric
        #[arg(long, default_value = "id")]
        metric: String,
        /// k or a..b, inclusive
        #[arg(long, default_value = "1..3")]
        k: String,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
    },
    /// The multibracket derived from a derivation (default: the
    /// differential itself, recovering the Lie bracket).
    DerivedBracket {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "d")]
        derivation: String,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
    },
}

fn load(input: &PathBuf) -> Result<Workspace, CliError> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
    Workspace::load(&text)
}

fn run() -> Result<(String, bool), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check {
            input,
            seed,
            format,
        } => {
            let ws = load(&input)?;
            let report = cmd_check(&ws, seed);
            let pass = report.pass;
            let out = match format {
                OutputFormat::Markdown => render::check_markdown(&report),
                OutputFormat::Json => to_json_string(&report),
            };
            Ok((out, pass))
        }
        Command::Cohomology {
            input,
            module,
            format,
        } => {
            let ws = load(&input)?;
            let report = cmd_cohomology(&ws, &module)?;
            let out = match format {
                OutputFormat::Markdown => render::cohomology_markdown(&report),
                OutputFormat::Json => to_json_string(&report),
            };
            Ok((out, true))
        }
        Command::Decompose {
            input,
            module,
            seed,
            format,
        } => {
            let ws = load(&input)?;
            let report = cmd_decompose(&ws, &module, &seed)?;
            let out = match format {
                OutputFormat::Markdown => render::decompose_markdown(&report),
                OutputFormat::Json => to_json_string(&report),
            };
            Ok((out, true))
        }
        Command::Ops {
            input,
            op,
            module,
            other,
            format,
        } => {
            let ws = load(&input)?;
            let report = cmd_ops(&ws, &op, &module, other.as_deref())?;
            let out = match format {
                OutputFormat::Markdown => render::ops_markdown(&report),
                OutputFormat::Json => doc::to_json(&report.document),
            };
            Ok((out, true))
        }
        Command::Deform {
            input,
            derivation,
            format,
        } => {
            let ws = load(&input)?;
            let report = cmd_deform(&ws, &derivation)?;
            let out = match format {
                OutputFormat::Markdown => render::deform_markdown(&report),
                OutputFormat::Json => to_json_string(&report),
            };
            Ok((out, true))
        }
        Command::Charclass {
            input,
            module,
            other,
            metric,
            k,
            format,
        } => {
            let ws = load(&input)?;
            let ks = parse_k_range(&k)?;
            let report = cmd_charclass(&ws, &module, other.as_deref(), &metric, &ks)?;
            let out = match format {
                OutputFormat::Markdown => render::charclass_markdown(&report),
                OutputFormat::Json => to_json_string(&report),
            };
            Ok((out, true))
        }
        Command::DerivedBracket {
            input,
            derivation,
            format,
        } => {
            let ws = load(&input)?;
            let report = cmd_derived_bracket(&ws, &derivation)?;
            let out = match format {
                OutputFormat::Markdown => render::derived_bracket_markdown(&report),
                OutputFormat::Json => to_json_string(&report),
            };
            Ok((out, true))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok((out, pass)) => {
            print!("{out}");
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
