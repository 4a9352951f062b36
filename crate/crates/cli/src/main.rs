use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use workbench::{eval_text, query_text, CliError, Options};

#[derive(Parser)]
#[command(
    name = "workbench",
    version,
    about = "Evaluate and query compact automatic sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a set expression and print or save its automaton.
    Eval {
        expr: String,
        /// Write the automaton here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// State cap for every construction.
        #[arg(long, default_value_t = Options::default().cap)]
        cap: usize,
    },
    /// Run a query and print a report.
    Query {
        query: String,
        #[arg(long, default_value_t = Options::default().tol)]
        tol: f64,
        #[arg(long, default_value_t = Options::default().seed)]
        seed: u64,
        /// Deepest disconnectedness probe used by `verdict`.
        #[arg(long, default_value_t = Options::default().depth)]
        depth: usize,
        #[arg(long, default_value_t = Options::default().cap)]
        cap: usize,
        /// Sample size for `marstrand` and `boxcount`.
        #[arg(long, default_value_t = Options::default().samples)]
        samples: usize,
        /// Also write the tabular part of the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval { expr, out, cap } => {
            let (shape, text) = eval_text(&expr, &compact_automata::Limits { max_states: cap })?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &text)?;
                    let states = text
                        .lines()
                        .next()
                        .and_then(|h| h.split_whitespace().nth(3))
                        .unwrap_or("0");
                    println!(
                        "wrote {}: base {} arity {} states {states}",
                        path.display(),
                        shape.base,
                        shape.arity
                    );
                }
                None => print!("{text}"),
            }
        }
        Command::Query {
            query,
            tol,
            seed,
            depth,
            cap,
            samples,
            csv,
        } => {
            let opts = Options {
                tol,
                seed,
                depth,
                cap,
                samples,
            };
            let report = query_text(&query, &opts)?;
            print!("{}", report.text());
            if let Some(path) = csv {
                std::fs::write(path, report.csv())?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
