use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use weilrep::group::DEFAULT_BUDGET;
use weilrep::suite::{self, Case, Params};
use weilrep::Error;

#[derive(Parser)]
#[command(name = "weilrep", version, about = "Build Weil representations over finite fields and verify their properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report one line per check.
    Verify {
        #[command(flatten)]
        scenario: Scenario,
        /// Comma-separated suites, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Prefer exhaustive checks where the budget allows.
        #[arg(long)]
        exhaustive: bool,
        /// Print the JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an object (matrices, characters, cocycle tables) as JSON.
    Dump {
        /// Object to dump; see `list-suites`.
        object: String,
        #[command(flatten)]
        scenario: Scenario,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List suites and dumpable objects.
    ListSuites {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Odd,
    Even,
}

#[derive(Args)]
struct Scenario {
    #[arg(long, value_enum)]
    case: CaseArg,
    /// Field size (odd case).
    #[arg(long)]
    q: Option<u32>,
    /// Residue degree, q = 2^d (even case).
    #[arg(long)]
    d: Option<u32>,
    /// Half the dimension of W.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Largest group or table the tool will enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

impl Scenario {
    fn params(&self, exhaustive: bool) -> Params {
        Params {
            case: match self.case {
                CaseArg::Odd => Case::Odd,
                CaseArg::Even => Case::Even,
            },
            q: self.q,
            d: self.d,
            m: self.m,
            exhaustive,
            budget: self.budget,
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn write_out(path: &PathBuf, text: &str) -> Result<(), Error> {
    std::fs::write(path, format!("{text}\n"))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Verify {
            scenario,
            suite: selection,
            exhaustive,
            json,
            out,
        } => {
            let params = scenario.params(exhaustive);
            if let Err(e) = params.validate() {
                return usage(e);
            }
            let selected = match suite::parse_selection(params.case, &selection) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let report = match suite::run(&params, &selected) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let text = match report.to_json() {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            if json {
                println!("{text}");
            } else {
                println!("{report}");
            }
            if let Some(path) = out {
                if let Err(e) = write_out(&path, &text) {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Dump { object, scenario, out } => {
            let params = scenario.params(false);
            if let Err(e) = params.validate() {
                return usage(e);
            }
            if !suite::dump_objects(params.case).contains(&object.as_str()) {
                return usage(format!(
                    "unknown object {object:?}; known: {}",
                    suite::dump_objects(params.case).join(", ")
                ));
            }
            let text = match suite::dump(&params, &object).and_then(|d| d.to_json()) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            match out {
                Some(path) => {
                    if let Err(e) = write_out(&path, &text) {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => println!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Command::ListSuites { json } => {
            let listing = suite::suite_listing();
            if json {
                let objects: std::collections::BTreeMap<_, _> = [Case::Odd, Case::Even]
                    .into_iter()
                    .map(|c| (c.to_string(), suite::dump_objects(c)))
                    .collect();
                let value = serde_json::json!({
                    "schema": suite::SCHEMA,
                    "suites": listing,
                    "objects": objects,
                });
                println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            } else {
                for (case, suites) in &listing {
                    println!("{case}:");
                    for (name, desc) in suites {
                        println!("  {name:<14} {desc}");
                    }
                    println!("  objects: {}", suite::dump_objects(if case == "odd" { Case::Odd } else { Case::Even }).join(", "));
                }
            }
            ExitCode::SUCCESS
        }
    }
}
