//! Command-line interface.
//!
//! Exit codes: 0 all requested flags pass, 1 residual failure, 2 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stromcheck_cli::catalog;
use stromcheck_cli::hesolve::{run_hesolve, SourceSpec};
use stromcheck_cli::run::{run_check_str, CheckOptions};

#[derive(Parser)]
#[command(
    name = "stromcheck",
    version,
    about = "Residual checks for invariant hermitian geometry and the Strominger system"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum ReportKind {
    #[default]
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a model file and print a report
    Check {
        file: PathBuf,
        /// pass/fail tolerance for residual sup-norms
        #[arg(long, default_value_t = stromcheck_core::PASS_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t)]
        report: ReportKind,
        /// gate the system verdict on the Hermite-Yang-Mills condition for ∇
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        strict_hym_nabla: bool,
    },
    /// Built-in example models
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Solve iΛ∂̄∂f = source on the flat 2-torus for a band-limited source
    Hesolve {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        report: ReportKind,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List catalog entries and their documented outcomes
    List,
    /// Run one entry, or every entry with --all
    Run {
        name: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = stromcheck_core::PASS_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t)]
        report: ReportKind,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        strict_hym_nabla: bool,
    },
    /// Write the model file of an entry
    Export {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

const EXIT_RESIDUAL: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_RESIDUAL)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool, String> {
    match cli.cmd {
        Cmd::Check {
            file,
            tol,
            report,
            strict_hym_nabla,
        } => {
            let src = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let opts = CheckOptions {
                tol,
                strict_hym_nabla,
            };
            let doc = run_check_str(&src, opts).map_err(|e| e.to_string())?;
            emit(&doc, report);
            Ok(doc.pass)
        }
        Cmd::Catalog { cmd } => match cmd {
            CatalogCmd::List => {
                for e in catalog::ENTRIES {
                    println!("{:20} {}", e.name, e.blurb);
                }
                Ok(true)
            }
            CatalogCmd::Run {
                name,
                all,
                tol,
                report,
                strict_hym_nabla,
            } => {
                let opts = CheckOptions {
                    tol,
                    strict_hym_nabla,
                };
                if all {
                    let mut pass = true;
                    let mut machine_parts = Vec::new();
                    for e in catalog::ENTRIES {
                        let doc = run_check_str(e.source, opts)
                            .map_err(|err| format!("catalog entry {:?}: {err}", e.name))?;
                        pass &= doc.pass;
                        match report {
                            ReportKind::Machine => machine_parts.push(doc.to_machine()),
                            ReportKind::Text => println!("{}", doc.to_text()),
                        }
                    }
                    if report == ReportKind::Machine {
                        println!("{{\"batch\":[{}]}}", machine_parts.join(","));
                    }
                    Ok(pass)
                } else {
                    let name = name.ok_or("catalog run needs a name or --all")?;
                    let entry = catalog::get(&name).ok_or_else(|| {
                        format!(
                            "unknown catalog entry {:?}; available: {}",
                            name,
                            catalog::names().join(", ")
                        )
                    })?;
                    let doc = run_check_str(entry.source, opts).map_err(|e| e.to_string())?;
                    emit(&doc, report);
                    Ok(doc.pass)
                }
            }
            CatalogCmd::Export { name, output } => {
                let entry = catalog::get(&name).ok_or_else(|| {
                    format!(
                        "unknown catalog entry {:?}; available: {}",
                        name,
                        catalog::names().join(", ")
                    )
                })?;
                match output {
                    Some(path) => std::fs::write(&path, entry.source)
                        .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                    None => print!("{}", entry.source),
                }
                Ok(true)
            }
        },
        Cmd::Hesolve { spec, report } => {
            let src = std::fs::read_to_string(&spec)
                .map_err(|e| format!("cannot read {}: {e}", spec.display()))?;
            let spec = SourceSpec::parse(&src).map_err(|e| e.to_string())?;
            let outcome = run_hesolve(&spec).map_err(|e| e.to_string())?;
            match report {
                ReportKind::Machine => println!("{}", outcome.to_machine()),
                ReportKind::Text => print!("{}", outcome.to_text()),
            }
            Ok(true)
        }
    }
}

fn emit(doc: &stromcheck_cli::ReportDocument, kind: ReportKind) {
    match kind {
        ReportKind::Machine => println!("{}", doc.to_machine()),
        ReportKind::Text => print!("{}", doc.to_text()),
    }
}
