//! `modreg`: classify modules, run the brute-force oracle, sweep all small
//! abelian groups, compute Smith normal forms, print the valuation-domain
//! structure table.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 domain error, 3 sweep
//! mismatch, 4 capacity exceeded under `--strict-caps`.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use modreg_core::error::Error;
use modreg_core::input::{parse_module_spec, ModuleSpec};
use modreg_core::oracle::Caps;
use modreg_core::report::{run_classify, run_oracle, run_snf, to_json};
use modreg_core::sweep::{run_sweep, SweepOptions};
use modreg_core::valdom::render_table1;

const EXIT_USAGE: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_CAPACITY: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "modreg", version, about = "Virtual regularity of modules")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Exit with status 4 when any oracle enumeration hits a cap.
    #[arg(long, global = true)]
    strict_caps: bool,

    /// Maximum subgroup count for lattice enumeration.
    #[arg(long, global = true)]
    subgroup_cap: Option<usize>,

    /// Maximum group order the oracle will enumerate.
    #[arg(long, global = true)]
    order_cap: Option<usize>,

    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a module descriptor (`-` reads stdin).
    Classify {
        input: String,
        /// Accept torsion orders in any order and normalize them.
        #[arg(long)]
        canonicalize: bool,
    },
    /// Run the definition-level oracle on a finite abelian group.
    Oracle {
        input: String,
        #[arg(long)]
        canonicalize: bool,
    },
    /// Compare classifier and oracle on every abelian group up to an order.
    Sweep {
        #[arg(long, default_value_t = 200)]
        max_order: u64,
        /// Run lattice-based predicates only up to this order (default: all).
        #[arg(long)]
        deep_max_order: Option<u64>,
    },
    /// Smith normal form of an integer matrix (`-` reads stdin).
    Snf {
        input: String,
        /// Also print the unimodular transforms U and V.
        #[arg(long)]
        transforms: bool,
    },
    /// Structure table for finitely presented modules over valuation domains.
    Table,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::NonCanonicalChain { .. } => EXIT_USAGE,
            Error::Domain(_) => EXIT_DOMAIN,
            Error::Capacity { .. } => EXIT_CAPACITY,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read_input(arg: &str) -> Result<String, Failure> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut buf = String::new();
    std::io::stdin().read_to_string(&mut buf).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("reading stdin: {e}"),
    })?;
    Ok(buf)
}

fn caps(cli: &Cli) -> Result<Caps, Failure> {
    let mut caps = match std::env::var("MODREG_CAPS") {
        Ok(text) => Caps::parse_overrides(&text).map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("MODREG_CAPS: {e}"),
        })?,
        Err(_) => Caps::default(),
    };
    if let Some(n) = cli.subgroup_cap {
        caps.max_subgroups = n;
    }
    if let Some(n) = cli.order_cap {
        caps.max_order = n;
    }
    if caps.max_order == 0 || caps.max_subgroups == 0 {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "caps must be positive".to_string(),
        });
    }
    Ok(caps)
}

fn emit<T: serde::Serialize>(cli: &Cli, report: &T, text: String) {
    match cli.format {
        Format::Json => print!("{}", to_json(report)),
        Format::Text => print!("{text}"),
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let caps = caps(cli)?;
    match &cli.command {
        Command::Classify {
            input,
            canonicalize,
        } => {
            let spec = parse_module_spec(&read_input(input)?, *canonicalize)?;
            let report = run_classify(&spec)?;
            emit(cli, &report, report.to_text());
            Ok(0)
        }
        Command::Oracle {
            input,
            canonicalize,
        } => {
            let g = match parse_module_spec(&read_input(input)?, *canonicalize)? {
                ModuleSpec::Abelian(g) => g,
                _ => {
                    return Err(Failure {
                        code: EXIT_DOMAIN,
                        message: "the oracle takes a `Z: ...` descriptor".to_string(),
                    })
                }
            };
            let report = run_oracle(&g, caps)?;
            emit(cli, &report, report.to_text());
            if report.has_mismatch() {
                Ok(EXIT_MISMATCH)
            } else if cli.strict_caps && report.has_skip() {
                Ok(EXIT_CAPACITY)
            } else {
                Ok(0)
            }
        }
        Command::Sweep {
            max_order,
            deep_max_order,
        } => {
            let report = run_sweep(&SweepOptions {
                max_order: *max_order,
                deep_max_order: deep_max_order.unwrap_or(*max_order),
                caps,
            })?;
            emit(cli, &report, report.to_text(cli.verbose));
            if !report.mismatches.is_empty() {
                Ok(EXIT_MISMATCH)
            } else if cli.strict_caps && !report.skipped.is_empty() {
                Ok(EXIT_CAPACITY)
            } else {
                Ok(0)
            }
        }
        Command::Snf { input, transforms } => {
            let matrix = match parse_module_spec(&read_input(input)?, false)? {
                ModuleSpec::Matrix(m) => m,
                _ => {
                    return Err(Failure {
                        code: EXIT_USAGE,
                        message: "expected a matrix: `rows cols` followed by rows".to_string(),
                    })
                }
            };
            let report = run_snf(&matrix, *transforms)?;
            emit(cli, &report, report.to_text());
            Ok(0)
        }
        Command::Table => {
            print!("{}", render_table1());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("modreg: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
