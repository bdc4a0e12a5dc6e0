use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::{ContextKind, ContextValue};
use clap::{Parser, Subcommand, ValueEnum};

mod args;
mod commands;
mod render;

use args::{CliError, FieldArgs};
use commands::{CensusArgs, Outcome, ProbeArgs, TupleArgs};

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Rank-2 Drinfeld modules over F_q[T]")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel enumeration; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the surjectivity criterion on a datum.
    Check {
        #[command(flatten)]
        field: FieldArgs,
        /// Datum as "g1=..;g2=..", a JSON object, or a file holding either.
        #[arg(long)]
        datum: Option<String>,
    },
    /// Search for a witness tuple, or test the given one.
    Witness {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        datum: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
    },
    /// Characteristic polynomial of Frobenius at a prime of good reduction.
    Charpoly {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        datum: Option<String>,
        /// Monic irreducible generator, e.g. "T^2+2".
        #[arg(long)]
        prime: String,
        /// Largest prime degree the search accepts.
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Frobenius matrix on the T-torsion at a prime.
    Torsion {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        datum: Option<String>,
        #[arg(long)]
        prime: String,
    },
    /// Exact counts and densities over the height box.
    Census {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        c1: u32,
        #[arg(long)]
        c2: u32,
        #[arg(long = "X")]
        x: u32,
        /// all | class | tuple | union
        #[arg(long, default_value = "class")]
        mode: String,
        #[arg(long)]
        m1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        r1: Option<String>,
        #[arg(long)]
        m2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        r2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
        /// Largest pair count enumerated; overrides DRINFELD_ENUM_CAP.
        #[arg(long)]
        cap: Option<u64>,
        /// Heights X for the fixed-class ratio sequence, e.g. 4,5,6.
        #[arg(long, value_delimiter = ',')]
        series: Option<Vec<u32>>,
    },
    /// Sample Frobenius classes mod T and look for image obstructions.
    Probe {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        datum: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, default_value_t = 1000)]
        max_primes: usize,
        /// Also compute torsion matrices and cross-check them.
        #[arg(long)]
        matrices: bool,
    },
    /// Twist a datum by a constant and compare j-invariants.
    Twist {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        datum: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Run the built-in golden suite.
    Selftest {
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Witness { .. } => "witness",
            Command::Charpoly { .. } => "charpoly",
            Command::Torsion { .. } => "torsion",
            Command::Census { .. } => "census",
            Command::Probe { .. } => "probe",
            Command::Twist { .. } => "twist",
            Command::Selftest { .. } => "selftest",
        }
    }

    fn run(self) -> Result<Outcome, CliError> {
        match self {
            Command::Check { field, datum } => commands::check(&field, &datum),
            Command::Witness { field, datum, a1, a2, eta } => {
                commands::witness(&field, &datum, &TupleArgs { a1: &a1, a2: &a2, eta: &eta })
            }
            Command::Charpoly { field, datum, prime, max_degree } => {
                commands::charpoly(&field, &datum, &prime, max_degree)
            }
            Command::Torsion { field, datum, prime } => commands::torsion(&field, &datum, &prime),
            Command::Census {
                field, c1, c2, x, mode, m1, r1, m2, r2, a1, a2, eta, cap, series,
            } => commands::census_cmd(
                &field,
                &CensusArgs { c1, c2, x, mode, m1, r1, m2, r2, a1, a2, eta, cap, series },
            ),
            Command::Probe { field, datum, max_degree, max_primes, matrices } => commands::probe(
                &field,
                &datum,
                &ProbeArgs { max_degree, max_primes, matrices },
            ),
            Command::Twist { field, datum, c } => commands::twist_cmd(&field, &datum, &c),
            Command::Selftest { inject_fault } => commands::selftest(inject_fault.as_deref()),
        }
    }
}

fn emit(report: &serde_json::Value, format: Format, output: Option<&PathBuf>) -> Result<(), String> {
    let text = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(report).expect("serializable")),
        Format::Text => render::to_text(report),
    };
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.render().to_string();
            let first = detail.lines().next().unwrap_or("").trim_start_matches("error: ");
            let mut report = commands::envelope(
                "",
                serde_json::json!({ "error": "UsageError", "message": first }),
            );
            if let Some(ContextValue::String(arg)) = e.get(ContextKind::InvalidArg) {
                let flag = arg.split_whitespace().next().unwrap_or(arg);
                report["flag"] = serde_json::json!(flag);
            }
            report["command"] = serde_json::Value::Null;
            let _ = emit(&report, Format::Json, None);
            return ExitCode::from(2);
        }
    };
    let name = cli.command.name();
    let outcome = match cli.jobs {
        Some(0) => Err(CliError::usage("--jobs", "must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage("--jobs", e.to_string())),
        None => Ok(()),
    }
    .and_then(|()| cli.command.run());
    let (report, code) = match outcome {
        Ok(o) => (commands::envelope(name, o.report), o.code),
        Err(e) => (commands::error_report(name, &e), e.exit_code()),
    };
    if let Err(msg) = emit(&report, cli.format, cli.output.as_ref()) {
        eprintln!("drinfeld: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
