//! `contactgeo` command-line front end.
//!
//! Exit codes: 0 when the run completed and the structures are valid, 1 for
//! input, schema or usage errors, 2 when a structure violates its own
//! invariants. Class and identity verdicts never change the exit code.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contactgeo::identities::registry;
use contactgeo::report::{resolve_input, spec_of};
use contactgeo::{emit_report, run, Command, Format, RunConfig, Sampling, CATALOG_NAMES};

#[derive(Parser)]
#[command(
    name = "contactgeo",
    version,
    about = "Classify almost contact metric structures and verify submersion identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a structure (or the total space and base of a submersion).
    Classify(RunArgs),
    /// Verify submersion identities.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// `all`, or a comma-separated list of ids and `prefix.*` patterns.
        #[arg(long, default_value = "all", value_delimiter = ',')]
        identities: Vec<String>,
    },
    /// Classification plus verification of every identity.
    Report(RunArgs),
    /// List catalog entries and identity ids.
    List,
    /// Print the JSON spec of a catalog entry or spec file.
    Export { input: String },
}

#[derive(Args)]
struct RunArgs {
    /// `catalog:<name>` or a path to a JSON spec.
    input: String,
    #[arg(long, default_value_t = 32)]
    points: usize,
    #[arg(long, default_value_t = 8)]
    vectors: usize,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Fmt::Json)]
    format: Fmt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Md,
}

impl RunArgs {
    fn config(self, command: Command, identities: Vec<String>) -> RunConfig {
        RunConfig {
            input: self.input,
            command,
            sampling: Sampling {
                points: self.points,
                vectors: self.vectors,
                seed: self.seed,
                tol: self.tol,
            },
            format: match self.format {
                Fmt::Json => Format::Json,
                Fmt::Md => Format::Md,
            },
            identities,
        }
    }
}

fn list() -> String {
    let mut s = String::from("catalog entries:\n");
    for n in CATALOG_NAMES {
        s.push_str(&format!("  catalog:{n}\n"));
    }
    s.push_str("identities:\n");
    for r in registry() {
        s.push_str(&format!("  {:<20} {}\n", r.id, r.statement));
    }
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let all = || vec!["all".to_string()];
    let cfg = match cli.command {
        Cmd::Classify(a) => a.config(Command::Classify, all()),
        Cmd::Verify { run, identities } => run.config(Command::Verify, identities),
        Cmd::Report(a) => a.config(Command::Report, all()),
        Cmd::List => {
            print!("{}", list());
            return ExitCode::SUCCESS;
        }
        Cmd::Export { input } => {
            return match resolve_input(&input) {
                Ok(r) => {
                    let json = serde_json::to_string_pretty(&spec_of(&r.object)).expect("spec serializes");
                    println!("{json}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
    };
    match run(&cfg) {
        Ok(doc) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(emit_report(&doc, cfg.format).as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
