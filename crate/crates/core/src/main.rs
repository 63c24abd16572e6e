use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use monoid_spectra::modsys::ParamFamily;
use monoid_spectra::monoid::Monoid;
use monoid_spectra::suite::{run_suite, SuiteName, SuiteSpec};
use monoid_spectra::Error;

#[derive(Parser, Debug)]
#[command(name = "monoid-spectra", version, about = "Check spectral-space claims on finitely presented monoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one verification suite and print its report.
    Verify(VerifyArgs),
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// axioms, spec, ideals, zar, pruefer, pronconst, main1, main2, prop1, prop2 or corollaries
    #[arg(long)]
    suite: String,
    /// Monoid JSON file; optional for main2 when --family is given.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Parameterized family JSON file (main2 converse).
    #[arg(long)]
    family: Option<PathBuf>,
    /// Window radius; the default depends on the monoid.
    #[arg(long)]
    bound: Option<i64>,
    #[arg(long, env = "MONOID_SPECTRA_SEED", default_value_t = 0)]
    seed: u64,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the suite's poset or correspondence as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

const EXIT_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::InvalidField { .. } | Error::Io(_) => EXIT_PARSE,
        Error::Unsupported(_) | Error::CarrierTooLarge { .. } => EXIT_UNSUPPORTED,
        _ => EXIT_FAILED,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Loading errors are all input errors, whatever the underlying cause.
fn load(args: &VerifyArgs) -> Result<SuiteSpec, Error> {
    let suite: SuiteName = args.suite.parse()?;
    let monoid = args.input.as_deref().map(|p| read(p).and_then(|t| Monoid::from_json(&t))).transpose()?;
    let family = args.family.as_deref().map(|p| read(p).and_then(|t| ParamFamily::from_json(&t))).transpose()?;
    let input = match (&monoid, &family) {
        (Some(h), _) => h.label(),
        (None, Some(f)) => f.name().to_string(),
        (None, None) => return Err(Error::InvalidField { field: "input".into(), message: "--input is required".into() }),
    };
    Ok(SuiteSpec {
        suite,
        monoid,
        input,
        family,
        bound: args.bound,
        seed: args.seed,
    })
}

fn verify(args: &VerifyArgs) -> Result<bool, (u8, Error)> {
    let spec = load(args).map_err(|e| (EXIT_PARSE, e))?;
    let out = run_suite(&spec).map_err(|e| (exit_code(&e), e))?;
    let text = if args.json { out.report.to_json() } else { out.report.to_text() };
    print!("{text}");
    let io = |e: std::io::Error| (EXIT_PARSE, Error::from(e));
    if let Some(path) = &args.report {
        fs::write(path, &text).map_err(io)?;
    }
    if let Some(path) = &args.dot {
        let dot = out.dot.unwrap_or_else(|| format!("digraph {} {{\n}}\n", spec.suite));
        fs::write(path, dot).map_err(io)?;
    }
    Ok(out.report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => match verify(&args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(EXIT_FAILED),
            Err((code, e)) => {
                eprintln!("error: {e}");
                ExitCode::from(code)
            }
        },
    }
}
