use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use conic_zariski::poncelet::NestedEllipseFamily;
use conic_zariski_cli::commands::{self, parse_bracket, parse_origin, write_file, Common, Origin, Output, What};
use conic_zariski_cli::error::CliError;
use conic_zariski_cli::report::Format;

/// Poncelet conic-line arrangements, double covers and Zariski pairs.
#[derive(Parser, Debug)]
#[command(name = "conic-zariski", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Poncelet period.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Search tolerance for the closure defect.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Starting working precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    precision: usize,
    /// Seed for random origins.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Arrangement file to load instead of searching.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Where to write the result.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search the nested-ellipse family for a pair of period n.
    FindPair {
        /// Parameter interval `lo,hi` with a sign change of the closure defect.
        #[arg(long, value_parser = parse_bracket)]
        bracket: Option<(f64, f64)>,
        #[arg(long, default_value_t = 1.125)]
        k: f64,
        #[arg(long, default_value_t = 0.0625)]
        h: f64,
    },
    /// Trace a Poncelet transverse.
    Trace {
        /// `generic`, `t=<chart parameter>`, `bitangent:<k>` or `node:<k>`.
        #[arg(long, default_value = "generic", value_parser = parse_origin)]
        from: Origin,
    },
    /// Gluing data and covers of C1 + C2.
    Covers,
    /// Splitting types of the six arrangements and the Zariski certificates.
    Splitting,
    /// Run every check of the construction.
    Verify,
    /// Draw the real part as SVG.
    Render {
        #[arg(long, value_enum, default_value_t = What::Transverse)]
        what: What,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common = Common {
        n: cli.n,
        tol: cli.tol,
        precision: cli.precision,
        seed: cli.seed,
        input: cli.input,
        output: cli.output,
        format: cli.format,
    };
    // find-pair and render write their document to --output; other
    // commands write the report there
    let (output, report_to_file) = match cli.command {
        Command::FindPair { bracket, k, h } => (commands::find_pair(&common, bracket, NestedEllipseFamily { k, h })?, false),
        Command::Trace { from } => (commands::trace_cmd(&common, &from)?, true),
        Command::Covers => (commands::covers(&common)?, true),
        Command::Splitting => (commands::splitting(&common)?, true),
        Command::Verify => (commands::verify(&common)?, true),
        Command::Render { what } => {
            let (out, omitted) = commands::render(&common, what)?;
            for w in omitted {
                eprintln!("warning: omitted {w}");
            }
            (out, false)
        }
    };
    let mut failed = 0;
    let text = match output {
        Output::Document(d) => d,
        Output::Report(r) => {
            failed = r.failed();
            r.render(common.format)
        }
    };
    match (&common.output, report_to_file) {
        (Some(path), true) => write_file(path, &text)?,
        _ => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
        }
    }
    if failed > 0 {
        return Err(CliError::ChecksFailed { failed });
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
