use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use tbm_cli::{combine, condition_cmd, query, trace, CliError, Options};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    /// Fuse every evidence item by unnormalized conjunctive combination.
    Combine,
    /// Fuse, then condition on --set.
    Condition,
    /// Fuse, then report bel/pl of --queries (and BetP with --betp).
    Query,
    /// Replay a corpus script and report the conflict trail.
    Trace,
}

/// Transferable-belief-model fusion over evidence documents.
#[derive(Debug, Parser)]
#[command(name = "tbm", version)]
struct Cli {
    command: Command,
    /// Input document; standard input when omitted or `-`.
    input: Option<PathBuf>,
    /// Conditioning set, comma-separated labels; "" is the empty set.
    #[arg(long, allow_hyphen_values = true)]
    set: Option<String>,
    /// Query sets, separated by `;` or given repeatedly.
    #[arg(long, value_delimiter = ';')]
    queries: Vec<String>,
    /// Also print the Dempster-normalized result.
    #[arg(long)]
    normalize: bool,
    /// Also print pignistic probabilities.
    #[arg(long)]
    betp: bool,
    /// Machine-readable JSON output.
    #[arg(long)]
    machine: bool,
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p)?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        set: cli.set,
        queries: cli.queries,
        normalize: cli.normalize,
        betp: cli.betp,
        machine: cli.machine,
    };
    let result = read_input(cli.input.as_ref()).and_then(|text| match cli.command {
        Command::Combine => combine(&text, &opts),
        Command::Condition => condition_cmd(&text, &opts),
        Command::Query => query(&text, &opts),
        Command::Trace => trace(&text, &opts),
    });
    match result {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(outcome.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
