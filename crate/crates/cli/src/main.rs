use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use darboux_cli::{run_text, Command};

/// Lower and upper extensions, Darboux sets, completions, exact reals,
/// integrals and limits, driven by JSON requests.
#[derive(Debug, Parser)]
#[command(name = "darboux", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Input {
    /// Request file; standard input when absent or `-`.
    file: Option<PathBuf>,
    /// Also print a one-line summary to standard error.
    #[arg(long)]
    summary: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Free cocompletion, Darboux completion and the stripped completion of a poset.
    Complete(Input),
    /// Lower and upper extensions of a partial monotone map.
    Extend(Input),
    /// Darboux set, bounded set and Darboux extension of a partial map.
    Darboux(Input),
    /// Automorphism group of a poset.
    Aut(Input),
    /// Bounded Darboux set of an automorphism group of a lattice.
    Cic(Input),
    /// Enclosure of an expression over exact reals.
    RealEval(Input),
    /// Lower and upper integrals of a range oracle.
    Integrate(Input),
    /// Limit of a sequence or of a function at a point.
    Limit(Input),
    /// Identity audits with counterexample witnesses.
    Audit(Input),
    /// Any request; the command is read from the request itself.
    Run(Input),
}

fn split(cmd: Cmd) -> (Option<Command>, Input) {
    match cmd {
        Cmd::Complete(i) => (Some(Command::Complete), i),
        Cmd::Extend(i) => (Some(Command::Extend), i),
        Cmd::Darboux(i) => (Some(Command::Darboux), i),
        Cmd::Aut(i) => (Some(Command::Aut), i),
        Cmd::Cic(i) => (Some(Command::Cic), i),
        Cmd::RealEval(i) => (Some(Command::RealEval), i),
        Cmd::Integrate(i) => (Some(Command::Integrate), i),
        Cmd::Limit(i) => (Some(Command::Limit), i),
        Cmd::Audit(i) => (Some(Command::Audit), i),
        Cmd::Run(i) => (None, i),
    }
}

fn read_input(file: Option<&PathBuf>) -> std::io::Result<String> {
    match file {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (expected, input) = split(cli.command);
    let text = match read_input(input.file.as_ref()) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("darboux: cannot read request: {e}");
            return ExitCode::from(1);
        }
    };
    let response = run_text(&text, expected);
    print!("{}", response.to_json_line());
    if input.summary {
        eprintln!("{}", response.summary());
    }
    ExitCode::from(response.exit_code as u8)
}
