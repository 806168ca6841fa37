use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand};
use fresco_cli::commands::{parse_delta, parse_theta};
use fresco_cli::{run, CliError, Command, FrescoDocument};

#[derive(Parser)]
#[command(name = "fresco", about = "Invariants and transforms of frescos")]
struct Args {
    /// Working truncation order
    #[arg(long, global = true)]
    truncation: Option<usize>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full invariant report as JSON
    Report { input: PathBuf },
    /// Rank-1 normal submodules
    Rank1 { input: PathBuf },
    /// Dual twisted by E_delta, as a document
    Dual {
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        input: PathBuf,
    },
    /// Change of variable; coefficients of a, a^2, ...
    Changevar {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        input: PathBuf,
    },
    /// Sub-quotient F_j / F_(i-1) of the principal flag, as a document
    Window { start: usize, end: usize, input: PathBuf },
    /// The beta invariant
    Beta { input: PathBuf },
    /// Semi-simplicity and stratum level
    Semisimple { input: PathBuf },
}

impl Cmd {
    fn input(&self) -> &PathBuf {
        match self {
            Cmd::Report { input }
            | Cmd::Rank1 { input }
            | Cmd::Dual { input, .. }
            | Cmd::Changevar { input, .. }
            | Cmd::Window { input, .. }
            | Cmd::Beta { input }
            | Cmd::Semisimple { input } => input,
        }
    }
}

fn execute(args: &Args) -> Result<String, CliError> {
    let input = args.command.input();
    let text = std::fs::read_to_string(input).map_err(|e| CliError::Io(format!("{}: {}", input.display(), e)))?;
    let doc = FrescoDocument::parse(&text)?;
    let cmd = match &args.command {
        Cmd::Report { .. } => Command::Report,
        Cmd::Rank1 { .. } => Command::Rank1,
        Cmd::Beta { .. } => Command::Beta,
        Cmd::Semisimple { .. } => Command::Semisimple,
        Cmd::Window { start, end, .. } => Command::Window { start: *start, end: *end },
        Cmd::Dual { delta, .. } => Command::Dual { delta: parse_delta(delta)? },
        Cmd::Changevar { theta, .. } => Command::ChangeVar { theta: parse_theta(theta)? },
    };
    Ok(run(&cmd, &doc, args.truncation)?.text().to_string())
}

fn main() {
    let args = Args::parse();
    let result = execute(&args).and_then(|out| match &args.output {
        Some(path) => std::fs::write(path, &out).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e))),
        None => {
            print!("{}", out);
            Ok(())
        }
    });
    if let Err(e) = result {
        eprintln!("error: {}", e);
        exit(e.exit_code());
    }
}
