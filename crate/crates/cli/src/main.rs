use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entangledyn_cli::{execute, Command, Options};

#[derive(Parser)]
#[command(name = "entangledyn", version, about = "Atom-field entanglement dynamics scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Time series for one scenario (sweeps too, when the config has one)
    Run(Flags),
    /// Parameter sweep in long format
    Sweep(Flags),
    /// Pole report
    Poles(Flags),
}

#[derive(Args)]
struct Flags {
    /// Scenario file (JSON)
    config: PathBuf,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script to `<out>.gp`
    #[arg(long)]
    plot_script: bool,
    /// Worker threads for sweeps
    #[arg(long, env = "ENTANGLEDYN_WORKERS", default_value_t = 1)]
    workers: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let (cmd, f) = match cli.command {
        Cmd::Run(f) => (Command::Run, f),
        Cmd::Sweep(f) => (Command::Sweep, f),
        Cmd::Poles(f) => (Command::Poles, f),
    };
    let opts = Options { config: f.config, out: f.out, plot_script: f.plot_script, workers: f.workers };
    match execute(cmd, &opts) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("entangledyn: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
