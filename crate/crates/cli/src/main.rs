use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use umm_cli::config::{parse_focus, Overrides};
use umm_cli::{list_experiments, run, EXIT_CONFIG};

/// Reproduce near-field UM-MIMO experiments at desk scale.
#[derive(Parser, Debug)]
#[command(name = "umm", version, about)]
struct Args {
    /// Experiment id, `list-experiments`, or `run <id>`.
    #[arg(required = true, num_args = 1..=2)]
    command: Vec<String>,
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Root output directory (default `runs`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
    /// Focus distance for `beamdepth`, e.g. `0.05dF`.
    #[arg(long = "F", value_name = "FRACTION")]
    focus: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let id = match args.command.as_slice() {
        [cmd] if cmd == "list-experiments" => {
            print!("{}", list_experiments());
            return ExitCode::SUCCESS;
        }
        [run_kw, id] if run_kw == "run" => id.clone(),
        [id] => id.clone(),
        other => {
            eprintln!("usage: umm [run] <experiment-id> [options]; got {other:?}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let focus = match args.focus.as_deref().map(parse_focus).transpose() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let overrides = Overrides { seed: args.seed, trials: args.trials, out: args.out, svg: args.svg, focus };
    match run(&id, args.config.as_ref(), &overrides) {
        Ok(dir) => {
            println!("{}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
