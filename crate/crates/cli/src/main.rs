//! `scram`: build SCRAM three-layer Tanner graphs, count their short
//! cycles, and run decoding experiments from the command line.

mod commands;
mod error;
mod inputs;
mod manifest;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Full,
    Half,
    Oracle,
}

/// Tanner-graph analysis and joint decoding for LDPC-coded slotted random
/// access.
///
/// Exit codes: 0 success, 2 usage, 3 input parse, 4 budget exceeded,
/// 5 verification mismatch.
#[derive(Parser)]
#[command(name = "scram", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cycle profile of a single LDPC code from an alist file or a JSON
    /// descriptor {n, k, m, alist_path}.
    AnalyzeLdpc {
        /// Path to an .alist file or a .json code descriptor.
        input: PathBuf,
        /// Largest cycle length to count (even, >= 4). Defaults to the full
        /// validity window 2g-2.
        #[arg(long)]
        l_max: Option<usize>,
        /// Counting engine; `oracle` enumerates exhaustively.
        #[arg(long, value_enum, default_value_t = Engine::Half)]
        engine: Engine,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include per-node cycle attributions in the report.
        #[arg(long)]
        per_node: bool,
        /// Echoed in the report; this command draws no randomness.
        #[arg(long)]
        seed: Option<u64>,
        /// Base directory for relative paths.
        #[arg(long, default_value = ".")]
        workdir: PathBuf,
    },
    /// Build a system from a scenario JSON: slot assignment, hybrid matrix
    /// and system report are written into --out-dir.
    BuildScram {
        /// Scenario file: {users: [{alist_path, k}], n_slots, seed}.
        scenario: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        workdir: PathBuf,
    },
    /// Count global 8-cycles of a scenario or of a directory produced by
    /// build-scram.
    CountGlobal8 {
        /// Scenario JSON, or a build-scram output directory (reuses its
        /// recorded assignment).
        target: PathBuf,
        /// Also compute C8(hybrid) - sum C8(codes) via the half engine and
        /// compare; a mismatch fails with exit code 5.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Overrides the scenario seed (ignored for built directories).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        workdir: PathBuf,
    },
    /// Monte-Carlo packet error rates from an experiment JSON.
    Simulate {
        /// Experiment file: {scenario, snr_db, frames, max_iters, seed}.
        experiment: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Overrides the experiment seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        workdir: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::AnalyzeLdpc { input, l_max, engine, format, out, per_node, seed, workdir } => {
            commands::analyze_ldpc(commands::AnalyzeArgs {
                input,
                l_max,
                engine,
                format,
                out,
                per_node,
                seed,
                workdir,
            })
        }
        Command::BuildScram { scenario, out_dir, format, seed, workdir } => {
            commands::build_scram(commands::BuildArgs { scenario, out_dir, format, seed, workdir })
        }
        Command::CountGlobal8 { target, verify, format, seed, out, workdir } => {
            commands::count_global8(commands::Global8Args {
                target,
                verify,
                format,
                seed,
                out,
                workdir,
            })
        }
        Command::Simulate { experiment, format, seed, out, workdir } => {
            commands::simulate(commands::SimulateArgs { experiment, format, seed, out, workdir })
        }
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
