// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fullerene_cli::{execute, RunOptions};

#[derive(Parser)]
#[command(name = "fullerene", version, about = "Spin simulations of endohedral fullerenes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write its outputs.
    Run {
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
        /// Worker threads for ensemble and sweep parallelism.
        #[arg(short, long)]
        threads: Option<usize>,
        /// Also write an SVG plot for each trace.
        #[arg(long)]
        svg: bool,
    },
    /// Built-in species presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, threads, svg } => match execute(&config, &out, &RunOptions { threads, svg }) {
            Ok(report) => {
                println!("{} scenario: {} files in {}", report.scenario.kind, report.files.len() + 1, out.display());
                for (k, v) in &report.results {
                    println!("  {k} = {v}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
        Command::Presets { action: PresetAction::List } => {
            println!("{:<10} {:>4} {:>4} {:>8} {:>10} {:>6}", "name", "S", "I", "g", "a_MHz", "cage");
            for p in fullerene_core::species::presets() {
                println!(
                    "{:<10} {:>4} {:>4} {:>8} {:>10.4} {:>6}",
                    p.name,
                    p.electron_spin.value(),
                    p.nuclear_spin.value(),
                    p.g,
                    p.hyperfine_mhz,
                    p.cage_carbons
                );
            }
            ExitCode::SUCCESS
        }
    }
}
