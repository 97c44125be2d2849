// SPDX-License-Identifier: Apache-2.0
//! `simopt` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use simopt::flow::{cmd_bench, cmd_compare, cmd_map, cmd_simulate, FlowConfig, FlowError, InputFormat, Verb};
use simopt::mapper::CostMode;

#[derive(Debug, Parser)]
#[command(name = "simopt", version, about = "Activity-guided LUT mapping flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a design and write its toggle-counter dump.
    Simulate(Common),
    /// Map a design in one cost mode.
    Map(Common),
    /// Simulate, map in both modes, verify and report.
    Compare(Common),
    /// Run compare over every circuit in a directory.
    Bench {
        /// Directory of .aag and .blif circuits.
        dir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Vanilla,
    Simopt,
}

#[derive(Debug, Args)]
struct Common {
    /// ASCII AIGER input.
    #[arg(long, conflicts_with = "blif")]
    aiger: Option<PathBuf>,
    /// BLIF input.
    #[arg(long)]
    blif: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    cycles: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Name glob of signals to track; repeatable.
    #[arg(long = "track")]
    track: Vec<String>,
    /// Stimulus file; random vectors when omitted.
    #[arg(long)]
    stimulus: Option<PathBuf>,
    /// LUT input count.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Priority cuts kept per node.
    #[arg(long, default_value_t = 8)]
    priority: usize,
    #[arg(long = "hot-percentile", default_value_t = 80.0)]
    hot_percentile: f64,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Activity dump to map with.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

impl Common {
    fn config(self, verb: Verb, bench_dir: Option<PathBuf>) -> FlowConfig {
        let input = match (self.aiger, self.blif) {
            (Some(p), _) => Some((p, InputFormat::Aiger)),
            (None, Some(p)) => Some((p, InputFormat::Blif)),
            (None, None) => None,
        };
        FlowConfig {
            verb,
            input,
            bench_dir,
            stimulus: self.stimulus,
            cycles: self.cycles,
            seed: self.seed,
            track: self.track,
            k: self.k,
            priority: self.priority,
            hot_percentile: self.hot_percentile,
            mode: self.mode.map(|m| match m {
                Mode::Vanilla => CostMode::Vanilla,
                Mode::Simopt => CostMode::Simopt,
            }),
            dump: self.dump,
            out: self.out,
        }
    }
}

fn run(cli: Cli) -> Result<String, FlowError> {
    Ok(match cli.command {
        Command::Simulate(c) => cmd_simulate(&c.config(Verb::Simulate, None))?.to_string(),
        Command::Map(c) => cmd_map(&c.config(Verb::Map, None))?.to_string(),
        Command::Compare(c) => cmd_compare(&c.config(Verb::Compare, None))?.to_text(),
        Command::Bench { dir, common } => cmd_bench(&common.config(Verb::Bench, Some(dir)))?.to_string(),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(text) => {
            println!("{}", text.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
