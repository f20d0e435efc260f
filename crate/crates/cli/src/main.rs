// SPDX-License-Identifier: Apache-2.0

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn run(cli: &Cli) -> anyhow::Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads as usize)
        .build_global()?;
    match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Features(a) => commands::features(a),
        Command::Train(a) => commands::train_cmd(a),
        Command::Cv(a) => commands::cv(a),
        Command::Prune(a) => commands::prune(a),
        Command::Enumerate(a) => commands::enumerate(a),
        Command::Pipeline(a) => commands::pipeline(a),
        Command::Experiment(a) => commands::experiment(a),
        Command::Robustness(a) => commands::robustness(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
