//! `gwloc`: command-line driver for the exact localization engine.

mod args;
mod commands;
mod config;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::{RunConfig, UsageError};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("GWLOC_THREADS") {
        let k: usize = v
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("GWLOC_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    init_threads()?;
    let cfg = RunConfig::resolve(&cli.common, &cli.command)?;
    match cli.command {
        Command::Invariants { dump_graphs, .. } => {
            finish(commands::invariants(cfg, dump_graphs.as_deref())?)
        }
        Command::SvrVerify { inject_fault, .. } => finish(commands::svr_verify(cfg, inject_fault)?),
        Command::MirrorVerify => finish(commands::mirror_verify(cfg)?),
        Command::ModularityVerify => finish(commands::modularity_verify(cfg)?),
        Command::HodgeTable { .. } => finish(commands::hodge_table(cfg)?),
    }
}

fn finish<R: serde::Serialize + report::CsvRow>(r: report::Report<R>) -> anyhow::Result<bool> {
    r.emit()?;
    Ok(r.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(e) if e.downcast_ref::<UsageError>().is_some() => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": format!("{e:#}") }));
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
