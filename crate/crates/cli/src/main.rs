//! `spanhyper`: command-line front end.
//!
//! Exit status is 0 when the run produced its answer (including "not
//! found"), 1 on a domain failure such as an exhausted budget or a failed
//! embedding, and 2 on usage, parse or schema errors.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;
use spanhyper_core::{Error, Execution};

use commands::{Status, UsageError};
use config::{Cli, Invocation, RunConfig};

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() || cause.is::<serde_json::Error>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Parse { .. }
                | Error::InvalidParameter(_)
                | Error::VertexOutOfRange { .. }
                | Error::InvalidEdge { .. }
                | Error::DuplicateEdge(_) => 2,
                _ => 1,
            };
        }
    }
    1
}

fn execute(cli: Cli) -> anyhow::Result<Status> {
    let cfg = match cli.command {
        Invocation::Command(cmd) => RunConfig::from_cli(cli.seed, cli.json, cli.out, cmd),
        Invocation::Run { config } => {
            let mut cfg = commands::load_config(&config)?;
            // flags given next to `run` override the document
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            cfg.json |= cli.json;
            if cli.out.is_some() {
                cfg.out = cli.out;
            }
            cfg
        }
    };
    with_jobs(cli.jobs, || commands::run(&cfg, Execution::default()))
}

#[cfg(feature = "parallel")]
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> anyhow::Result<T> + Send) -> anyhow::Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(UsageError("--jobs must be at least 1".into()).into());
        }
        builder = builder.num_threads(j);
    }
    builder.build()?.install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<T>(jobs: Option<usize>, f: impl FnOnce() -> anyhow::Result<T>) -> anyhow::Result<T> {
    if jobs == Some(0) {
        return Err(UsageError("--jobs must be at least 1".into()).into());
    }
    f()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
