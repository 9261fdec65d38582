// `!(a <= b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use commands::Failure;
use config::{Cli, RunConfig};

const EXIT_COMPUTE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn run(args: Vec<String>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::resolve(cli.command, cli.flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("qtgp: usage error: {e}");
            return EXIT_USAGE;
        }
    };
    let table = match cfg.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::run(&cfg)),
            Err(e) => {
                eprintln!("qtgp: cannot start {n} worker threads: {e}");
                return EXIT_COMPUTE;
            }
        },
        None => commands::run(&cfg),
    };
    let table = match table {
        Ok(t) => t,
        Err(Failure::Usage(e)) => {
            eprintln!("qtgp: usage error: {e}");
            return EXIT_USAGE;
        }
        Err(Failure::Compute { error, context }) => {
            eprintln!("qtgp: {} failed: {error} [{}]", cfg.command.name(), error.kind());
            eprintln!("qtgp: parameters: {context}");
            return EXIT_COMPUTE;
        }
    };
    let text = output::render(&cfg, &table);
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, text.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("qtgp: cannot write output: {e}");
        return EXIT_COMPUTE;
    }
    0
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args().collect()))
}
