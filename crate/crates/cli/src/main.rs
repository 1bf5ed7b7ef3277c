//! `jcdyn` command-line driver.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 validation failure.

mod args;
mod commands;
mod config;
mod error;
mod output;
mod plot;

use std::ffi::OsString;

use clap::Parser;

use crate::args::Cli;

fn run(argv: Vec<OsString>) -> i32 {
    let argv = match config::expand_config(argv) {
        Ok(argv) => argv,
        Err(e) => {
            eprintln!("jcdyn: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("jcdyn: {e}");
            e.exit_code()
        }
    }
}

fn main() {
    std::process::exit(run(std::env::args_os().collect()));
}
