//! Command-line driver for `rcw-core`: graph and spectrum files, JSON/CSV
//! reports with a provenance manifest, and parallel loops over start vertices.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod json;
pub mod manifest;
pub mod par;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

use crate::args::Cli;
use crate::commands::Ctx;
use crate::manifest::ManifestBuilder;

/// Runs one command line and returns the process exit code: 0 on success,
/// 1 when `verify` finds a failing check, 2 on usage, input or IO errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut ctx = Ctx {
        manifest: ManifestBuilder::new(&argv, cli.timing),
    };
    match par::pool().install(|| commands::dispatch(&mut ctx, cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
