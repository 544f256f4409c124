//! Command-line front end: closed-form divergences, Monte-Carlo verification,
//! CSV sweeps and a self-test.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 matrix not
//! positive definite, 4 output error.

pub mod cli;
pub mod commands;
pub mod error;
pub mod fmt;
pub mod input;
pub mod selftest;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use wkl_core::symmat::RankTolerance;

use cli::{Cli, Command};
use commands::Settings;
use error::{CliError, Result};

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    let tol = RankTolerance::new(cli.tol_rank).map_err(|e| CliError::Usage(e.to_string()))?;
    if cli.quad_nodes == 0 {
        return Err(CliError::Usage("--quad-nodes must be at least 1".into()));
    }
    let settings = Settings {
        seed: cli.seed,
        tol,
        quad_nodes: cli.quad_nodes,
    };
    match &cli.command {
        Command::Wkl(a) => commands::wkl(a, &settings, out),
        Command::Kl(a) => commands::kl(a, out),
        Command::Verify(a) => commands::verify(a, &settings, out),
        Command::Sweep(a) => sweep::run(a, out),
        Command::Selftest(a) => {
            let src: &dyn selftest::SeriesSource = if a.inject_series_fault {
                &selftest::FaultySeries
            } else {
                &selftest::Builtin
            };
            selftest::run_selftest_with(src, settings.seed, settings.quad_nodes, out)
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
