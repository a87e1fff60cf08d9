//! Command-line front end for the lattice simulator: flag/config parsing,
//! parallel run and sweep orchestration, and bit-specified artifact
//! emission (CSV, JSON manifest, binary PGM/PPM).

pub mod args;
pub mod emit;
pub mod error;
pub mod manifest;
pub mod runner;

use clap::Parser;

pub use args::{Job, SweepGrid};
pub use error::CliError;
pub use manifest::Manifest;

/// Parse argv, execute, and map errors to exit codes
/// (0 success, 2 usage/domain, 1 runtime/IO).
pub fn main_impl<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version to stdout (exit 0) and usage errors
            // to stderr (exit 2)
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    0
}

fn dispatch(cli: args::Cli) -> Result<(), CliError> {
    runner::install_thread_pool()?;
    match cli.command {
        args::Command::Run(job_args) => {
            let job = args::resolve_run(&job_args)?;
            let manifest = runner::execute_run(&job)?;
            println!(
                "run complete: {} artifacts in {}",
                manifest.outputs.len(),
                job.out_dir.display()
            );
        }
        args::Command::Sweep(job_args) => {
            let (job, grid) = args::resolve_sweep(&job_args)?;
            let manifest = runner::execute_sweep(&job, &grid)?;
            println!(
                "sweep complete: {} cells, {} artifacts in {}",
                grid.alphas.len() * grid.temperatures.len(),
                manifest.outputs.len(),
                job.out_dir.display()
            );
        }
    }
    Ok(())
}
