//! `wavescrub` command line.
//!
//! Exit codes: 0 success, 1 runtime (I/O) failure, 2 usage or configuration
//! error. Tables and reports go to stdout, diagnostics to stderr.

mod commands;
mod manifest;

pub use commands::{
    cmd_denoise, cmd_metric, cmd_pipeline, cmd_profile, cmd_synth, load_pipeline, DenoiseRun,
    EndToEndConfig, MetricRun, PipelineRun, ProfileRun, SynthRun,
};
pub use manifest::{sha256_hex, OutputFile, RunManifest, MANIFEST_FILE};

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Result;
use crate::frames::FrameFormat;
use crate::metrics::Row;

#[derive(Debug, Parser)]
#[command(name = "wavescrub", version, about = "Denoise scanned ultrasonic wavefield frames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate clean (and noisy) wavefield snapshots from a key=value config.
    Synth {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "f64le")]
        format: FrameFormat,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a filter pipeline over frame files.
    Denoise {
        /// Pipeline file, one stage per line; default pipeline when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Output format; defaults to each input's format.
        #[arg(long)]
        format: Option<FrameFormat>,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Energy of the noise removed, per frame pair.
    Metric {
        #[arg(long, num_args = 1.., required = true)]
        original: Vec<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        denoised: Vec<PathBuf>,
        /// Directory for metric.csv and a manifest; CSV goes to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Input format; guessed from extensions otherwise.
        #[arg(long)]
        format: Option<FrameFormat>,
    },
    /// Intensities along one row of an original/denoised pair.
    Profile {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        denoised: PathBuf,
        #[arg(long, default_value = "center")]
        row: Row,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<FrameFormat>,
    },
    /// Synth, denoise, metric and profiles from one config.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        format: Option<FrameFormat>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Synth { config, out, format, seed } => {
            let run = cmd_synth(&config, &out, format, seed)?;
            writeln!(
                stderr,
                "wrote {} files to {}",
                run.manifest.outputs.len(),
                out.display()
            )?;
            Ok(0)
        }
        Command::Denoise { config, out, format, inputs } => {
            let run = cmd_denoise(&inputs, config.as_deref(), &out, format)?;
            for (path, err) in &run.failures {
                writeln!(stderr, "error: {}: {err}", path.display())?;
            }
            writeln!(stderr, "denoised {} of {} frames", run.outputs.len(), inputs.len())?;
            Ok(run.exit_code())
        }
        Command::Metric { original, denoised, out, format } => {
            let run = cmd_metric(&original, &denoised, out.as_deref(), format)?;
            stdout.write_all(run.table.as_bytes())?;
            if out.is_none() {
                writeln!(stdout)?;
                stdout.write_all(run.csv.as_bytes())?;
            }
            Ok(0)
        }
        Command::Profile { original, denoised, row, out, format } => {
            let run = cmd_profile(&original, &denoised, row, out.as_deref(), format)?;
            if out.is_none() {
                stdout.write_all(run.csv.as_bytes())?;
            } else {
                writeln!(stderr, "profile of row {}", run.row_index)?;
            }
            Ok(0)
        }
        Command::Pipeline { config, out, format, seed } => {
            let run = cmd_pipeline(&config, &out, format, seed)?;
            stdout.write_all(run.table.as_bytes())?;
            Ok(0)
        }
    }
}
