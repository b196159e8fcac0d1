//! `routematch`: ingest tracking data, classify routes against a route
//! tree, score the labels and draw the results.

mod cmd;
mod config;
mod error;
mod io;

use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "routematch", version, about = "Receiver route classification by template matching")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// JSON run configuration (classify, extract, schema, templates, seed).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed for anything random; overrides the config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Suppress progress and summary lines on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract canonical routes from a tracking CSV.
    Ingest(cmd::ingest::IngestArgs),
    /// Label routes by their nearest template.
    Classify(cmd::classify::ClassifyArgs),
    /// Score predicted labels against reference labels.
    Evaluate(cmd::evaluate::EvaluateArgs),
    /// Draw routes as SVG.
    #[command(subcommand)]
    Plot(cmd::plot::PlotCommand),
    /// Generate a labeled synthetic corpus.
    Synth(cmd::synth::SynthArgs),
    /// Check or export template files.
    #[command(subcommand)]
    Templates(cmd::templates::TemplatesCommand),
}

/// Everything a subcommand needs besides its own flags.
pub struct Context {
    pub config: RunConfig,
    pub global: Global,
}

impl Context {
    pub fn seed(&self) -> Option<u64> {
        self.global.seed.or(self.config.seed)
    }

    pub fn info(&self, msg: impl std::fmt::Display) {
        if !self.global.quiet {
            eprintln!("{msg}");
        }
    }
}

fn run(cli: Cli) -> error::Result<()> {
    let config = RunConfig::load(cli.global.config.as_deref())?;
    let ctx = Context {
        config,
        global: cli.global,
    };
    match cli.command {
        Command::Ingest(a) => cmd::ingest::run(&ctx, a),
        Command::Classify(a) => cmd::classify::run(&ctx, a),
        Command::Evaluate(a) => cmd::evaluate::run(&ctx, a),
        Command::Plot(c) => cmd::plot::run(&ctx, c),
        Command::Synth(a) => cmd::synth::run(&ctx, a),
        Command::Templates(c) => cmd::templates::run(&ctx, c),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on its own usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
