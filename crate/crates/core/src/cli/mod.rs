//! Command-line driver: `assess` runs the whole pipeline, `map` only writes
//! mapping evidence.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use config::{parse_bbox, parse_utc_offset, parse_window, LexiconSource, Overrides, RunConfig};
pub use run::{run_assess, run_map, RunOutcome};

#[derive(Debug, Parser)]
#[command(name = "hwyimpact", version, about = "Assess disaster impacts on highways from geotagged posts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline and write all reports
    Assess(RunArgs),
    /// Ingest, clean and map only; write evidence.csv
    Map(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON Lines corpus
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Lexicon JSON file
    #[arg(long, conflicts_with = "builtin_harvey")]
    pub lexicon: Option<PathBuf>,
    /// Use the bundled Houston lexicon (the default when no lexicon is given)
    #[arg(long)]
    pub builtin_harvey: bool,
    /// lat_min,lat_max,lon_min,lon_max
    #[arg(long, allow_hyphen_values = true)]
    pub bbox: Option<String>,
    /// start:end, inclusive ISO dates
    #[arg(long)]
    pub window: Option<String>,
    /// Study timezone, e.g. -05:00
    #[arg(long, allow_hyphen_values = true)]
    pub utc_offset: Option<String>,
    /// name=start:end,... (first phase is the baseline)
    #[arg(long)]
    pub phases: Option<String>,
    /// Neighbour window for indirect terms
    #[arg(long)]
    pub adjacency: Option<usize>,
    /// Topics per highway and phase
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Stopword file, one token per line
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Rainfall CSV with date,inches
    #[arg(long)]
    pub rainfall: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Abort on the first malformed input line
    #[arg(long)]
    pub strict: bool,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            input: self.input.clone(),
            lexicon: self.lexicon.clone(),
            builtin_harvey: self.builtin_harvey.then_some(true),
            bbox: self.bbox.clone(),
            window: self.window.clone(),
            utc_offset: self.utc_offset.clone(),
            phases: self.phases.clone(),
            adjacency: self.adjacency,
            top_k: self.top_k,
            stopwords: self.stopwords.clone(),
            rainfall: self.rainfall.clone(),
            out: self.out.clone(),
            strict: self.strict.then_some(true),
        }
    }

    pub fn resolve(&self) -> crate::Result<RunConfig> {
        let base = match &self.config {
            Some(p) => Overrides::from_file(p)?,
            None => Overrides::default(),
        };
        let mut merged = base.merge(self.overrides());
        // A file lexicon from the config file yields to --builtin-harvey on the command line.
        if self.builtin_harvey {
            merged.lexicon = None;
        }
        merged.resolve()
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Assess(args) => {
            let cfg = args.resolve()?;
            let outcome = run_assess(&cfg)?;
            let c = &outcome.report.counts;
            eprintln!(
                "read {} records ({} skipped), retained {}, mapped {}; reports in {}",
                outcome.read.parsed,
                outcome.read.skipped,
                c.retained,
                c.mapped,
                cfg.out.display()
            );
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
        }
        Command::Map(args) => {
            let cfg = args.resolve()?;
            let (results, read) = run_map(&cfg)?;
            eprintln!(
                "read {} records ({} skipped), {} mapped; evidence in {}",
                read.parsed,
                read.skipped,
                results.len(),
                cfg.out.join("evidence.csv").display()
            );
        }
    }
    Ok(())
}

/// Entry point used by the binary.
pub fn main_with(cli: Cli) -> ExitCode {
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
