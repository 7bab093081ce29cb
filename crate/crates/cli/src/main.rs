//! `seqtag`: train, apply and evaluate part-of-speech taggers.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "seqtag", version, about = "Part-of-speech tagging toolkit (CRF, TnT, Brill)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train a tagger and write the model file.
    Train(Opts),
    /// Tag raw or pre-tokenized text with a trained model.
    Tag(Opts),
    /// Score predicted tags against a gold corpus.
    Eval(Opts),
    /// K-fold cross-validation with per-fold and pooled reports.
    Crossval(Opts),
    /// Cross-validate the CRF over a grid of c1/c2 values.
    Gridsearch(Opts),
    /// Token counts per tag.
    Stats(Opts),
    /// Rewrite corpus tags into another tagset.
    Remap(Opts),
    /// Split raw text into sentences and tokens.
    Tokenize(Opts),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Train(_) => "train",
            Command::Tag(_) => "tag",
            Command::Eval(_) => "eval",
            Command::Crossval(_) => "crossval",
            Command::Gridsearch(_) => "gridsearch",
            Command::Stats(_) => "stats",
            Command::Remap(_) => "remap",
            Command::Tokenize(_) => "tokenize",
        }
    }

    fn opts(&self) -> &Opts {
        match self {
            Command::Train(o)
            | Command::Tag(o)
            | Command::Eval(o)
            | Command::Crossval(o)
            | Command::Gridsearch(o)
            | Command::Stats(o)
            | Command::Remap(o)
            | Command::Tokenize(o) => o,
        }
    }
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Input corpus or text.
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Output file or directory.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Model file to load.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,
    /// Predicted corpus (eval).
    #[arg(long, value_name = "PATH")]
    pred: Option<PathBuf>,
    /// Training corpus used to split known from unknown words (eval).
    #[arg(long, value_name = "PATH")]
    train: Option<PathBuf>,
    /// Remap rule file.
    #[arg(long, value_name = "PATH")]
    rules: Option<PathBuf>,
    /// Tagset file; its stem names the tagset in reports.
    #[arg(long, value_name = "PATH")]
    tagset: Option<PathBuf>,
    #[arg(long, value_parser = ["vertical", "slash", "raw"])]
    format: Option<String>,
    /// Annotated output format of `tag` and `remap`.
    #[arg(long, value_parser = ["vertical", "slash"])]
    output_format: Option<String>,
    #[arg(long, value_parser = ["crf", "tnt", "brill"])]
    tagger: Option<String>,
    /// Number of folds.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// L1 coefficient.
    #[arg(long)]
    c1: Option<f64>,
    /// L2 coefficient.
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Comma-separated c1 values.
    #[arg(long, value_delimiter = ',')]
    grid_c1: Option<Vec<f64>>,
    /// Comma-separated c2 values.
    #[arg(long, value_delimiter = ',')]
    grid_c2: Option<Vec<f64>>,
    /// Tags kept in the confusion matrix.
    #[arg(long)]
    top_n: Option<usize>,
    /// Worker threads; defaults to the number of processors.
    #[arg(long)]
    jobs: Option<usize>,
    /// Flat key=value settings file; flags take precedence.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

fn list(values: &Option<Vec<f64>>) -> Option<String> {
    values
        .as_ref()
        .map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

impl Opts {
    fn flags(&self) -> Vec<(&'static str, Option<String>)> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        vec![
            ("in", path(&self.input)),
            ("out", path(&self.out)),
            ("model", path(&self.model)),
            ("pred", path(&self.pred)),
            ("train", path(&self.train)),
            ("rules", path(&self.rules)),
            ("tagset", path(&self.tagset)),
            ("format", self.format.clone()),
            ("output_format", self.output_format.clone()),
            ("tagger", self.tagger.clone()),
            ("k", self.k.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("c1", self.c1.map(|v| v.to_string())),
            ("c2", self.c2.map(|v| v.to_string())),
            ("max_iter", self.max_iter.map(|v| v.to_string())),
            ("grid_c1", list(&self.grid_c1)),
            ("grid_c2", list(&self.grid_c2)),
            ("top_n", self.top_n.map(|v| v.to_string())),
            ("jobs", self.jobs.map(|v| v.to_string())),
        ]
    }
}

fn configure_threads(config: &RunConfig) -> CliResult<()> {
    if let Some(jobs) = config.opt::<usize>("jobs")? {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let opts = cli.command.opts();
    let config = RunConfig::load(opts.flags(), opts.config.as_deref())?;
    configure_threads(&config)?;
    match cli.command {
        Command::Train(_) => commands::train(&config),
        Command::Tag(_) => commands::tag(&config),
        Command::Eval(_) => commands::eval(&config),
        Command::Crossval(_) => commands::crossval(&config),
        Command::Gridsearch(_) => commands::gridsearch(&config),
        Command::Stats(_) => commands::stats(&config),
        Command::Remap(_) => commands::remap(&config),
        Command::Tokenize(_) => commands::tokenize(&config),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SEQTAG_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command = cli.command.name();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("seqtag {command}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
