//! Command-line interface.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use textfray_core::embed::{DEFAULT_THRESHOLD, EPSILON_GRID};

use crate::attackrun::{run_attack, AttackRunConfig};
use crate::campaign::{cmd_classify, cmd_generate, cmd_measure, cmd_run, load_config, CampaignConfig};
use crate::error::Result;
use crate::stubs::{serve_forever, StubKind};

#[derive(Debug, Parser)]
#[command(name = "textfray", version, about = "Generate perturbed news-article variants, classify them, and measure detector behavior")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the attack spectra for a campaign config.
    Generate(CampaignArgs),
    /// Classify previously generated spectra into a curve CSV.
    Classify(CampaignArgs),
    /// Compute metrics from the curve CSV.
    Measure(CampaignArgs),
    /// Generate, classify, and measure in one pass, writing the manifest.
    Run(CampaignArgs),
    /// Rewrite articles via the embedding-table token replacement attack.
    Attack {
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        gradients: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        /// Sidecar with special ids; defaults to `<vocab>.specials.json`.
        #[arg(long)]
        specials: Option<PathBuf>,
        /// Input articles (JSONL).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output_dir: PathBuf,
        /// Gradient step size; repeat for a grid. Defaults to the full grid.
        #[arg(long = "epsilon")]
        epsilons: Vec<f32>,
        /// Cosine similarity floor for accepting a replacement pair.
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Serve a bundled stub service (echo generator or lexical classifier).
    Stub {
        #[arg(value_enum)]
        kind: StubKindArg,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
        /// Answer the first N requests with status 500.
        #[arg(long, default_value_t = 0)]
        fail_first: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StubKindArg {
    Generator,
    Classifier,
}

#[derive(Debug, clap::Args)]
struct CampaignArgs {
    /// Campaign config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the campaign seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Override the decision threshold used by the metrics.
    #[arg(long)]
    threshold: Option<f64>,
}

impl CampaignArgs {
    fn load(&self) -> Result<CampaignConfig> {
        let mut config = load_config(&self.config)?;
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(dir) = &self.output_dir {
            config.output_dir = dir.clone();
        }
        if let Some(threshold) = self.threshold {
            config.decision_threshold = threshold;
        }
        crate::campaign::validate_config(&config)?;
        Ok(config)
    }
}

/// Runs the CLI; the returned code is the process exit status. Campaign
/// commands exit non-zero unless every spectrum completed.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate(args) => {
            let outcome = cmd_generate(&args.load()?)?;
            report(&outcome);
            Ok(if outcome.all_completed() { 0 } else { 1 })
        }
        Command::Classify(args) => {
            let outcome = cmd_classify(&args.load()?)?;
            report(&outcome);
            Ok(if outcome.all_completed() { 0 } else { 1 })
        }
        Command::Measure(args) => {
            cmd_measure(&args.load()?)?;
            Ok(0)
        }
        Command::Run(args) => {
            let config = args.load()?;
            let outcome = cmd_run(&config)?;
            report(&outcome);
            println!("artifacts in {}", config.output_dir.display());
            Ok(if outcome.all_completed() { 0 } else { 1 })
        }
        Command::Attack {
            embeddings,
            gradients,
            vocab,
            specials,
            input,
            output_dir,
            epsilons,
            threshold,
        } => {
            let epsilons = if epsilons.is_empty() { EPSILON_GRID.to_vec() } else { epsilons };
            run_attack(&AttackRunConfig {
                embeddings,
                gradients,
                vocab,
                specials,
                input,
                output_dir,
                epsilons,
                threshold,
            })?;
            Ok(0)
        }
        Command::Stub { kind, addr, fail_first } => {
            let kind = match kind {
                StubKindArg::Generator => StubKind::Generator,
                StubKindArg::Classifier => StubKind::Classifier,
            };
            serve_forever(kind, &addr, fail_first)?;
            Ok(0)
        }
    }
}

fn report(outcome: &crate::campaign::CampaignOutcome) {
    println!("{} spectra completed, {} failed", outcome.completed.len(), outcome.failed.len());
    for failure in &outcome.failed {
        eprintln!("  {}: {}", failure.id, failure.error);
    }
}
