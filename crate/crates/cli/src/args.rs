use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "stmkg", version, about = "Coreference scoring and knowledge-graph population for annotated abstracts")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Data format; its meaning depends on the subcommand (see --help of each).
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Worker threads for per-document work (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for `generate`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// File of `key = value` lines supplying defaults for long flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// BRAT relation label that marks coreference.
    #[arg(long, global = true, default_value = "Coreference")]
    pub relation_label: String,
    /// Plural/singular exception table replacing the built-in one.
    #[arg(long, global = true)]
    pub lemma_exceptions: Option<PathBuf>,
    /// Domain for BRAT files that are not inside a domain directory.
    #[arg(long, global = true, default_value = "")]
    pub default_domain: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a corpus between formats; --format names the output format.
    Convert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Input format (default: guessed from the path).
        #[arg(long)]
        from: Option<String>,
    },
    /// Mention and cluster counts per concept type and per domain.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = StatsBy::Both)]
        by: StatsBy,
    },
    /// Score a response corpus against a key corpus; --format names the
    /// input format (conll or jsonl).
    Score {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        response: PathBuf,
        /// Print the JSON report instead of the table.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Replace clusters by string-match coreference; --format names the
    /// output format (default: same as input).
    Baseline {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Input format (default: guessed from the path).
        #[arg(long)]
        from: Option<String>,
    },
    /// Populate a knowledge graph; --format is jsonl or ntriples. Prints the
    /// statistics table.
    Populate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Cross)]
        strategy: StrategyArg,
        /// Treat every mention as its own cluster.
        #[arg(long)]
        no_coref: bool,
        /// Graph export file.
        #[arg(long)]
        out: PathBuf,
        /// Input format (default: guessed from the path).
        #[arg(long)]
        from: Option<String>,
    },
    /// Compile the gold concept partition from entity links.
    CompileGold {
        #[arg(long = "in")]
        input: PathBuf,
        /// TSV of `doc_id start end type entity` rows (optional when the
        /// corpus already carries links).
        #[arg(long)]
        links: Option<PathBuf>,
        /// Gold concept file (JSONL).
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a population strategy against a gold concept file.
    EvalKg {
        /// Gold concept file written by compile-gold.
        #[arg(long)]
        gold: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Cross)]
        strategy: StrategyArg,
        /// Treat every mention as its own cluster.
        #[arg(long)]
        no_coref: bool,
        /// Print the JSON report instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Write a synthetic corpus generated from --seed.
    Generate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 20)]
        documents: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsBy {
    Type,
    Domain,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Cross,
    In,
}
