mod args;
mod config;
mod io;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use stmkg_core::corefdoc::{all_clusters, corpus_stats, Corpus, GroupBy, MentionKey};
use stmkg_core::error::Error as CoreError;
use stmkg_core::goldkg::{apply_links, compile_gold, evaluate_population, gold_stats, GoldKg};
use stmkg_core::kgpop::{export, kg_stats, populate, CollapseStrategy, Collapsing, ExportFormat};
use stmkg_core::metrics::{score, Partition, ScoreReport};
use stmkg_core::normalize::{Normalizer, Singularizer};
use stmkg_core::standoff_io::BratOptions;
use stmkg_core::{baseline, synth};

use args::{Cli, Command, Global, StatsBy, StrategyArg};
use io::{CorpusFormat, IoOptions};

/// Bad flags or flag values; exits with status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

struct Ctx {
    io: IoOptions,
    normalizer: Normalizer,
    format: Option<String>,
    seed: u64,
}

impl Ctx {
    fn new(g: &Global) -> Result<Self> {
        let normalizer = match &g.lemma_exceptions {
            Some(p) => Normalizer::new(Singularizer::from_tsv(&io::read_text(p)?)?),
            None => Normalizer::default(),
        };
        Ok(Ctx {
            io: IoOptions {
                brat: BratOptions {
                    relation_label: g.relation_label.clone(),
                },
                default_domain: g.default_domain.clone(),
            },
            normalizer,
            format: g.format.clone(),
            seed: g.seed.unwrap_or(0),
        })
    }

    fn read(&self, path: &Path, explicit: Option<&str>) -> Result<Corpus> {
        io::read_corpus(path, CorpusFormat::resolve(explicit, path)?, &self.io)
    }
}

fn strategy(s: StrategyArg, no_coref: bool) -> CollapseStrategy {
    let collapsing = match s {
        StrategyArg::Cross => Collapsing::CrossDomain,
        StrategyArg::In => Collapsing::InDomain,
    };
    CollapseStrategy::new(collapsing, !no_coref)
}

/// All clusters of the corpus, singletons included, as one partition.
fn partition(corpus: &Corpus) -> Result<Partition<MentionKey>> {
    let mut parts = Vec::new();
    for doc in &corpus.documents {
        for c in all_clusters(doc)? {
            parts.push(c.mentions(doc).map(|m| m.key()).collect::<Vec<_>>());
        }
    }
    Ok(Partition::new(parts)?)
}

fn print_report(report: &ScoreReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report serializes"));
    } else {
        print!("{}", report.to_table());
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.global.jobs {
        if n == 0 {
            return Err(UsageError("--jobs must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("starting worker pool")?;
    }
    let ctx = Ctx::new(&cli.global)?;
    let fmt = ctx.format.as_deref();

    match cli.command {
        Command::Convert { input, out, from } => {
            let to = CorpusFormat::parse(fmt.ok_or_else(|| UsageError("convert needs --format".into()))?)?;
            let corpus = ctx.read(&input, from.as_deref())?;
            io::write_corpus(&corpus, &out, to, &ctx.io)?;
        }
        Command::Stats { input, by } => {
            let corpus = ctx.read(&input, fmt)?;
            if matches!(by, StatsBy::Type | StatsBy::Both) {
                print!("{}", corpus_stats(&corpus, GroupBy::ConceptType)?.to_tsv());
            }
            if by == StatsBy::Both {
                println!();
            }
            if matches!(by, StatsBy::Domain | StatsBy::Both) {
                print!("{}", corpus_stats(&corpus, GroupBy::Domain)?.to_tsv());
            }
        }
        Command::Score { key, response, json, report } => {
            if let Some(f) = fmt {
                if !matches!(CorpusFormat::parse(f)?, CorpusFormat::Conll | CorpusFormat::Jsonl) {
                    return Err(UsageError("score reads conll or jsonl".into()).into());
                }
            }
            let k = partition(&ctx.read(&key, fmt)?)?;
            let r = partition(&ctx.read(&response, fmt)?)?;
            let result = score(&k, &r);
            print_report(&result, json);
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&result.to_json()).expect("report serializes");
                io::write_text(&path, &(text + "\n"))?;
            }
        }
        Command::Baseline { input, out, from } => {
            let in_format = CorpusFormat::resolve(from.as_deref(), &input)?;
            let out_format = match fmt {
                Some(f) => CorpusFormat::parse(f)?,
                None => in_format,
            };
            let corpus = io::read_corpus(&input, in_format, &ctx.io)?;
            let predicted = baseline::apply_corpus(&corpus, &ctx.normalizer);
            io::write_corpus(&predicted, &out, out_format, &ctx.io)?;
        }
        Command::Populate { input, strategy: s, no_coref, out, from } => {
            let export_format: ExportFormat = fmt
                .unwrap_or("jsonl")
                .parse()
                .map_err(UsageError)?;
            let corpus = ctx.read(&input, from.as_deref())?;
            let kg = populate(&corpus, strategy(s, no_coref), &ctx.normalizer)?;
            io::write_text(&out, &export(&kg, export_format))?;
            print!("{}", kg_stats(&kg, &corpus).to_tsv());
        }
        Command::CompileGold { input, links, out } => {
            let mut corpus = ctx.read(&input, fmt)?;
            if let Some(path) = links {
                apply_links(&mut corpus, &io::read_text(&path)?).with_context(|| format!("in {}", path.display()))?;
            }
            let compiled = compile_gold(&corpus)?;
            io::write_text(&out, &compiled.gold.to_jsonl())?;
            let stats = gold_stats(&compiled.gold, &corpus);
            let mut summary = String::new();
            let _ = writeln!(summary, "kept_clusters\t{}", compiled.kept_clusters);
            let _ = writeln!(summary, "singleton_clusters\t{}", compiled.singleton_clusters);
            let _ = writeln!(summary, "concepts\t{}", compiled.gold.concepts.len());
            let _ = writeln!(summary, "mix_concepts\t{}", stats.mix.0.iter().sum::<usize>() + stats.mix.1);
            print!("{summary}\n{}", stats.to_tsv());
        }
        Command::EvalKg { gold, input, strategy: s, no_coref, json } => {
            let gold = GoldKg::from_jsonl(&io::read_text(&gold)?).with_context(|| format!("in {}", gold.display()))?;
            let corpus = ctx.read(&input, fmt)?;
            let eval = evaluate_population(&gold, &corpus, strategy(s, no_coref), &ctx.normalizer)?;
            if json {
                let mut v = eval.report.to_json();
                v["concepts"] = eval.concepts.into();
                v["concepts_with_untyped"] = eval.concepts_with_untyped.into();
                println!("{}", serde_json::to_string_pretty(&v).expect("report serializes"));
            } else {
                print_report(&eval.report, false);
                println!("concepts\t{}", eval.concepts);
                println!("concepts_with_untyped\t{}", eval.concepts_with_untyped);
            }
        }
        Command::Generate { out, documents } => {
            let format = CorpusFormat::parse(fmt.unwrap_or("jsonl"))?;
            let cfg = synth::SynthConfig {
                documents,
                ..Default::default()
            };
            io::write_corpus(&synth::generate(ctx.seed, &cfg), &out, format, &ctx.io)?;
        }
    }
    Ok(())
}

fn report_error(err: &anyhow::Error) -> ExitCode {
    if err.chain().any(|e| e.is::<UsageError>()) {
        eprintln!("error: {err}");
        return ExitCode::from(1);
    }
    let violations = err.chain().find_map(|e| match e.downcast_ref::<CoreError>() {
        Some(CoreError::Invalid(v)) => Some(v),
        _ => None,
    });
    match violations {
        Some(v) => {
            eprintln!("error: {} validation error(s)", v.len());
            for x in v {
                eprintln!("  {x}");
            }
        }
        None => eprintln!("error: {err:#}"),
    }
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let mut argv: Vec<OsString> = std::env::args_os().collect();
    if let Some(path) = config::config_path(&argv) {
        argv = match config::merge(argv, Path::new(&path)) {
            Ok(a) => a,
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
        };
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(&e),
    }
}
