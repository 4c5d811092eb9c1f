use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use stmkg_core::corefdoc::Corpus;
use stmkg_core::standoff_io::{brat, read_coref_columns, read_jsonl, write_coref_columns, write_jsonl, BratOptions};

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Brat,
    Conll,
    Jsonl,
}

impl CorpusFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "brat" => Ok(CorpusFormat::Brat),
            "conll" => Ok(CorpusFormat::Conll),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(UsageError(format!("unknown corpus format `{other}` (expected brat, conll or jsonl)")).into()),
        }
    }

    /// Directories hold BRAT pairs; `.conll` files are column files;
    /// anything else is JSONL.
    pub fn guess(path: &Path) -> Self {
        if path.is_dir() {
            CorpusFormat::Brat
        } else if path.extension().is_some_and(|e| e == "conll" || e == "v4_gold_conll") {
            CorpusFormat::Conll
        } else {
            CorpusFormat::Jsonl
        }
    }

    pub fn resolve(explicit: Option<&str>, path: &Path) -> Result<Self> {
        explicit.map_or_else(|| Ok(Self::guess(path)), Self::parse)
    }
}

/// Token-table sidecar written next to a column file: `x.conll` → `x.tokens.jsonl`.
pub fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("tokens.jsonl")
}

pub struct IoOptions {
    pub brat: BratOptions,
    pub default_domain: String,
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_corpus(path: &Path, format: CorpusFormat, opts: &IoOptions) -> Result<Corpus> {
    Ok(match format {
        CorpusFormat::Brat => brat::read_dir(path, &opts.default_domain, &opts.brat)
            .with_context(|| format!("reading {}", path.display()))?,
        CorpusFormat::Jsonl => read_jsonl(&read_text(path)?).with_context(|| format!("in {}", path.display()))?,
        CorpusFormat::Conll => {
            let table_path = sidecar(path);
            let table = if table_path.exists() { Some(read_text(&table_path)?) } else { None };
            read_coref_columns(&read_text(path)?, table.as_deref()).with_context(|| format!("in {}", path.display()))?
        }
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_corpus(corpus: &Corpus, path: &Path, format: CorpusFormat, opts: &IoOptions) -> Result<()> {
    match format {
        CorpusFormat::Brat => {
            brat::write_dir(corpus, path, &opts.brat).with_context(|| format!("writing {}", path.display()))
        }
        CorpusFormat::Jsonl => write_text(path, &write_jsonl(corpus)),
        CorpusFormat::Conll => {
            let files = write_coref_columns(corpus)?;
            write_text(path, &files.columns)?;
            write_text(&sidecar(path), &files.token_table)
        }
    }
}
