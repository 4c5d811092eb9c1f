use std::fmt;

use crate::corefdoc::Violation;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{format} line {line}: {message}")]
    Parse {
        format: Format,
        line: usize,
        message: String,
    },

    #[error("{format}: {message}")]
    Write { format: Format, message: String },

    #[error("invalid document: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("mention universe mismatch: {0}")]
    UniverseMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which file format an I/O error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Brat,
    Columns,
    TokenTable,
    Jsonl,
    GoldKg,
    KgJsonl,
    Links,
    LemmaTable,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Brat => "brat",
            Format::Columns => "conll",
            Format::TokenTable => "token table",
            Format::Jsonl => "jsonl",
            Format::GoldKg => "gold kg",
            Format::KgJsonl => "kg jsonl",
            Format::Links => "links",
            Format::LemmaTable => "lemma exceptions",
        })
    }
}

impl Error {
    pub(crate) fn parse(format: Format, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            format,
            line,
            message: message.into(),
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
