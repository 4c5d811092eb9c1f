use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Concept, Edge, KnowledgeGraph};
use crate::error::{Error, Format, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    NTriples,
    Jsonl,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ntriples" | "nt" => Ok(ExportFormat::NTriples),
            "jsonl" => Ok(ExportFormat::Jsonl),
            other => Err(format!("unknown export format `{other}`")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Record {
    Paper { doc_id: String },
    Concept(Concept),
    Edge(Edge),
}

pub fn export(kg: &KnowledgeGraph, format: ExportFormat) -> String {
    match format {
        ExportFormat::NTriples => ntriples(kg),
        ExportFormat::Jsonl => jsonl(kg),
    }
}

/// Percent-encodes what N-Triples forbids inside an IRI, plus `%`.
fn iri(prefix: &str, local: &str) -> String {
    let mut out = format!("<{prefix}:");
    for c in local.chars() {
        if (c as u32) <= 0x20 || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' | '%' | '\u{7f}') {
            let _ = write!(out, "%{:02X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out.push('>');
    out
}

fn literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// One `mentions` triple per edge, so a paper that mentions a concept
/// twice yields two identical lines.
fn ntriples(kg: &KnowledgeGraph) -> String {
    let mut lines: Vec<String> = Vec::with_capacity(kg.edges.len() + 2 * kg.concepts.len());
    for e in &kg.edges {
        lines.push(format!(
            "{} <rel:mentions> {} .",
            iri("paper", &e.doc_id),
            iri("concept", &e.concept_id)
        ));
    }
    for c in &kg.concepts {
        let subject = iri("concept", &c.concept_id);
        lines.push(format!("{subject} <rel:label> {} .", literal(c.label.as_str())));
        lines.push(format!("{subject} <rel:type> {} .", literal(c.concept_type.as_str())));
    }
    lines.sort();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

fn jsonl(kg: &KnowledgeGraph) -> String {
    let mut out = String::new();
    let mut emit = |r: &Record| {
        out.push_str(&serde_json::to_string(r).expect("graph records serialize"));
        out.push('\n');
    };
    for p in &kg.papers {
        emit(&Record::Paper { doc_id: p.clone() });
    }
    for c in &kg.concepts {
        emit(&Record::Concept(c.clone()));
    }
    for e in &kg.edges {
        emit(&Record::Edge(e.clone()));
    }
    out
}

pub fn read_kg_jsonl(input: &str) -> Result<KnowledgeGraph> {
    let mut kg = KnowledgeGraph::default();
    for (n, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: Record =
            serde_json::from_str(line).map_err(|e| Error::parse(Format::KgJsonl, n + 1, e.to_string()))?;
        match record {
            Record::Paper { doc_id } => kg.papers.push(doc_id),
            Record::Concept(c) => kg.concepts.push(c),
            Record::Edge(e) => kg.edges.push(e),
        }
    }
    kg.papers.sort();
    kg.concepts.sort_by(|a, b| a.concept_id.cmp(&b.concept_id));
    kg.edges.sort();
    Ok(kg)
}
