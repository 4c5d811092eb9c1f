//! One JSON document object per line:
//!
//! ```json
//! {"doc_id":"d1","domain":"CS","text":"...","mentions":[{"start":0,"end":3,"type":"Method","source":"concept_extractor"}],"clusters":[[0,2]],"entity_links":{"0":"Wikipedia:X"}}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corefdoc::{
    char_slice, validate, ConceptType, Corpus, CoreferenceCluster, Document, Mention, MentionSource,
};
use crate::error::{Error, Format, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MentionRecord {
    pub start: usize,
    pub end: usize,
    #[serde(rename = "type")]
    pub concept_type: ConceptType,
    pub source: MentionSource,
}

impl From<&Mention> for MentionRecord {
    fn from(m: &Mention) -> Self {
        MentionRecord {
            start: m.start,
            end: m.end,
            concept_type: m.concept_type,
            source: m.source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRecord {
    doc_id: String,
    domain: String,
    text: String,
    mentions: Vec<MentionRecord>,
    clusters: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entity_links: Option<BTreeMap<usize, String>>,
}

pub fn document_to_json(doc: &Document) -> String {
    let record = DocumentRecord {
        doc_id: doc.doc_id.clone(),
        domain: doc.domain.clone(),
        text: doc.text.clone(),
        mentions: doc.mentions.iter().map(MentionRecord::from).collect(),
        clusters: doc.clusters.iter().map(|c| c.members().to_vec()).collect(),
        entity_links: (!doc.entity_links.is_empty()).then(|| doc.entity_links.clone()),
    };
    serde_json::to_string(&record).expect("document records always serialize")
}

pub fn document_from_json(line: &str, line_no: usize) -> Result<Document> {
    let err = |m: String| Error::parse(Format::Jsonl, line_no, m);
    let record: DocumentRecord = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
    let mut doc = Document::new(record.doc_id, record.domain, record.text);
    for (i, m) in record.mentions.iter().enumerate() {
        let surface = char_slice(&doc.text, m.start, m.end)
            .filter(|_| m.start < m.end)
            .ok_or_else(|| err(format!("mention {i} has invalid offsets [{},{})", m.start, m.end)))?;
        doc.mentions.push(Mention {
            doc_id: doc.doc_id.clone(),
            start: m.start,
            end: m.end,
            concept_type: m.concept_type,
            surface: surface.to_string(),
            source: m.source,
        });
    }
    for (ci, members) in record.clusters.iter().enumerate() {
        if let Some(bad) = members.iter().find(|&&i| i >= doc.mentions.len()) {
            return Err(err(format!("cluster {ci} refers to mention index {bad} out of range")));
        }
        doc.clusters.push(CoreferenceCluster::new(members.iter().copied()));
    }
    if let Some(links) = record.entity_links {
        doc.entity_links = links;
    }
    let violations = validate(&doc);
    if !violations.is_empty() {
        let all: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(err(all.join("; ")));
    }
    Ok(doc)
}

pub fn read_jsonl(input: &str) -> Result<Corpus> {
    let mut documents = Vec::new();
    for (n, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        documents.push(document_from_json(line, n + 1)?);
    }
    Ok(Corpus::new(documents))
}

pub fn write_jsonl(corpus: &Corpus) -> String {
    let mut out = String::new();
    for doc in &corpus.documents {
        out.push_str(&document_to_json(doc));
        out.push('\n');
    }
    out
}
