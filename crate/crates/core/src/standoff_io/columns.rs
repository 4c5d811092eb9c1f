//! CoNLL-style coreference column files plus a token-table sidecar.
//!
//! A document block looks like (columns are tab-separated)
//!
//! ```text
//! #begin document (doc1); part 000
//! doc1 0 0 Support (0
//! doc1 0 1 vectors 0)
//! doc1 0 2 help -
//! #end document
//! ```
//!
//! Only the last column (chain brackets) and the one before it (token) are
//! interpreted. The sidecar maps token indices back to character offsets
//! and carries text, domain and mention types, one JSON object per document.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::jsonl::MentionRecord;
use crate::corefdoc::{
    all_clusters, validate, ConceptType, Corpus, Document, Mention, MentionSource,
};
use crate::error::{Error, Format, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenRecord {
    pub doc_id: String,
    pub domain: String,
    pub text: String,
    /// Character span of each token.
    pub tokens: Vec<(usize, usize)>,
    pub mentions: Vec<MentionRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub entity_links: BTreeMap<usize, String>,
}

/// Output of [`write_coref_columns`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnFiles {
    pub columns: String,
    pub token_table: String,
}

fn write_err(message: String) -> Error {
    Error::Write {
        format: Format::Columns,
        message,
    }
}

/// Splits text into whitespace-free tokens, additionally cutting at every
/// mention boundary. Fails if a mention starts or ends on whitespace.
fn tokenize(doc: &Document) -> Result<Vec<(usize, usize)>> {
    let chars: Vec<char> = doc.text.chars().collect();
    let mut cuts = vec![false; chars.len() + 1];
    for m in &doc.mentions {
        let bad = |i: usize| chars.get(i).is_none_or(|c| c.is_whitespace());
        if bad(m.start) || bad(m.end - 1) {
            return Err(write_err(format!(
                "mention [{},{}) in {} has leading or trailing whitespace",
                m.start, m.end, doc.doc_id
            )));
        }
        cuts[m.start] = true;
        cuts[m.end] = true;
    }
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in chars.iter().enumerate() {
        if let Some(s) = start {
            if c.is_whitespace() || cuts[i] {
                tokens.push((s, i));
                start = None;
            }
        }
        if start.is_none() && !c.is_whitespace() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((s, chars.len()));
    }
    Ok(tokens)
}

pub fn write_coref_columns(corpus: &Corpus) -> Result<ColumnFiles> {
    let mut columns = String::new();
    let mut token_table = String::new();
    for doc in &corpus.documents {
        if doc.doc_id.is_empty() || doc.doc_id.contains(|c: char| c.is_whitespace() || c == ')') {
            return Err(write_err(format!("document id {:?} cannot be written", doc.doc_id)));
        }
        let clusters = all_clusters(doc)?;
        let tokens = tokenize(doc)?;
        let by_start: HashMap<usize, usize> =
            tokens.iter().enumerate().map(|(i, t)| (t.0, i)).collect();
        let by_end: HashMap<usize, usize> =
            tokens.iter().enumerate().map(|(i, t)| (t.1, i)).collect();

        // (first token, last token, chain) per mention
        let mut spans: Vec<(usize, usize, usize)> = Vec::new();
        for (chain, c) in clusters.iter().enumerate() {
            for m in c.mentions(doc) {
                spans.push((by_start[&m.start], by_end[&m.end], chain));
            }
        }
        // A `k)` closes the latest open `k`, so two mentions of one chain
        // must not cross or they read back as different spans.
        let mut by_chain = spans.clone();
        by_chain.sort_by_key(|&(s, e, k)| (k, s, e));
        for (i, a) in by_chain.iter().enumerate() {
            for b in by_chain[i + 1..].iter().take_while(|b| b.2 == a.2) {
                if a.0 < b.0 && b.0 <= a.1 && a.1 < b.1 {
                    return Err(write_err(format!(
                        "{}: mentions at tokens {}-{} and {}-{} of one chain cross",
                        doc.doc_id, a.0, a.1, b.0, b.1
                    )));
                }
            }
        }
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); tokens.len()];
        let mut opens: Vec<(usize, usize, usize)> = spans.iter().copied().filter(|s| s.0 != s.1).collect();
        opens.sort_by_key(|&(s, e, k)| (s, std::cmp::Reverse(e), k));
        for &(s, _, k) in &opens {
            cells[s].push(format!("({k}"));
        }
        let mut singles: Vec<_> = spans.iter().copied().filter(|s| s.0 == s.1).collect();
        singles.sort();
        for &(s, _, k) in &singles {
            cells[s].push(format!("({k})"));
        }
        let mut closes = opens;
        closes.sort_by_key(|&(s, e, k)| (e, std::cmp::Reverse(s), k));
        for &(_, e, k) in &closes {
            cells[e].push(format!("{k})"));
        }

        columns.push_str(&format!("#begin document ({}); part 000\n", doc.doc_id));
        let chars: Vec<char> = doc.text.chars().collect();
        for (i, &(s, e)) in tokens.iter().enumerate() {
            let word: String = chars[s..e].iter().collect();
            let cell = if cells[i].is_empty() {
                "-".to_string()
            } else {
                cells[i].join("|")
            };
            columns.push_str(&format!("{}\t0\t{}\t{}\t{}\n", doc.doc_id, i, word, cell));
        }
        columns.push_str("#end document\n");

        let record = TokenRecord {
            doc_id: doc.doc_id.clone(),
            domain: doc.domain.clone(),
            text: doc.text.clone(),
            tokens,
            mentions: doc.mentions.iter().map(MentionRecord::from).collect(),
            entity_links: doc.entity_links.clone(),
        };
        token_table.push_str(&serde_json::to_string(&record).map_err(|e| write_err(e.to_string()))?);
        token_table.push('\n');
    }
    Ok(ColumnFiles {
        columns,
        token_table,
    })
}

/// A mention read from brackets, in token indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TokenMention {
    pub first: usize,
    pub last: usize,
    pub chain: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnDocument {
    pub doc_id: String,
    pub tokens: Vec<String>,
    pub mentions: Vec<TokenMention>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::parse(Format::Columns, line, message)
}

/// Parses the raw bracket structure of a column file.
pub fn parse_columns(input: &str) -> Result<Vec<ColumnDocument>> {
    let mut docs = Vec::new();
    let mut current: Option<(ColumnDocument, HashMap<u64, Vec<usize>>)> = None;
    let mut last_line = 0;
    for (n, raw) in input.lines().enumerate() {
        let line_no = n + 1;
        last_line = line_no;
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("#begin document") {
            if current.is_some() {
                return Err(parse_err(line_no, "nested #begin document"));
            }
            let rest = rest.trim();
            let doc_id = match rest.strip_prefix('(') {
                Some(r) => r.split(')').next().unwrap_or_default(),
                None => rest.split_whitespace().next().unwrap_or_default(),
            };
            if doc_id.is_empty() {
                return Err(parse_err(line_no, "missing document id"));
            }
            current = Some((
                ColumnDocument {
                    doc_id: doc_id.to_string(),
                    tokens: Vec::new(),
                    mentions: Vec::new(),
                },
                HashMap::new(),
            ));
            continue;
        }
        if line.starts_with("#end document") {
            let Some((doc, open)) = current.take() else {
                return Err(parse_err(line_no, "#end document without #begin document"));
            };
            if let Some((chain, _)) = open.iter().find(|(_, v)| !v.is_empty()) {
                return Err(parse_err(line_no, format!("unbalanced brackets: chain {chain} never closed")));
            }
            docs.push(doc);
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((doc, open)) = current.as_mut() else {
            return Err(parse_err(line_no, "token line outside a document"));
        };
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() < 2 {
            return Err(parse_err(line_no, "token line needs at least 2 columns"));
        }
        let index = doc.tokens.len();
        doc.tokens.push(cols[cols.len() - 2].to_string());
        let cell = cols[cols.len() - 1];
        if cell == "-" {
            continue;
        }
        for part in cell.split('|') {
            let chain = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| parse_err(line_no, format!("malformed bracket `{part}`")))
            };
            if let Some(inner) = part.strip_prefix('(') {
                if let Some(k) = inner.strip_suffix(')') {
                    doc.mentions.push(TokenMention {
                        first: index,
                        last: index,
                        chain: chain(k)?,
                    });
                } else {
                    open.entry(chain(inner)?).or_default().push(index);
                }
            } else if let Some(k) = part.strip_suffix(')') {
                let k = chain(k)?;
                let first = open.get_mut(&k).and_then(Vec::pop).ok_or_else(|| {
                    parse_err(line_no, format!("chain {k} closed before it was opened"))
                })?;
                doc.mentions.push(TokenMention {
                    first,
                    last: index,
                    chain: k,
                });
            } else {
                return Err(parse_err(line_no, format!("malformed bracket `{part}`")));
            }
        }
    }
    if current.is_some() {
        return Err(parse_err(last_line, "missing #end document"));
    }
    Ok(docs)
}

pub fn parse_token_table(input: &str) -> Result<HashMap<String, TokenRecord>> {
    let mut out = HashMap::new();
    for (n, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: TokenRecord = serde_json::from_str(line)
            .map_err(|e| Error::parse(Format::TokenTable, n + 1, e.to_string()))?;
        out.insert(record.doc_id.clone(), record);
    }
    Ok(out)
}

/// Reads a column file into a corpus. With a token table, offsets, text,
/// domain and mention types are restored; without one the text is the
/// tokens joined by single spaces and every mention is untyped.
pub fn read_coref_columns(columns: &str, token_table: Option<&str>) -> Result<Corpus> {
    let table = match token_table {
        Some(t) => parse_token_table(t)?,
        None => HashMap::new(),
    };
    let mut documents = Vec::new();
    for cd in parse_columns(columns)? {
        documents.push(to_document(cd, &table)?);
    }
    Ok(Corpus::new(documents))
}

fn to_document(cd: ColumnDocument, table: &HashMap<String, TokenRecord>) -> Result<Document> {
    let table_err = |message: String| Error::parse(Format::TokenTable, 0, message);
    let (text, domain, offsets, typed, links) = match table.get(&cd.doc_id) {
        Some(rec) => {
            if rec.tokens.len() != cd.tokens.len() {
                return Err(table_err(format!(
                    "{}: token table has {} tokens, column file has {}",
                    cd.doc_id,
                    rec.tokens.len(),
                    cd.tokens.len()
                )));
            }
            (
                rec.text.clone(),
                rec.domain.clone(),
                rec.tokens.clone(),
                Some(&rec.mentions),
                rec.entity_links.clone(),
            )
        }
        None => {
            let mut text = String::new();
            let mut offsets = Vec::with_capacity(cd.tokens.len());
            let mut pos = 0;
            for (i, t) in cd.tokens.iter().enumerate() {
                if i > 0 {
                    text.push(' ');
                    pos += 1;
                }
                let len = t.chars().count();
                offsets.push((pos, pos + len));
                text.push_str(t);
                pos += len;
            }
            (text, String::new(), offsets, None, BTreeMap::new())
        }
    };

    let mut doc = Document::new(cd.doc_id.clone(), domain, text);
    // Mentions keep the sidecar's order; unlisted ones follow in span order.
    let mut placed: Vec<(usize, usize, usize, ConceptType, MentionSource, u64)> = Vec::new();
    let mut used = vec![false; typed.map_or(0, |t| t.len())];
    let mut token_mentions = cd.mentions.clone();
    token_mentions.sort();
    for tm in &token_mentions {
        let (start, end) = (offsets[tm.first].0, offsets[tm.last].1);
        let hit = typed.and_then(|records| {
            records
                .iter()
                .enumerate()
                .position(|(i, r)| !used[i] && r.start == start && r.end == end)
        });
        let (order, concept_type, source) = match hit {
            Some(i) => {
                used[i] = true;
                let r = &typed.unwrap()[i];
                (i, r.concept_type, r.source)
            }
            None => (usize::MAX, ConceptType::None, MentionSource::CorefOnly),
        };
        placed.push((order, start, end, concept_type, source, tm.chain));
    }
    placed.sort_by_key(|p| (p.0, p.1, p.2, p.3));

    let mut chains: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, &(_, start, end, concept_type, source, chain)) in placed.iter().enumerate() {
        let surface = crate::corefdoc::char_slice(&doc.text, start, end)
            .ok_or_else(|| table_err(format!("{}: token offsets out of range", cd.doc_id)))?
            .to_string();
        doc.mentions.push(Mention {
            doc_id: doc.doc_id.clone(),
            start,
            end,
            concept_type,
            surface,
            source,
        });
        chains.entry(chain).or_default().push(i);
    }
    for members in chains.into_values().filter(|m| m.len() > 1) {
        doc.add_cluster(members);
    }
    doc.sort_clusters();
    doc.entity_links = links;

    if let Some(v) = validate(&doc).into_iter().next() {
        return Err(Error::parse(Format::Columns, 0, v.to_string()));
    }
    Ok(doc)
}
