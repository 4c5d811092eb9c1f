//! BRAT standoff `.txt`/`.ann` pairs.
//!
//! Accepted records:
//!
//! ```text
//! T<id>\t<Type> <start> <end>\t<surface>
//! R<id>\t<label> Arg1:T<i> Arg2:T<j>
//! *\t<label> T<i> T<j> ...
//! N<id>\tReference T<i> <entity>\t<text>
//! #<id>\t...                                (annotator notes, ignored)
//! ```
//!
//! Relation and equivalence records carrying the coreference label are
//! unioned into clusters. Normalization records attach entity links.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::unionfind::DisjointSets;
use crate::corefdoc::{
    char_slice, validate, ConceptType, Corpus, Document, Mention, MentionSource,
};
use crate::error::{Error, Format, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratOptions {
    /// Label of coreference relation and equivalence records.
    pub relation_label: String,
}

impl Default for BratOptions {
    fn default() -> Self {
        BratOptions {
            relation_label: "Coreference".to_string(),
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::parse(Format::Brat, line, message)
}

pub fn parse_brat(
    doc_id: &str,
    text: &str,
    ann: &str,
    domain: &str,
    options: &BratOptions,
) -> Result<Document> {
    let mut doc = Document::new(doc_id, domain, text);
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut links: Vec<(usize, usize, String)> = Vec::new();
    let mut pairs: Vec<(usize, Vec<usize>)> = Vec::new();
    let text_len = doc.char_len();

    for (n, raw) in ann.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let id = fields[0];
        match id.chars().next() {
            Some('T') => {
                let [_, spec, surface] = fields[..] else {
                    return Err(err(line_no, "entity record needs 3 tab-separated fields"));
                };
                let mut parts = spec.split(' ');
                let type_name = parts.next().unwrap_or_default();
                let offsets: Vec<&str> = parts.collect();
                if offsets.iter().any(|o| o.contains(';')) {
                    return Err(err(line_no, "discontinuous spans are not supported"));
                }
                let [start, end] = offsets[..] else {
                    return Err(err(line_no, format!("malformed offsets `{spec}`")));
                };
                let (start, end) = match (start.parse::<usize>(), end.parse::<usize>()) {
                    (Ok(s), Ok(e)) => (s, e),
                    _ => return Err(err(line_no, format!("malformed offsets `{spec}`"))),
                };
                let concept_type: ConceptType =
                    type_name.parse().map_err(|e| err(line_no, format!("{e}")))?;
                if concept_type == ConceptType::Mixed {
                    return Err(err(line_no, "mention cannot have type Mixed"));
                }
                if start >= end || end > text_len {
                    return Err(err(
                        line_no,
                        format!("offsets [{start},{end}) out of range for text of length {text_len}"),
                    ));
                }
                let actual = char_slice(text, start, end).unwrap_or_default();
                if actual != surface {
                    return Err(err(
                        line_no,
                        format!("surface mismatch: ann has {surface:?}, text has {actual:?}"),
                    ));
                }
                if ids.insert(id.to_string(), doc.mentions.len()).is_some() {
                    return Err(err(line_no, format!("duplicate id {id}")));
                }
                let source = if concept_type == ConceptType::None {
                    MentionSource::CorefOnly
                } else {
                    MentionSource::ConceptExtractor
                };
                doc.mentions.push(Mention {
                    doc_id: doc_id.to_string(),
                    start,
                    end,
                    concept_type,
                    surface: surface.to_string(),
                    source,
                });
            }
            Some('R') => {
                let spec = fields.get(1).ok_or_else(|| err(line_no, "relation record has no arguments"))?;
                let parts: Vec<&str> = spec.split(' ').collect();
                let [label, a1, a2] = parts[..] else {
                    return Err(err(line_no, format!("malformed relation `{spec}`")));
                };
                check_label(label, options, line_no)?;
                let (Some(a1), Some(a2)) = (a1.strip_prefix("Arg1:"), a2.strip_prefix("Arg2:")) else {
                    return Err(err(line_no, format!("malformed relation arguments `{spec}`")));
                };
                pairs.push((line_no, vec![lookup(&ids, a1, line_no)?, lookup(&ids, a2, line_no)?]));
            }
            Some('*') => {
                let spec = fields.get(1).ok_or_else(|| err(line_no, "equivalence record has no arguments"))?;
                let mut parts = spec.split(' ');
                check_label(parts.next().unwrap_or_default(), options, line_no)?;
                let members = parts
                    .map(|t| lookup(&ids, t, line_no))
                    .collect::<Result<Vec<_>>>()?;
                if members.is_empty() {
                    return Err(err(line_no, "equivalence record has no members"));
                }
                pairs.push((line_no, members));
            }
            Some('N') => {
                let spec = fields.get(1).ok_or_else(|| err(line_no, "normalization record has no arguments"))?;
                let mut parts = spec.splitn(3, ' ');
                let (Some("Reference"), Some(target), Some(entity)) =
                    (parts.next(), parts.next(), parts.next())
                else {
                    return Err(err(line_no, format!("malformed normalization `{spec}`")));
                };
                links.push((line_no, lookup(&ids, target, line_no)?, entity.to_string()));
            }
            Some('#') => {}
            _ => return Err(err(line_no, format!("unsupported record `{id}`"))),
        }
    }

    let mut sets = DisjointSets::new(doc.mentions.len());
    let mut touched = Vec::new();
    for (_, members) in &pairs {
        touched.push(members[0]);
        for w in members.windows(2) {
            sets.union(w[0], w[1]);
        }
    }
    for component in sets.components_of(&touched) {
        if component.len() > 1 {
            doc.add_cluster(component);
        }
    }

    for (line_no, mention, entity) in links {
        match doc.entity_links.get(&mention) {
            Some(prev) if *prev != entity => {
                return Err(err(line_no, format!("conflicting entity links {prev:?} and {entity:?}")));
            }
            _ => {
                doc.entity_links.insert(mention, entity);
            }
        }
    }

    if let Some(v) = validate(&doc).into_iter().next() {
        return Err(err(0, v.to_string()));
    }
    Ok(doc)
}

fn check_label(label: &str, options: &BratOptions, line_no: usize) -> Result<()> {
    if label == options.relation_label {
        Ok(())
    } else {
        Err(err(line_no, format!("unsupported relation label `{label}`")))
    }
}

fn lookup(ids: &HashMap<String, usize>, id: &str, line_no: usize) -> Result<usize> {
    ids.get(id)
        .copied()
        .ok_or_else(|| err(line_no, format!("reference to unknown entity `{id}`")))
}

/// Serializes a document as `(text, ann)`. Clusters become equivalence
/// records; implicit singletons produce no coreference record.
pub fn write_brat(doc: &Document, options: &BratOptions) -> Result<(String, String)> {
    let mut ann = String::new();
    for (i, m) in doc.mentions.iter().enumerate() {
        if m.surface.contains(['\n', '\r', '\t']) {
            return Err(Error::Write {
                format: Format::Brat,
                message: format!("mention {} of {} spans a line break or tab", i, doc.doc_id),
            });
        }
        ann.push_str(&format!(
            "T{}\t{} {} {}\t{}\n",
            i + 1,
            m.concept_type,
            m.start,
            m.end,
            m.surface
        ));
    }
    let mut clusters = doc.clusters.clone();
    clusters.sort();
    for c in clusters.iter().filter(|c| c.len() > 1) {
        ann.push_str("*\t");
        ann.push_str(&options.relation_label);
        for &i in c.members() {
            ann.push_str(&format!(" T{}", i + 1));
        }
        ann.push('\n');
    }
    for (k, (&i, entity)) in doc.entity_links.iter().enumerate() {
        ann.push_str(&format!("N{}\tReference T{} {}\t{}\n", k + 1, i + 1, entity, entity));
    }
    Ok((doc.text.clone(), ann))
}

/// Reads every `<id>.txt` / `<id>.ann` pair below `dir`. Files directly in
/// `dir` get `default_domain`; files in a subdirectory take its name as
/// their domain.
pub fn read_dir(dir: &Path, default_domain: &str, options: &BratOptions) -> Result<Corpus> {
    let mut jobs: Vec<(PathBuf, String)> = Vec::new();
    collect_ann(dir, default_domain, &mut jobs, true)?;
    jobs.sort();
    let documents = jobs
        .par_iter()
        .map(|(ann_path, domain)| {
            let doc_id = ann_path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_string();
            let text = fs::read_to_string(ann_path.with_extension("txt"))?;
            let ann = fs::read_to_string(ann_path)?;
            parse_brat(&doc_id, &text, &ann, domain, options).map_err(|e| match e {
                Error::Parse { format, line, message } => Error::Parse {
                    format,
                    line,
                    message: format!("{}: {message}", ann_path.display()),
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Corpus::new(documents))
}

fn collect_ann(dir: &Path, domain: &str, out: &mut Vec<(PathBuf, String)>, top: bool) -> Result<()> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() && top {
            let sub = path.file_name().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            collect_ann(&path, &sub, out, false)?;
        } else if path.extension().is_some_and(|e| e == "ann") {
            out.push((path, domain.to_string()));
        }
    }
    Ok(())
}

/// Writes one `.txt`/`.ann` pair per document, grouped into one
/// subdirectory per non-empty domain.
pub fn write_dir(corpus: &Corpus, dir: &Path, options: &BratOptions) -> Result<()> {
    let mut by_dir: BTreeMap<PathBuf, Vec<&Document>> = BTreeMap::new();
    for doc in &corpus.documents {
        let target = if doc.domain.is_empty() {
            dir.to_path_buf()
        } else {
            dir.join(&doc.domain)
        };
        by_dir.entry(target).or_default().push(doc);
    }
    for (target, docs) in by_dir {
        fs::create_dir_all(&target)?;
        for doc in docs {
            let (text, ann) = write_brat(doc, options)?;
            fs::write(target.join(format!("{}.txt", doc.doc_id)), text)?;
            fs::write(target.join(format!("{}.ann", doc.doc_id)), ann)?;
        }
    }
    Ok(())
}
