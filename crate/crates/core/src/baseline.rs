//! String-match coreference: mentions of one document with equal labels
//! form a cluster. Pronouns are left alone.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::corefdoc::{Corpus, CoreferenceCluster, Document};
use crate::normalize::{build_acronym_map, Normalizer};

pub const PRONOUNS: [&str; 9] = ["it", "they", "them", "this", "that", "these", "those", "its", "their"];

pub fn is_pronoun(surface: &str) -> bool {
    let s = surface.trim().to_lowercase();
    PRONOUNS.contains(&s.as_str())
}

/// Partition of the non-pronoun mentions by label, singletons included,
/// sorted by first member.
pub fn resolve(doc: &Document, normalizer: &Normalizer) -> Vec<CoreferenceCluster> {
    let acronyms = build_acronym_map(&doc.text);
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut out = Vec::new();
    for (i, m) in doc.mentions.iter().enumerate() {
        if is_pronoun(&m.surface) {
            continue;
        }
        let label = normalizer.normalize_mention(&m.surface, &acronyms);
        if label.is_empty() {
            out.push(CoreferenceCluster::singleton(i));
        } else {
            groups.entry(label.into()).or_default().push(i);
        }
    }
    out.extend(groups.into_values().map(CoreferenceCluster::new));
    out.sort();
    out
}

/// The document with its clusters replaced by the baseline's.
pub fn apply(doc: &Document, normalizer: &Normalizer) -> Document {
    let mut out = doc.clone();
    out.clusters = resolve(doc, normalizer)
        .into_iter()
        .filter(|c| !c.is_singleton())
        .collect();
    out
}

pub fn apply_corpus(corpus: &Corpus, normalizer: &Normalizer) -> Corpus {
    Corpus::new(corpus.documents.par_iter().map(|d| apply(d, normalizer)).collect())
}
