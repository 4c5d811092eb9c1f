//! Cluster labels: acronym expansion, lower-casing, removal of leading
//! determiners and possessives, whitespace collapsing and singularization.
//! Two clusters denote the same concept candidate when their labels match.

mod acronym;
mod lemma;

use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::corefdoc::{CoreferenceCluster, Document, Mention};

pub use acronym::{build_acronym_map, AcronymMap};
pub use lemma::Singularizer;

/// Leading tokens removed from labels: articles, demonstratives and
/// possessive determiners.
pub const STRIPPED_DETERMINERS: [&str; 12] = [
    "a", "an", "the", "this", "that", "these", "those", "its", "their", "our", "his", "her",
];

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(String);

impl Label {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.0
    }
}

static DEFAULT: LazyLock<Normalizer> = LazyLock::new(Normalizer::default);

#[derive(Debug, Clone, Default)]
pub struct Normalizer {
    singularizer: Singularizer,
}

fn strip_possessive(token: &str) -> &str {
    token
        .strip_suffix("'s")
        .or_else(|| token.strip_suffix("\u{2019}s"))
        .unwrap_or(token)
}

impl Normalizer {
    pub fn new(singularizer: Singularizer) -> Self {
        Normalizer { singularizer }
    }

    pub fn singularize(&self, token: &str) -> String {
        self.singularizer.singularize(token)
    }

    /// Replaces a whole-surface or per-token short form by its long form.
    /// A short form also matches with a plural `s` added or removed.
    pub fn expand_acronyms(&self, surface: &str, acronyms: &AcronymMap) -> String {
        let trimmed = surface.trim();
        if let Some(long) = acronyms.get(trimmed) {
            return long.to_string();
        }
        if acronyms.is_empty() {
            return trimmed.to_string();
        }
        let lookup = |t: &str| -> Option<String> {
            if let Some(long) = acronyms.get(t) {
                return Some(long.to_string());
            }
            if let Some(long) = t.strip_suffix('s').and_then(|stem| acronyms.get(stem)) {
                return Some(format!("{long}s"));
            }
            acronyms.get(&format!("{t}s")).map(str::to_string)
        };
        trimmed
            .split_whitespace()
            .map(|token| {
                let bare = strip_possessive(token);
                match lookup(bare) {
                    Some(long) => format!("{long}{}", &token[bare.len()..]),
                    None => token.to_string(),
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn normalize_mention(&self, surface: &str, acronyms: &AcronymMap) -> Label {
        let expanded = self.expand_acronyms(surface, acronyms).to_lowercase();
        let mut tokens: Vec<&str> = expanded
            .split_whitespace()
            .map(strip_possessive)
            .filter(|t| !t.is_empty())
            .collect();
        let lead = tokens
            .iter()
            .take_while(|t| STRIPPED_DETERMINERS.contains(t))
            .count();
        tokens.drain(..lead);
        let label = tokens
            .iter()
            .map(|t| self.singularize(t))
            .collect::<Vec<_>>()
            .join(" ");
        Label(label)
    }

    /// Label of the longest member (characters after acronym expansion;
    /// ties go to the earliest span).
    pub fn cluster_label(&self, doc: &Document, cluster: &CoreferenceCluster, acronyms: &AcronymMap) -> Label {
        let longest = self
            .longest_mention(cluster.mentions(doc), acronyms)
            .expect("clusters are non-empty");
        self.normalize_mention(&longest.surface, acronyms)
    }

    pub fn longest_mention<'m>(
        &self,
        mentions: impl IntoIterator<Item = &'m Mention>,
        acronyms: &AcronymMap,
    ) -> Option<&'m Mention> {
        mentions.into_iter().min_by(|a, b| {
            let la = self.expand_acronyms(&a.surface, acronyms).chars().count();
            let lb = self.expand_acronyms(&b.surface, acronyms).chars().count();
            lb.cmp(&la)
                .then(a.start.cmp(&b.start))
                .then(a.end.cmp(&b.end))
                .then(a.concept_type.cmp(&b.concept_type))
        })
    }
}

pub fn singularize(token: &str) -> String {
    DEFAULT.singularize(token)
}

pub fn normalize_mention(surface: &str, acronyms: &AcronymMap) -> Label {
    DEFAULT.normalize_mention(surface, acronyms)
}

pub fn cluster_label(doc: &Document, cluster: &CoreferenceCluster, acronyms: &AcronymMap) -> Label {
    DEFAULT.cluster_label(doc, cluster, acronyms)
}

/// The process-wide normalizer with the embedded exception table.
pub fn default_normalizer() -> &'static Normalizer {
    &DEFAULT
}
