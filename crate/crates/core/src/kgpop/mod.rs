//! Knowledge-graph population.
//!
//! Clusters are labelled, then collapsed into concepts: the concepts are the
//! equivalence classes of clusters with equal labels (and, for in-domain
//! collapsing, equal document domains). Each paper gets one `mentions` edge
//! per mention of its kept clusters.

mod export;
mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corefdoc::{
    all_clusters, validate_corpus, ConceptType, Corpus, CoreferenceCluster, Document,
    MentionKey, MentionSource,
};
use crate::error::{Error, Result};
use crate::normalize::{build_acronym_map, Label, Normalizer};

pub use export::{export, read_kg_jsonl, ExportFormat};
pub use stats::{kg_stats, KgStats, StatsRow, TYPE_ROWS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Collapsing {
    CrossDomain,
    InDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CollapseStrategy {
    pub collapsing: Collapsing,
    /// Without coreference every mention is its own cluster.
    pub use_coreference: bool,
}

impl CollapseStrategy {
    pub const fn new(collapsing: Collapsing, use_coreference: bool) -> Self {
        CollapseStrategy {
            collapsing,
            use_coreference,
        }
    }
}

impl fmt::Display for CollapseStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.collapsing {
            Collapsing::CrossDomain => "cross-domain",
            Collapsing::InDomain => "in-domain",
        };
        if self.use_coreference {
            write!(f, "{c}")
        } else {
            write!(f, "{c} without coreference")
        }
    }
}

/// Either every domain (`ALL`) or a single domain code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum DomainScope {
    All,
    Domain(String),
}

impl From<String> for DomainScope {
    fn from(s: String) -> Self {
        if s == "ALL" {
            DomainScope::All
        } else {
            DomainScope::Domain(s)
        }
    }
}

impl From<DomainScope> for String {
    fn from(s: DomainScope) -> String {
        s.to_string()
    }
}

impl fmt::Display for DomainScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainScope::All => f.write_str("ALL"),
            DomainScope::Domain(d) => f.write_str(d),
        }
    }
}

/// A cluster with its label, ready to be collapsed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabeledCluster {
    pub doc_id: String,
    pub domain: String,
    pub label: Label,
    pub mentions: Vec<MentionKey>,
}

/// Member cluster of a concept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClusterMembers {
    pub doc_id: String,
    pub domain: String,
    pub mentions: Vec<MentionKey>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub concept_id: String,
    pub label: Label,
    pub domain_scope: DomainScope,
    pub concept_type: ConceptType,
    pub member_clusters: Vec<ClusterMembers>,
}

impl Concept {
    pub fn domains(&self) -> BTreeSet<&str> {
        self.member_clusters.iter().map(|c| c.domain.as_str()).collect()
    }

    /// Whether the concept's mentions come from two or more domains.
    pub fn is_cross_domain(&self) -> bool {
        self.domains().len() > 1
    }

    pub fn mentions(&self) -> impl Iterator<Item = &MentionKey> {
        self.member_clusters.iter().flat_map(|c| c.mentions.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub doc_id: String,
    pub concept_id: String,
    pub mention: MentionKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnowledgeGraph {
    /// Sorted paper ids.
    pub papers: Vec<String>,
    /// Sorted by concept id.
    pub concepts: Vec<Concept>,
    /// Sorted; one per kept mention.
    pub edges: Vec<Edge>,
}

impl KnowledgeGraph {
    pub fn concept(&self, id: &str) -> Option<&Concept> {
        self.concepts
            .binary_search_by(|c| c.concept_id.as_str().cmp(id))
            .ok()
            .map(|i| &self.concepts[i])
    }

    pub fn cross_domain_concepts(&self) -> usize {
        self.concepts.iter().filter(|c| c.is_cross_domain()).count()
    }
}

/// Drops clusters made only of mentions added by coreference annotation;
/// they carry no concept type.
pub fn filter_clusters(doc: &Document) -> Result<Vec<CoreferenceCluster>> {
    Ok(all_clusters(doc)?
        .into_iter()
        .filter(|c| c.mentions(doc).any(|m| m.source == MentionSource::ConceptExtractor))
        .collect())
}

/// Majority type over the typed mentions; ties resolve as
/// Process > Method > Material > Data. No typed mention gives `None`.
pub fn assign_type(types: impl IntoIterator<Item = ConceptType>) -> ConceptType {
    let mut counts = [0usize; 4];
    for t in types {
        if let Some(i) = ConceptType::TYPED.iter().position(|&x| x == t) {
            counts[i] += 1;
        }
    }
    let best = counts.iter().copied().max().unwrap_or(0);
    if best == 0 {
        return ConceptType::None;
    }
    ConceptType::TYPED[counts.iter().position(|&c| c == best).unwrap()]
}

fn concept_id(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            h.update([0x1f]);
        }
        h.update(p.as_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Quotient of the clusters under "equal label, and equal domain unless
/// collapsing across domains". Empty labels never merge.
pub fn collapse(clusters: Vec<LabeledCluster>, collapsing: Collapsing) -> Vec<Concept> {
    let mut classes: BTreeMap<(Label, DomainScope, Option<MentionKey>), Vec<LabeledCluster>> = BTreeMap::new();
    for c in clusters {
        let scope = match collapsing {
            Collapsing::CrossDomain => DomainScope::All,
            Collapsing::InDomain => DomainScope::Domain(c.domain.clone()),
        };
        let unique = c.label.is_empty().then(|| c.mentions.iter().min().cloned()).flatten();
        classes
            .entry((c.label.clone(), scope, unique))
            .or_default()
            .push(c);
    }

    let mut concepts: Vec<Concept> = classes
        .into_iter()
        .map(|((label, scope, unique), mut members)| {
            members.sort();
            let scope_name = scope.to_string();
            let id = match &unique {
                Some(k) => concept_id(&[label.as_str(), &scope_name, &k.to_string()]),
                None => concept_id(&[label.as_str(), &scope_name]),
            };
            let concept_type = assign_type(
                members
                    .iter()
                    .flat_map(|m| m.mentions.iter().map(|k| k.concept_type)),
            );
            Concept {
                concept_id: id,
                label,
                domain_scope: scope,
                concept_type,
                member_clusters: members
                    .into_iter()
                    .map(|m| ClusterMembers {
                        doc_id: m.doc_id,
                        domain: m.domain,
                        mentions: m.mentions,
                    })
                    .collect(),
            }
        })
        .collect();
    concepts.sort_by(|a, b| a.concept_id.cmp(&b.concept_id));
    concepts
}

/// Which clusters take part in population.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterFilter {
    /// Drop clusters consisting solely of coreference-only mentions.
    DropCorefOnly,
    KeepAll,
}

/// Labels the kept clusters of one document.
pub fn label_document(
    doc: &Document,
    use_coreference: bool,
    filter: ClusterFilter,
    normalizer: &Normalizer,
) -> Result<Vec<LabeledCluster>> {
    let clusters = if use_coreference {
        all_clusters(doc)?
    } else {
        (0..doc.mentions.len()).map(CoreferenceCluster::singleton).collect()
    };
    let acronyms = build_acronym_map(&doc.text);
    Ok(clusters
        .into_iter()
        .filter(|c| {
            filter == ClusterFilter::KeepAll
                || c.mentions(doc).any(|m| m.source == MentionSource::ConceptExtractor)
        })
        .map(|c| {
            let mut mentions: Vec<MentionKey> = c.mentions(doc).map(|m| m.key()).collect();
            mentions.sort();
            LabeledCluster {
                doc_id: doc.doc_id.clone(),
                domain: doc.domain.clone(),
                label: normalizer.cluster_label(doc, &c, &acronyms),
                mentions,
            }
        })
        .collect())
}

pub fn populate(corpus: &Corpus, strategy: CollapseStrategy, normalizer: &Normalizer) -> Result<KnowledgeGraph> {
    populate_filtered(corpus, strategy, ClusterFilter::DropCorefOnly, normalizer)
}

pub fn populate_filtered(
    corpus: &Corpus,
    strategy: CollapseStrategy,
    filter: ClusterFilter,
    normalizer: &Normalizer,
) -> Result<KnowledgeGraph> {
    let violations = validate_corpus(corpus);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    let labeled: Vec<Vec<LabeledCluster>> = corpus
        .documents
        .par_iter()
        .map(|doc| label_document(doc, strategy.use_coreference, filter, normalizer))
        .collect::<Result<_>>()?;
    let concepts = collapse(labeled.into_iter().flatten().collect(), strategy.collapsing);

    let mut edges: Vec<Edge> = concepts
        .iter()
        .flat_map(|c| {
            c.member_clusters.iter().flat_map(move |m| {
                m.mentions.iter().map(move |k| Edge {
                    doc_id: m.doc_id.clone(),
                    concept_id: c.concept_id.clone(),
                    mention: k.clone(),
                })
            })
        })
        .collect();
    edges.sort();
    let mut papers: Vec<String> = corpus.documents.iter().map(|d| d.doc_id.clone()).collect();
    papers.sort();
    Ok(KnowledgeGraph {
        papers,
        concepts,
        edges,
    })
}
