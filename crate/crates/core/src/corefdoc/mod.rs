//! Documents, typed mentions and coreference clusters.
//!
//! A [`Document`] owns its mentions; clusters refer to them by index, so a
//! cluster can never cross documents. Mentions that are not covered by any
//! annotated cluster are implicit singletons (see [`all_clusters`]).

mod stats;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use stats::{corpus_stats, ClusterCounts, GroupBy, StatsTable};

/// The ten domain codes of the STM corpus, in the order its tables use.
pub const STM_DOMAINS: [&str; 10] = [
    "Agr", "Ast", "Bio", "Che", "CS", "ES", "Eng", "MS", "Mat", "Med",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConceptType {
    Process,
    Method,
    Material,
    Data,
    /// Mention added only by coreference annotation (pronoun or noun phrase).
    None,
    /// Cluster or concept whose typed members disagree. Never on a mention.
    Mixed,
}

impl ConceptType {
    /// The four concept types a mention extractor can assign, in tie-break
    /// priority order.
    pub const TYPED: [ConceptType; 4] = [
        ConceptType::Process,
        ConceptType::Method,
        ConceptType::Material,
        ConceptType::Data,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConceptType::Process => "Process",
            ConceptType::Method => "Method",
            ConceptType::Material => "Material",
            ConceptType::Data => "Data",
            ConceptType::None => "None",
            ConceptType::Mixed => "Mixed",
        }
    }

    pub fn is_typed(self) -> bool {
        !matches!(self, ConceptType::None | ConceptType::Mixed)
    }

    /// Type of a group of mentions: the shared type when all typed members
    /// agree, `Mixed` when they disagree, `None` when no member is typed.
    pub fn of_group(types: impl IntoIterator<Item = ConceptType>) -> ConceptType {
        let mut seen = ConceptType::None;
        for t in types.into_iter().filter(|t| t.is_typed()) {
            if seen == ConceptType::None {
                seen = t;
            } else if seen != t {
                return ConceptType::Mixed;
            }
        }
        seen
    }
}

impl fmt::Display for ConceptType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown concept type `{0}`")]
pub struct UnknownConceptType(pub String);

impl FromStr for ConceptType {
    type Err = UnknownConceptType;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Process" => ConceptType::Process,
            "Method" => ConceptType::Method,
            "Material" => ConceptType::Material,
            "Data" => ConceptType::Data,
            "None" => ConceptType::None,
            "Mixed" => ConceptType::Mixed,
            other => return Err(UnknownConceptType(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MentionSource {
    ConceptExtractor,
    CorefOnly,
}

/// Identity of a mention across a corpus: `(doc id, start, end, type)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MentionKey {
    pub doc_id: String,
    pub start: usize,
    pub end: usize,
    #[serde(rename = "type")]
    pub concept_type: ConceptType,
}

impl fmt::Display for MentionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{},{})/{}",
            self.doc_id, self.start, self.end, self.concept_type
        )
    }
}

/// A typed span of document text. Offsets count Unicode scalar values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mention {
    pub doc_id: String,
    pub start: usize,
    pub end: usize,
    pub concept_type: ConceptType,
    pub surface: String,
    pub source: MentionSource,
}

impl Mention {
    pub fn key(&self) -> MentionKey {
        MentionKey {
            doc_id: self.doc_id.clone(),
            start: self.start,
            end: self.end,
            concept_type: self.concept_type,
        }
    }
}

/// Indices into [`Document::mentions`]. Kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoreferenceCluster {
    members: Vec<usize>,
}

impl CoreferenceCluster {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        CoreferenceCluster { members }
    }

    pub fn singleton(member: usize) -> Self {
        CoreferenceCluster {
            members: vec![member],
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.members.len() == 1
    }

    pub fn mentions<'d>(&'d self, doc: &'d Document) -> impl Iterator<Item = &'d Mention> + 'd {
        self.members.iter().map(move |&i| &doc.mentions[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub doc_id: String,
    pub domain: String,
    pub text: String,
    pub mentions: Vec<Mention>,
    pub clusters: Vec<CoreferenceCluster>,
    /// Mention index to external entity identifier (e.g. a Wikipedia title).
    pub entity_links: BTreeMap<usize, String>,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, domain: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            doc_id: doc_id.into(),
            domain: domain.into(),
            text: text.into(),
            ..Default::default()
        }
    }

    /// Appends a mention whose surface is sliced from the text. Returns its
    /// index, or `None` when the offsets do not address the text.
    pub fn add_mention(
        &mut self,
        start: usize,
        end: usize,
        concept_type: ConceptType,
        source: MentionSource,
    ) -> Option<usize> {
        let surface = char_slice(&self.text, start, end)?.to_string();
        if start >= end {
            return None;
        }
        self.mentions.push(Mention {
            doc_id: self.doc_id.clone(),
            start,
            end,
            concept_type,
            surface,
            source,
        });
        Some(self.mentions.len() - 1)
    }

    pub fn add_cluster(&mut self, members: impl IntoIterator<Item = usize>) {
        self.clusters.push(CoreferenceCluster::new(members));
    }

    /// Sorts clusters by first member so equal documents compare equal
    /// regardless of the order clusters were recorded in.
    pub fn sort_clusters(&mut self) {
        self.clusters.sort();
    }

    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Self {
        Corpus { documents }
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn mention_count(&self) -> usize {
        self.documents.iter().map(|d| d.mentions.len()).sum()
    }

    pub fn domains(&self) -> BTreeSet<&str> {
        self.documents.iter().map(|d| d.domain.as_str()).collect()
    }

    pub fn find(&self, doc_id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.doc_id == doc_id)
    }
}

/// Returns the substring between two character offsets.
pub fn char_slice(text: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let mut indices = text.char_indices().map(|(b, _)| b).chain(std::iter::once(text.len()));
    let from = indices.nth(start)?;
    let to = if end == start {
        from
    } else {
        indices.nth(end - start - 1)?
    };
    Some(&text[from..to])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    OffsetOrder,
    OffsetRange,
    SurfaceMismatch,
    DocIdMismatch,
    MixedMention,
    SourceType,
    DuplicateMention,
    EmptyCluster,
    MemberOutOfRange,
    OverlappingClusters,
    DanglingLink,
    DuplicateDocument,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::OffsetOrder => "offset order violated",
            Rule::OffsetRange => "offset out of range",
            Rule::SurfaceMismatch => "surface mismatch",
            Rule::DocIdMismatch => "mention doc id mismatch",
            Rule::MixedMention => "mixed type on mention",
            Rule::SourceType => "source and type disagree",
            Rule::DuplicateMention => "duplicate mention",
            Rule::EmptyCluster => "empty cluster",
            Rule::MemberOutOfRange => "cluster member out of range",
            Rule::OverlappingClusters => "overlapping clusters",
            Rule::DanglingLink => "entity link to unknown mention",
            Rule::DuplicateDocument => "duplicate document id",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub doc_id: String,
    pub span: Option<(usize, usize)>,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some((s, e)) => write!(f, "{} @ {}[{},{})", self.rule, self.doc_id, s, e),
            None => write!(f, "{} @ {}", self.rule, self.doc_id),
        }
    }
}

pub fn validate(doc: &Document) -> Vec<Violation> {
    let mut out = Vec::new();
    let violation = |span: Option<(usize, usize)>, rule| Violation {
        doc_id: doc.doc_id.clone(),
        span,
        rule,
    };
    let text_len = doc.char_len();

    let mut keys = HashMap::new();
    for m in &doc.mentions {
        let span = Some((m.start, m.end));
        if m.end <= m.start {
            out.push(violation(span, Rule::OffsetOrder));
        } else if m.end > text_len {
            out.push(violation(span, Rule::OffsetRange));
        } else if char_slice(&doc.text, m.start, m.end) != Some(m.surface.as_str()) {
            out.push(violation(span, Rule::SurfaceMismatch));
        }
        if m.doc_id != doc.doc_id {
            out.push(violation(span, Rule::DocIdMismatch));
        }
        if m.concept_type == ConceptType::Mixed {
            out.push(violation(span, Rule::MixedMention));
        }
        let coref_only = m.source == MentionSource::CorefOnly;
        if coref_only != (m.concept_type == ConceptType::None) {
            out.push(violation(span, Rule::SourceType));
        }
        if keys.insert(m.key(), ()).is_some() {
            out.push(violation(span, Rule::DuplicateMention));
        }
    }

    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (ci, c) in doc.clusters.iter().enumerate() {
        if c.is_empty() {
            out.push(violation(None, Rule::EmptyCluster));
        }
        for &i in c.members() {
            let Some(m) = doc.mentions.get(i) else {
                out.push(violation(None, Rule::MemberOutOfRange));
                continue;
            };
            if let Some(&prev) = owner.get(&i) {
                if prev != ci {
                    out.push(violation(Some((m.start, m.end)), Rule::OverlappingClusters));
                }
            } else {
                owner.insert(i, ci);
            }
        }
    }

    for &i in doc.entity_links.keys() {
        if i >= doc.mentions.len() {
            out.push(violation(None, Rule::DanglingLink));
        }
    }
    out
}

pub fn validate_corpus(corpus: &Corpus) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut ids = BTreeSet::new();
    for doc in &corpus.documents {
        if !ids.insert(doc.doc_id.as_str()) {
            out.push(Violation {
                doc_id: doc.doc_id.clone(),
                span: None,
                rule: Rule::DuplicateDocument,
            });
        }
        out.extend(validate(doc));
    }
    out
}

/// Annotated clusters plus one singleton per uncovered mention; the result
/// partitions the document's mentions.
pub fn all_clusters(doc: &Document) -> Result<Vec<CoreferenceCluster>> {
    let violations = validate(doc);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    Ok(all_clusters_unchecked(doc))
}

pub(crate) fn all_clusters_unchecked(doc: &Document) -> Vec<CoreferenceCluster> {
    let mut covered = vec![false; doc.mentions.len()];
    let mut out: Vec<CoreferenceCluster> = Vec::with_capacity(doc.mentions.len());
    for c in &doc.clusters {
        for &i in c.members() {
            covered[i] = true;
        }
        out.push(c.clone());
    }
    out.extend(
        covered
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| CoreferenceCluster::singleton(i)),
    );
    out.sort();
    out
}
