use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{all_clusters, ConceptType, Corpus, MentionSource, STM_DOMAINS};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    ConceptType,
    Domain,
}

/// Counts of one column of the corpus characteristics tables.
///
/// `mentions` counts concept mentions only; mentions added by coreference
/// annotation are tallied separately in `coref_only_mentions`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClusterCounts {
    pub mentions: usize,
    pub coref_only_mentions: usize,
    pub coreferent_mentions: usize,
    pub coreference_clusters: usize,
    pub singleton_clusters: usize,
}

impl ClusterCounts {
    pub fn overall_clusters(&self) -> usize {
        self.coreference_clusters + self.singleton_clusters
    }

    fn add(&mut self, other: &ClusterCounts) {
        self.mentions += other.mentions;
        self.coref_only_mentions += other.coref_only_mentions;
        self.coreferent_mentions += other.coreferent_mentions;
        self.coreference_clusters += other.coreference_clusters;
        self.singleton_clusters += other.singleton_clusters;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatsTable {
    pub group_by: GroupBy,
    pub columns: Vec<(String, ClusterCounts)>,
    pub total: ClusterCounts,
}

impl StatsTable {
    pub fn column(&self, name: &str) -> Option<&ClusterCounts> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    /// Tab-separated rendering, one row per count and one column per group.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("metric");
        for (name, _) in &self.columns {
            out.push('\t');
            out.push_str(name);
        }
        out.push_str("\tTotal\n");
        let rows: [(&str, fn(&ClusterCounts) -> usize); 6] = [
            ("mentions", |c| c.mentions),
            ("coref_only_mentions", |c| c.coref_only_mentions),
            ("coreferent_mentions", |c| c.coreferent_mentions),
            ("coreference_clusters", |c| c.coreference_clusters),
            ("singleton_clusters", |c| c.singleton_clusters),
            ("overall_clusters", |c| c.overall_clusters()),
        ];
        for (label, get) in rows {
            out.push_str(label);
            for (_, c) in &self.columns {
                let _ = write!(out, "\t{}", get(c));
            }
            let _ = writeln!(out, "\t{}", get(&self.total));
        }
        out
    }
}

const TYPE_COLUMNS: [ConceptType; 6] = [
    ConceptType::Data,
    ConceptType::Material,
    ConceptType::Method,
    ConceptType::Process,
    ConceptType::Mixed,
    ConceptType::None,
];

pub fn corpus_stats(corpus: &Corpus, group_by: GroupBy) -> Result<StatsTable> {
    let mut groups: BTreeMap<String, ClusterCounts> = BTreeMap::new();
    if group_by == GroupBy::ConceptType {
        for t in TYPE_COLUMNS {
            groups.insert(t.as_str().to_string(), ClusterCounts::default());
        }
    }

    for doc in &corpus.documents {
        let clusters = all_clusters(doc)?;
        for m in &doc.mentions {
            let key = match group_by {
                GroupBy::ConceptType => m.concept_type.as_str(),
                GroupBy::Domain => doc.domain.as_str(),
            };
            let g = groups.entry(key.to_string()).or_default();
            match m.source {
                MentionSource::ConceptExtractor => g.mentions += 1,
                MentionSource::CorefOnly => g.coref_only_mentions += 1,
            }
        }
        for c in &clusters {
            let cluster_key = match group_by {
                GroupBy::ConceptType => {
                    ConceptType::of_group(c.mentions(doc).map(|m| m.concept_type)).as_str()
                }
                GroupBy::Domain => doc.domain.as_str(),
            };
            let g = groups.entry(cluster_key.to_string()).or_default();
            if c.is_singleton() {
                g.singleton_clusters += 1;
                continue;
            }
            g.coreference_clusters += 1;
            for m in c.mentions(doc) {
                let key = match group_by {
                    GroupBy::ConceptType => m.concept_type.as_str(),
                    GroupBy::Domain => doc.domain.as_str(),
                };
                groups.entry(key.to_string()).or_default().coreferent_mentions += 1;
            }
        }
    }

    let order: Vec<String> = match group_by {
        GroupBy::ConceptType => TYPE_COLUMNS.iter().map(|t| t.as_str().to_string()).collect(),
        GroupBy::Domain => {
            let mut names: Vec<String> = STM_DOMAINS
                .iter()
                .filter(|d| groups.contains_key(**d))
                .map(|d| d.to_string())
                .collect();
            names.extend(
                groups
                    .keys()
                    .filter(|k| !STM_DOMAINS.contains(&k.as_str()))
                    .cloned(),
            );
            names
        }
    };

    let mut total = ClusterCounts::default();
    let columns: Vec<(String, ClusterCounts)> = order
        .into_iter()
        .map(|name| {
            let c = groups.remove(&name).unwrap_or_default();
            total.add(&c);
            (name, c)
        })
        .collect();
    Ok(StatsTable {
        group_by,
        columns,
        total,
    })
}
