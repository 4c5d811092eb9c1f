//! Gold concept partition compiled from entity-linked mentions, and
//! evaluation of population strategies against it.
//!
//! A cluster is kept when every mention in it is linked and all links name
//! the same entity; kept clusters sharing an entity become one concept.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corefdoc::{all_clusters, validate_corpus, ConceptType, Corpus, CoreferenceCluster, Document, MentionKey};
use crate::error::{Error, Format, Result};
use crate::kgpop::{assign_type, populate_filtered, ClusterFilter, CollapseStrategy, TYPE_ROWS};
use crate::metrics::{score, Partition, ScoreReport};
use crate::normalize::Normalizer;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GoldConcept {
    pub entity: String,
    /// Sorted and unique.
    pub mentions: Vec<MentionKey>,
}

impl GoldConcept {
    pub fn concept_type(&self) -> ConceptType {
        assign_type(self.mentions.iter().map(|m| m.concept_type))
    }
}

/// Gold concepts sorted by entity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GoldKg {
    pub concepts: Vec<GoldConcept>,
}

impl GoldKg {
    pub fn partition(&self) -> Partition<MentionKey> {
        Partition::new(self.concepts.iter().map(|c| c.mentions.iter().cloned()))
            .expect("gold concepts are disjoint and non-empty")
    }

    pub fn universe(&self) -> BTreeSet<&MentionKey> {
        self.concepts.iter().flat_map(|c| c.mentions.iter()).collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for c in &self.concepts {
            out.push_str(&serde_json::to_string(c).expect("gold concepts serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(input: &str) -> Result<Self> {
        let mut concepts: Vec<GoldConcept> = Vec::new();
        let mut seen: BTreeMap<MentionKey, usize> = BTreeMap::new();
        let mut entities = BTreeSet::new();
        for (n, line) in input.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut c: GoldConcept =
                serde_json::from_str(line).map_err(|e| Error::parse(Format::GoldKg, n + 1, e.to_string()))?;
            if c.mentions.is_empty() {
                return Err(Error::parse(Format::GoldKg, n + 1, "concept without mentions"));
            }
            if !entities.insert(c.entity.clone()) {
                return Err(Error::parse(Format::GoldKg, n + 1, format!("entity `{}` listed twice", c.entity)));
            }
            c.mentions.sort();
            c.mentions.dedup();
            for m in &c.mentions {
                if let Some(prev) = seen.insert(m.clone(), n + 1) {
                    return Err(Error::parse(
                        Format::GoldKg,
                        n + 1,
                        format!("mention {m} already belongs to the concept on line {prev}"),
                    ));
                }
            }
            concepts.push(c);
        }
        concepts.sort();
        Ok(GoldKg { concepts })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compiled {
    pub gold: GoldKg,
    /// Annotated clusters (singletons included) whose mentions all link to
    /// one entity.
    pub kept_clusters: usize,
    pub singleton_clusters: usize,
}

/// The single entity all mentions of `cluster` link to, if there is one.
fn unique_entity<'d>(doc: &'d Document, cluster: &CoreferenceCluster) -> Option<&'d str> {
    let mut entity = None;
    for &i in cluster.members() {
        let e = doc.entity_links.get(&i)?;
        match entity {
            None => entity = Some(e.as_str()),
            Some(prev) if prev != e => return None,
            Some(_) => {}
        }
    }
    entity
}

pub fn compile_gold(corpus: &Corpus) -> Result<Compiled> {
    let violations = validate_corpus(corpus);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }
    let mut by_entity: BTreeMap<&str, Vec<MentionKey>> = BTreeMap::new();
    let (mut kept, mut singletons) = (0, 0);
    for doc in &corpus.documents {
        for cluster in all_clusters(doc)? {
            let Some(entity) = unique_entity(doc, &cluster) else {
                continue;
            };
            kept += 1;
            if cluster.is_singleton() {
                singletons += 1;
            }
            by_entity
                .entry(entity)
                .or_default()
                .extend(cluster.mentions(doc).map(|m| m.key()));
        }
    }
    let concepts = by_entity
        .into_iter()
        .map(|(entity, mut mentions)| {
            mentions.sort();
            GoldConcept {
                entity: entity.to_string(),
                mentions,
            }
        })
        .collect();
    Ok(Compiled {
        gold: GoldKg { concepts },
        kept_clusters: kept,
        singleton_clusters: singletons,
    })
}

/// Reads `doc_id<TAB>start<TAB>end<TAB>type<TAB>entity` rows and attaches
/// each entity to the mention with that key. Lines starting with `#` are
/// comments.
pub fn apply_links(corpus: &mut Corpus, tsv: &str) -> Result<usize> {
    let mut index: HashMap<MentionKey, (usize, usize)> = HashMap::new();
    for (d, doc) in corpus.documents.iter().enumerate() {
        for (i, m) in doc.mentions.iter().enumerate() {
            index.insert(m.key(), (d, i));
        }
    }
    let mut applied = 0;
    for (n, line) in tsv.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::parse(Format::Links, n + 1, msg);
        let cols: Vec<&str> = line.split('\t').collect();
        let [doc_id, start, end, ty, entity] = cols[..] else {
            return Err(err(format!("expected 5 tab-separated columns, found {}", cols.len())));
        };
        let offset = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad offset `{s}`")));
        let key = MentionKey {
            doc_id: doc_id.to_string(),
            start: offset(start)?,
            end: offset(end)?,
            concept_type: ty.parse().map_err(|e| err(format!("{e}")))?,
        };
        if entity.is_empty() {
            return Err(err("empty entity".into()));
        }
        let &(d, i) = index.get(&key).ok_or_else(|| err(format!("no mention {key}")))?;
        let links = &mut corpus.documents[d].entity_links;
        match links.get(&i) {
            Some(prev) if prev != entity => {
                return Err(err(format!("mention {key} already linked to `{prev}`")));
            }
            Some(_) => {}
            None => {
                links.insert(i, entity.to_string());
                applied += 1;
            }
        }
    }
    Ok(applied)
}

/// Concepts per type (rows) and domain (columns). Concepts spanning two or
/// more domains go to MIX only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldStats {
    /// `(domain, counts per type in TYPE_ROWS order, untyped)`.
    pub domains: Vec<(String, [usize; 4], usize)>,
    pub mix: ([usize; 4], usize),
}

impl GoldStats {
    pub fn total_concepts(&self) -> usize {
        let sum = |(t, u): &([usize; 4], usize)| t.iter().sum::<usize>() + u;
        self.domains.iter().map(|(_, t, u)| sum(&(*t, *u))).sum::<usize>() + sum(&self.mix)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("type");
        for (d, ..) in &self.domains {
            let _ = write!(out, "\t{d}");
        }
        out.push_str("\tMIX\tTotal\n");
        let mut columns: Vec<([usize; 4], usize)> = self.domains.iter().map(|(_, t, u)| (*t, *u)).collect();
        columns.push(self.mix);
        for (i, t) in TYPE_ROWS.iter().enumerate() {
            out.push_str(t.as_str());
            for (c, _) in &columns {
                let _ = write!(out, "\t{}", c[i]);
            }
            let _ = writeln!(out, "\t{}", columns.iter().map(|(c, _)| c[i]).sum::<usize>());
        }
        if columns.iter().any(|(_, u)| *u > 0) {
            out.push_str("None");
            for (_, u) in &columns {
                let _ = write!(out, "\t{u}");
            }
            let _ = writeln!(out, "\t{}", columns.iter().map(|(_, u)| u).sum::<usize>());
        }
        out.push_str("Total");
        for (c, u) in &columns {
            let _ = write!(out, "\t{}", c.iter().sum::<usize>() + u);
        }
        let _ = writeln!(out, "\t{}", self.total_concepts());
        out
    }
}

pub fn gold_stats(gold: &GoldKg, corpus: &Corpus) -> GoldStats {
    let domain_of: HashMap<&str, &str> = corpus
        .documents
        .iter()
        .map(|d| (d.doc_id.as_str(), d.domain.as_str()))
        .collect();
    let mut per_domain: BTreeMap<&str, ([usize; 4], usize)> = BTreeMap::new();
    let mut mix = ([0usize; 4], 0usize);
    for c in &gold.concepts {
        let domains: BTreeSet<&str> = c
            .mentions
            .iter()
            .map(|m| domain_of.get(m.doc_id.as_str()).copied().unwrap_or(""))
            .collect();
        let cell = if domains.len() > 1 {
            &mut mix
        } else {
            per_domain.entry(domains.into_iter().next().unwrap_or("")).or_default()
        };
        match TYPE_ROWS.iter().position(|&t| t == c.concept_type()) {
            Some(i) => cell.0[i] += 1,
            None => cell.1 += 1,
        }
    }
    let mut domains = Vec::new();
    for d in crate::corefdoc::STM_DOMAINS {
        if let Some((t, u)) = per_domain.remove(d) {
            domains.push((d.to_string(), t, u));
        }
    }
    domains.extend(per_domain.into_iter().map(|(d, (t, u))| (d.to_string(), t, u)));
    GoldStats { domains, mix }
}

/// Keeps only the mentions in `universe`; clusters are intersected with it
/// and links dropped.
fn restrict(doc: &Document, universe: &BTreeSet<&MentionKey>) -> Document {
    let mut out = Document::new(doc.doc_id.clone(), doc.domain.clone(), doc.text.clone());
    let mut remap = BTreeMap::new();
    for (i, m) in doc.mentions.iter().enumerate() {
        if universe.contains(&m.key()) {
            remap.insert(i, out.mentions.len());
            out.mentions.push(m.clone());
        }
    }
    for c in &doc.clusters {
        let members: Vec<usize> = c.members().iter().filter_map(|i| remap.get(i).copied()).collect();
        if members.len() > 1 {
            out.add_cluster(members);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct PopulationEval {
    pub report: ScoreReport,
    /// Concepts after dropping clusters of untyped mentions only.
    pub concepts: usize,
    /// Concepts when those clusters are kept as well.
    pub concepts_with_untyped: usize,
}

pub fn evaluate_population(
    gold: &GoldKg,
    corpus: &Corpus,
    strategy: CollapseStrategy,
    normalizer: &Normalizer,
) -> Result<PopulationEval> {
    let universe = gold.universe();
    let present: BTreeSet<MentionKey> = corpus
        .documents
        .iter()
        .flat_map(|d| d.mentions.iter().map(|m| m.key()))
        .collect();
    let missing: Vec<String> = universe
        .iter()
        .filter(|k| !present.contains(**k))
        .take(5)
        .map(|k| k.to_string())
        .collect();
    if !missing.is_empty() {
        let total = universe.iter().filter(|k| !present.contains(**k)).count();
        return Err(Error::UniverseMismatch(format!(
            "{total} gold mention(s) not in the corpus, e.g. {}",
            missing.join(", ")
        )));
    }

    let restricted = Corpus::new(corpus.documents.iter().map(|d| restrict(d, &universe)).collect());
    let kg = populate_filtered(&restricted, strategy, ClusterFilter::DropCorefOnly, normalizer)?;
    let with_untyped = populate_filtered(&restricted, strategy, ClusterFilter::KeepAll, normalizer)?;
    let response = Partition::new(kg.concepts.iter().map(|c| c.mentions().cloned()))
        .expect("concepts partition their mentions");
    Ok(PopulationEval {
        report: score(&gold.partition(), &response),
        concepts: kg.concepts.len(),
        concepts_with_untyped: with_untyped.concepts.len(),
    })
}
