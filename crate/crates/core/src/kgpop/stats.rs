use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::KnowledgeGraph;
use crate::corefdoc::{ConceptType, Corpus, MentionSource, STM_DOMAINS};

/// Type rows in the order the population tables list them.
pub const TYPE_ROWS: [ConceptType; 4] = [
    ConceptType::Data,
    ConceptType::Material,
    ConceptType::Method,
    ConceptType::Process,
];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StatsRow {
    pub name: String,
    pub abstracts: usize,
    pub mentions: usize,
    pub coreferent_mentions: usize,
    pub concepts: usize,
    /// Concepts per type in [`TYPE_ROWS`] order; `None`-typed concepts are
    /// only counted in `concepts`.
    pub per_type: [usize; 4],
}

impl StatsRow {
    /// `1 − concepts / mentions` as a percentage, or `None` without mentions.
    pub fn reduction_percent(&self) -> Option<f64> {
        (self.mentions > 0).then(|| 100.0 * (1.0 - self.concepts as f64 / self.mentions as f64))
    }

    fn count_concept(&mut self, t: ConceptType) {
        self.concepts += 1;
        if let Some(i) = TYPE_ROWS.iter().position(|&x| x == t) {
            self.per_type[i] += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KgStats {
    pub domains: Vec<StatsRow>,
    /// Concepts whose mentions span more than one domain.
    pub mix: StatsRow,
    pub total: StatsRow,
}

pub fn kg_stats(kg: &KnowledgeGraph, corpus: &Corpus) -> KgStats {
    let mut rows: BTreeMap<String, StatsRow> = BTreeMap::new();
    let mut total = StatsRow {
        name: "Total".into(),
        ..Default::default()
    };
    for doc in &corpus.documents {
        let row = rows.entry(doc.domain.clone()).or_insert_with(|| StatsRow {
            name: doc.domain.clone(),
            ..Default::default()
        });
        row.abstracts += 1;
        row.mentions += doc
            .mentions
            .iter()
            .filter(|m| m.source == MentionSource::ConceptExtractor)
            .count();
        row.coreferent_mentions += doc
            .clusters
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.len())
            .sum::<usize>();
    }
    for row in rows.values() {
        total.abstracts += row.abstracts;
        total.mentions += row.mentions;
        total.coreferent_mentions += row.coreferent_mentions;
    }

    let mut mix = StatsRow {
        name: "MIX".into(),
        ..Default::default()
    };
    for concept in &kg.concepts {
        total.count_concept(concept.concept_type);
        let domains = concept.domains();
        if domains.len() > 1 {
            mix.count_concept(concept.concept_type);
        } else if let Some(d) = domains.into_iter().next() {
            rows.entry(d.to_string())
                .or_insert_with(|| StatsRow {
                    name: d.to_string(),
                    ..Default::default()
                })
                .count_concept(concept.concept_type);
        }
    }

    let mut domains: Vec<StatsRow> = Vec::new();
    for d in STM_DOMAINS {
        if let Some(r) = rows.remove(d) {
            domains.push(r);
        }
    }
    domains.extend(rows.into_values());
    KgStats {
        domains,
        mix,
        total,
    }
}

impl KgStats {
    /// Tab-separated table: one column per domain, then MIX and Total.
    pub fn to_tsv(&self) -> String {
        let mut cols: Vec<&StatsRow> = self.domains.iter().collect();
        cols.push(&self.mix);
        cols.push(&self.total);
        let mut out = String::from("metric");
        for c in &cols {
            out.push('\t');
            out.push_str(&c.name);
        }
        out.push('\n');
        let mix_dash = |r: &StatsRow, v: usize| {
            if std::ptr::eq(r, &self.mix) {
                "-".to_string()
            } else {
                v.to_string()
            }
        };
        for (name, get) in [
            ("abstracts", (|r: &StatsRow| r.abstracts) as fn(&StatsRow) -> usize),
            ("mentions", |r| r.mentions),
            ("coreferent_mentions", |r| r.coreferent_mentions),
        ] {
            out.push_str(name);
            for c in &cols {
                let _ = write!(out, "\t{}", mix_dash(c, get(c)));
            }
            out.push('\n');
        }
        out.push_str("concepts");
        for c in &cols {
            let _ = write!(out, "\t{}", c.concepts);
        }
        out.push('\n');
        for (i, t) in TYPE_ROWS.iter().enumerate() {
            let _ = write!(out, "- {t}");
            for c in &cols {
                let _ = write!(out, "\t{}", c.per_type[i]);
            }
            out.push('\n');
        }
        out.push_str("reduction");
        for c in &cols {
            match c.reduction_percent() {
                Some(p) if !std::ptr::eq(*c, &self.mix) => {
                    let _ = write!(out, "\t{p:.0}%");
                }
                _ => out.push_str("\t-"),
            }
        }
        out.push('\n');
        out
    }
}
