//! Seeded generator of small annotated corpora for tests and demos.
//! The same seed always yields the same corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corefdoc::{ConceptType, Corpus, Document, MentionSource, STM_DOMAINS};

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub documents: usize,
    /// Upper bound on concept mentions per document.
    pub max_mentions: usize,
    pub domains: Vec<String>,
    /// Probability that a concept's mentions in a document are annotated
    /// as one cluster.
    pub cluster_rate: f64,
    /// Probability that a concept's mentions carry an entity link.
    pub link_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            documents: 20,
            max_mentions: 12,
            domains: STM_DOMAINS.iter().map(|d| d.to_string()).collect(),
            cluster_rate: 0.7,
            link_rate: 0.5,
        }
    }
}

struct Term {
    long: &'static str,
    plural: &'static str,
    short: Option<&'static str>,
    ty: ConceptType,
}

const fn term(long: &'static str, plural: &'static str, short: Option<&'static str>, ty: ConceptType) -> Term {
    Term { long, plural, short, ty }
}

const TERMS: [Term; 16] = [
    term("convolutional neural network", "convolutional neural networks", Some("CNN"), ConceptType::Method),
    term("support vector machine", "support vector machines", Some("SVM"), ConceptType::Method),
    term("polymerase chain reaction", "polymerase chain reactions", Some("PCR"), ConceptType::Process),
    term("root mean square error", "root mean square errors", Some("RMSE"), ConceptType::Data),
    term("soil sample", "soil samples", None, ConceptType::Material),
    term("gene expression", "gene expressions", Some("GE"), ConceptType::Process),
    term("matrix", "matrices", None, ConceptType::Data),
    term("analysis", "analyses", None, ConceptType::Method),
    term("galaxy cluster", "galaxy clusters", None, ConceptType::Material),
    term("Möbius strip", "Möbius strips", None, ConceptType::Material),
    term("α-helix", "α-helices", None, ConceptType::Material),
    term("heat treatment", "heat treatments", None, ConceptType::Process),
    term("clinical trial", "clinical trials", None, ConceptType::Process),
    term("survey data", "survey data", None, ConceptType::Data),
    term("crop yield", "crop yields", None, ConceptType::Data),
    term("naïve Bayes classifier", "naïve Bayes classifiers", None, ConceptType::Method),
];

const FILLERS: [&str; 8] = ["We use", "Results show", "In addition,", "Here", "Thus", "Moreover", "We compare", "Finally"];

/// Text builder that tracks character offsets.
struct Text {
    buf: String,
    chars: usize,
}

impl Text {
    fn push(&mut self, s: &str) -> (usize, usize) {
        let start = self.chars;
        self.buf.push_str(s);
        self.chars += s.chars().count();
        (start, self.chars)
    }
}

pub fn generate(seed: u64, cfg: &SynthConfig) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let docs = (0..cfg.documents)
        .map(|n| {
            let domain = cfg.domains.choose(&mut rng).cloned().unwrap_or_default();
            generate_document(&mut rng, format!("doc{n:04}"), domain, cfg)
        })
        .collect();
    Corpus::new(docs)
}

fn generate_document(rng: &mut ChaCha8Rng, doc_id: String, domain: String, cfg: &SynthConfig) -> Document {
    let mut text = Text { buf: String::new(), chars: 0 };
    // (start, end, type, source, concept index or None for stray pronouns)
    let mut spans: Vec<(usize, usize, ConceptType, MentionSource, Option<usize>)> = Vec::new();
    let mut defined = vec![false; TERMS.len()];
    let n = rng.gen_range(0..=cfg.max_mentions);
    let mut last_concept = None;
    for _ in 0..n {
        if !text.buf.is_empty() {
            text.push(" ");
        }
        text.push(FILLERS.choose(rng).unwrap());
        text.push(" ");
        if last_concept.is_some() && rng.gen_bool(0.15) {
            let p = if rng.gen_bool(0.5) { "it" } else { "this" };
            let (s, e) = text.push(p);
            let linked = if rng.gen_bool(0.8) { last_concept } else { None };
            spans.push((s, e, ConceptType::None, MentionSource::CorefOnly, linked));
            text.push(".");
            continue;
        }
        let c = rng.gen_range(0..TERMS.len());
        let t = &TERMS[c];
        let mut in_parens = false;
        let surface = match (t.short, defined[c]) {
            (Some(short), false) if rng.gen_bool(0.5) => {
                let (s, e) = text.push(t.long);
                spans.push((s, e, t.ty, MentionSource::ConceptExtractor, Some(c)));
                text.push(" (");
                defined[c] = true;
                in_parens = true;
                short.to_string()
            }
            (Some(short), true) if rng.gen_bool(0.6) => short.to_string(),
            _ if rng.gen_bool(0.3) => t.plural.to_string(),
            _ if rng.gen_bool(0.2) => format!("the {}", t.long),
            _ => t.long.to_string(),
        };
        let (s, e) = text.push(&surface);
        spans.push((s, e, t.ty, MentionSource::ConceptExtractor, Some(c)));
        if in_parens {
            text.push(")");
        }
        text.push(".");
        last_concept = Some(c);
    }
    if text.buf.is_empty() {
        text.push("No concepts here.");
    }

    let mut doc = Document::new(doc_id, domain, text.buf);
    for &(s, e, ty, src, _) in &spans {
        doc.add_mention(s, e, ty, src).expect("offsets come from the builder");
    }
    let mut order: Vec<usize> = (0..TERMS.len()).collect();
    order.shuffle(rng);
    for c in order {
        let members: Vec<usize> = (0..spans.len()).filter(|&i| spans[i].4 == Some(c)).collect();
        if members.is_empty() {
            continue;
        }
        let typed = members.iter().any(|&i| spans[i].3 == MentionSource::ConceptExtractor);
        if typed && members.len() > 1 && rng.gen_bool(cfg.cluster_rate) {
            doc.add_cluster(members.iter().copied());
        }
        if rng.gen_bool(cfg.link_rate) {
            let entity = format!("Wikipedia:{}", TERMS[c].long.replace(' ', "_"));
            for &i in &members {
                if spans[i].3 == MentionSource::ConceptExtractor {
                    doc.entity_links.insert(i, entity.clone());
                }
            }
        }
    }
    doc.sort_clusters();
    doc
}
