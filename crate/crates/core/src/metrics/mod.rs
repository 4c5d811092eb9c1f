//! MUC, B³, CEAFe (φ4) and the CoNLL average over key/response partitions.
//!
//! Counting is exact: every component is a [`Rational`] until it is read out
//! as a float. A component whose denominator is zero is 0.

mod assignment;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational, ToPrimitive, Zero};
use serde::Serialize;

pub use assignment::{optimal_assignment, Assignment};

pub type Rational = BigRational;

fn ratio(num: usize, den: usize) -> Rational {
    if den == 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

fn div(num: &Rational, den: usize) -> Rational {
    if den == 0 {
        Rational::zero()
    } else {
        num / Rational::from_integer(BigInt::from(den))
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("partition has an empty part")]
    EmptyPart,
    #[error("element {0} occurs in more than one part")]
    Overlap(String),
}

/// Disjoint, non-empty sets of mention identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition<T> {
    parts: Vec<Vec<T>>,
}

impl<T: Ord + Clone + fmt::Debug> Partition<T> {
    pub fn new(parts: impl IntoIterator<Item = impl IntoIterator<Item = T>>) -> Result<Self, PartitionError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for part in parts {
            let mut p: Vec<T> = part.into_iter().collect();
            if p.is_empty() {
                return Err(PartitionError::EmptyPart);
            }
            p.sort();
            p.dedup();
            for x in &p {
                if !seen.insert(x.clone()) {
                    return Err(PartitionError::Overlap(format!("{x:?}")));
                }
            }
            out.push(p);
        }
        out.sort();
        Ok(Partition { parts: out })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[Vec<T>] {
        &self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn universe(&self) -> BTreeSet<&T> {
        self.parts.iter().flatten().collect()
    }

    pub fn element_count(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    fn index(&self) -> BTreeMap<&T, usize> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.iter().map(move |x| (x, i)))
            .collect()
    }

    fn with_singletons(&self, extra: impl IntoIterator<Item = T>) -> Self {
        let mut parts = self.parts.clone();
        parts.extend(extra.into_iter().map(|x| vec![x]));
        parts.sort();
        Partition { parts }
    }
}

/// Adds every mention present on only one side to the other side as a
/// singleton, so both partitions cover the same universe.
pub fn align_mentions<T: Ord + Clone + fmt::Debug>(
    key: &Partition<T>,
    response: &Partition<T>,
) -> (Partition<T>, Partition<T>) {
    let ku = key.universe();
    let ru = response.universe();
    let missing_in_response: Vec<T> = ku.difference(&ru).map(|x| (*x).clone()).collect();
    let missing_in_key: Vec<T> = ru.difference(&ku).map(|x| (*x).clone()).collect();
    (
        key.with_singletons(missing_in_key),
        response.with_singletons(missing_in_response),
    )
}

/// Precision, recall and F1 with exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prf {
    pub precision: Rational,
    pub recall: Rational,
    pub f1: Rational,
}

impl Prf {
    pub fn new(precision: Rational, recall: Rational) -> Self {
        let sum = &precision + &recall;
        let f1 = if sum.is_zero() {
            Rational::zero()
        } else {
            Rational::from_integer(BigInt::from(2)) * &precision * &recall / sum
        };
        Prf {
            precision,
            recall,
            f1,
        }
    }

    pub fn as_f64(&self) -> PrfF64 {
        PrfF64 {
            precision: to_f64(&self.precision),
            recall: to_f64(&self.recall),
            f1: to_f64(&self.f1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrfF64 {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Link-based score: `Σ(|K| − |p(K)|) / Σ(|K| − 1)` for recall, roles
/// swapped for precision. Mentions of `K` unknown to the other side count
/// as parts of their own.
pub fn muc<T: Ord + Clone + fmt::Debug>(key: &Partition<T>, response: &Partition<T>) -> Prf {
    fn links<T: Ord + Clone + fmt::Debug>(a: &Partition<T>, b: &Partition<T>) -> (usize, usize) {
        let index = b.index();
        let (mut num, mut den) = (0, 0);
        for part in a.parts() {
            let mut hit = BTreeSet::new();
            let mut unmatched = 0;
            for x in part {
                match index.get(x) {
                    Some(&i) => {
                        hit.insert(i);
                    }
                    None => unmatched += 1,
                }
            }
            num += part.len() - (hit.len() + unmatched);
            den += part.len() - 1;
        }
        (num, den)
    }
    let (rn, rd) = links(key, response);
    let (pn, pd) = links(response, key);
    Prf::new(ratio(pn, pd), ratio(rn, rd))
}

/// Overlap sizes `|A ∩ B|` for every intersecting pair of parts.
fn overlaps<T: Ord + Clone + fmt::Debug>(a: &Partition<T>, b: &Partition<T>) -> BTreeMap<(usize, usize), usize> {
    let index = b.index();
    let mut out = BTreeMap::new();
    for (i, part) in a.parts().iter().enumerate() {
        for x in part {
            if let Some(&j) = index.get(x) {
                *out.entry((i, j)).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Mention-weighted overlap: recall averages `|K(m) ∩ R(m)| / |K(m)|` over
/// key mentions, precision averages `|K(m) ∩ R(m)| / |R(m)|` over response
/// mentions.
pub fn b_cubed<T: Ord + Clone + fmt::Debug>(key: &Partition<T>, response: &Partition<T>) -> Prf {
    let ov = overlaps(key, response);
    let mut recall_sum = Rational::zero();
    let mut precision_sum = Rational::zero();
    for (&(k, r), &n) in &ov {
        let sq = n * n;
        recall_sum += ratio(sq, key.parts()[k].len());
        precision_sum += ratio(sq, response.parts()[r].len());
    }
    Prf::new(
        div(&precision_sum, response.element_count()),
        div(&recall_sum, key.element_count()),
    )
}

/// `φ4(K, R) = 2|K ∩ R| / (|K| + |R|)`.
fn phi4(overlap: usize, k: usize, r: usize) -> Rational {
    ratio(2 * overlap, k + r)
}

/// Entity-based score over the φ4-optimal one-to-one alignment of parts.
pub fn ceaf_e<T: Ord + Clone + fmt::Debug>(key: &Partition<T>, response: &Partition<T>) -> Prf {
    let total = ceaf_e_similarity(key, response);
    Prf::new(div(&total, response.len()), div(&total, key.len()))
}

/// `Σ φ4` over the optimal alignment. Parts with no overlap cannot gain
/// from being paired, so each connected component of the overlap graph is
/// solved separately.
pub fn ceaf_e_similarity<T: Ord + Clone + fmt::Debug>(key: &Partition<T>, response: &Partition<T>) -> Rational {
    let ov = overlaps(key, response);
    let nk = key.len();
    let mut sets = crate::standoff_io::DisjointSets::new(nk + response.len());
    for &(k, r) in ov.keys() {
        sets.union(k, nk + r);
    }
    let mut components: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for &(k, r) in ov.keys() {
        let root = sets.find(k);
        let entry = components.entry(root).or_default();
        if !entry.0.contains(&k) {
            entry.0.push(k);
        }
        if !entry.1.contains(&r) {
            entry.1.push(r);
        }
    }

    let mut total = Rational::zero();
    for (ks, rs) in components.values() {
        let exact = |k: usize, r: usize| {
            let n = ov.get(&(k, r)).copied().unwrap_or(0);
            phi4(n, key.parts()[k].len(), response.parts()[r].len())
        };
        if ks.len() == 1 || rs.len() == 1 {
            // A star: the best single pair wins.
            let best = ks
                .iter()
                .flat_map(|&k| rs.iter().map(move |&r| (k, r)))
                .map(|(k, r)| exact(k, r))
                .max()
                .unwrap_or_else(Rational::zero);
            total += best;
            continue;
        }
        let weights: Vec<Vec<f64>> = ks
            .iter()
            .map(|&k| rs.iter().map(|&r| to_f64(&exact(k, r))).collect())
            .collect();
        for (i, j) in optimal_assignment(&weights).pairs {
            total += exact(ks[i], rs[j]);
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreReport {
    pub muc: Prf,
    pub b3: Prf,
    pub ceaf_e: Prf,
    /// Component-wise means; `conll.f1` is the mean of the three F1 values.
    pub conll: Prf,
}

impl ScoreReport {
    fn from_metrics(muc: Prf, b3: Prf, ceaf_e: Prf) -> Self {
        let three = Rational::from_integer(BigInt::from(3));
        let mean = |f: fn(&Prf) -> &Rational| (f(&muc) + f(&b3) + f(&ceaf_e)) / &three;
        let conll = Prf {
            precision: mean(|p| &p.precision),
            recall: mean(|p| &p.recall),
            f1: mean(|p| &p.f1),
        };
        ScoreReport {
            muc,
            b3,
            ceaf_e,
            conll,
        }
    }

    /// Harmonic mean of the averaged precision and recall, for comparison
    /// with tables that may have reported this instead of the mean F1.
    pub fn conll_f1_of_means(&self) -> Rational {
        Prf::new(self.conll.precision.clone(), self.conll.recall.clone()).f1
    }

    pub fn rows(&self) -> [(&'static str, &Prf); 4] {
        [
            ("MUC", &self.muc),
            ("B3", &self.b3),
            ("CEAFe", &self.ceaf_e),
            ("CoNLL", &self.conll),
        ]
    }

    /// Fixed-order text table with percentages.
    pub fn to_table(&self) -> String {
        let mut out = String::from("metric\tP\tR\tF1\n");
        for (name, prf) in self.rows() {
            let v = prf.as_f64();
            out.push_str(&format!(
                "{name}\t{:.2}\t{:.2}\t{:.2}\n",
                100.0 * v.precision,
                100.0 * v.recall,
                100.0 * v.f1
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "muc": self.muc.as_f64(),
            "b3": self.b3.as_f64(),
            "ceaf_e": self.ceaf_e.as_f64(),
            "conll": self.conll.as_f64(),
            "conll_f1_of_means": to_f64(&self.conll_f1_of_means()),
        })
    }
}

/// Aligns both partitions and computes all metrics.
pub fn score<T: Ord + Clone + fmt::Debug>(key: &Partition<T>, response: &Partition<T>) -> ScoreReport {
    let (key, response) = align_mentions(key, response);
    ScoreReport::from_metrics(
        muc(&key, &response),
        b_cubed(&key, &response),
        ceaf_e(&key, &response),
    )
}
