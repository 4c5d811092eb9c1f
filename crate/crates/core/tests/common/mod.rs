//! Test-side oracles written without reference to the library's metric
//! code: a plain scorer over `Vec<Vec<u32>>` partitions, an exhaustive
//! CEAFe alignment, and a column-file reader that follows the reference
//! scorer's bracket rules.

#![allow(dead_code)]

pub mod criteria;

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stmkg_core::corefdoc::{ConceptType, Corpus, Document, MentionSource};

pub type Parts = Vec<Vec<u32>>;
/// `(document, first token, last token)`.
pub type TokenSpan = (String, usize, usize);
pub type Chains = BTreeMap<(String, String), Vec<TokenSpan>>;

#[derive(Debug, Clone, Copy)]
pub struct Prf {
    pub p: f64,
    pub r: f64,
    pub f: f64,
}

fn prf(p_num: f64, p_den: f64, r_num: f64, r_den: f64) -> Prf {
    let p = if p_den == 0.0 { 0.0 } else { p_num / p_den };
    let r = if r_den == 0.0 { 0.0 } else { r_num / r_den };
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    Prf { p, r, f }
}

fn owner(parts: &Parts) -> HashMap<u32, usize> {
    let mut m = HashMap::new();
    for (i, p) in parts.iter().enumerate() {
        for &x in p {
            m.insert(x, i);
        }
    }
    m
}

/// Links recovered: for each key entity, |K| minus the number of response
/// pieces it is cut into (a mention absent from the response is a piece).
fn muc_side(key: &Parts, resp: &Parts) -> (f64, f64) {
    let own = owner(resp);
    let (mut num, mut den) = (0.0, 0.0);
    for k in key {
        let mut pieces = std::collections::HashSet::new();
        let mut loose = 0;
        for x in k {
            match own.get(x) {
                Some(&r) => {
                    pieces.insert(r);
                }
                None => loose += 1,
            }
        }
        num += (k.len() - pieces.len() - loose) as f64;
        den += (k.len() - 1) as f64;
    }
    (num, den)
}

pub fn muc(key: &Parts, resp: &Parts) -> Prf {
    let (rn, rd) = muc_side(key, resp);
    let (pn, pd) = muc_side(resp, key);
    prf(pn, pd, rn, rd)
}

/// Per mention: |K(m) ∩ R(m)| / |K(m)|, summed over key mentions.
fn b3_side(key: &Parts, resp: &Parts) -> (f64, f64) {
    let own = owner(resp);
    let (mut num, mut den) = (0.0, 0.0);
    for k in key {
        for x in k {
            let overlap = match own.get(x) {
                Some(&r) => resp[r].iter().filter(|y| k.contains(y)).count(),
                None => 0,
            };
            num += overlap as f64 / k.len() as f64;
            den += 1.0;
        }
    }
    (num, den)
}

pub fn b_cubed(key: &Parts, resp: &Parts) -> Prf {
    let (rn, rd) = b3_side(key, resp);
    let (pn, pd) = b3_side(resp, key);
    prf(pn, pd, rn, rd)
}

fn phi4(k: &[u32], r: &[u32]) -> (usize, usize) {
    let common = k.iter().filter(|x| r.contains(x)).count();
    (2 * common, k.len() + r.len())
}

/// Best one-to-one alignment by dynamic programming over subsets of the
/// response; response sides above 20 clusters are not supported.
pub fn ceaf_total(key: &Parts, resp: &Parts) -> f64 {
    assert!(resp.len() <= 20);
    let m = resp.len();
    let mut best = vec![f64::NEG_INFINITY; 1 << m];
    best[0] = 0.0;
    for k in key {
        let mut next = best.clone();
        for (mask, &here) in best.iter().enumerate() {
            if here == f64::NEG_INFINITY {
                continue;
            }
            for (j, r) in resp.iter().enumerate() {
                if mask & (1 << j) == 0 {
                    let (a, b) = phi4(k, r);
                    let v = here + a as f64 / b as f64;
                    let to = mask | (1 << j);
                    if v > next[to] {
                        next[to] = v;
                    }
                }
            }
        }
        best = next;
    }
    best.into_iter().fold(0.0, f64::max)
}

pub fn ceaf_e(key: &Parts, resp: &Parts) -> Prf {
    let t = ceaf_total(key, resp);
    prf(t, resp.len() as f64, t, key.len() as f64)
}

/// Exhaustive search over all partial injections key → response, exact.
pub fn ceaf_brute_force(key: &Parts, resp: &Parts) -> BigRational {
    fn go(i: usize, key: &Parts, resp: &Parts, used: &mut Vec<bool>) -> BigRational {
        if i == key.len() {
            return BigRational::zero();
        }
        let mut best = go(i + 1, key, resp, used);
        for j in 0..resp.len() {
            if !used[j] {
                let (a, b) = phi4(&key[i], &resp[j]);
                if a == 0 {
                    continue;
                }
                used[j] = true;
                let v = BigRational::new(BigInt::from(a), BigInt::from(b)) + go(i + 1, key, resp, used);
                used[j] = false;
                if v > best {
                    best = v;
                }
            }
        }
        best
    }
    go(0, key, resp, &mut vec![false; resp.len()])
}

pub struct Scores {
    pub muc: Prf,
    pub b3: Prf,
    pub ceaf: Prf,
    pub conll: Prf,
}

pub fn score(key: &Parts, resp: &Parts) -> Scores {
    let muc = muc(key, resp);
    let b3 = b_cubed(key, resp);
    let ceaf = ceaf_e(key, resp);
    let mean = |f: fn(&Prf) -> f64| (f(&muc) + f(&b3) + f(&ceaf)) / 3.0;
    let conll = Prf {
        p: mean(|x| x.p),
        r: mean(|x| x.r),
        f: mean(|x| x.f),
    };
    Scores { muc, b3, ceaf, conll }
}

/// Random partition pair over one universe of `1..=max_mentions` mentions
/// with at most `max_clusters` clusters per side.
pub fn random_pair(rng: &mut ChaCha8Rng, max_mentions: u32, max_clusters: usize) -> (Parts, Parts) {
    let n = rng.gen_range(1..=max_mentions);
    let mut side = || {
        let k = rng.gen_range(1..=max_clusters);
        let mut parts: Vec<Vec<u32>> = vec![Vec::new(); k];
        for x in 0..n {
            parts[rng.gen_range(0..k)].push(x);
        }
        parts.retain(|p| !p.is_empty());
        parts
    };
    let key = side();
    let resp = side();
    (key, resp)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One document of `w0 w1 ...` tokens carrying the given mentions (token
/// spans, inclusive) clustered by `parts` (indices into `spans`).
pub fn token_document(doc_id: &str, tokens: usize, spans: &[(usize, usize)], parts: &Parts) -> Document {
    let words: Vec<String> = (0..tokens).map(|i| format!("w{i}")).collect();
    let mut starts = Vec::new();
    let mut pos = 0;
    for w in &words {
        starts.push(pos);
        pos += w.chars().count() + 1;
    }
    let mut doc = Document::new(doc_id, "CS", words.join(" "));
    for &(a, b) in spans {
        let end = starts[b] + words[b].chars().count();
        doc.add_mention(starts[a], end, ConceptType::Data, MentionSource::ConceptExtractor)
            .expect("token offsets address the text");
    }
    for p in parts.iter().filter(|p| p.len() > 1) {
        doc.add_cluster(p.iter().map(|&i| i as usize));
    }
    doc
}

/// `n` distinct token spans over `tokens` tokens, each pair nested or
/// disjoint. Crossing spans are left out: bracket columns cannot say which
/// opening a `k)` closes when two mentions of one chain cross.
pub fn random_spans(rng: &mut ChaCha8Rng, n: usize, tokens: usize) -> Vec<(usize, usize)> {
    let mut spans = std::collections::BTreeSet::new();
    while spans.len() < n {
        let a = rng.gen_range(0..tokens);
        let b = a + rng.gen_range(0..3.min(tokens - a));
        let crosses = spans.iter().any(|&(c, d)| (a < c && c <= b && b < d) || (c < a && a <= d && d < b));
        if !crosses {
            spans.insert((a, b));
        }
    }
    let mut v: Vec<_> = spans.into_iter().collect();
    // Shuffle so mention order differs from span order.
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    v
}

/// Chains read from column files the way the reference scorer reads them:
/// last column, `|`-separated pieces, `(k` opens, `k)` closes the most
/// recent open `k`, `(k)` is a one-token mention. Mentions are
/// `(document, first token, last token)`.
pub fn reference_read_columns(text: &str) -> Chains {
    let mut chains = Chains::new();
    let mut open: HashMap<String, Vec<usize>> = HashMap::new();
    let mut doc = String::new();
    let mut tok = 0;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("#begin document (") {
            doc = rest[..rest.find(')').unwrap()].to_string();
            tok = 0;
            open.clear();
            continue;
        }
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let cell = line.split_whitespace().last().unwrap();
        if cell != "-" {
            for piece in cell.split('|') {
                let opens = piece.starts_with('(');
                let closes = piece.ends_with(')');
                let id = piece.trim_start_matches('(').trim_end_matches(')').to_string();
                if opens && closes {
                    chains.entry((doc.clone(), id)).or_default().push((doc.clone(), tok, tok));
                } else if opens {
                    open.entry(id).or_default().push(tok);
                } else if closes {
                    let start = open.get_mut(&id).and_then(Vec::pop).expect("balanced brackets");
                    chains.entry((doc.clone(), id)).or_default().push((doc.clone(), start, tok));
                }
            }
        }
        tok += 1;
    }
    chains
}

/// Sorted partition of `(doc, first, last)` tuples from chains.
pub fn chain_partition(chains: &Chains) -> Vec<Vec<TokenSpan>> {
    let mut parts: Vec<Vec<_>> = chains
        .values()
        .map(|v| {
            let mut v = v.clone();
            v.sort();
            v
        })
        .collect();
    parts.sort();
    parts
}

pub fn corpus_of(docs: Vec<Document>) -> Corpus {
    Corpus::new(docs)
}
