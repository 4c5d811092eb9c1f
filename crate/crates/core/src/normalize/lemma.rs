//! Plural to singular for English nouns: an exception table first, then
//! suffix rules.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Format, Result};

const DEFAULT_TABLE: &str = include_str!("../../data/lemma_exceptions.tsv");

/// Endings that mark a word as already singular.
const SINGULAR_ENDINGS: [&str; 3] = ["ss", "us", "is"];

#[derive(Debug, Clone)]
pub struct Singularizer {
    exceptions: HashMap<String, String>,
    fixed: HashSet<String>,
}

impl Default for Singularizer {
    fn default() -> Self {
        Singularizer::from_tsv(DEFAULT_TABLE).expect("embedded exception table is well formed")
    }
}

impl Singularizer {
    /// Builds a singularizer from a two-column `plural<TAB>singular` table.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_tsv(table: &str) -> Result<Self> {
        let mut exceptions = HashMap::new();
        let mut fixed = HashSet::new();
        for (n, line) in table.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(plural), Some(singular), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::parse(Format::LemmaTable, n + 1, "expected two tab-separated columns"));
            };
            let (plural, singular) = (plural.trim().to_lowercase(), singular.trim().to_lowercase());
            if plural.is_empty() || singular.is_empty() {
                return Err(Error::parse(Format::LemmaTable, n + 1, "empty column"));
            }
            fixed.insert(singular.clone());
            exceptions.insert(plural, singular);
        }
        Ok(Singularizer { exceptions, fixed })
    }

    pub fn singularize(&self, token: &str) -> String {
        if let Some((head, tail)) = token.rsplit_once('-') {
            if !head.is_empty() && !tail.is_empty() {
                return format!("{head}-{}", self.singularize(tail));
            }
        }
        let lower = token.to_lowercase();
        if let Some(s) = self.exceptions.get(&lower) {
            return s.clone();
        }
        if self.fixed.contains(&lower) {
            return token.to_string();
        }
        match self.apply_rules(token) {
            Some(stem) => self
                .exceptions
                .get(&stem.to_lowercase())
                .cloned()
                .unwrap_or(stem),
            None => token.to_string(),
        }
    }

    fn apply_rules(&self, token: &str) -> Option<String> {
        if token.chars().count() < 4 || !token.chars().all(char::is_alphabetic) {
            return None;
        }
        let lower = token.to_lowercase();
        if SINGULAR_ENDINGS.iter().any(|e| lower.ends_with(e)) {
            return None;
        }
        let cut = |n: usize| token[..token.len() - n].to_string();
        if lower.ends_with("ies") && lower.len() > 4 {
            return Some(cut(3) + "y");
        }
        if ["sses", "xes", "ches", "shes", "zzes"].iter().any(|e| lower.ends_with(e)) {
            return Some(cut(2));
        }
        if lower.ends_with('s') {
            return Some(cut(1));
        }
        None
    }
}
