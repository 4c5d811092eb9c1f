//! Abbreviation definitions of the form `long form (SHORT)`, found with the
//! Schwartz-Hearst candidate test and backward character match.

use std::collections::BTreeMap;

/// Short form to long form, for one document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AcronymMap {
    entries: BTreeMap<String, String>,
}

impl AcronymMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a definition. Empty short forms, self-maps and redefinitions
    /// of an existing short form are ignored; returns whether it was stored.
    pub fn insert(&mut self, short: impl Into<String>, long: impl Into<String>) -> bool {
        let (short, long) = (short.into(), long.into());
        if short.is_empty() || long.is_empty() || short == long || self.entries.contains_key(&short) {
            return false;
        }
        self.entries.insert(short, long);
        true
    }

    pub fn get(&self, short: &str) -> Option<&str> {
        self.entries.get(short).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(s, l)| (s.as_str(), l.as_str()))
    }
}

impl<S: Into<String>, L: Into<String>> FromIterator<(S, L)> for AcronymMap {
    fn from_iter<I: IntoIterator<Item = (S, L)>>(iter: I) -> Self {
        let mut map = AcronymMap::new();
        for (s, l) in iter {
            map.insert(s, l);
        }
        map
    }
}

fn is_valid_short_form(short: &str) -> bool {
    let len = short.chars().count();
    (2..=10).contains(&len)
        && short.split_whitespace().count() <= 2
        && short.chars().next().is_some_and(char::is_alphanumeric)
        && short.chars().any(char::is_alphabetic)
}

fn lower(c: char) -> char {
    c.to_lowercase().next().unwrap_or(c)
}

/// Matches the short form's characters right to left inside the candidate;
/// the first short-form character must begin a word. Returns the shortest
/// suffix of `long` (cut at a word boundary) that contains the match.
fn best_long_form(short: &str, long: &str) -> Option<String> {
    let s: Vec<char> = short.chars().collect();
    let l: Vec<char> = long.chars().collect();
    let mut si = s.len() as isize - 1;
    let mut li = l.len() as isize - 1;
    while si >= 0 {
        let c = lower(s[si as usize]);
        if !c.is_alphanumeric() {
            si -= 1;
            continue;
        }
        while li >= 0
            && (lower(l[li as usize]) != c
                || (si == 0 && li > 0 && l[li as usize - 1].is_alphanumeric()))
        {
            li -= 1;
        }
        if li < 0 {
            return None;
        }
        li -= 1;
        si -= 1;
    }
    let start = l[..(li + 1) as usize]
        .iter()
        .rposition(|&c| c == ' ')
        .map_or(0, |p| p + 1);
    Some(l[start..].iter().collect())
}

const CLAUSE_BREAKS: [&str; 6] = [". ", "? ", "! ", "; ", "(", ")"];

pub fn build_acronym_map(text: &str) -> AcronymMap {
    let mut map = AcronymMap::new();
    let mut search_from = 0;
    while let Some(rel) = text[search_from..].find('(') {
        let open = search_from + rel;
        search_from = open + 1;
        let Some(close_rel) = text[open + 1..].find(')') else {
            break;
        };
        let inner = &text[open + 1..open + 1 + close_rel];
        if inner.contains('(') {
            continue;
        }
        let short = inner.split([';', ',']).next().unwrap_or_default().trim();
        if !is_valid_short_form(short) {
            continue;
        }

        let before = &text[..open];
        let clause_start = CLAUSE_BREAKS
            .iter()
            .filter_map(|b| before.rfind(b).map(|p| p + b.len()))
            .max()
            .unwrap_or(0);
        let short_len = short.chars().count();
        let window = (short_len + 5).min(2 * short_len);
        let words: Vec<&str> = before[clause_start..].split_whitespace().collect();
        let candidate = words[words.len().saturating_sub(window)..].join(" ");
        if candidate.is_empty() {
            continue;
        }
        let Some(long) = best_long_form(short, &candidate) else {
            continue;
        };

        let long_words = long
            .split(|c: char| c.is_whitespace() || c == '-')
            .filter(|w| !w.is_empty())
            .count();
        let short_size = short.chars().filter(|c| c.is_alphanumeric()).count();
        if long.chars().count() < short_len
            || long.contains(&format!("{short} "))
            || long.ends_with(short)
            || long_words > 2 * short_size
            || long_words > short_size + 5
            || short_size > 10
        {
            continue;
        }
        map.insert(short, long);
    }
    map
}
