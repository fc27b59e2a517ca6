//! Tokenization into bags of words and per-category normalized frequencies.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::lexicon::{CategoryId, Lexicon};

/// Multiset of normalized tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "BTreeMap<String, u64>", into = "BTreeMap<String, u64>")]
pub struct TokenBag {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl TokenBag {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `n` occurrences of `token`. Empty tokens and zero counts are ignored.
    pub fn add(&mut self, token: &str, n: u64) {
        if token.is_empty() || n == 0 {
            return;
        }
        *self.counts.entry(token.into()).or_insert(0) += n;
        self.total += n;
    }

    pub fn merge(&mut self, other: &TokenBag) {
        for (tok, &n) in &other.counts {
            self.add(tok, n);
        }
    }

    pub fn count(&self, token: &str) -> u64 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    /// Total number of token occurrences.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct tokens.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Tokens with their counts, in lexical order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(t, &n)| (t.as_str(), n))
    }
}

impl From<BTreeMap<String, u64>> for TokenBag {
    fn from(map: BTreeMap<String, u64>) -> Self {
        let mut bag = TokenBag::new();
        for (tok, n) in &map {
            bag.add(tok, *n);
        }
        bag
    }
}

impl From<TokenBag> for BTreeMap<String, u64> {
    fn from(bag: TokenBag) -> Self {
        bag.counts
    }
}

impl<'a> FromIterator<&'a str> for TokenBag {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        let mut bag = TokenBag::new();
        for tok in iter {
            bag.add(tok, 1);
        }
        bag
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn looks_like_url(chunk: &str) -> bool {
    let start = chunk.trim_start_matches(|c: char| !c.is_alphanumeric());
    let head: String = start.chars().take(8).flat_map(char::to_lowercase).collect();
    head.starts_with("http://") || head.starts_with("https://") || head.starts_with("www.")
}

/// Splits text into lowercase word tokens, in order of appearance.
///
/// Words are maximal runs of alphanumeric characters. An apostrophe between
/// two word characters stays inside the token, so contractions like
/// `don't` are single tokens (typographic `’` is folded to `'`).
/// Whitespace-delimited chunks that look like URLs are dropped, as are
/// tokens made only of digits. Stop words are kept.
pub fn tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut buf = String::new();

    let flush = |buf: &mut String, out: &mut Vec<String>| {
        if !buf.is_empty() && !buf.chars().all(char::is_numeric) {
            out.push(core::mem::take(buf));
        }
        buf.clear();
    };

    for chunk in text.split_whitespace() {
        if looks_like_url(chunk) {
            continue;
        }
        let mut chars = chunk.chars().peekable();
        while let Some(c) = chars.next() {
            if c.is_alphanumeric() {
                // some lowercase mappings emit combining marks; keep letters only
                buf.extend(c.to_lowercase().filter(|l| l.is_alphanumeric()));
            } else if is_apostrophe(c)
                && !buf.is_empty()
                && chars.peek().is_some_and(|n| n.is_alphanumeric())
            {
                buf.push('\'');
            } else {
                flush(&mut buf, &mut out);
            }
        }
        flush(&mut buf, &mut out);
    }
    out
}

/// Bag of words of `text`, using the rules of [`tokens`].
pub fn tokenize(text: &str) -> TokenBag {
    tokens(text).iter().map(String::as_str).collect()
}

/// Pointwise sum of bags.
pub fn merge_bags<'a>(bags: impl IntoIterator<Item = &'a TokenBag>) -> TokenBag {
    let mut out = TokenBag::new();
    for bag in bags {
        out.merge(bag);
    }
    out
}

/// Normalized category frequencies. Categories not present score 0.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CategoryScores {
    scores: BTreeMap<CategoryId, f64>,
}

impl CategoryScores {
    pub fn from_map(scores: BTreeMap<CategoryId, f64>) -> Self {
        CategoryScores { scores }
    }

    pub fn get(&self, id: CategoryId) -> f64 {
        self.scores.get(&id).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (CategoryId, f64)> + '_ {
        self.scores.iter().map(|(&c, &s)| (c, s))
    }
}

/// Per-category count of matching token occurrences.
pub(crate) fn category_hits(bag: &TokenBag, lexicon: &Lexicon) -> BTreeMap<CategoryId, u64> {
    let mut hits: BTreeMap<CategoryId, u64> = BTreeMap::new();
    for (tok, n) in bag.iter() {
        for cat in lexicon.match_token(tok) {
            *hits.entry(cat).or_insert(0) += n;
        }
    }
    hits
}

/// Fraction of the bag's token occurrences that fall into each category.
///
/// The denominator is the bag's total token count. A token in several
/// categories counts fully toward each. An empty bag scores 0 everywhere.
pub fn category_scores(bag: &TokenBag, lexicon: &Lexicon) -> CategoryScores {
    if bag.is_empty() {
        return CategoryScores::default();
    }
    let total = bag.total() as f64;
    let scores = category_hits(bag, lexicon)
        .into_iter()
        .map(|(c, n)| (c, n as f64 / total))
        .collect();
    CategoryScores { scores }
}
