//! Psycholinguistic dictionary: word categories plus literal and
//! prefix-wildcard patterns.
//!
//! The on-disk format is a LIWC-shaped `.dic` text file:
//!
//! ```text
//! %
//! 121	Inclusive
//! 40	Social
//! %
//! us	121
//! with	121
//! friend*	40
//! ```
//!
//! A pattern ending in `*` matches every token that starts with the stem,
//! the bare stem included. Any other pattern matches only itself.

mod parse;
mod trie;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use self::trie::StemTrie;

/// Numeric key of a dictionary category.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct CategoryId(pub u32);

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Category {
    pub id: CategoryId,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexiconEntry {
    /// Lowercase pattern, with the trailing `*` for wildcard entries.
    pub pattern: String,
    pub categories: BTreeSet<CategoryId>,
}

impl LexiconEntry {
    /// The stem of a wildcard pattern, `None` for literals.
    pub fn wildcard_stem(&self) -> Option<&str> {
        self.pattern.strip_suffix('*')
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: entry references undeclared category {id}")]
    UnknownCategoryId { line: usize, id: CategoryId },
    #[error("line {line}: duplicate pattern {pattern:?} (first seen on line {first_line})")]
    DuplicatePattern {
        line: usize,
        first_line: usize,
        pattern: String,
    },
}

impl LexiconError {
    pub fn line(&self) -> usize {
        match self {
            LexiconError::Syntax { line, .. }
            | LexiconError::UnknownCategoryId { line, .. }
            | LexiconError::DuplicatePattern { line, .. } => *line,
        }
    }
}

/// An immutable, parsed dictionary with a prefix-tree matcher.
#[derive(Debug, Clone)]
pub struct Lexicon {
    categories: BTreeMap<CategoryId, Category>,
    entries: Vec<LexiconEntry>,
    index: StemTrie,
}

impl Lexicon {
    /// Parses dictionary text. LF and CRLF line endings are accepted; blank
    /// lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        parse::parse(text)
    }

    fn from_parts(categories: BTreeMap<CategoryId, Category>, entries: Vec<LexiconEntry>) -> Self {
        let mut index = StemTrie::default();
        for entry in &entries {
            match entry.wildcard_stem() {
                Some(stem) => index.insert_wildcard(stem, &entry.categories),
                None => index.insert_literal(&entry.pattern, &entry.categories),
            }
        }
        Lexicon {
            categories,
            entries,
            index,
        }
    }

    /// Categories of every entry that matches `token`, unioned.
    ///
    /// `token` is expected to be normalized already (see [`crate::tokenize`]).
    pub fn match_token(&self, token: &str) -> BTreeSet<CategoryId> {
        let mut out = BTreeSet::new();
        self.index.collect(token, &mut out);
        out
    }

    pub fn categories(&self) -> impl Iterator<Item = &Category> {
        self.categories.values()
    }

    pub fn category(&self, id: CategoryId) -> Option<&Category> {
        self.categories.get(&id)
    }

    pub fn contains_category(&self, id: CategoryId) -> bool {
        self.categories.contains_key(&id)
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn category_count(&self) -> usize {
        self.categories.len()
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.categories == other.categories && self.entries == other.entries
    }
}
