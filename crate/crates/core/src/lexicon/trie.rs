use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::CategoryId;

/// Character trie over patterns. Each node carries the categories of the
/// literal pattern ending there and of the wildcard stem ending there.
#[derive(Debug, Clone)]
pub(super) struct StemTrie {
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Default)]
struct Node {
    children: BTreeMap<char, usize>,
    literal: BTreeSet<CategoryId>,
    wildcard: BTreeSet<CategoryId>,
}

impl Default for StemTrie {
    fn default() -> Self {
        StemTrie {
            nodes: vec![Node::default()],
        }
    }
}

impl StemTrie {
    fn node_for(&mut self, key: &str) -> usize {
        let mut cur = 0;
        for ch in key.chars() {
            cur = match self.nodes[cur].children.get(&ch) {
                Some(&next) => next,
                None => {
                    let next = self.nodes.len();
                    self.nodes.push(Node::default());
                    self.nodes[cur].children.insert(ch, next);
                    next
                }
            };
        }
        cur
    }

    pub(super) fn insert_literal(&mut self, pattern: &str, cats: &BTreeSet<CategoryId>) {
        let n = self.node_for(pattern);
        self.nodes[n].literal.extend(cats.iter().copied());
    }

    pub(super) fn insert_wildcard(&mut self, stem: &str, cats: &BTreeSet<CategoryId>) {
        let n = self.node_for(stem);
        self.nodes[n].wildcard.extend(cats.iter().copied());
    }

    /// Walks `token` from the root, picking up wildcard categories at every
    /// node on the path and the literal categories at the final node.
    pub(super) fn collect(&self, token: &str, out: &mut BTreeSet<CategoryId>) {
        let mut cur = 0;
        // root holds nothing: stems are non-empty
        for ch in token.chars() {
            match self.nodes[cur].children.get(&ch) {
                Some(&next) => cur = next,
                None => return,
            }
            out.extend(self.nodes[cur].wildcard.iter().copied());
        }
        if cur != 0 {
            out.extend(self.nodes[cur].literal.iter().copied());
        }
    }
}
