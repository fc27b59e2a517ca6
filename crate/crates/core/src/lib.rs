//! Lexicon-driven Big-Five personality scoring over short text posts.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computation: dictionary parsing and wildcard matching, tokenization,
//! the linear trait model with percentile calibration, word/post level
//! attribution, and the in-memory session state machine that tracks
//! edits against the last finalized profile. File formats, persistence,
//! the HTTP service and the CLI live in the `insight` crate.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analyzer;
pub mod attribution;
pub mod corpus;
pub mod lexicon;
pub mod model;
pub mod text;
pub mod traits;

pub use analyzer::{Analyzer, DEFAULT_SUFFICIENCY_THRESHOLD};
pub use attribution::{
    accumulated_contribution, bag_word_attributions, post_contribution, rank_posts,
    word_attributions, word_count_summary, Direction, MatchedCategory, Polarity, PostAnalysis,
    PostContribution, PostRanking, RankedPost, TraitContribution, WordAttribution,
};
pub use corpus::{
    Audience, AudienceSet, AuditAction, AuditEntry, CorpusError, FinalizedSnapshot, Post,
    PostState, Session,
};
pub use lexicon::{Category, CategoryId, Lexicon, LexiconEntry, LexiconError};
pub use model::{
    percentile, profile, profile_of_bag, raw_trait_scores, ModelError, ProfilePercentiles,
    ReferencePool, TraitModel, TraitVector,
};
pub use text::{category_scores, merge_bags, tokenize, tokens, CategoryScores, TokenBag};
pub use traits::{ParseTraitError, PerTrait, Trait};
