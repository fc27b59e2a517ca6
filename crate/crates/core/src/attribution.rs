//! Word- and post-level explanations of trait scores, and trait-sorted
//! post rankings.
//!
//! A token's weight on a trait is the sum of the model weights of every
//! category it matches. Weights are per occurrence and do not depend on the
//! length of the post, so contributions add up across posts.

use alloc::string::String;
use alloc::vec::Vec;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::Post;
use crate::lexicon::{CategoryId, Lexicon};
use crate::model::TraitModel;
use crate::text::TokenBag;
use crate::traits::{PerTrait, Trait};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    fn of(weight: f64) -> Option<Polarity> {
        if weight > 0.0 {
            Some(Polarity::Positive)
        } else if weight < 0.0 {
            Some(Polarity::Negative)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedCategory {
    pub category: CategoryId,
    pub weight: f64,
    pub polarity: Polarity,
}

/// One distinct token of a post with its signed trait weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordAttribution {
    pub token: String,
    pub count: u64,
    pub per_trait: PerTrait<f64>,
    pub matched: PerTrait<Vec<MatchedCategory>>,
}

impl WordAttribution {
    pub fn polarity(&self, t: Trait) -> Option<Polarity> {
        Polarity::of(self.per_trait[t])
    }
}

/// Per-token trait weights for one token, `None` when all five are zero.
fn attribute_token(token: &str, count: u64, lexicon: &Lexicon, model: &TraitModel) -> Option<WordAttribution> {
    let cats = lexicon.match_token(token);
    if cats.is_empty() {
        return None;
    }
    let mut per_trait = PerTrait::<f64>::default();
    let mut matched = PerTrait::<Vec<MatchedCategory>>::default();
    for t in Trait::ALL {
        for &(c, w) in model.weights(t) {
            if !cats.contains(&c) {
                continue;
            }
            if let Some(polarity) = Polarity::of(w) {
                per_trait[t] += w;
                matched[t].push(MatchedCategory { category: c, weight: w, polarity });
            }
        }
    }
    if per_trait.0.iter().all(|&w| w == 0.0) {
        return None;
    }
    Some(WordAttribution {
        token: token.into(),
        count,
        per_trait,
        matched,
    })
}

/// Attributions for every distinct token of `bag` with a nonzero weight on
/// some trait, in lexical token order.
pub fn bag_word_attributions(bag: &TokenBag, lexicon: &Lexicon, model: &TraitModel) -> Vec<WordAttribution> {
    bag.iter()
        .filter_map(|(tok, n)| attribute_token(tok, n, lexicon, model))
        .collect()
}

pub fn word_attributions(post: &Post, lexicon: &Lexicon, model: &TraitModel) -> Vec<WordAttribution> {
    bag_word_attributions(&post.bag(), lexicon, model)
}

/// Positive and negative accumulated weight of one trait.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct TraitContribution {
    pub positive: f64,
    pub negative: f64,
    pub net: f64,
    pub pos_word_count: u64,
    pub neg_word_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PostContribution {
    pub post_id: String,
    pub per_trait: PerTrait<TraitContribution>,
}

fn accumulate(words: &[WordAttribution]) -> PerTrait<TraitContribution> {
    let mut out = PerTrait::<TraitContribution>::default();
    for w in words {
        let n = w.count as f64;
        for t in Trait::ALL {
            let v = w.per_trait[t];
            let slot = &mut out[t];
            if v > 0.0 {
                slot.positive += n * v;
                slot.pos_word_count += w.count;
            } else if v < 0.0 {
                slot.negative += n * v;
                slot.neg_word_count += w.count;
            }
        }
    }
    for t in Trait::ALL {
        out[t].net = out[t].positive + out[t].negative;
    }
    out
}

/// Accumulated signed word weights of an arbitrary bag, e.g. a whole corpus.
pub fn accumulated_contribution(bag: &TokenBag, lexicon: &Lexicon, model: &TraitModel) -> PerTrait<TraitContribution> {
    accumulate(&bag_word_attributions(bag, lexicon, model))
}

pub fn post_contribution(post: &Post, lexicon: &Lexicon, model: &TraitModel) -> PostContribution {
    PostContribution {
        post_id: post.id().into(),
        per_trait: accumulated_contribution(&post.bag(), lexicon, model),
    }
}

/// Occurrence-weighted counts of strictly positive and strictly negative
/// tokens for each trait.
pub fn word_count_summary(post: &Post, lexicon: &Lexicon, model: &TraitModel) -> PerTrait<(u64, u64)> {
    post_contribution(post, lexicon, model)
        .per_trait
        .map(|c| (c.pos_word_count, c.neg_word_count))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[serde(alias = "desc")]
    Descending,
    #[serde(alias = "asc")]
    Ascending,
}

impl core::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "desc" | "descending" => Ok(Direction::Descending),
            "asc" | "ascending" => Ok(Direction::Ascending),
            other => Err(other.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedPost {
    pub post_id: String,
    pub net: f64,
    pub created_time: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PostRanking {
    #[serde(rename = "trait")]
    pub trait_: Trait,
    pub direction: Direction,
    pub posts: Vec<RankedPost>,
}

impl PostRanking {
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.posts.iter().map(|p| p.post_id.as_str())
    }
}

/// Orders analyzable posts by their net contribution to `trait_`.
///
/// Equal nets fall back to newer `created_time` first, then ascending post
/// id, in both directions.
pub fn rank_posts<'a>(
    posts: impl IntoIterator<Item = &'a Post>,
    trait_: Trait,
    direction: Direction,
    lexicon: &Lexicon,
    model: &TraitModel,
) -> PostRanking {
    let mut ranked: Vec<RankedPost> = posts
        .into_iter()
        .filter(|p| p.is_analyzable())
        .map(|p| RankedPost {
            post_id: p.id().into(),
            net: post_contribution(p, lexicon, model).per_trait[trait_].net,
            created_time: *p.created_time(),
        })
        .collect();
    ranked.sort_by(|a, b| {
        let by_net = match direction {
            Direction::Descending => b.net.total_cmp(&a.net),
            Direction::Ascending => a.net.total_cmp(&b.net),
        };
        by_net
            .then_with(|| b.created_time.cmp(&a.created_time))
            .then_with(|| a.post_id.cmp(&b.post_id))
    });
    PostRanking {
        trait_,
        direction,
        posts: ranked,
    }
}

/// Everything the per-post view shows, recomputed from the current text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PostAnalysis {
    pub post_id: String,
    pub words: Vec<WordAttribution>,
    pub contribution: PostContribution,
    /// Diagnostic only: overall percentile with the post minus without it,
    /// over the current analyzable posts of every audience. `None` when the
    /// post itself is not analyzable.
    pub leave_one_out_pct_delta: Option<PerTrait<f64>>,
}

impl PostAnalysis {
    pub fn compute(post: &Post, lexicon: &Lexicon, model: &TraitModel) -> Self {
        let words = word_attributions(post, lexicon, model);
        let contribution = PostContribution {
            post_id: post.id().into(),
            per_trait: accumulate(&words),
        };
        PostAnalysis {
            post_id: post.id().into(),
            words,
            contribution,
            leave_one_out_pct_delta: None,
        }
    }
}
