//! Batch report: profiles, per-post contributions and top/bottom posts.

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use insight_core::{
    post_contribution, Analyzer, Audience, AudienceSet, Direction, ModelError, PerTrait, ProfilePercentiles,
    RankedPost, Session, Trait, TraitContribution,
};
use serde::Serialize;

use crate::config::Provenance;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct ReportProvenance {
    #[serde(flatten)]
    pub data: Provenance,
    pub posts: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WordStats {
    pub posts_total: usize,
    pub posts_analyzed: usize,
    pub posts_by_others: usize,
    pub tokens: u64,
    pub distinct_tokens: usize,
    pub sufficiency_threshold: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PostEntry {
    pub post_id: String,
    pub created_time: DateTime<Utc>,
    pub audience: Audience,
    pub tokens: u64,
    pub per_trait: PerTrait<TraitContribution>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Extremes {
    pub top: Vec<RankedPost>,
    pub bottom: Vec<RankedPost>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub provenance: ReportProvenance,
    pub audiences: String,
    /// Profile over the selected audiences.
    pub profile: ProfilePercentiles,
    pub audience_profiles: BTreeMap<&'static str, ProfilePercentiles>,
    pub word_stats: WordStats,
    pub posts: Vec<PostEntry>,
    pub extremes: PerTrait<Extremes>,
}

impl Report {
    /// Builds the report from a freshly imported session, restricted to
    /// posts in `audiences`. Extremes list at most `top_k` posts each way.
    pub fn build(
        session: &Session,
        analyzer: &Analyzer,
        audiences: AudienceSet,
        top_k: usize,
        provenance: ReportProvenance,
    ) -> Result<Report, ModelError> {
        let profile = session.finalized_profile(audiences, analyzer)?;
        let mut audience_profiles = BTreeMap::new();
        for a in audiences.iter() {
            audience_profiles.insert(a.name(), session.finalized_profile(AudienceSet::only(a), analyzer)?);
        }

        let selected: Vec<_> = session
            .analyzable_posts()
            .filter(|p| audiences.contains(p.audience()))
            .collect();
        let bag = session.current_bag(audiences);
        let word_stats = WordStats {
            posts_total: session.all_posts().count(),
            posts_analyzed: selected.len(),
            posts_by_others: session.all_posts().filter(|p| !p.from_self()).count(),
            tokens: bag.total(),
            distinct_tokens: bag.distinct(),
            sufficiency_threshold: analyzer.sufficiency_threshold(),
        };

        let (lexicon, model) = (analyzer.lexicon(), analyzer.model());
        let mut posts: Vec<PostEntry> = selected
            .iter()
            .map(|p| PostEntry {
                post_id: p.id().to_string(),
                created_time: *p.created_time(),
                audience: p.audience(),
                tokens: p.bag().total(),
                per_trait: post_contribution(p, lexicon, model).per_trait,
            })
            .collect();
        posts.sort_by(|a, b| b.created_time.cmp(&a.created_time).then_with(|| a.post_id.cmp(&b.post_id)));

        let extremes = PerTrait::from_fn(|t: Trait| {
            let rank = |dir| {
                let mut r = insight_core::rank_posts(selected.iter().copied(), t, dir, lexicon, model).posts;
                r.truncate(top_k);
                r
            };
            Extremes {
                top: rank(Direction::Descending),
                bottom: rank(Direction::Ascending),
            }
        });

        Ok(Report {
            schema_version: REPORT_SCHEMA_VERSION,
            provenance,
            audiences: audiences.to_string(),
            profile,
            audience_profiles,
            word_stats,
            posts,
            extremes,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Plain-text table of the selected profile.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "audiences: {}  words: {}  sufficient: {}\n",
            self.audiences, self.profile.word_count, self.profile.sufficient
        );
        out.push_str(&format!("{:<18} {:>10} {:>12}\n", "trait", "percentile", "raw"));
        for t in Trait::ALL {
            out.push_str(&format!("{:<18} {:>10.1} {:>12.6}\n", t.name(), self.profile.pct[t], self.profile.raw[t]));
        }
        out
    }
}
