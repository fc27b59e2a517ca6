//! Posts, audience scopes and the editing session.
//!
//! A [`Session`] holds the imported posts plus a [`FinalizedSnapshot`] of
//! the per-audience token bags taken at the last [`Session::finalize`].
//! Overall profiles are always computed from that snapshot, so they stay
//! fixed while posts are being edited; per-post analyses always use the
//! current text.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::analyzer::Analyzer;
use crate::attribution::{rank_posts, Direction, PostAnalysis, PostRanking};
use crate::model::{profile_of_bag, ModelError, ProfilePercentiles};
use crate::text::{tokenize, TokenBag};
use crate::traits::{PerTrait, Trait};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Audience {
    Public,
    Friends,
    OnlyMe,
}

impl Audience {
    pub const ALL: [Audience; 3] = [Audience::Public, Audience::Friends, Audience::OnlyMe];

    pub const fn name(self) -> &'static str {
        match self {
            Audience::Public => "public",
            Audience::Friends => "friends",
            Audience::OnlyMe => "only_me",
        }
    }

    const fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for Audience {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Audience {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Audience::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| s.to_string())
    }
}

/// A subset of the three audiences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AudienceSet(u8);

impl AudienceSet {
    pub const EMPTY: AudienceSet = AudienceSet(0);
    pub const ALL: AudienceSet = AudienceSet(0b111);

    pub fn only(a: Audience) -> Self {
        AudienceSet(a.bit())
    }

    pub fn contains(self, a: Audience) -> bool {
        self.0 & a.bit() != 0
    }

    pub fn insert(&mut self, a: Audience) {
        self.0 |= a.bit();
    }

    pub fn union(self, other: AudienceSet) -> Self {
        AudienceSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Audience> {
        Audience::ALL.into_iter().filter(move |a| self.contains(*a))
    }
}

impl FromIterator<Audience> for AudienceSet {
    fn from_iter<I: IntoIterator<Item = Audience>>(iter: I) -> Self {
        let mut s = AudienceSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Display for AudienceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(a.name())?;
        }
        Ok(())
    }
}

impl FromStr for AudienceSet {
    type Err = String;

    /// Comma-separated audience names; `all` selects every audience and an
    /// empty string selects none.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "all" {
            return Ok(AudienceSet::ALL);
        }
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(Audience::from_str)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PostState {
    Active,
    Hidden,
    Deleted,
}

impl FromStr for PostState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "active" => Ok(PostState::Active),
            "hidden" => Ok(PostState::Hidden),
            "deleted" => Ok(PostState::Deleted),
            other => Err(other.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    id: String,
    created_time: DateTime<Utc>,
    text: String,
    audience: Audience,
    state: PostState,
    from_self: bool,
    original_text: String,
}

impl Post {
    pub fn new(
        id: impl Into<String>,
        created_time: DateTime<Utc>,
        text: impl Into<String>,
        audience: Audience,
        from_self: bool,
    ) -> Self {
        let text = text.into();
        Post {
            id: id.into(),
            created_time,
            original_text: text.clone(),
            text,
            audience,
            state: PostState::Active,
            from_self,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn created_time(&self) -> &DateTime<Utc> {
        &self.created_time
    }

    /// Current text; empty once the post is deleted.
    pub fn text(&self) -> &str {
        &self.text
    }

    /// Text as imported.
    pub fn original_text(&self) -> &str {
        &self.original_text
    }

    pub fn audience(&self) -> Audience {
        self.audience
    }

    pub fn state(&self) -> PostState {
        self.state
    }

    pub fn from_self(&self) -> bool {
        self.from_self
    }

    /// Active and authored by the account owner.
    pub fn is_analyzable(&self) -> bool {
        self.state == PostState::Active && self.from_self
    }

    pub fn bag(&self) -> TokenBag {
        tokenize(&self.text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("post {0:?} not found")]
    NotFound(String),
    #[error("post {0:?} has been deleted")]
    Deleted(String),
    #[error("post {0:?} was not written by the account owner")]
    NotOwnPost(String),
    #[error("post {0:?} is already deleted")]
    AlreadyDeleted(String),
    #[error("duplicate post id {0:?}")]
    DuplicateId(String),
}

/// Per-audience token bags of the analyzable posts at the last finalize.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalizedSnapshot {
    pub public: TokenBag,
    pub friends: TokenBag,
    pub only_me: TokenBag,
}

impl FinalizedSnapshot {
    fn capture<'a>(posts: impl IntoIterator<Item = &'a Post>) -> Self {
        let mut snap = FinalizedSnapshot::default();
        for p in posts.into_iter().filter(|p| p.is_analyzable()) {
            snap.bag_mut(p.audience).merge(&p.bag());
        }
        snap
    }

    pub fn bag(&self, a: Audience) -> &TokenBag {
        match a {
            Audience::Public => &self.public,
            Audience::Friends => &self.friends,
            Audience::OnlyMe => &self.only_me,
        }
    }

    fn bag_mut(&mut self, a: Audience) -> &mut TokenBag {
        match a {
            Audience::Public => &mut self.public,
            Audience::Friends => &mut self.friends,
            Audience::OnlyMe => &mut self.only_me,
        }
    }

    pub fn merged(&self, audiences: AudienceSet) -> TokenBag {
        crate::text::merge_bags(audiences.iter().map(|a| self.bag(a)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum AuditAction {
    EditText { before: String, after: String },
    SetState { before: PostState, after: PostState },
    SetAudience { before: Audience, after: Audience },
    Finalize { dirty: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub seq: u64,
    pub at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post_id: Option<String>,
    #[serde(flatten)]
    pub action: AuditAction,
}

/// An editing session over one imported timeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    posts: BTreeMap<String, Post>,
    dirty: BTreeSet<String>,
    finalized: FinalizedSnapshot,
    audit: Vec<AuditEntry>,
}

impl Session {
    /// Builds a session and takes the initial finalized snapshot.
    pub fn from_posts(posts: impl IntoIterator<Item = Post>) -> Result<Self, CorpusError> {
        let mut map = BTreeMap::new();
        for p in posts {
            if map.contains_key(&p.id) {
                return Err(CorpusError::DuplicateId(p.id));
            }
            map.insert(p.id.clone(), p);
        }
        let finalized = FinalizedSnapshot::capture(map.values());
        Ok(Session {
            posts: map,
            dirty: BTreeSet::new(),
            finalized,
            audit: Vec::new(),
        })
    }

    /// Rebuilds a session by applying a recorded audit log to freshly
    /// imported posts.
    pub fn replay(posts: impl IntoIterator<Item = Post>, log: &[AuditEntry]) -> Result<Self, CorpusError> {
        let mut s = Session::from_posts(posts)?;
        for entry in log {
            let id = entry.post_id.as_deref().unwrap_or_default();
            match &entry.action {
                AuditAction::EditText { after, .. } => {
                    s.edit_post(id, after, entry.at)?;
                }
                AuditAction::SetState { after, .. } => s.set_state(id, *after, entry.at)?,
                AuditAction::SetAudience { after, .. } => s.set_audience(id, *after, entry.at)?,
                AuditAction::Finalize { .. } => s.finalize(entry.at),
            }
        }
        Ok(s)
    }

    fn log(&mut self, at: DateTime<Utc>, post_id: Option<&str>, action: AuditAction) {
        let seq = self.audit.len() as u64 + 1;
        self.audit.push(AuditEntry {
            seq,
            at,
            post_id: post_id.map(Into::into),
            action,
        });
    }

    fn lookup(&self, id: &str) -> Result<&Post, CorpusError> {
        self.posts.get(id).ok_or_else(|| CorpusError::NotFound(id.into()))
    }

    fn lookup_mut(&mut self, id: &str) -> Result<&mut Post, CorpusError> {
        self.posts.get_mut(id).ok_or_else(|| CorpusError::NotFound(id.into()))
    }

    /// A post that has not been deleted.
    pub fn post(&self, id: &str) -> Result<&Post, CorpusError> {
        let p = self.lookup(id)?;
        if p.state == PostState::Deleted {
            return Err(CorpusError::Deleted(id.into()));
        }
        Ok(p)
    }

    /// Every stored post including tombstones and posts by others.
    pub fn all_posts(&self) -> impl Iterator<Item = &Post> {
        self.posts.values()
    }

    /// Active, self-authored posts.
    pub fn analyzable_posts(&self) -> impl Iterator<Item = &Post> {
        self.posts.values().filter(|p| p.is_analyzable())
    }

    pub fn dirty(&self) -> &BTreeSet<String> {
        &self.dirty
    }

    /// True when there are changes the finalized profile does not reflect.
    pub fn is_stale(&self) -> bool {
        !self.dirty.is_empty()
    }

    pub fn audit(&self) -> &[AuditEntry] {
        &self.audit
    }

    pub fn finalized(&self) -> &FinalizedSnapshot {
        &self.finalized
    }

    /// Replaces the text of an own, non-deleted post. The overall profile is
    /// left alone until the next [`finalize`](Self::finalize).
    pub fn edit_post(&mut self, id: &str, text: &str, now: DateTime<Utc>) -> Result<&Post, CorpusError> {
        let post = self.lookup_mut(id)?;
        if post.state == PostState::Deleted {
            return Err(CorpusError::Deleted(id.into()));
        }
        if !post.from_self {
            return Err(CorpusError::NotOwnPost(id.into()));
        }
        let before = core::mem::replace(&mut post.text, text.into());
        self.dirty.insert(id.into());
        self.log(
            now,
            Some(id),
            AuditAction::EditText {
                before,
                after: text.into(),
            },
        );
        self.lookup(id)
    }

    /// Hides, restores or deletes a post. Deletion is terminal and clears
    /// the post's current text.
    pub fn set_state(&mut self, id: &str, state: PostState, now: DateTime<Utc>) -> Result<(), CorpusError> {
        let post = self.lookup_mut(id)?;
        let before = post.state;
        if before == PostState::Deleted {
            return Err(CorpusError::AlreadyDeleted(id.into()));
        }
        post.state = state;
        if state == PostState::Deleted {
            post.text.clear();
        }
        if before != state {
            self.dirty.insert(id.into());
        }
        self.log(now, Some(id), AuditAction::SetState { before, after: state });
        Ok(())
    }

    pub fn set_audience(&mut self, id: &str, audience: Audience, now: DateTime<Utc>) -> Result<(), CorpusError> {
        let post = self.lookup_mut(id)?;
        if post.state == PostState::Deleted {
            return Err(CorpusError::Deleted(id.into()));
        }
        let before = post.audience;
        post.audience = audience;
        if before != audience {
            self.dirty.insert(id.into());
        }
        self.log(
            now,
            Some(id),
            AuditAction::SetAudience {
                before,
                after: audience,
            },
        );
        Ok(())
    }

    /// Re-captures the finalized snapshot from the current posts and clears
    /// the dirty set.
    pub fn finalize(&mut self, now: DateTime<Utc>) {
        self.finalized = FinalizedSnapshot::capture(self.posts.values());
        let dirty = core::mem::take(&mut self.dirty).into_iter().collect();
        self.log(now, None, AuditAction::Finalize { dirty });
    }

    /// [`finalize`](Self::finalize) followed by
    /// [`finalized_profile`](Self::finalized_profile).
    pub fn finalize_profile(
        &mut self,
        audiences: AudienceSet,
        analyzer: &Analyzer,
        now: DateTime<Utc>,
    ) -> Result<ProfilePercentiles, ModelError> {
        self.finalize(now);
        self.finalized_profile(audiences, analyzer)
    }

    /// Overall profile as of the last finalize.
    pub fn finalized_profile(&self, audiences: AudienceSet, analyzer: &Analyzer) -> Result<ProfilePercentiles, ModelError> {
        profile_of_bag(&self.finalized.merged(audiences), analyzer)
    }

    /// Current per-audience bags of analyzable posts (ignores the snapshot).
    pub fn current_bag(&self, audiences: AudienceSet) -> TokenBag {
        let mut bag = TokenBag::new();
        for p in self.analyzable_posts().filter(|p| audiences.contains(p.audience)) {
            bag.merge(&p.bag());
        }
        bag
    }

    /// Word and post level analysis of the current text of an own,
    /// non-deleted post, including the leave-one-out diagnostic.
    pub fn analyze_post(&self, id: &str, analyzer: &Analyzer) -> Result<PostAnalysis, CorpusError> {
        let post = self.post(id)?;
        if !post.from_self {
            return Err(CorpusError::NotOwnPost(id.into()));
        }
        let mut analysis = PostAnalysis::compute(post, analyzer.lexicon(), analyzer.model());
        if post.is_analyzable() {
            analysis.leave_one_out_pct_delta = self.leave_one_out(post, analyzer).ok();
        }
        Ok(analysis)
    }

    fn leave_one_out(&self, post: &Post, analyzer: &Analyzer) -> Result<PerTrait<f64>, ModelError> {
        let mut without = TokenBag::new();
        for p in self.analyzable_posts().filter(|p| p.id != post.id) {
            without.merge(&p.bag());
        }
        let mut with = without.clone();
        with.merge(&post.bag());
        let a = profile_of_bag(&with, analyzer)?;
        let b = profile_of_bag(&without, analyzer)?;
        Ok(PerTrait::from_fn(|t| a.pct[t] - b.pct[t]))
    }

    /// Ranking of the analyzable posts; hidden and deleted posts drop out
    /// immediately, without waiting for a finalize.
    pub fn ranking(&self, trait_: Trait, direction: Direction, analyzer: &Analyzer) -> PostRanking {
        rank_posts(self.analyzable_posts(), trait_, direction, analyzer.lexicon(), analyzer.model())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{CategoryId, Lexicon};
    use crate::model::{ReferencePool, TraitModel};
    use chrono::TimeZone;

    fn t(secs: i64) -> DateTime<Utc> {
        Utc.timestamp_opt(secs, 0).unwrap()
    }

    fn analyzer() -> Analyzer {
        let lex = Lexicon::parse("%\n121\tInclusive\n%\nus\t121\nwith\t121\nalong\t121\n").unwrap();
        let model = TraitModel::new().with_weight(Trait::Agreeableness, CategoryId(121), 0.8);
        let pool = ReferencePool::new(PerTrait::from_fn(|_| alloc::vec![-0.1, 0.0, 0.1, 0.2, 0.3]), "t").unwrap();
        Analyzer::new(lex, model, pool).unwrap()
    }

    fn session() -> Session {
        Session::from_posts([
            Post::new("p1", t(1), "come with us", Audience::Public, true),
            Post::new("p2", t(2), "along the river with friends", Audience::Friends, true),
            Post::new("p3", t(3), "tagged you with us", Audience::Public, false),
            Post::new("p4", t(4), "dear diary", Audience::OnlyMe, true),
        ])
        .unwrap()
    }

    #[test]
    fn audience_set_parsing() {
        let s: AudienceSet = "public,friends".parse().unwrap();
        assert!(s.contains(Audience::Public) && s.contains(Audience::Friends) && !s.contains(Audience::OnlyMe));
        assert_eq!(s.to_string(), "public,friends");
        assert_eq!("all".parse::<AudienceSet>(), Ok(AudienceSet::ALL));
        assert_eq!("".parse::<AudienceSet>(), Ok(AudienceSet::EMPTY));
        assert!("public,enemies".parse::<AudienceSet>().is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let r = Session::from_posts([
            Post::new("p1", t(1), "a", Audience::Public, true),
            Post::new("p1", t(2), "b", Audience::Public, true),
        ]);
        assert_eq!(r, Err(CorpusError::DuplicateId("p1".into())));
    }

    #[test]
    fn others_posts_are_inert() {
        let s = session();
        assert_eq!(s.analyzable_posts().count(), 3);
        assert_eq!(s.current_bag(AudienceSet::ALL).count("tagged"), 0);
        let mut s = s;
        assert_eq!(s.edit_post("p3", "x", t(9)).unwrap_err(), CorpusError::NotOwnPost("p3".into()));
        assert!(s.audit().is_empty());
    }

    #[test]
    fn edit_defers_overall_profile() {
        let a = analyzer();
        let mut s = session();
        let before = s.finalized_profile(AudienceSet::ALL, &a).unwrap();
        s.edit_post("p1", "", t(10)).unwrap();
        let analysis = s.analyze_post("p1", &a).unwrap();
        assert!(analysis.words.is_empty());
        assert_eq!(analysis.contribution.per_trait[Trait::Agreeableness].net, 0.0);
        assert_eq!(s.finalized_profile(AudienceSet::ALL, &a).unwrap(), before);
        assert!(s.is_stale());

        let after = s.finalize_profile(AudienceSet::ALL, &a, t(11)).unwrap();
        assert!(!s.is_stale());
        assert_eq!(after.word_count, before.word_count - 3);
        assert_eq!(s.audit().len(), 2);
    }

    #[test]
    fn edit_to_same_text_is_still_dirty() {
        let a = analyzer();
        let mut s = session();
        let before = s.analyze_post("p1", &a).unwrap();
        s.edit_post("p1", "come with us", t(5)).unwrap();
        assert!(s.dirty().contains("p1"));
        assert_eq!(s.analyze_post("p1", &a).unwrap(), before);
    }

    #[test]
    fn delete_is_terminal() {
        let mut s = session();
        s.set_state("p1", PostState::Deleted, t(5)).unwrap();
        assert_eq!(s.set_state("p1", PostState::Active, t(6)), Err(CorpusError::AlreadyDeleted("p1".into())));
        assert_eq!(s.set_audience("p1", Audience::OnlyMe, t(6)), Err(CorpusError::Deleted("p1".into())));
        assert_eq!(s.edit_post("p1", "back", t(6)).unwrap_err(), CorpusError::Deleted("p1".into()));
        assert_eq!(s.post("p1").unwrap_err(), CorpusError::Deleted("p1".into()));
        assert_eq!(s.set_state("nope", PostState::Hidden, t(6)), Err(CorpusError::NotFound("nope".into())));
        assert_eq!(s.audit().len(), 1);
        assert!(s.all_posts().find(|p| p.id() == "p1").unwrap().text().is_empty());
    }

    #[test]
    fn hide_drops_from_ranking_immediately() {
        let a = analyzer();
        let mut s = session();
        s.set_state("p1", PostState::Hidden, t(5)).unwrap();
        let r = s.ranking(Trait::Agreeableness, Direction::Descending, &a);
        assert!(r.ids().all(|id| id != "p1"));
        // still counted in the overall until finalize
        let o = s.finalized_profile(AudienceSet::ALL, &a).unwrap();
        let f = s.finalize_profile(AudienceSet::ALL, &a, t(6)).unwrap();
        assert_eq!(o.word_count - f.word_count, 3);
    }

    #[test]
    fn audience_move() {
        let a = analyzer();
        let mut s = session();
        let all = s.finalized_profile(AudienceSet::ALL, &a).unwrap();
        s.set_audience("p1", Audience::OnlyMe, t(5)).unwrap();
        s.finalize(t(6));
        assert_eq!(s.finalized().public.total(), 0);
        assert_eq!(s.finalized().only_me.total(), 5);
        assert_eq!(s.finalized_profile(AudienceSet::ALL, &a).unwrap(), all);

        s.set_audience("p1", Audience::OnlyMe, t(7)).unwrap();
        assert!(!s.is_stale());
        assert_eq!(s.audit().len(), 3);
    }

    #[test]
    fn replay_reproduces_session() {
        let mut s = session();
        s.edit_post("p1", "with with us", t(5)).unwrap();
        s.set_state("p2", PostState::Hidden, t(6)).unwrap();
        s.set_audience("p4", Audience::Public, t(7)).unwrap();
        s.finalize(t(8));
        s.set_state("p4", PostState::Deleted, t(9)).unwrap();
        let replayed = Session::replay(session().all_posts().cloned().collect::<Vec<_>>(), s.audit()).unwrap();
        assert_eq!(replayed, s);
    }

    #[test]
    fn analysis_refuses_others_and_deleted() {
        let a = analyzer();
        let mut s = session();
        assert_eq!(s.analyze_post("p3", &a).unwrap_err(), CorpusError::NotOwnPost("p3".into()));
        s.set_state("p2", PostState::Deleted, t(1)).unwrap();
        assert_eq!(s.analyze_post("p2", &a).unwrap_err(), CorpusError::Deleted("p2".into()));
        let loo = s.analyze_post("p1", &a).unwrap().leave_one_out_pct_delta.unwrap();
        assert!(loo[Trait::Agreeableness] > 0.0);
    }
}
