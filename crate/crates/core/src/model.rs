//! Linear trait model, reference-pool percentile calibration and the
//! overall profile.

use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

use crate::analyzer::Analyzer;
use crate::corpus::{AudienceSet, Post};
use crate::lexicon::CategoryId;
use crate::text::{category_scores, CategoryScores, TokenBag};
use crate::traits::{PerTrait, Trait};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("reference pool for {0} is empty")]
    EmptyPool(Trait),
    #[error("{trait_}: category {category} weighted more than once")]
    DuplicateWeight { trait_: Trait, category: CategoryId },
    #[error("{0}: non-finite coefficient")]
    NonFinite(Trait),
    #[error("model references category {0} which the lexicon does not declare")]
    UnknownCategory(CategoryId),
}

/// Signed per-category weights for each trait plus an intercept.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TraitModel {
    weights: PerTrait<Vec<(CategoryId, f64)>>,
    intercepts: PerTrait<f64>,
}

impl TraitModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_intercept(&mut self, t: Trait, value: f64) -> Result<(), ModelError> {
        if !value.is_finite() {
            return Err(ModelError::NonFinite(t));
        }
        self.intercepts[t] = value;
        Ok(())
    }

    pub fn add_weight(&mut self, t: Trait, category: CategoryId, weight: f64) -> Result<(), ModelError> {
        if !weight.is_finite() {
            return Err(ModelError::NonFinite(t));
        }
        if self.weights[t].iter().any(|(c, _)| *c == category) {
            return Err(ModelError::DuplicateWeight { trait_: t, category });
        }
        self.weights[t].push((category, weight));
        Ok(())
    }

    /// Builder-style [`add_weight`](Self::add_weight), panicking on invalid input.
    pub fn with_weight(mut self, t: Trait, category: CategoryId, weight: f64) -> Self {
        self.add_weight(t, category, weight).expect("valid weight");
        self
    }

    pub fn weights(&self, t: Trait) -> &[(CategoryId, f64)] {
        &self.weights[t]
    }

    pub fn weight(&self, t: Trait, category: CategoryId) -> Option<f64> {
        self.weights[t].iter().find(|(c, _)| *c == category).map(|&(_, w)| w)
    }

    pub fn intercept(&self, t: Trait) -> f64 {
        self.intercepts[t]
    }

    /// Every category the model refers to, possibly with repeats.
    pub fn categories(&self) -> impl Iterator<Item = CategoryId> + '_ {
        self.weights.0.iter().flat_map(|w| w.iter().map(|&(c, _)| c))
    }

    /// Copy with every weight (not the intercept) of `t` multiplied by `factor`.
    pub fn scaled(&self, t: Trait, factor: f64) -> Self {
        let mut out = self.clone();
        for (_, w) in &mut out.weights[t] {
            *w *= factor;
        }
        out
    }
}

/// Raw (uncalibrated) linear trait scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TraitVector {
    pub raw: PerTrait<f64>,
}

/// `raw(t) = intercept(t) + Σ weight(t, c) · score(c)`.
pub fn raw_trait_scores(scores: &CategoryScores, model: &TraitModel) -> TraitVector {
    TraitVector {
        raw: PerTrait::from_fn(|t| {
            model.weights(t).iter().fold(model.intercept(t), |acc, &(c, w)| acc + w * scores.get(c))
        }),
    }
}

/// Ascending raw-score samples per trait used to turn raw scores into
/// percentiles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferencePool {
    samples: PerTrait<Vec<f64>>,
    provenance: String,
}

impl ReferencePool {
    /// Sorts each trait's samples. Non-finite samples are rejected.
    pub fn new(mut samples: PerTrait<Vec<f64>>, provenance: impl Into<String>) -> Result<Self, ModelError> {
        for (i, list) in samples.0.iter_mut().enumerate() {
            if list.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::NonFinite(Trait::ALL[i]));
            }
            list.sort_by(f64::total_cmp);
        }
        Ok(ReferencePool {
            samples,
            provenance: provenance.into(),
        })
    }

    pub fn samples(&self, t: Trait) -> &[f64] {
        &self.samples[t]
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Midpoint empirical CDF of `value` against one trait's samples, in
    /// percent: `100 · (#below + ½ · #equal) / n`.
    pub fn percentile_of(&self, t: Trait, value: f64) -> Result<f64, ModelError> {
        let s = &self.samples[t];
        if s.is_empty() {
            return Err(ModelError::EmptyPool(t));
        }
        let below = s.partition_point(|&x| x < value);
        let not_above = s.partition_point(|&x| x <= value);
        let equal = not_above - below;
        Ok(100.0 * (below as f64 + 0.5 * equal as f64) / s.len() as f64)
    }
}

pub fn percentile(raw: &TraitVector, pool: &ReferencePool) -> Result<PerTrait<f64>, ModelError> {
    let mut out = PerTrait::default();
    for t in Trait::ALL {
        out[t] = pool.percentile_of(t, raw.raw[t])?;
    }
    Ok(out)
}

/// Calibrated profile over a selection of posts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilePercentiles {
    pub pct: PerTrait<f64>,
    pub raw: PerTrait<f64>,
    pub word_count: u64,
    pub sufficient: bool,
}

/// Profile of an already merged bag of tokens.
pub fn profile_of_bag(bag: &TokenBag, analyzer: &Analyzer) -> Result<ProfilePercentiles, ModelError> {
    let scores = category_scores(bag, analyzer.lexicon());
    let raw = raw_trait_scores(&scores, analyzer.model());
    let pct = percentile(&raw, analyzer.pool())?;
    Ok(ProfilePercentiles {
        pct,
        raw: raw.raw,
        word_count: bag.total(),
        sufficient: bag.total() >= analyzer.sufficiency_threshold(),
    })
}

/// Pools the token bags of every analyzable post whose audience is in
/// `audiences` and scores the result.
///
/// Posts that are hidden, deleted or authored by someone else are skipped.
pub fn profile<'a>(
    posts: impl IntoIterator<Item = &'a Post>,
    audiences: AudienceSet,
    analyzer: &Analyzer,
) -> Result<ProfilePercentiles, ModelError> {
    let mut bag = TokenBag::new();
    for post in posts {
        if post.is_analyzable() && audiences.contains(post.audience()) {
            bag.merge(&post.bag());
        }
    }
    profile_of_bag(&bag, analyzer)
}

impl TraitModel {
    /// Fails when the model weights a category that `lexicon` lacks.
    pub fn check_against(&self, lexicon: &crate::Lexicon) -> Result<(), ModelError> {
        match self.categories().find(|c| !lexicon.contains_category(*c)) {
            Some(c) => Err(ModelError::UnknownCategory(c)),
            None => Ok(()),
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use proptest::prelude::*;

    const INCL: CategoryId = CategoryId(121);

    fn scores(pairs: &[(u32, f64)]) -> CategoryScores {
        CategoryScores::from_map(pairs.iter().map(|&(c, s)| (CategoryId(c), s)).collect::<BTreeMap<_, _>>())
    }

    fn pool_o(samples: &[f64]) -> ReferencePool {
        let mut p = PerTrait::from_fn(|_| alloc::vec![0.0]);
        p[Trait::Openness] = samples.to_vec();
        ReferencePool::new(p, "test").unwrap()
    }

    #[test]
    fn single_weight_linear() {
        let m = TraitModel::new().with_weight(Trait::Agreeableness, INCL, 0.8);
        let r = raw_trait_scores(&scores(&[(121, 0.5)]), &m);
        assert_eq!(r.raw[Trait::Agreeableness], 0.4);
        for t in [Trait::Openness, Trait::Conscientiousness, Trait::Extraversion, Trait::Neuroticism] {
            assert_eq!(r.raw[t], 0.0);
        }
    }

    #[test]
    fn zero_scores_give_intercepts() {
        let mut m = TraitModel::new().with_weight(Trait::Openness, INCL, 2.0);
        m.set_intercept(Trait::Openness, 0.25).unwrap();
        m.set_intercept(Trait::Neuroticism, -1.0).unwrap();
        let r = raw_trait_scores(&CategoryScores::default(), &m);
        for t in Trait::ALL {
            assert_eq!(r.raw[t], m.intercept(t));
        }
    }

    #[test]
    fn signed_weights_cancel() {
        let m = TraitModel::new()
            .with_weight(Trait::Neuroticism, CategoryId(1), 1.0)
            .with_weight(Trait::Neuroticism, CategoryId(2), -0.5);
        let r = raw_trait_scores(&scores(&[(1, 0.2), (2, 0.4)]), &m);
        assert_eq!(r.raw[Trait::Neuroticism], 0.0);
    }

    #[test]
    fn model_validation() {
        let mut m = TraitModel::new();
        m.add_weight(Trait::Openness, INCL, 1.0).unwrap();
        assert_eq!(
            m.add_weight(Trait::Openness, INCL, 2.0),
            Err(ModelError::DuplicateWeight { trait_: Trait::Openness, category: INCL })
        );
        m.add_weight(Trait::Agreeableness, INCL, 2.0).unwrap();
        assert_eq!(m.add_weight(Trait::Openness, CategoryId(3), f64::NAN), Err(ModelError::NonFinite(Trait::Openness)));
        assert!(m.set_intercept(Trait::Openness, f64::INFINITY).is_err());
    }

    #[test]
    fn percentile_examples() {
        let p = pool_o(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(p.percentile_of(Trait::Openness, 0.25).unwrap(), 50.0);
        assert_eq!(p.percentile_of(Trait::Openness, 0.0).unwrap(), 0.0);
        assert_eq!(p.percentile_of(Trait::Openness, 1.0).unwrap(), 100.0);
        // brute force over [1,2,2,3] at 2: one below, two equal -> 100*(1+1)/4
        let p = pool_o(&[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(p.percentile_of(Trait::Openness, 2.0).unwrap(), 50.0);
    }

    #[test]
    fn empty_pool_errors() {
        let mut samples = PerTrait::from_fn(|_| alloc::vec![0.0]);
        samples[Trait::Extraversion] = Vec::new();
        let pool = ReferencePool::new(samples, "x").unwrap();
        let raw = TraitVector { raw: PerTrait::default() };
        assert_eq!(percentile(&raw, &pool), Err(ModelError::EmptyPool(Trait::Extraversion)));
    }

    #[test]
    fn pool_sorts_and_rejects_nan() {
        let p = pool_o(&[3.0, 1.0, 2.0]);
        assert_eq!(p.samples(Trait::Openness), &[1.0, 2.0, 3.0]);
        let mut bad = PerTrait::from_fn(|_| alloc::vec![0.0]);
        bad[Trait::Openness].push(f64::NAN);
        assert!(ReferencePool::new(bad, "x").is_err());
    }

    proptest! {
        #[test]
        fn percentile_bounded_and_monotone(
            mut samples in proptest::collection::vec(-5.0f64..5.0, 1..200),
            a in -6.0f64..6.0,
            b in -6.0f64..6.0,
        ) {
            samples.sort_by(f64::total_cmp);
            let p = pool_o(&samples);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let plo = p.percentile_of(Trait::Openness, lo).unwrap();
            let phi = p.percentile_of(Trait::Openness, hi).unwrap();
            prop_assert!((0.0..=100.0).contains(&plo));
            prop_assert!((0.0..=100.0).contains(&phi));
            prop_assert!(plo <= phi);
        }

        #[test]
        fn raw_scores_are_affine(
            s1 in proptest::collection::vec(0.0f64..1.0, 4),
            s2 in proptest::collection::vec(0.0f64..1.0, 4),
            w in proptest::collection::vec(-2.0f64..2.0, 4),
            alpha in 0.0f64..1.0,
        ) {
            let mut m = TraitModel::new();
            for (i, wi) in w.iter().enumerate() {
                m.add_weight(Trait::ALL[i % 5], CategoryId(i as u32), *wi).unwrap();
            }
            let mk = |s: &[f64]| CategoryScores::from_map(s.iter().enumerate().map(|(i, v)| (CategoryId(i as u32), *v)).collect());
            let mix: Vec<f64> = s1.iter().zip(&s2).map(|(x, y)| alpha * x + (1.0 - alpha) * y).collect();
            let r1 = raw_trait_scores(&mk(&s1), &m);
            let r2 = raw_trait_scores(&mk(&s2), &m);
            let rm = raw_trait_scores(&mk(&mix), &m);
            for t in Trait::ALL {
                let expect = alpha * r1.raw[t] + (1.0 - alpha) * r2.raw[t];
                prop_assert!((rm.raw[t] - expect).abs() <= 1e-12);
            }
        }

        #[test]
        fn positive_scaling_preserves_order(
            s1 in proptest::collection::vec(0.0f64..1.0, 3),
            s2 in proptest::collection::vec(0.0f64..1.0, 3),
            w in proptest::collection::vec(-2.0f64..2.0, 3),
            k in 0.01f64..100.0,
        ) {
            let mut m = TraitModel::new();
            for (i, wi) in w.iter().enumerate() {
                m.add_weight(Trait::Openness, CategoryId(i as u32), *wi).unwrap();
            }
            let scaled = m.scaled(Trait::Openness, k);
            let mk = |s: &[f64]| CategoryScores::from_map(s.iter().enumerate().map(|(i, v)| (CategoryId(i as u32), *v)).collect());
            let before = raw_trait_scores(&mk(&s1), &m).raw[Trait::Openness] - raw_trait_scores(&mk(&s2), &m).raw[Trait::Openness];
            let after = raw_trait_scores(&mk(&s1), &scaled).raw[Trait::Openness] - raw_trait_scores(&mk(&s2), &scaled).raw[Trait::Openness];
            // compare signs away from rounding noise
            if before.abs() > 1e-9 {
                prop_assert_eq!(before > 0.0, after > 0.0);
            }
        }
    }
}
