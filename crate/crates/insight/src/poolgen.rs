//! Synthetic reference pool: raw trait scores of random windows over a
//! text corpus, with Gaussian jitter.

use insight_core::{category_scores, raw_trait_scores, tokens, Analyzer, Lexicon, PerTrait, ReferencePool, TokenBag, TraitModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[derive(Debug, Clone)]
pub struct PoolSpec {
    pub samples: usize,
    pub min_words: usize,
    pub max_words: usize,
    pub noise_sd: f64,
    pub seed: u64,
}

impl Default for PoolSpec {
    fn default() -> Self {
        PoolSpec {
            samples: 2000,
            min_words: 150,
            max_words: 1500,
            noise_sd: 0.01,
            seed: 7,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PoolGenError {
    #[error("corpus has only {have} tokens; need at least {need}")]
    CorpusTooSmall { have: usize, need: usize },
    #[error("invalid window: min_words {0} > max_words {1} or zero")]
    BadWindow(usize, usize),
    #[error("noise standard deviation must be finite and non-negative")]
    BadNoise,
}

/// Draws `spec.samples` windows of `min_words..=max_words` consecutive
/// corpus tokens, scores each with the model and adds independent normal
/// noise per trait. Deterministic for a given seed.
pub fn generate_pool(
    corpus: &str,
    lexicon: &Lexicon,
    model: &TraitModel,
    spec: &PoolSpec,
    provenance: impl Into<String>,
) -> Result<ReferencePool, PoolGenError> {
    if spec.min_words == 0 || spec.min_words > spec.max_words {
        return Err(PoolGenError::BadWindow(spec.min_words, spec.max_words));
    }
    let noise = Normal::new(0.0, spec.noise_sd).map_err(|_| PoolGenError::BadNoise)?;
    let toks = tokens(corpus);
    if toks.len() < spec.min_words {
        return Err(PoolGenError::CorpusTooSmall {
            have: toks.len(),
            need: spec.min_words,
        });
    }
    let max = spec.max_words.min(toks.len());
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut samples: PerTrait<Vec<f64>> = PerTrait::default();
    for _ in 0..spec.samples {
        let len = rng.random_range(spec.min_words..=max);
        let start = rng.random_range(0..=toks.len() - len);
        let bag: TokenBag = toks[start..start + len].iter().map(String::as_str).collect();
        let raw = raw_trait_scores(&category_scores(&bag, lexicon), model);
        for (t, v) in raw.raw.iter() {
            samples[t].push(v + noise.sample(&mut rng));
        }
    }
    Ok(ReferencePool::new(samples, provenance).expect("finite samples"))
}

/// Convenience wrapper taking the lexicon and model from an analyzer.
pub fn generate_pool_for(analyzer: &Analyzer, corpus: &str, spec: &PoolSpec, provenance: &str) -> Result<ReferencePool, PoolGenError> {
    generate_pool(corpus, analyzer.lexicon(), analyzer.model(), spec, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use insight_core::{CategoryId, Trait};

    #[test]
    fn deterministic_and_sized() {
        let lex = Lexicon::parse("%\n1\tA\n%\nus\t1\n").unwrap();
        let model = TraitModel::new().with_weight(Trait::Agreeableness, CategoryId(1), 1.0);
        let corpus = "come with us to the river and back with us again ".repeat(40);
        let spec = PoolSpec {
            samples: 50,
            min_words: 10,
            max_words: 40,
            noise_sd: 0.0,
            seed: 3,
        };
        let a = generate_pool(&corpus, &lex, &model, &spec, "t").unwrap();
        let b = generate_pool(&corpus, &lex, &model, &spec, "t").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples(Trait::Agreeableness).len(), 50);
        assert!(a.samples(Trait::Agreeableness).iter().all(|v| (0.0..=1.0).contains(v)));
        assert!(a.samples(Trait::Openness).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rejects_tiny_corpus() {
        let lex = Lexicon::parse("%\n%\n").unwrap();
        let r = generate_pool("a b c", &lex, &TraitModel::new(), &PoolSpec::default(), "t");
        assert!(matches!(r, Err(PoolGenError::CorpusTooSmall { have: 3, .. })));
    }
}
