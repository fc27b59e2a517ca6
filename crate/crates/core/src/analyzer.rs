use crate::lexicon::Lexicon;
use crate::model::{ModelError, ReferencePool, TraitModel};

/// Minimum pooled token count for a profile to be considered reliable.
pub const DEFAULT_SUFFICIENCY_THRESHOLD: u64 = 1000;

/// The loaded data files needed to score text: dictionary, trait model and
/// reference pool.
#[derive(Debug, Clone)]
pub struct Analyzer {
    lexicon: Lexicon,
    model: TraitModel,
    pool: ReferencePool,
    threshold: u64,
}

impl Analyzer {
    /// Checks that every category the model weights is declared in the lexicon.
    pub fn new(lexicon: Lexicon, model: TraitModel, pool: ReferencePool) -> Result<Self, ModelError> {
        model.check_against(&lexicon)?;
        Ok(Analyzer {
            lexicon,
            model,
            pool,
            threshold: DEFAULT_SUFFICIENCY_THRESHOLD,
        })
    }

    pub fn with_sufficiency_threshold(mut self, threshold: u64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn model(&self) -> &TraitModel {
        &self.model
    }

    pub fn pool(&self) -> &ReferencePool {
        &self.pool
    }

    pub fn sufficiency_threshold(&self) -> u64 {
        self.threshold
    }
}
