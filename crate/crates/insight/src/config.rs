//! Loading the dictionary, trait model and reference pool from disk.

use std::fs;
use std::path::{Path, PathBuf};

use insight_core::{Analyzer, Lexicon};
use serde::Serialize;

use crate::formats::{parse_model, parse_pool};

#[derive(Debug, Clone)]
pub struct DataPaths {
    pub lexicon: PathBuf,
    pub model: PathBuf,
    pub pool: PathBuf,
}

/// Short labels recording which data files produced a result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub lexicon: String,
    pub model: String,
    pub pool: String,
}

#[derive(Debug, thiserror::Error)]
#[error("{}: {message}", path.display())]
pub struct ConfigError {
    pub path: PathBuf,
    pub message: String,
    /// True when the file could not be read at all, as opposed to being
    /// readable but invalid.
    pub io: bool,
}

impl ConfigError {
    fn invalid(path: &Path, message: impl ToString) -> Self {
        ConfigError {
            path: path.to_path_buf(),
            message: message.to_string(),
            io: false,
        }
    }
}

pub fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn read(path: &Path) -> Result<String, ConfigError> {
    fs::read_to_string(path).map_err(|e| ConfigError {
        path: path.to_path_buf(),
        message: e.to_string(),
        io: true,
    })
}

impl DataPaths {
    /// Reads and validates all three files, failing on the first bad one.
    pub fn load(&self) -> Result<(Analyzer, Provenance), ConfigError> {
        let lexicon = Lexicon::parse(&read(&self.lexicon)?).map_err(|e| ConfigError::invalid(&self.lexicon, e))?;
        let model = parse_model(&read(&self.model)?).map_err(|e| ConfigError::invalid(&self.model, e))?;
        let pool = parse_pool(&read(&self.pool)?, &file_label(&self.pool)).map_err(|e| ConfigError::invalid(&self.pool, e))?;
        let provenance = Provenance {
            lexicon: file_label(&self.lexicon),
            model: file_label(&self.model),
            pool: pool.provenance().to_string(),
        };
        let analyzer = Analyzer::new(lexicon, model, pool).map_err(|e| ConfigError::invalid(&self.model, e))?;
        Ok((analyzer, provenance))
    }
}
