//! Std companion to `insight_core`: data-file loading, archive import,
//! session persistence, the concurrent session store, the HTTP service and
//! batch reports.

pub mod config;
pub mod formats;
pub mod poolgen;
pub mod report;
pub mod service;
pub mod store;

pub use config::{ConfigError, DataPaths, Provenance};
pub use formats::{import_session, load_session, parse_posts, save_session, ImportError, SessionFileError};
pub use report::Report;
pub use service::{router, ApiError, AppState};
pub use store::SessionStore;
