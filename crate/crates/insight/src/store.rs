//! Registry of live sessions.
//!
//! Each session sits behind its own read/write lock: mutations on one
//! session are serialized, reads run concurrently and never see a
//! half-applied change. The registry map has its own lock that is only held
//! long enough to insert or clone out a session handle.

use std::collections::HashMap;
use std::sync::Arc;

use insight_core::Session;
use parking_lot::RwLock;

pub type SessionHandle = Arc<RwLock<Session>>;

#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, SessionHandle>>,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a session under a fresh random id.
    pub fn insert(&self, session: Session) -> String {
        let id = uuid::Uuid::new_v4().simple().to_string();
        self.sessions.write().insert(id.clone(), Arc::new(RwLock::new(session)));
        id
    }

    pub fn get(&self, id: &str) -> Option<SessionHandle> {
        self.sessions.read().get(id).cloned()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
