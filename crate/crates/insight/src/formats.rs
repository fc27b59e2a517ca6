//! Readers and writers for the on-disk formats: trait model, reference
//! pool, NDJSON post archives and saved sessions.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, NaiveDateTime, Utc};
use insight_core::{Audience, CategoryId, CorpusError, PerTrait, Post, ReferencePool, Session, Trait, TraitModel};
use serde::{Deserialize, Serialize};

/// Current version of the saved-session document.
pub const SESSION_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{0}")]
    Invalid(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    traits: BTreeMap<String, Vec<WeightDoc>>,
    #[serde(default)]
    intercepts: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightDoc {
    category: u32,
    weight: f64,
}

fn trait_name(name: &str) -> Result<Trait, FormatError> {
    name.parse::<Trait>().map_err(|e| FormatError::Invalid(e.to_string()))
}

/// Parses a trait model document:
///
/// ```json
/// {"traits": {"agreeableness": [{"category": 121, "weight": 0.8}]},
///  "intercepts": {"agreeableness": 0.0}}
/// ```
pub fn parse_model(text: &str) -> Result<TraitModel, FormatError> {
    let doc: ModelDoc = serde_json::from_str(text)?;
    let mut model = TraitModel::new();
    for (name, weights) in &doc.traits {
        let t = trait_name(name)?;
        for w in weights {
            model
                .add_weight(t, CategoryId(w.category), w.weight)
                .map_err(|e| FormatError::Invalid(e.to_string()))?;
        }
    }
    for (name, &value) in &doc.intercepts {
        model
            .set_intercept(trait_name(name)?, value)
            .map_err(|e| FormatError::Invalid(e.to_string()))?;
    }
    Ok(model)
}

/// Parses a pool document mapping each trait name to its raw-score
/// samples. An optional `"provenance"` string labels the pool; without it
/// `default_label` is used. Unsorted lists are sorted with a warning.
pub fn parse_pool(text: &str, default_label: &str) -> Result<ReferencePool, FormatError> {
    let doc: BTreeMap<String, serde_json::Value> = serde_json::from_str(text)?;
    let mut provenance = default_label.to_string();
    let mut samples: PerTrait<Option<Vec<f64>>> = PerTrait::default();
    for (key, value) in doc {
        if key == "provenance" {
            provenance = value
                .as_str()
                .ok_or_else(|| FormatError::Invalid("provenance must be a string".into()))?
                .to_string();
            continue;
        }
        let t = trait_name(&key)?;
        let list: Vec<f64> = serde_json::from_value(value)?;
        if list.is_empty() {
            return Err(FormatError::Invalid(format!("pool for {t} is empty")));
        }
        if !list.is_sorted_by(|a, b| a <= b) {
            log::warn!("pool samples for {t} are not ascending; sorting");
        }
        samples[t] = Some(list);
    }
    let mut full: PerTrait<Vec<f64>> = PerTrait::default();
    for t in Trait::ALL {
        full[t] = samples[t]
            .take()
            .ok_or_else(|| FormatError::Invalid(format!("pool has no samples for {t}")))?;
    }
    ReferencePool::new(full, provenance).map_err(|e| FormatError::Invalid(e.to_string()))
}

/// Pool document in the shape [`parse_pool`] reads.
pub fn render_pool(pool: &ReferencePool) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("provenance".into(), pool.provenance().into());
    for t in Trait::ALL {
        doc.insert(t.name().into(), pool.samples(t).to_vec().into());
    }
    serde_json::to_string_pretty(&doc).expect("pool serializes") + "\n"
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum ImportError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate post id {id:?}")]
    DuplicateId { line: usize, id: String },
}

impl ImportError {
    pub fn line(&self) -> usize {
        match self {
            ImportError::Parse { line, .. } | ImportError::DuplicateId { line, .. } => *line,
        }
    }
}

/// One line of an archive export. Unknown fields are ignored.
#[derive(Debug, Deserialize)]
struct PostRecord {
    id: String,
    created_time: String,
    message: String,
    audience: Audience,
    from_self: bool,
}

/// Accepts RFC 3339 as well as the `+0000` offset style used by social
/// platform exports, e.g. `2015-03-01T12:00:00+0000`.
pub fn parse_timestamp(s: &str) -> Result<DateTime<Utc>, String> {
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Ok(t.with_timezone(&Utc));
    }
    if let Ok(t) = DateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f%z") {
        return Ok(t.with_timezone(&Utc));
    }
    if let Ok(t) = NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f") {
        return Ok(t.and_utc());
    }
    Err(format!("invalid created_time {s:?}"))
}

/// Parses a newline-delimited JSON archive into posts. Blank lines are
/// skipped; line numbers in errors are 1-based.
pub fn parse_posts(text: &str) -> Result<Vec<Post>, ImportError> {
    let mut posts = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PostRecord = serde_json::from_str(line).map_err(|e| ImportError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let created = parse_timestamp(&rec.created_time).map_err(|message| ImportError::Parse { line: line_no, message })?;
        if !seen.insert(rec.id.clone()) {
            return Err(ImportError::DuplicateId { line: line_no, id: rec.id });
        }
        posts.push(Post::new(rec.id, created, rec.message, rec.audience, rec.from_self));
    }
    Ok(posts)
}

/// Parses an archive and opens a session over it.
pub fn import_session(text: &str) -> Result<Session, ImportError> {
    let posts = parse_posts(text)?;
    Session::from_posts(posts).map_err(|e| match e {
        CorpusError::DuplicateId(id) => ImportError::DuplicateId { line: 0, id },
        other => ImportError::Parse { line: 0, message: other.to_string() },
    })
}

#[derive(Debug, thiserror::Error)]
pub enum SessionFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("unsupported session schema version {found} (expected {SESSION_SCHEMA_VERSION})")]
    VersionMismatch { found: String },
    #[error("malformed session file: {0}")]
    Format(String),
}

#[derive(Serialize)]
struct SessionDocRef<'a> {
    schema_version: u32,
    session: &'a Session,
}

#[derive(Deserialize)]
struct SessionDoc {
    session: Session,
}

pub fn render_session(session: &Session) -> String {
    let doc = SessionDocRef {
        schema_version: SESSION_SCHEMA_VERSION,
        session,
    };
    serde_json::to_string_pretty(&doc).expect("session serializes") + "\n"
}

pub fn parse_session(text: &str) -> Result<Session, SessionFileError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| SessionFileError::Format(e.to_string()))?;
    match value.get("schema_version") {
        Some(v) if v.as_u64() == Some(SESSION_SCHEMA_VERSION as u64) => {}
        Some(v) => return Err(SessionFileError::VersionMismatch { found: v.to_string() }),
        None => return Err(SessionFileError::Format("missing schema_version".into())),
    }
    let doc: SessionDoc = serde_json::from_value(value).map_err(|e| SessionFileError::Format(e.to_string()))?;
    Ok(doc.session)
}

/// Writes the session next to `path` and renames it into place.
pub fn save_session(session: &Session, path: &Path) -> Result<(), SessionFileError> {
    let io = |source| SessionFileError::Io {
        path: path.display().to_string(),
        source,
    };
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(render_session(session).as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub fn load_session(path: &Path) -> Result<Session, SessionFileError> {
    let text = fs::read_to_string(path).map_err(|source| SessionFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_session(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    #[test]
    fn model_document() {
        let m = parse_model(
            r#"{"traits": {"agreeableness": [{"category": 121, "weight": 0.8}], "Neuroticism": [{"category": 1, "weight": -0.5}]},
                "intercepts": {"openness": 0.25}}"#,
        )
        .unwrap();
        assert_eq!(m.weight(Trait::Agreeableness, CategoryId(121)), Some(0.8));
        assert_eq!(m.weight(Trait::Neuroticism, CategoryId(1)), Some(-0.5));
        assert_eq!(m.intercept(Trait::Openness), 0.25);
    }

    #[test]
    fn model_rejects_unknown_traits_and_duplicates() {
        assert!(parse_model(r#"{"traits": {"humor": []}}"#).is_err());
        assert!(parse_model(r#"{"traits": {}, "intercepts": {"humor": 1}}"#).is_err());
        assert!(parse_model(r#"{"traits": {"openness": [{"category": 1, "weight": 1}, {"category": 1, "weight": 2}]}}"#).is_err());
        assert!(parse_model(r#"{"traits": {}, "extra": 1}"#).is_err());
    }

    fn pool_doc(open: &str) -> String {
        format!(
            r#"{{"openness": {open}, "conscientiousness": [0], "extraversion": [0], "agreeableness": [0], "neuroticism": [0]}}"#
        )
    }

    #[test]
    fn pool_document() {
        let p = parse_pool(&pool_doc("[0.3, 0.1, 0.2]"), "file.json").unwrap();
        assert_eq!(p.samples(Trait::Openness), &[0.1, 0.2, 0.3]);
        assert_eq!(p.provenance(), "file.json");
        let again = parse_pool(&render_pool(&p), "other").unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn pool_rejects_missing_and_empty() {
        assert!(parse_pool(&pool_doc("[]"), "x").is_err());
        assert!(parse_pool(r#"{"openness": [1]}"#, "x").is_err());
        assert!(parse_pool(&pool_doc("[\"a\"]"), "x").is_err());
    }

    #[test]
    fn ndjson_import() {
        let text = concat!(
            r#"{"id":"p1","created_time":"2015-03-01T12:00:00+0000","message":"We went with us","audience":"public","from_self":true,"likes":3}"#, "\n",
            "\n",
            r#"{"id":"p2","created_time":"2015-03-02T08:30:00Z","message":"hi","audience":"friends","from_self":true}"#, "\n",
            r#"{"id":"p3","created_time":"2015-03-03T00:00:00.250Z","message":"tagged","audience":"only_me","from_self":false}"#, "\n",
        );
        let s = import_session(text).unwrap();
        assert_eq!(s.all_posts().count(), 3);
        assert_eq!(s.analyzable_posts().count(), 2);
        assert_eq!(*s.post("p1").unwrap().created_time(), Utc.with_ymd_and_hms(2015, 3, 1, 12, 0, 0).unwrap());
    }

    #[test]
    fn ndjson_errors() {
        let good = r#"{"id":"p1","created_time":"2015-03-01T12:00:00Z","message":"a","audience":"public","from_self":true}"#;
        assert!(import_session("").unwrap().all_posts().next().is_none());
        let dup = format!("{good}\n{good}\n");
        assert_eq!(parse_posts(&dup).unwrap_err(), ImportError::DuplicateId { line: 2, id: "p1".into() });
        let bad_time = good.replace("2015-03-01T12:00:00Z", "yesterday");
        assert_eq!(parse_posts(&format!("{good}\n{bad_time}")).unwrap_err().line(), 2);
        let bad_aud = good.replace("public", "everyone");
        assert_eq!(parse_posts(&bad_aud).unwrap_err().line(), 1);
        assert_eq!(parse_posts("{not json").unwrap_err().line(), 1);
    }

    #[test]
    fn session_version_checked() {
        let s = import_session("").unwrap();
        let text = render_session(&s);
        assert_eq!(parse_session(&text).unwrap(), s);
        let v2 = text.replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(matches!(parse_session(&v2), Err(SessionFileError::VersionMismatch { .. })));
        assert!(matches!(parse_session("{\"session\": {}}"), Err(SessionFileError::Format(_))));
    }
}
