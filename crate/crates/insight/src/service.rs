//! HTTP interface under `/api/v1`. Handlers are thin: they parse the
//! request, take the session lock and delegate to `insight_core`.
//! The endpoint list and response schemas are in `docs/API.md`.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use insight_core::{
    Analyzer, Audience, AudienceSet, CorpusError, Direction, ModelError, Post, PostAnalysis, PostState, ProfilePercentiles,
    Session, Trait,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Provenance;
use crate::formats::{import_session, ImportError};
use crate::store::{SessionHandle, SessionStore};

/// Error body returned by every failing endpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl ApiError {
    /// Every code an endpoint can return.
    pub const CODES: &'static [&'static str] = &[
        "parse_error",
        "duplicate_id",
        "not_found",
        "deleted",
        "not_own_post",
        "already_deleted",
        "empty_pool",
        "invalid_model",
        "session_not_found",
        "unknown_trait",
        "unknown_audience",
        "unknown_direction",
        "unknown_state",
        "bad_request",
        "route_not_found",
        "method_not_allowed",
    ];

    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        debug_assert!(Self::CODES.contains(&code));
        ApiError {
            status,
            code,
            message: message.into(),
            detail: None,
        }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }
}

impl From<CorpusError> for ApiError {
    fn from(e: CorpusError) -> Self {
        let msg = e.to_string();
        match e {
            CorpusError::NotFound(id) => ApiError::new(StatusCode::NOT_FOUND, "not_found", msg).with_detail(json!({ "post_id": id })),
            CorpusError::Deleted(id) => ApiError::new(StatusCode::GONE, "deleted", msg).with_detail(json!({ "post_id": id })),
            CorpusError::NotOwnPost(id) => {
                ApiError::new(StatusCode::FORBIDDEN, "not_own_post", msg).with_detail(json!({ "post_id": id }))
            }
            CorpusError::AlreadyDeleted(id) => {
                ApiError::new(StatusCode::CONFLICT, "already_deleted", msg).with_detail(json!({ "post_id": id }))
            }
            CorpusError::DuplicateId(id) => {
                ApiError::new(StatusCode::CONFLICT, "duplicate_id", msg).with_detail(json!({ "post_id": id }))
            }
        }
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        let msg = e.to_string();
        match e {
            ModelError::EmptyPool(t) => {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "empty_pool", msg).with_detail(json!({ "trait": t }))
            }
            ModelError::DuplicateWeight { .. } | ModelError::NonFinite(_) | ModelError::UnknownCategory(_) => {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "invalid_model", msg)
            }
        }
    }
}

impl From<ImportError> for ApiError {
    fn from(e: ImportError) -> Self {
        let msg = e.to_string();
        match e {
            ImportError::Parse { line, .. } => {
                ApiError::new(StatusCode::BAD_REQUEST, "parse_error", msg).with_detail(json!({ "line": line }))
            }
            ImportError::DuplicateId { line, id } => {
                ApiError::new(StatusCode::CONFLICT, "duplicate_id", msg).with_detail(json!({ "line": line, "post_id": id }))
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Shared state of a running service.
#[derive(Clone)]
pub struct AppState {
    pub analyzer: Arc<Analyzer>,
    pub provenance: Arc<Provenance>,
    pub store: Arc<SessionStore>,
}

impl AppState {
    pub fn new(analyzer: Analyzer, provenance: Provenance) -> Self {
        AppState {
            analyzer: Arc::new(analyzer),
            provenance: Arc::new(provenance),
            store: Arc::new(SessionStore::new()),
        }
    }

    fn session(&self, id: &str) -> ApiResult<SessionHandle> {
        self.store.get(id).ok_or_else(|| {
            ApiError::new(StatusCode::NOT_FOUND, "session_not_found", format!("no session {id:?}"))
                .with_detail(json!({ "session_id": id }))
        })
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/v1/health", get(health))
        .route("/api/v1/import", post(import))
        .route("/api/v1/sessions/{sid}/status", get(status))
        .route("/api/v1/sessions/{sid}/profile", get(profile))
        .route("/api/v1/sessions/{sid}/finalize", post(finalize))
        .route("/api/v1/sessions/{sid}/posts", get(list_posts))
        .route("/api/v1/sessions/{sid}/posts/{pid}", get(get_post).patch(patch_post))
        .route("/api/v1/sessions/{sid}/posts/{pid}/attribution", get(attribution))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "route_not_found", "no such endpoint") })
        .method_not_allowed_fallback(|| async {
            ApiError::new(StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed", "method not allowed on this endpoint")
        })
        .with_state(state)
}

/// Serves `app` until the process is interrupted.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

pub async fn bind(addr: SocketAddr) -> std::io::Result<tokio::net::TcpListener> {
    tokio::net::TcpListener::bind(addr).await
}

fn audiences_param(q: &HashMap<String, String>) -> ApiResult<AudienceSet> {
    match q.get("audiences") {
        None => Ok(AudienceSet::ALL),
        Some(raw) => raw.parse::<AudienceSet>().map_err(|bad| {
            ApiError::new(StatusCode::BAD_REQUEST, "unknown_audience", format!("unknown audience {bad:?}"))
                .with_detail(json!({ "allowed": Audience::ALL.map(Audience::name) }))
        }),
    }
}

fn trait_param(raw: &str) -> ApiResult<Trait> {
    raw.parse::<Trait>().map_err(|e| {
        ApiError::new(StatusCode::BAD_REQUEST, "unknown_trait", e.to_string())
            .with_detail(json!({ "allowed": Trait::ALL.map(Trait::name) }))
    })
}

fn direction_param(q: &HashMap<String, String>) -> ApiResult<Direction> {
    match q.get("dir") {
        None => Ok(Direction::Descending),
        Some(raw) => raw.parse().map_err(|bad: String| {
            ApiError::new(StatusCode::BAD_REQUEST, "unknown_direction", format!("unknown direction {bad:?}"))
                .with_detail(json!({ "allowed": ["asc", "desc"] }))
        }),
    }
}

async fn health(State(app): State<AppState>) -> Json<Value> {
    let lex = app.analyzer.lexicon();
    let pool = app.analyzer.pool();
    let samples: BTreeMap<&str, usize> = Trait::ALL.iter().map(|t| (t.name(), pool.samples(*t).len())).collect();
    Json(json!({
        "status": "ok",
        "lexicon": { "label": app.provenance.lexicon, "categories": lex.category_count(), "entries": lex.entry_count() },
        "model": { "label": app.provenance.model },
        "pool": { "label": app.provenance.pool, "samples": samples },
        "sufficiency_threshold": app.analyzer.sufficiency_threshold(),
        "sessions": app.store.len(),
    }))
}

async fn import(State(app): State<AppState>, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::bad_request(format!("body is not UTF-8: {e}")))?;
    let session = import_session(text)?;
    let posts = session.all_posts().count();
    let analyzable = session.analyzable_posts().count();
    let id = app.store.insert(session);
    Ok((
        StatusCode::CREATED,
        Json(json!({ "session_id": id, "posts": posts, "analyzable_posts": analyzable })),
    ))
}

async fn status(State(app): State<AppState>, Path(sid): Path<String>) -> ApiResult<Json<Value>> {
    let handle = app.session(&sid)?;
    let s = handle.read();
    Ok(Json(json!({
        "session_id": sid,
        "stale": s.is_stale(),
        "dirty": s.dirty(),
        "audit_length": s.audit().len(),
        "posts": s.all_posts().filter(|p| p.state() != PostState::Deleted).count(),
        "analyzable_posts": s.analyzable_posts().count(),
    })))
}

#[derive(Serialize)]
pub struct ProfileResponse {
    pub audiences: String,
    pub profile: ProfilePercentiles,
}

async fn profile(
    State(app): State<AppState>,
    Path(sid): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Json<ProfileResponse>> {
    let audiences = audiences_param(&q)?;
    let handle = app.session(&sid)?;
    let profile = handle.read().finalized_profile(audiences, &app.analyzer)?;
    Ok(Json(ProfileResponse {
        audiences: audiences.to_string(),
        profile,
    }))
}

async fn finalize(
    State(app): State<AppState>,
    Path(sid): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Json<ProfileResponse>> {
    let audiences = audiences_param(&q)?;
    let handle = app.session(&sid)?;
    let profile = handle.write().finalize_profile(audiences, &app.analyzer, Utc::now())?;
    Ok(Json(ProfileResponse {
        audiences: audiences.to_string(),
        profile,
    }))
}

/// Post fields exposed to clients. Never built for deleted posts.
#[derive(Serialize)]
pub struct PostSummary<'a> {
    pub id: &'a str,
    pub created_time: DateTime<Utc>,
    pub audience: Audience,
    pub state: PostState,
    pub text: &'a str,
}

impl<'a> From<&'a Post> for PostSummary<'a> {
    fn from(p: &'a Post) -> Self {
        PostSummary {
            id: p.id(),
            created_time: *p.created_time(),
            audience: p.audience(),
            state: p.state(),
            text: p.text(),
        }
    }
}

async fn list_posts(
    State(app): State<AppState>,
    Path(sid): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Json<Value>> {
    let handle = app.session(&sid)?;
    if let Some(sort) = q.get("sort") {
        let t = trait_param(sort)?;
        let dir = direction_param(&q)?;
        let ranking = handle.read().ranking(t, dir, &app.analyzer);
        return Ok(Json(serde_json::to_value(ranking).expect("ranking serializes")));
    }
    if q.contains_key("dir") {
        return Err(ApiError::bad_request("dir requires sort"));
    }
    let s = handle.read();
    let mut posts: Vec<&Post> = s
        .all_posts()
        .filter(|p| p.from_self() && p.state() != PostState::Deleted)
        .collect();
    posts.sort_by(|a, b| b.created_time().cmp(a.created_time()).then_with(|| a.id().cmp(b.id())));
    let posts: Vec<PostSummary> = posts.into_iter().map(PostSummary::from).collect();
    Ok(Json(json!({ "posts": posts })))
}

fn own_post<'a>(s: &'a Session, pid: &str) -> ApiResult<&'a Post> {
    let p = s.post(pid)?;
    if !p.from_self() {
        return Err(CorpusError::NotOwnPost(pid.into()).into());
    }
    Ok(p)
}

async fn get_post(State(app): State<AppState>, Path((sid, pid)): Path<(String, String)>) -> ApiResult<Json<Value>> {
    let handle = app.session(&sid)?;
    let s = handle.read();
    let p = own_post(&s, &pid)?;
    Ok(Json(json!({ "post": PostSummary::from(p) })))
}

async fn attribution(
    State(app): State<AppState>,
    Path((sid, pid)): Path<(String, String)>,
) -> ApiResult<Json<PostAnalysis>> {
    let handle = app.session(&sid)?;
    let analysis = handle.read().analyze_post(&pid, &app.analyzer)?;
    Ok(Json(analysis))
}

enum Patch {
    Text(String),
    Audience(Audience),
    State(PostState),
}

fn parse_patch(body: &[u8]) -> ApiResult<Patch> {
    let value: Value = serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("body is not JSON: {e}")))?;
    let obj = value
        .as_object()
        .filter(|o| o.len() == 1)
        .ok_or_else(|| ApiError::bad_request("body must be an object with exactly one of text, audience, state"))?;
    let (key, v) = obj.iter().next().expect("one field");
    let as_str = || {
        v.as_str()
            .ok_or_else(|| ApiError::bad_request(format!("{key} must be a string")))
    };
    match key.as_str() {
        "text" => Ok(Patch::Text(as_str()?.to_string())),
        "audience" => as_str()?.parse().map(Patch::Audience).map_err(|bad: String| {
            ApiError::new(StatusCode::BAD_REQUEST, "unknown_audience", format!("unknown audience {bad:?}"))
        }),
        "state" => as_str()?.parse().map(Patch::State).map_err(|bad: String| {
            ApiError::new(StatusCode::BAD_REQUEST, "unknown_state", format!("unknown state {bad:?}"))
        }),
        other => Err(ApiError::bad_request(format!("unknown field {other:?}"))),
    }
}

#[derive(Serialize)]
struct PatchResponse<'a> {
    post: Option<PostSummary<'a>>,
    analysis: Option<PostAnalysis>,
    stale: bool,
}

async fn patch_post(
    State(app): State<AppState>,
    Path((sid, pid)): Path<(String, String)>,
    body: Bytes,
) -> ApiResult<Json<Value>> {
    let patch = parse_patch(&body)?;
    let handle = app.session(&sid)?;
    let mut s = handle.write();
    let now = Utc::now();
    match patch {
        Patch::Text(text) => {
            s.edit_post(&pid, &text, now)?;
        }
        Patch::Audience(a) => s.set_audience(&pid, a, now)?,
        Patch::State(st) => s.set_state(&pid, st, now)?,
    }
    let s = parking_lot::RwLockWriteGuard::downgrade(s);
    let post = s.post(&pid).ok().filter(|p| p.from_self());
    let analysis = match post {
        Some(_) => Some(s.analyze_post(&pid, &app.analyzer)?),
        None => None,
    };
    let resp = PatchResponse {
        post: post.map(PostSummary::from),
        analysis,
        stale: s.is_stale(),
    };
    Ok(Json(serde_json::to_value(resp).expect("patch response serializes")))
}
