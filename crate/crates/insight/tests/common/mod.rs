#![allow(dead_code)]

use std::path::PathBuf;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use insight::{AppState, DataPaths};
use serde_json::Value;
use tower::ServiceExt;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn sample_paths() -> DataPaths {
    let d = data_dir();
    DataPaths {
        lexicon: d.join("sample.dic"),
        model: d.join("sample_model.json"),
        pool: d.join("sample_pool.json"),
    }
}

pub fn sample_posts() -> String {
    std::fs::read_to_string(data_dir().join("sample_posts.ndjson")).unwrap()
}

pub fn app() -> Router {
    let (analyzer, provenance) = sample_paths().load().unwrap();
    insight::router(AppState::new(analyzer, provenance))
}

pub struct Reply {
    pub status: StatusCode,
    pub body: String,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.body).unwrap_or_else(|e| panic!("not JSON ({e}): {}", self.body))
    }
}

pub async fn call(app: &Router, method: Method, uri: &str, body: impl Into<String>) -> Reply {
    let req = Request::builder().method(method).uri(uri).body(Body::from(body.into())).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    Reply {
        status,
        body: String::from_utf8(bytes.to_vec()).unwrap(),
    }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    call(app, Method::GET, uri, "").await
}

pub async fn import(app: &Router, ndjson: &str) -> String {
    let r = call(app, Method::POST, "/api/v1/import", ndjson).await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", r.body);
    r.json()["session_id"].as_str().unwrap().to_string()
}

pub fn record(id: &str, secs: i64, text: &str, audience: &str, own: bool) -> String {
    let t = chrono::DateTime::from_timestamp(secs, 0).unwrap().to_rfc3339();
    serde_json::json!({"id": id, "created_time": t, "message": text, "audience": audience, "from_self": own}).to_string()
}
