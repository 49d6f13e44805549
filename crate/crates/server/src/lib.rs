//! HTTP front end over an immutable [`Snapshot`] of a store.
//!
//! Every request reads one snapshot; `POST /api/reload` builds a new one and
//! swaps it in whole.

use std::net::SocketAddr;
use std::sync::{Arc, RwLock};

use axum::extract::{Path, RawQuery, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use semlink::pipeline::PipelineError;
use semlink::store::StoreError;
use semlink::{LinkContext, LogicalPath, PathSpace, SelectedLink, Snapshot, Term};
use serde::Serialize;
use tower_http::cors::CorsLayer;

pub const XHTML: &str = "application/xhtml+xml; charset=utf-8";

pub struct AppState {
    space: PathSpace,
    snapshot: RwLock<Arc<Snapshot>>,
}

impl AppState {
    pub fn load(space: PathSpace) -> Result<Self, StoreError> {
        let snapshot = Snapshot::load(&space)?;
        Ok(AppState { space, snapshot: RwLock::new(Arc::new(snapshot)) })
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.snapshot.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Re-reads the store and replaces the snapshot atomically.
    pub fn reload(&self) -> Result<Arc<Snapshot>, StoreError> {
        let fresh = Arc::new(Snapshot::load(&self.space)?);
        *self.snapshot.write().unwrap_or_else(|e| e.into_inner()) = fresh.clone();
        Ok(fresh)
    }
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct ContextInfo {
    pub path: String,
    pub creator: String,
    pub title: String,
    pub description: Option<String>,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct InnerStatement {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct LinkRecord {
    pub link: String,
    pub inner: InnerStatement,
    pub source: String,
    pub target: String,
    pub arcrole: String,
    pub title: Option<String>,
}

impl From<&SelectedLink> for LinkRecord {
    fn from(s: &SelectedLink) -> Self {
        let text = |t: &Term| t.value().to_owned();
        LinkRecord {
            link: text(&s.link),
            inner: InnerStatement {
                subject: text(s.inner.subject()),
                predicate: text(s.inner.predicate()),
                object: text(s.inner.object()),
            },
            source: text(s.source()),
            target: text(s.target()),
            arcrole: text(s.arcrole()),
            title: s.title.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct ReloadReport {
    pub documents: usize,
    pub contexts: usize,
    pub anchors: usize,
    pub links: usize,
    pub statements: usize,
    pub issues: Vec<Issue>,
}

impl ReloadReport {
    fn of(snap: &Snapshot) -> Self {
        ReloadReport {
            documents: snap.documents.len(),
            contexts: snap.contexts.len(),
            anchors: snap.linkbase.anchors.len(),
            links: snap.linkbase.links.len(),
            statements: snap.link_graph.len(),
            issues: snap.issues.iter().map(|(p, m)| Issue { path: p.to_string(), message: m.clone() }).collect(),
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into() }
    }
}

impl From<PipelineError> for ApiError {
    fn from(e: PipelineError) -> Self {
        let status = match &e {
            PipelineError::UnknownDocument(_) | PipelineError::UnknownContext(_) => StatusCode::NOT_FOUND,
            PipelineError::Context { .. } | PipelineError::Evaluation(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let status = match e {
            StoreError::NotFound(_) => StatusCode::NOT_FOUND,
            StoreError::InvalidPath(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/documents", get(list_documents))
        .route("/api/documents/{*path}", get(get_document))
        .route("/api/contexts", get(list_contexts))
        .route("/api/links/{*path}", get(list_links))
        .route("/api/reload", post(reload))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Binds `addr` and serves until the process ends.
pub async fn serve(space: PathSpace, addr: SocketAddr) -> std::io::Result<()> {
    let state = AppState::load(space).map_err(std::io::Error::other)?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state))).await
}

fn query_values(raw: &Option<String>, key: &str) -> Vec<String> {
    let Some(raw) = raw else { return Vec::new() };
    url::form_urlencoded::parse(raw.as_bytes()).filter(|(k, _)| k == key).map(|(_, v)| v.into_owned()).collect()
}

fn logical(raw: &str, suffix: &str) -> Result<LogicalPath, ApiError> {
    let raw = raw.strip_suffix(suffix).unwrap_or(raw);
    LogicalPath::parse(raw).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))
}

fn contexts(snap: &Snapshot, raw: &Option<String>) -> Result<Vec<LinkContext>, ApiError> {
    query_values(raw, "context")
        .iter()
        .map(|p| Ok(snap.context(&logical(p, ".ctx.xml")?)?.clone()))
        .collect()
}

async fn list_documents(State(state): State<Arc<AppState>>) -> Json<Vec<String>> {
    Json(state.snapshot().documents.keys().map(|p| p.to_string()).collect())
}

async fn list_contexts(State(state): State<Arc<AppState>>) -> Json<Vec<ContextInfo>> {
    let snap = state.snapshot();
    let infos = snap
        .contexts
        .iter()
        .filter_map(|(path, ctx)| ctx.as_ref().ok().map(|c| (path, c)))
        .map(|(path, c)| ContextInfo {
            path: path.to_string(),
            creator: c.creator.clone(),
            title: c.title.clone(),
            description: c.description.clone(),
        })
        .collect();
    Json(infos)
}

async fn get_document(
    State(state): State<Arc<AppState>>,
    Path(path): Path<String>,
    RawQuery(query): RawQuery,
) -> Result<Response, ApiError> {
    let snap = state.snapshot();
    let doc = logical(&path, ".xml")?;
    let ctxs = contexts(&snap, &query)?;
    let body = snap.decorate(&doc, &ctxs)?;
    Ok(([(header::CONTENT_TYPE, XHTML)], body).into_response())
}

async fn list_links(
    State(state): State<Arc<AppState>>,
    Path(path): Path<String>,
    RawQuery(query): RawQuery,
) -> Result<Json<Vec<LinkRecord>>, ApiError> {
    let snap = state.snapshot();
    let doc = match query_values(&query, "document").first() {
        Some(d) => logical(d, ".xml")?,
        None => logical(&path, ".xml")?,
    };
    let ctxs = contexts(&snap, &query)?;
    let selected = snap.selected_links(&doc, &ctxs)?;
    Ok(Json(selected.iter().map(LinkRecord::from).collect()))
}

async fn reload(State(state): State<Arc<AppState>>) -> Result<Json<ReloadReport>, ApiError> {
    let worker = state.clone();
    let snap = tokio::task::spawn_blocking(move || worker.reload())
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(ReloadReport::of(&snap)))
}
