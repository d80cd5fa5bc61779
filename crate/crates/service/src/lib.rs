//! HTTP API over the einz engine.
//!
//! Routes:
//! - `POST /api/v1/evaluate`: scenario request in, evaluations out
//! - `POST /api/v1/standing`: who wins among hands known to have stood
//! - `GET /api/v1/tables/{id}?decks=N&precision=K&exact=true`
//! - `GET /api/v1/rules`: card values and rule metadata
//! - `GET /health`
//!
//! Malformed JSON is a 400, a well-formed but impossible state a 422.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use einz_core::card::CARDS_PER_DECK;
use einz_core::tables::{reference_table, parse_table_id, render, Format, OutputSpec};
use einz_core::{
    evaluate_request, evaluate_standing, DealerVariant, PointValue, ScenarioRequest,
    StandingQuery, ENGINE_VERSION,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::Semaphore;
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

/// Origins allowed by default: the UI dev server on localhost.
pub const DEFAULT_CORS_ORIGINS: [&str; 2] = ["http://localhost:5173", "http://127.0.0.1:5173"];

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub bind: SocketAddr,
    /// Directory of built UI assets served at `/`.
    pub static_dir: Option<PathBuf>,
    pub cors_origins: Vec<String>,
    /// Evaluations allowed to run at once; further requests wait.
    pub max_concurrent: usize,
}

impl ServiceConfig {
    pub fn new(bind: SocketAddr) -> Self {
        ServiceConfig {
            bind,
            static_dir: None,
            cors_origins: DEFAULT_CORS_ORIGINS.iter().map(|s| s.to_string()).collect(),
            max_concurrent: std::thread::available_parallelism().map_or(4, |n| n.get()),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error("invalid CORS origin {0:?}")]
    Origin(String),
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone)]
struct AppState {
    permits: Arc<Semaphore>,
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest {
        message: String,
        line: Option<usize>,
        column: Option<usize>,
    },
    Unprocessable(String),
    NotFound(String),
    Internal(String),
}

impl ApiError {
    fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest { .. } => StatusCode::BAD_REQUEST,
            ApiError::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl From<einz_core::Error> for ApiError {
    fn from(e: einz_core::Error) -> Self {
        match e {
            einz_core::Error::UnknownTable(_) => ApiError::NotFound(e.to_string()),
            e if e.is_parse() => ApiError::BadRequest {
                message: e.to_string(),
                line: None,
                column: None,
            },
            e => ApiError::Unprocessable(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for ApiError {
    fn from(e: serde_json::Error) -> Self {
        ApiError::BadRequest {
            message: e.to_string(),
            line: Some(e.line()),
            column: Some(e.column()),
        }
    }
}

/// An error plus the request id to echo back.
struct Failure(ApiError, Option<String>);

impl From<ApiError> for Failure {
    fn from(e: ApiError) -> Self {
        Failure(e, None)
    }
}

impl IntoResponse for Failure {
    fn into_response(self) -> Response {
        let Failure(err, request_id) = self;
        let status = err.status();
        let mut body = json!({ "status": status.as_u16() });
        match err {
            ApiError::BadRequest {
                message,
                line,
                column,
            } => {
                body["error"] = json!("malformed_request");
                body["message"] = json!(message);
                if let (Some(l), Some(c)) = (line, column) {
                    body["line"] = json!(l);
                    body["column"] = json!(c);
                }
            }
            ApiError::Unprocessable(m) => {
                body["error"] = json!("inconsistent_state");
                body["message"] = json!(m);
            }
            ApiError::NotFound(m) => {
                body["error"] = json!("not_found");
                body["message"] = json!(m);
            }
            ApiError::Internal(m) => {
                body["error"] = json!("internal");
                body["message"] = json!(m);
            }
        }
        if let Some(id) = request_id {
            body["request_id"] = json!(id);
        }
        (status, Json(body)).into_response()
    }
}

fn json_response(body: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

/// Parses a body, remembering its request id even when the rest is bad.
fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, Failure> {
    let request_id = serde_json::from_slice::<serde_json::Value>(body)
        .ok()
        .and_then(|v| v.get("request_id")?.as_str().map(str::to_string));
    serde_json::from_slice(body).map_err(|e| Failure(e.into(), request_id))
}

async fn blocking<T, F>(state: &AppState, f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
{
    let _permit = state
        .permits
        .clone()
        .acquire_owned()
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?;
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(format!("evaluation task failed: {e}")))?
}

fn to_json<T: Serialize>(value: &T) -> Result<String, ApiError> {
    serde_json::to_string(value).map_err(|e| ApiError::Internal(e.to_string()))
}

async fn evaluate(State(state): State<AppState>, body: Bytes) -> Result<Response, Failure> {
    let req: ScenarioRequest = parse_body(&body)?;
    let id = req.request_id.clone();
    let body = blocking(&state, move || to_json(&evaluate_request(&req)?))
        .await
        .map_err(|e| Failure(e, id))?;
    Ok(json_response(body))
}

async fn standing(State(state): State<AppState>, body: Bytes) -> Result<Response, Failure> {
    let query: StandingQuery = parse_body(&body)?;
    let id = query.request_id.clone();
    let body = blocking(&state, move || {
        let report = evaluate_standing(&query)?;
        let mut value = serde_json::to_value(&report).map_err(|e| ApiError::Internal(e.to_string()))?;
        if let Some(id) = &query.request_id {
            value["request_id"] = json!(id);
        }
        to_json(&value)
    })
    .await
    .map_err(|e| Failure(e, id))?;
    Ok(json_response(body))
}

#[derive(Debug, Deserialize)]
struct TableParams {
    decks: Option<u32>,
    precision: Option<u32>,
    exact: Option<bool>,
}

async fn table(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(params): Query<TableParams>,
) -> Result<Response, Failure> {
    let id = parse_table_id(&id).map_err(ApiError::from)?;
    let out = OutputSpec::new(
        Format::Json,
        params.precision.unwrap_or(3),
        params.exact.unwrap_or(false),
    )
    .map_err(ApiError::from)?;
    let decks = params.decks.unwrap_or(1);
    let body = blocking(&state, move || Ok(render(&reference_table(id, decks)?, &out))).await?;
    Ok(json_response(body))
}

async fn rules() -> Json<serde_json::Value> {
    let cards: Vec<_> = PointValue::ALL
        .iter()
        .map(|v| {
            json!({
                "points": v.points(),
                "per_deck": v.per_deck(),
                "ranks": v.rank_hint(),
            })
        })
        .collect();
    let policies: Vec<String> = (12..=21).map(|n| format!("stand{n}")).collect();
    Json(json!({
        "engine_version": ENGINE_VERSION,
        "cards_per_deck": CARDS_PER_DECK,
        "card_values": cards,
        "einz": { "total": 21, "two_aces": 22 },
        "change_total": einz_core::policy::CHANGE_TOTAL,
        "default_max_changes": 1,
        "policies": policies,
        "policy_change_suffix": "+c14",
        "modes": ["open", "dealer"],
        "dealer_variants": [DealerVariant::V1, DealerVariant::V2, DealerVariant::V3],
        "computation_modes": ["marginal", "conditioned"],
        "tables": einz_core::tables::TABLE_IDS,
    }))
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "version": ENGINE_VERSION }))
}

async fn not_found() -> Failure {
    ApiError::NotFound("no such route".into()).into()
}

fn cors(origins: &[String]) -> Result<CorsLayer, ServeError> {
    let values = origins
        .iter()
        .map(|o| HeaderValue::from_str(o).map_err(|_| ServeError::Origin(o.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CorsLayer::new()
        .allow_origin(AllowOrigin::list(values))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]))
}

pub fn router(config: &ServiceConfig) -> Result<Router, ServeError> {
    let state = AppState {
        permits: Arc::new(Semaphore::new(config.max_concurrent.max(1))),
    };
    let api = Router::new()
        .route("/api/v1/evaluate", post(evaluate))
        .route("/api/v1/standing", post(standing))
        .route("/api/v1/tables/{id}", get(table))
        .route("/api/v1/rules", get(rules))
        .route("/health", get(health))
        .with_state(state);
    let app = match &config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(not_found),
    };
    Ok(app.layer(cors(&config.cors_origins)?))
}

/// Binds and serves until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> Result<(), ServeError> {
    let app = router(&config)?;
    let listener = tokio::net::TcpListener::bind(config.bind)
        .await
        .map_err(|source| ServeError::Bind {
            addr: config.bind,
            source,
        })?;
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
