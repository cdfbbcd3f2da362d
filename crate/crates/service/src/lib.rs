//! Stateless HTTP facade: palette generation with metrics, the preset table
//! and a liveness probe.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::extract::DefaultBodyLimit;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use tower_http::cors::CorsLayer;

use treehue::error::{HierarchyError, PaletteError};
use treehue::hierarchy::{from_json_guarded, DistanceVariant, NodeSpec};
use treehue::metrics::{self, MetricReport, ReportOptions, Scope};
use treehue::{assign_colors, Hierarchy, PaletteAssignment, PaletteConfig, Preset};

/// Large enough for a tree at the node limit with long names.
pub const BODY_LIMIT: usize = 64 * 1024 * 1024;

#[derive(Debug, Clone, Copy)]
pub struct ServiceOptions {
    pub cors: bool,
}

impl Default for ServiceOptions {
    fn default() -> Self {
        Self { cors: true }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PresetRef {
    Label(String),
    Triple(Preset),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaletteRequest {
    pub hierarchy: NodeSpec,
    #[serde(default)]
    pub config: Option<Value>,
    #[serde(default)]
    pub preset: Option<PresetRef>,
    #[serde(default)]
    pub background_l: Option<f64>,
    #[serde(default)]
    pub scopes: Option<Vec<String>>,
    #[serde(default)]
    pub distance_variant: Option<DistanceVariant>,
}

#[derive(Serialize)]
pub struct PaletteResponse {
    pub palette: PaletteAssignment,
    pub metrics: MetricReport,
}

#[derive(Debug, Serialize)]
pub struct PresetInfo {
    pub label: String,
    pub preset: Preset,
    pub provisional: bool,
    pub config: PaletteConfig,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApiError {
    Parse(String),
    Config(String),
    TooLarge(String),
}

impl ApiError {
    pub fn code(&self) -> &'static str {
        match self {
            ApiError::Parse(_) => "E_PARSE",
            ApiError::Config(_) => "E_CONFIG",
            ApiError::TooLarge(_) => "E_SIZE",
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::TooLarge(_) => StatusCode::PAYLOAD_TOO_LARGE,
            _ => StatusCode::BAD_REQUEST,
        }
    }

    fn detail(&self) -> &str {
        match self {
            ApiError::Parse(d) | ApiError::Config(d) | ApiError::TooLarge(d) => d,
        }
    }
}

impl From<HierarchyError> for ApiError {
    fn from(e: HierarchyError) -> Self {
        if e.is_size_limit() {
            ApiError::TooLarge(e.to_string())
        } else {
            ApiError::Parse(e.to_string())
        }
    }
}

impl From<PaletteError> for ApiError {
    fn from(e: PaletteError) -> Self {
        match e {
            PaletteError::Hierarchy(h) => h.into(),
            PaletteError::Config(c) => ApiError::Config(c.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.code(), "detail": self.detail() });
        (self.status(), json_response(body.to_string().into_bytes())).into_response()
    }
}

fn json_response(body: Vec<u8>) -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "application/json")], body)
}

fn resolve_config(req: &PaletteRequest) -> Result<PaletteConfig, ApiError> {
    match (&req.config, &req.preset) {
        (Some(_), Some(_)) => Err(ApiError::Config("give either config or preset, not both".into())),
        (Some(value), None) => {
            serde_json::from_value(value.clone()).map_err(|e| ApiError::Config(e.to_string()))
        }
        (None, Some(PresetRef::Label(label))) => label
            .parse::<Preset>()
            .map(|p| p.config())
            .map_err(|e| ApiError::Config(e.to_string())),
        (None, Some(PresetRef::Triple(p))) => Ok(p.config()),
        (None, None) => Ok(PaletteConfig::default()),
    }
}

/// Handles one palette request from its raw body. Pure and deterministic.
pub fn palette_request(body: &[u8]) -> Result<PaletteResponse, ApiError> {
    let text = std::str::from_utf8(body).map_err(|e| ApiError::Parse(e.to_string()))?;
    let req: PaletteRequest = from_json_guarded(text)?;
    let hierarchy = Hierarchy::from_spec(&req.hierarchy)?;
    let config = resolve_config(&req)?;
    let palette = assign_colors(&hierarchy, &config)?;

    let mut opts = ReportOptions {
        background_l: req.background_l.unwrap_or_else(|| metrics::default_background_l(&config)),
        ..ReportOptions::default()
    };
    if let Some(scopes) = &req.scopes {
        opts.scopes = scopes
            .iter()
            .map(|s| s.parse::<Scope>())
            .collect::<Result<_, _>>()
            .map_err(|e| ApiError::Config(e.to_string()))?;
    }
    if let Some(v) = req.distance_variant {
        opts.distance_variant = v;
    }
    let metrics =
        metrics::evaluate(&hierarchy, &palette, &opts).map_err(|e| ApiError::Config(e.to_string()))?;
    Ok(PaletteResponse { palette, metrics })
}

pub fn presets() -> Vec<PresetInfo> {
    Preset::all()
        .into_iter()
        .map(|p| PresetInfo {
            label: p.label(),
            preset: p,
            provisional: p.is_provisional(),
            config: p.config(),
        })
        .collect()
}

async fn palette_handler(body: Bytes) -> Response {
    let result = tokio::task::spawn_blocking(move || palette_request(&body)).await;
    match result {
        Ok(Ok(resp)) => {
            let bytes = serde_json::to_vec(&resp).expect("response serializes");
            json_response(bytes).into_response()
        }
        Ok(Err(e)) => e.into_response(),
        Err(_) => StatusCode::INTERNAL_SERVER_ERROR.into_response(),
    }
}

async fn presets_handler() -> Response {
    json_response(serde_json::to_vec(&presets()).expect("presets serialize")).into_response()
}

async fn health_handler() -> &'static str {
    "ok"
}

pub fn app(opts: ServiceOptions) -> Router {
    let router = Router::new()
        .route("/api/palette", post(palette_handler))
        .route("/api/presets", get(presets_handler))
        .route("/api/health", get(health_handler))
        .layer(DefaultBodyLimit::max(BODY_LIMIT));
    if opts.cors {
        router.layer(CorsLayer::permissive())
    } else {
        router
    }
}

/// Binds `addr` and serves until the process exits. Bind failures are
/// returned before any request is accepted.
pub async fn serve(addr: SocketAddr, opts: ServiceOptions) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    serve_on(listener, opts).await
}

pub async fn serve_on(listener: tokio::net::TcpListener, opts: ServiceOptions) -> std::io::Result<()> {
    axum::serve(listener, app(opts)).await
}
