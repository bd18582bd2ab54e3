//! HTTP/JSON façade over the library. Every handler parses its body, calls the
//! same library function the CLI uses and serializes the result unchanged.
//!
//! Shared state (an optional rally-winner model and an optional corpus) is
//! loaded once and never mutated, so handlers need no locking.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use vren_core::features::{FeatureLayout, TaskKind};
use vren_core::notation::{lint_source, parse_corpus, serialize_corpus};
use vren_core::predictor::{rally_context, what_if, LinearModel};
use vren_core::stats::{
    attack_table, pass_set_quality, serve_receive_distribution, set_location_distribution,
};
use vren_core::synth::{generate_corpus, GeneratorProfile};
use vren_core::{Diagnostic, Match, ServeType, Team, VrenError};

use crate::commands::{find_rally, load, predict_rally};
use crate::{CliError, ServeArgs};

/// Upper bound on rallies one /generate request may ask for.
pub const MAX_GENERATED_RALLIES: usize = 200_000;

#[derive(Debug, Default)]
pub struct AppState {
    pub model: Option<LinearModel>,
    pub corpus: Vec<Match>,
}

type Shared = Arc<AppState>;

/// Error envelope: `{code, message}` plus the diagnostics when the failure
/// came from the parser or linter.
#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status,
            code: code.into(),
            message: message.into(),
            diagnostics: Vec::new(),
        }
    }

    fn schema(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "E_SCHEMA", message)
    }

    fn diagnostics(diagnostics: Vec<Diagnostic>) -> Self {
        let first = diagnostics.iter().find(|d| d.is_error()).or(diagnostics.first());
        let code = first.map(|d| d.code.as_str()).unwrap_or("E_SYNTAX");
        let message = first.map(|d| d.to_string()).unwrap_or_default();
        Self {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            code: code.into(),
            message,
            diagnostics,
        }
    }
}

impl From<VrenError> for ApiError {
    fn from(e: VrenError) -> Self {
        match e {
            VrenError::Parse(diags) => Self::diagnostics(diags),
            other => {
                let status = match other {
                    VrenError::Schema(_) => StatusCode::BAD_REQUEST,
                    VrenError::BadIndex(_) => StatusCode::NOT_FOUND,
                    VrenError::InvalidModel(_) => StatusCode::CONFLICT,
                    _ => StatusCode::UNPROCESSABLE_ENTITY,
                };
                let code = other.code();
                let message = other.to_string();
                let message = message
                    .strip_prefix(code)
                    .and_then(|m| m.strip_prefix(": "))
                    .unwrap_or(&message)
                    .to_string();
                Self::new(status, code, message)
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::schema(format!("request body: {e}")))
}

/// Parse `source`, rejecting it when the linter reports any error.
fn parse_checked(source: &str) -> Result<(Vec<Match>, Vec<Diagnostic>), ApiError> {
    let diagnostics = lint_source(source);
    if diagnostics.iter().any(|d| d.is_error()) {
        return Err(ApiError::diagnostics(diagnostics));
    }
    Ok((parse_corpus(source)?, diagnostics))
}

/// The request's own corpus when it carries `source`, else the loaded one.
fn scope<'a>(state: &'a AppState, source: Option<&str>) -> Result<std::borrow::Cow<'a, [Match]>, ApiError> {
    match source {
        Some(src) => Ok(parse_checked(src)?.0.into()),
        None if state.corpus.is_empty() => Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "E_EMPTY_SCOPE",
            "no `source` in the request and no corpus loaded",
        )),
        None => Ok(state.corpus.as_slice().into()),
    }
}

fn model(state: &AppState) -> Result<&LinearModel, ApiError> {
    state
        .model
        .as_ref()
        .ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "E_INVALID_MODEL", "no model loaded"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceReq {
    source: String,
}

#[derive(Serialize)]
struct ParseResp {
    matches: Vec<Match>,
    diagnostics: Vec<Diagnostic>,
}

#[derive(Serialize)]
struct LintResp {
    clean: bool,
    diagnostics: Vec<Diagnostic>,
}

#[derive(Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum StatsKind {
    Table,
    Zones,
    Distribution,
    Quality,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StatsReq {
    #[serde(default)]
    source: Option<String>,
    report: StatsKind,
    #[serde(default)]
    team: Option<Team>,
    #[serde(default)]
    serve: Option<ServeType>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RallyReq {
    #[serde(default)]
    source: Option<String>,
    #[serde(default)]
    match_id: Option<String>,
    rally_no: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WhatIfReq {
    #[serde(default)]
    source: Option<String>,
    #[serde(default)]
    match_id: Option<String>,
    rally_no: u32,
    /// 0-based position of the round in the rally.
    round_index: usize,
    field: String,
    value: String,
}

fn default_one() -> usize {
    1
}

fn default_rallies() -> usize {
    50
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenerateReq {
    #[serde(default = "default_one")]
    matches: usize,
    #[serde(default = "default_rallies")]
    rallies: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    profile: Option<Value>,
}

#[derive(Serialize)]
struct GenerateResp {
    source: String,
    matches: Vec<Match>,
}

async fn health(State(state): State<Shared>) -> Json<Value> {
    let layout = FeatureLayout::get();
    Json(json!({
        "status": "ok",
        "layout_hash": layout.hash(),
        "round_width": layout.width,
        "model_loaded": state.model.is_some(),
        "corpus_matches": state.corpus.len(),
    }))
}

async fn parse(bytes: Bytes) -> ApiResult<ParseResp> {
    let req: SourceReq = body(&bytes)?;
    let (matches, diagnostics) = parse_checked(&req.source)?;
    Ok(Json(ParseResp { matches, diagnostics }))
}

async fn lint(bytes: Bytes) -> ApiResult<LintResp> {
    let req: SourceReq = body(&bytes)?;
    let diagnostics = lint_source(&req.source);
    Ok(Json(LintResp {
        clean: !diagnostics.iter().any(|d| d.is_error()),
        diagnostics,
    }))
}

async fn stats(State(state): State<Shared>, bytes: Bytes) -> Result<Json<Value>, ApiError> {
    let req: StatsReq = body(&bytes)?;
    if req.serve.is_some() && req.report != StatsKind::Zones {
        return Err(ApiError::schema("`serve` only applies to the zones report"));
    }
    let matches = scope(&state, req.source.as_deref())?;
    let team = || req.team.ok_or_else(|| ApiError::schema("`team` is required for this report"));
    let value = match req.report {
        StatsKind::Table => serde_json::to_value(attack_table(&matches, team()?)?),
        StatsKind::Zones => {
            let counts: BTreeMap<String, u64> = serve_receive_distribution(&matches, req.serve)
                .into_iter()
                .map(|(z, n)| (z.to_string(), n))
                .collect();
            serde_json::to_value(counts)
        }
        StatsKind::Distribution => serde_json::to_value(set_location_distribution(&matches, req.team)?),
        StatsKind::Quality => serde_json::to_value(pass_set_quality(&matches, team()?)?),
    };
    Ok(Json(value.expect("reports serialize")))
}

async fn predict(State(state): State<Shared>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: RallyReq = body(&bytes)?;
    let model = model(&state)?;
    let matches = scope(&state, req.source.as_deref())?;
    let (m, idx) = find_rally(&matches, req.match_id.as_deref(), req.rally_no)?;
    Ok(Json(predict_rally(model, m, idx)?).into_response())
}

async fn whatif(State(state): State<Shared>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: WhatIfReq = body(&bytes)?;
    let model = model(&state)?;
    let matches = scope(&state, req.source.as_deref())?;
    let (m, idx) = find_rally(&matches, req.match_id.as_deref(), req.rally_no)?;
    let result = what_if(
        model,
        &rally_context(m, idx),
        &m.rallies[idx],
        req.round_index,
        &req.field,
        &req.value,
    )?;
    Ok(Json(result).into_response())
}

async fn generate(bytes: Bytes) -> ApiResult<GenerateResp> {
    let req: GenerateReq = body(&bytes)?;
    if req.matches.saturating_mul(req.rallies) > MAX_GENERATED_RALLIES {
        return Err(ApiError::schema(format!(
            "at most {MAX_GENERATED_RALLIES} rallies per request"
        )));
    }
    let profile = match req.profile {
        Some(v) => GeneratorProfile::from_json(&v.to_string())?,
        None => GeneratorProfile::default(),
    };
    let matches = generate_corpus(&profile, req.matches, req.rallies, req.seed)?;
    let source = serialize_corpus(&matches)?;
    Ok(Json(GenerateResp { source, matches }))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/parse", post(parse))
        .route("/lint", post(lint))
        .route("/stats", post(stats))
        .route("/predict/rally", post(predict))
        .route("/whatif", post(whatif))
        .route("/generate", post(generate))
        .with_state(Arc::new(state))
}

/// Load the model and corpus named by `args`.
pub fn load_state(args: &ServeArgs) -> Result<AppState, CliError> {
    let model = match &args.model {
        Some(path) => {
            let model = LinearModel::load(path).map_err(|e| CliError::at(path, e))?;
            let task = model.meta.map(|m| m.task);
            if task.is_some_and(|t| t != TaskKind::RallyWinner) {
                return Err(CliError::at(
                    path,
                    VrenError::InvalidModel("the service needs a rally-winner model".into()),
                ));
            }
            Some(model)
        }
        None => None,
    };
    let corpus = match &args.corpus {
        Some(path) => load(path, false)?,
        None => Vec::new(),
    };
    Ok(AppState { model, corpus })
}

pub fn serve_blocking(args: ServeArgs) -> Result<(), CliError> {
    let state = load_state(&args)?;
    let addr: SocketAddr = format!("{}:{}", args.host, args.port)
        .parse()
        .map_err(|_| CliError::Usage(format!("--host `{}` is not an IP address", args.host)))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Other(format!("runtime: {e}")))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| {
            if e.kind() == std::io::ErrorKind::AddrInUse {
                CliError::Other(format!("port {} is already in use on {}", addr.port(), addr.ip()))
            } else {
                CliError::Other(format!("cannot listen on {addr}: {e}"))
            }
        })?;
        eprintln!("vren: listening on http://{addr}");
        axum::serve(listener, router(state))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| CliError::Other(format!("server: {e}")))
    })
}
