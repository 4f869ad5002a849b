use std::sync::Arc;

use aidapub_core::aida::{validate, AidaUri, RuleSet, AIDA_PREFIX};
use aidapub_core::nanopub::{parse_trig, serialize_trig, Iri};
use axum::body::Bytes;
use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::store::{Agent, AgentKind, Outcome, Portal, PortalError, RelationKind};
use crate::OpinionKind;

pub const TRIG_MEDIA_TYPE: &str = "application/trig";
const DEFAULT_SEARCH_LIMIT: usize = 10;
const MAX_SEARCH_LIMIT: usize = 1000;

#[derive(Clone)]
pub struct AppState {
    pub portal: Arc<Portal>,
    pub rules: Arc<RuleSet>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

pub struct ApiError(StatusCode, PortalError);

impl From<PortalError> for ApiError {
    fn from(e: PortalError) -> Self {
        let status = match &e {
            PortalError::StructureInvalid(_) => StatusCode::UNPROCESSABLE_ENTITY,
            PortalError::Trig(aidapub_core::nanopub::TrigError::Structure { .. }) => StatusCode::UNPROCESSABLE_ENTITY,
            PortalError::ConflictingContentForUri(_) | PortalError::AgentConflict(_) => StatusCode::CONFLICT,
            PortalError::NotFound(_) => StatusCode::NOT_FOUND,
            PortalError::Journal(_) => StatusCode::INTERNAL_SERVER_ERROR,
            PortalError::MalformedUri(_)
            | PortalError::UnknownAgent(_)
            | PortalError::SelfLink(_)
            | PortalError::BadRequest(_)
            | PortalError::Trig(_) => StatusCode::BAD_REQUEST,
        };
        ApiError(status, e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if self.0.is_server_error() {
            tracing::error!(error = %self.1, "request failed");
        }
        let body = ErrorBody { error: self.1.code().to_string(), message: self.1.to_string() };
        (self.0, Json(body)).into_response()
    }
}

fn bad_request(msg: impl Into<String>) -> ApiError {
    PortalError::BadRequest(msg.into()).into()
}

fn body<T>(r: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    r.map(|Json(t)| t).map_err(|e| bad_request(e.body_text()))
}

fn created_or_ok(outcome: Outcome) -> StatusCode {
    match outcome {
        Outcome::Created => StatusCode::CREATED,
        Outcome::AlreadyStored => StatusCode::OK,
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/nanopubs", post(publish))
        .route("/nanopubs/{uri}", get(get_nanopub))
        .route("/statements/{uri}", get(get_statement))
        .route("/opinions", post(post_opinion))
        .route("/links", post(post_link))
        .route("/search", get(search))
        .route("/agents", post(post_agent).get(list_agents))
        .route("/validate", post(post_validate))
        .with_state(state)
}

fn accepts_trig(headers: &HeaderMap) -> bool {
    let Some(ct) = headers.get(header::CONTENT_TYPE) else { return true };
    let Ok(ct) = ct.to_str() else { return false };
    let essence = ct.split(';').next().unwrap_or("").trim().to_ascii_lowercase();
    matches!(essence.as_str(), "application/trig" | "text/trig" | "application/x-trig" | "text/plain" | "")
}

/// Accepts one or more nanopublications. A single one yields a receipt
/// object, several yield an array of receipts.
async fn publish(State(st): State<AppState>, headers: HeaderMap, body: Bytes) -> Result<Response, ApiError> {
    if !accepts_trig(&headers) {
        let e = ErrorBody { error: "UnsupportedMediaType".into(), message: format!("send TriG as {TRIG_MEDIA_TYPE}") };
        return Ok((StatusCode::UNSUPPORTED_MEDIA_TYPE, Json(e)).into_response());
    }
    let parsed = parse_trig(&body).map_err(PortalError::from)?;
    if !parsed.unattached_graphs.is_empty() {
        let names: Vec<_> = parsed.unattached_graphs.iter().map(Iri::as_str).collect();
        return Err(bad_request(format!("graphs outside any nanopublication: {}", names.join(", "))));
    }
    if !parsed.default_graph.is_empty() {
        return Err(bad_request("triples outside any named graph"));
    }
    if parsed.nanopubs.is_empty() {
        return Err(bad_request("no nanopublication in request body"));
    }
    let single = parsed.nanopubs.len() == 1;
    let mut receipts = Vec::new();
    let mut any_created = false;
    for np in parsed.nanopubs {
        let (receipt, outcome) = st.portal.store_publish(np)?;
        any_created |= outcome == Outcome::Created;
        receipts.push(receipt);
    }
    let status = if any_created { StatusCode::CREATED } else { StatusCode::OK };
    Ok(if single {
        (status, Json(receipts.pop().expect("one receipt"))).into_response()
    } else {
        (status, Json(receipts)).into_response()
    })
}

async fn get_nanopub(State(st): State<AppState>, Path(uri): Path<String>) -> Result<Response, ApiError> {
    let iri = Iri::new(&uri).map_err(|_| PortalError::NotFound(uri.clone()))?;
    let np = st.portal.nanopub(&iri).ok_or(PortalError::NotFound(uri))?;
    Ok(([(header::CONTENT_TYPE, TRIG_MEDIA_TYPE)], serialize_trig(&np)).into_response())
}

/// Full AIDA URIs are accepted, as is the bare encoded sentence.
fn statement_uri(raw: &str) -> Result<AidaUri, ApiError> {
    let full = if raw.contains(':') { raw.to_string() } else { format!("{AIDA_PREFIX}{raw}") };
    AidaUri::parse(&full).map_err(|e| PortalError::MalformedUri(format!("{raw}: {e}")).into())
}

async fn get_statement(State(st): State<AppState>, Path(uri): Path<String>) -> Result<Response, ApiError> {
    let uri = statement_uri(&uri)?;
    Ok(Json(st.portal.statement(&uri)).into_response())
}

fn agent_iri(raw: &str) -> Result<Iri, ApiError> {
    Iri::new(raw).map_err(|e| bad_request(format!("agent must be an absolute IRI: {e}")))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OpinionRequest {
    pub agent: String,
    pub statement: String,
    pub kind: OpinionKind,
}

async fn post_opinion(State(st): State<AppState>, req: Result<Json<OpinionRequest>, JsonRejection>) -> Result<Response, ApiError> {
    let req = body(req)?;
    let agent = agent_iri(&req.agent)?;
    let statement = statement_uri(&req.statement)?;
    let opinion = st.portal.post_opinion(&agent, &statement, req.kind)?;
    Ok((StatusCode::CREATED, Json(opinion)).into_response())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LinkRequest {
    pub agent: String,
    pub a: String,
    pub b: String,
    pub relation: RelationKind,
}

async fn post_link(State(st): State<AppState>, req: Result<Json<LinkRequest>, JsonRejection>) -> Result<Response, ApiError> {
    let req = body(req)?;
    let agent = agent_iri(&req.agent)?;
    let a = statement_uri(&req.a)?;
    let b = statement_uri(&req.b)?;
    let (receipt, outcome) = st.portal.link_statements(&agent, &a, &b, req.relation)?;
    Ok((created_or_ok(outcome), Json(receipt)).into_response())
}

#[derive(Debug, Deserialize)]
struct SearchParams {
    #[serde(default)]
    q: String,
    limit: Option<usize>,
}

async fn search(
    State(st): State<AppState>,
    p: Result<Query<SearchParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(p) = p.map_err(|e| bad_request(e.body_text()))?;
    let limit = p.limit.unwrap_or(DEFAULT_SEARCH_LIMIT).min(MAX_SEARCH_LIMIT);
    Ok(Json(st.portal.search_sentences(&p.q, limit)).into_response())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AgentRequest {
    pub iri: String,
    pub display_name: String,
    pub kind: AgentKind,
}

async fn post_agent(State(st): State<AppState>, req: Result<Json<AgentRequest>, JsonRejection>) -> Result<Response, ApiError> {
    let req = body(req)?;
    let iri = agent_iri(&req.iri)?;
    let agent = Agent { iri, display_name: req.display_name, kind: req.kind };
    let outcome = st.portal.register_agent(agent.clone())?;
    Ok((created_or_ok(outcome), Json(agent)).into_response())
}

async fn list_agents(State(st): State<AppState>) -> Response {
    Json(st.portal.agents()).into_response()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ValidateRequest {
    pub text: String,
}

async fn post_validate(
    State(st): State<AppState>,
    req: Result<Json<ValidateRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let req = body(req)?;
    Ok(Json(validate(&req.text, &st.rules)).into_response())
}
