use std::sync::Arc;

use aidapub_core::aida::{default_ruleset, AidaSentence};
use aidapub_core::nanopub::{build_aida_nanopub, parse_trig, serialize_trig, serialize_trig_all, Channel, Iri, Provenance};
use aidapub_portal::{router, AppState, Portal};
use axum::body::{to_bytes, Body};
use axum::http::{header, Request, StatusCode};
use axum::Router;
use chrono::{TimeZone, Utc};
use serde_json::{json, Value};
use tower::ServiceExt;

const MALARIA: &str = "Malaria is transmitted by mosquitoes.";
const MALARIA_URI: &str = "http://purl.org/aida/Malaria+is+transmitted+by+mosquitoes.";

fn app() -> Router {
    router(AppState { portal: Arc::new(Portal::in_memory()), rules: Arc::new(default_ruleset()) })
}

fn trig(text: &str, salt: &str) -> Vec<u8> {
    let prov = Provenance::new(Iri::new("http://example.org/author").unwrap(), Utc.with_ymd_and_hms(2012, 1, 1, 0, 0, 0).unwrap(), Channel::Author);
    serialize_trig(&build_aida_nanopub(&AidaSentence::new(text).unwrap(), &prov, salt))
}

/// Percent-encodes everything outside the unreserved set.
fn enc(s: &str) -> String {
    s.bytes()
        .map(|b| match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'.' | b'_' | b'~' => (b as char).to_string(),
            _ => format!("%{b:02X}"),
        })
        .collect()
}

async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, to_bytes(resp.into_body(), usize::MAX).await.unwrap().to_vec())
}

async fn get(app: &Router, path: &str) -> (StatusCode, Value) {
    let (s, b) = send(app, Request::get(path).body(Body::empty()).unwrap()).await;
    (s, serde_json::from_slice(&b).unwrap())
}

async fn post_json(app: &Router, path: &str, body: Value) -> (StatusCode, Value) {
    let req = Request::post(path).header(header::CONTENT_TYPE, "application/json").body(Body::from(body.to_string())).unwrap();
    let (s, b) = send(app, req).await;
    (s, serde_json::from_slice(&b).unwrap())
}

async fn post_trig(app: &Router, body: Vec<u8>) -> (StatusCode, Value) {
    let req = Request::post("/nanopubs").header(header::CONTENT_TYPE, "application/trig").body(Body::from(body)).unwrap();
    let (s, b) = send(app, req).await;
    (s, serde_json::from_slice(&b).unwrap())
}

async fn alice(app: &Router) -> &'static str {
    let (s, _) = post_json(app, "/agents", json!({"iri": "http://example.org/alice", "display_name": "Alice", "kind": "Person"})).await;
    assert_eq!(s, StatusCode::CREATED);
    "http://example.org/alice"
}

#[tokio::test]
async fn publish_fetch_and_republish() {
    let app = app();
    let body = trig(MALARIA, "");
    let (s, receipt) = post_trig(&app, body.clone()).await;
    assert_eq!(s, StatusCode::CREATED);
    let uri = receipt["uri"].as_str().unwrap().to_string();
    assert!(uri.starts_with("urn:aidapub:"));

    let (s, again) = post_trig(&app, body.clone()).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(again, receipt);

    let (s, tr) = send(&app, Request::get(format!("/nanopubs/{}", enc(&uri))).body(Body::empty()).unwrap()).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(tr, body);

    let (s, view) = get(&app, &format!("/statements/{}", enc(MALARIA_URI))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(view["sentence"], MALARIA);
    assert_eq!(view["asserting_nanopubs"][0]["nanopub_uri"], uri.as_str());
    assert_eq!(view["asserting_nanopubs"][0]["provenance"]["created_by_channel"], "Author");
}

#[tokio::test]
async fn several_nanopubs_in_one_body() {
    let app = app();
    let prov = Provenance::new(Iri::new("http://example.org/author").unwrap(), Utc.with_ymd_and_hms(2012, 1, 1, 0, 0, 0).unwrap(), Channel::Author);
    let nps: Vec<_> = ["Insulin lowers blood glucose.", MALARIA]
        .iter()
        .map(|t| build_aida_nanopub(&AidaSentence::new(t).unwrap(), &prov, ""))
        .collect();
    let (s, receipts) = post_trig(&app, serialize_trig_all(&nps)).await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(receipts.as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn bad_publications() {
    let app = app();
    let (s, e) = post_trig(&app, b"this is not trig".to_vec()).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(e["error"], "TrigSyntax");

    let (s, e) = post_trig(&app, b"<http://example.org/g> { <http://a.org/s> <http://a.org/p> <http://a.org/o> . }".to_vec()).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(e["error"], "BadRequest");

    let text = String::from_utf8(trig(MALARIA, "")).unwrap();
    let dangling = text.replacen("np:hasAssertion", "np:containsGraph <http://example.org/missing> ;\n    np:hasAssertion", 1);
    assert_ne!(dangling, text);
    let (s, e) = post_trig(&app, dangling.into_bytes()).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{e}");
    assert_eq!(e["error"], "StructureInvalid");

    let req = Request::post("/nanopubs").header(header::CONTENT_TYPE, "application/json").body(Body::from("{}")).unwrap();
    assert_eq!(send(&app, req).await.0, StatusCode::UNSUPPORTED_MEDIA_TYPE);
}

#[tokio::test]
async fn statements_accept_bare_sentences_and_reject_garbage() {
    let app = app();
    let (s, view) = get(&app, "/statements/The+moon+is+made+of+cheese.").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(view["sentence"], "The moon is made of cheese.");
    assert_eq!(view["asserting_nanopubs"], json!([]));
    let (s, e) = get(&app, &format!("/statements/{}", enc("http://example.org/x"))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(e["error"], "MalformedUri");
    let (s, _) = get(&app, &format!("/nanopubs/{}", enc("urn:aidapub:nothing"))).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn opinions_and_links() {
    let app = app();
    let agent = alice(&app).await;
    let (s, op) = post_json(&app, "/opinions", json!({"agent": agent, "statement": MALARIA_URI, "kind": "Agrees"})).await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(op["kind"], "Agrees");
    let (s, _) = post_json(&app, "/opinions", json!({"agent": agent, "statement": MALARIA_URI, "kind": "Disagrees"})).await;
    assert_eq!(s, StatusCode::CREATED);

    let other = "http://purl.org/aida/Mosquitoes+transmit+malaria.";
    let (s, receipt) = post_json(&app, "/links", json!({"agent": agent, "a": MALARIA_URI, "b": other, "relation": "hasSameMeaning"})).await;
    assert_eq!(s, StatusCode::CREATED);

    let (_, view) = get(&app, &format!("/statements/{}", enc(other))).await;
    assert_eq!(view["related"][0]["uri"], MALARIA_URI);
    assert_eq!(view["related"][0]["relation"], "hasSameMeaning");
    assert_eq!(view["related"][0]["nanopub_uri"], receipt["uri"]);

    let (_, view) = get(&app, &format!("/statements/{}", enc(MALARIA_URI))).await;
    assert_eq!(view["opinions"].as_array().unwrap().len(), 1);
    assert_eq!(view["opinions"][0]["kind"], "Disagrees");

    // The backing nanopublication is retrievable and asserts the opinion.
    let np_uri = view["opinions"][0]["nanopub_uri"].as_str().unwrap();
    let (s, tr) = send(&app, Request::get(format!("/nanopubs/{}", enc(np_uri))).body(Body::empty()).unwrap()).await;
    assert_eq!(s, StatusCode::OK);
    let parsed = parse_trig(&tr).unwrap();
    assert_eq!(parsed.nanopubs[0].collect_assertion_triples().unwrap().len(), 1);
}

#[tokio::test]
async fn request_errors_are_json() {
    let app = app();
    let (s, e) = post_json(&app, "/opinions", json!({"agent": "http://example.org/nobody", "statement": MALARIA_URI, "kind": "Agrees"})).await;
    assert_eq!((s, e["error"].as_str()), (StatusCode::BAD_REQUEST, Some("UnknownAgent")));
    let agent = alice(&app).await;
    let (s, e) = post_json(&app, "/links", json!({"agent": agent, "a": MALARIA_URI, "b": MALARIA_URI, "relation": "hasSameMeaning"})).await;
    assert_eq!((s, e["error"].as_str()), (StatusCode::BAD_REQUEST, Some("SelfLink")));
    let (s, e) = post_json(&app, "/opinions", json!({"agent": agent, "statement": MALARIA_URI, "kind": "Likes"})).await;
    assert_eq!((s, e["error"].as_str()), (StatusCode::BAD_REQUEST, Some("BadRequest")));
    let (s, e) = post_json(&app, "/agents", json!({"iri": agent, "display_name": "Someone else", "kind": "Person"})).await;
    assert_eq!((s, e["error"].as_str()), (StatusCode::CONFLICT, Some("AgentConflict")));
    let (s, e) = get(&app, "/search?q=x&limit=many").await;
    assert_eq!((s, e["error"].as_str()), (StatusCode::BAD_REQUEST, Some("BadRequest")));
}

#[tokio::test]
async fn agents_are_listed() {
    let app = app();
    alice(&app).await;
    let (s, _) = post_json(&app, "/agents", json!({"iri": "http://example.org/alice", "display_name": "Alice", "kind": "Person"})).await;
    assert_eq!(s, StatusCode::OK);
    let (_, list) = get(&app, "/agents").await;
    assert_eq!(list, json!([{"iri": "http://example.org/alice", "display_name": "Alice", "kind": "Person"}]));
}

#[tokio::test]
async fn search_endpoint() {
    let app = app();
    for t in [MALARIA, "Insulin lowers blood glucose.", "Dengue is transmitted by mosquitoes."] {
        post_trig(&app, trig(t, "")).await;
    }
    let (s, hits) = get(&app, "/search?q=malaria+mosquitoes&limit=5").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(hits[0]["uri"], MALARIA_URI);
    let (_, hits) = get(&app, "/search?q=").await;
    assert_eq!(hits, json!([]));
    let (_, hits) = get(&app, "/search?q=mosquitoes&limit=1").await;
    assert_eq!(hits.as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn validate_endpoint() {
    let app = app();
    let (s, r) = post_json(&app, "/validate", json!({"text": MALARIA})).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(r["verdict"], "Perfect");
    let (_, r) = post_json(&app, "/validate", json!({"text": "We show that malaria is transmitted by mosquitoes"})).await;
    assert_ne!(r["verdict"], "Perfect");
}
