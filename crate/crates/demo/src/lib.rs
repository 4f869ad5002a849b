//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every function returns a JSON string; the page parses it.

use aidapub_core::aida::{decode_uri_str, default_ruleset, encode_text};
use aidapub_core::clustering::{cluster_corpus, corpus_from_lines, vectorize, ClusterParams};
use aidapub_core::extraction::classify_text;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Verdict, violations and AIDA URI for one candidate sentence.
#[wasm_bindgen]
pub fn check_sentence(text: &str) -> String {
    let outcome = classify_text(text, &default_ruleset());
    let uri = outcome.is_accepted().then(|| encode_text(&outcome.text).ok()).flatten();
    json!({
        "text": outcome.text,
        "stripped_by": outcome.stripped_by,
        "report": outcome.validation,
        "uri": uri.map(|u| u.to_string()),
    })
    .to_string()
}

/// `{"ok": uri}` or `{"error": code, "message": ...}`.
#[wasm_bindgen]
pub fn encode(text: &str) -> String {
    match encode_text(text) {
        Ok(uri) => json!({ "ok": uri.to_string() }),
        Err(e) => json!({ "error": e.code(), "message": e.to_string() }),
    }
    .to_string()
}

#[wasm_bindgen]
pub fn decode(uri: &str) -> String {
    match decode_uri_str(uri) {
        Ok(s) => json!({ "ok": s.as_str() }),
        Err(e) => json!({ "error": e.code(), "message": e.to_string() }),
    }
    .to_string()
}

/// Clusters one sentence per line. Blank lines are skipped.
#[wasm_bindgen]
pub fn cluster(lines: &str, n1: usize, n2: usize, k: usize, seed: u64) -> String {
    cluster_json(lines, ClusterParams { n1, n2, k, seed, ..ClusterParams::default() })
        .unwrap_or_else(|message| json!({ "error": message }))
        .to_string()
}

fn cluster_json(lines: &str, params: ClusterParams) -> Result<Value, String> {
    params.check().map_err(|e| e.to_string())?;
    let sentences = corpus_from_lines(lines).map_err(|(line, e)| format!("line {line}: {e}"))?;
    let (_, corpus) = vectorize(&sentences).map_err(|e| e.to_string())?;
    let result = cluster_corpus(&corpus, &params).map_err(|e| e.to_string())?;
    let clusters: Vec<Value> = result
        .clusters
        .iter()
        .map(|c| {
            json!({
                "base": sentences[c.base].as_str(),
                "isolate": c.is_isolate,
                "median_distance": c.median_distance,
                "members": c.members.iter().filter(|&&m| m != c.base).map(|&m| sentences[m].as_str()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({ "clusters": clusters, "pairs": result.pairs.len() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn checks_and_encodes() {
        let v = parse(check_sentence("The authors propose that insulin lowers blood glucose."));
        assert_eq!(v["text"], "Insulin lowers blood glucose.");
        assert_eq!(v["report"]["verdict"], "Perfect");
        assert_eq!(v["uri"], "http://purl.org/aida/Insulin+lowers+blood+glucose.");
        let v = parse(check_sentence("We show that it works"));
        assert!(v["uri"].is_null());
    }

    #[test]
    fn codec_roundtrip_and_errors() {
        let uri = parse(encode("Malaria is transmitted by mosquitoes."))["ok"].as_str().unwrap().to_string();
        assert_eq!(parse(decode(&uri))["ok"], "Malaria is transmitted by mosquitoes.");
        assert_eq!(parse(decode("http://example.org/x."))["error"], "BadPrefix");
    }

    #[test]
    fn clusters_lines() {
        let text = "Malaria is transmitted by mosquitoes.\nMalaria is spread by mosquitoes.\nInsulin lowers blood glucose.\n";
        let v = parse(cluster(text, 2, 1, 1, 1));
        assert_eq!(v["clusters"].as_array().unwrap().len(), 3);
        assert!(parse(cluster(text, 2, 1, 0, 1))["error"].is_string());
    }
}
