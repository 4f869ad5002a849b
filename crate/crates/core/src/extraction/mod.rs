//! Extraction of AIDA nanopublications from GeneRIF-style corpora.
//!
//! Each record is trimmed, stripped of at most one reporting prefix and
//! validated. Accepted sentences become nanopublications derived from the
//! record's PubMed entries; identical sentences are merged into one.

mod generif;
mod report;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::aida::{looks_like_symbol, validate, AidaSentence, RuleSet, ValidationReport};
use crate::nanopub::{build_aida_nanopub, vocab, Nanopublication, Provenance};

pub use generif::{maybe_gunzip, open_generif, parse_generif, GeneRifReader, GeneRifRecord, ParseWarning};
pub use report::{emit_quality_report, ExtractionReport, ReportFormat};

/// Removes a leading reporting phrase ("the authors propose that ...").
///
/// Only the first rule matching at position 0 is applied. The new first
/// letter is uppercased unless the first word looks like a symbol ("mRNA",
/// "p53").
pub fn strip_prefix(text: &str, rules: &RuleSet) -> (String, Option<String>) {
    for rule in &rules.prefix_strip_patterns {
        if let Some(m) = rule.pattern.find(text) {
            if m.start() == 0 && m.end() > 0 {
                return (recapitalize(&text[m.end()..]), Some(rule.id.clone()));
            }
        }
    }
    (text.to_string(), None)
}

fn recapitalize(text: &str) -> String {
    let symbol = looks_like_symbol(text.split_whitespace().next().unwrap_or(""));
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_lowercase() && !symbol => c.to_uppercase().chain(chars).collect(),
        _ => text.to_string(),
    }
}

/// The decision made for one record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordOutcome {
    /// Text after normalization, trimming and prefix stripping.
    pub text: String,
    pub stripped_by: Option<String>,
    pub validation: ValidationReport,
}

impl RecordOutcome {
    pub fn is_accepted(&self) -> bool {
        self.validation.is_accepted()
    }
}

pub fn classify_text(text: &str, rules: &RuleSet) -> RecordOutcome {
    let normalized: String = text.nfc().collect();
    let (text, stripped_by) = strip_prefix(normalized.trim(), rules);
    let validation = validate(&text, rules);
    RecordOutcome { text, stripped_by, validation }
}

/// Streaming extractor. Records are judged as they arrive; nanopublications
/// are built in [`finish`](Self::finish) once duplicates have been merged.
pub struct Extractor<'r> {
    rules: &'r RuleSet,
    prov: Provenance,
    report: ExtractionReport,
    index: HashMap<String, usize>,
    accepted: Vec<(AidaSentence, BTreeSet<u64>)>,
}

impl<'r> Extractor<'r> {
    pub fn new(rules: &'r RuleSet, prov_template: Provenance) -> Self {
        Extractor { rules, prov: prov_template, report: ExtractionReport::default(), index: HashMap::new(), accepted: Vec::new() }
    }

    pub fn push(&mut self, record: &GeneRifRecord) -> RecordOutcome {
        let outcome = classify_text(&record.text, self.rules);
        self.record(record, &outcome);
        outcome
    }

    /// Judges a batch, in parallel when the `parallel` feature is on.
    pub fn push_batch(&mut self, records: &[GeneRifRecord]) {
        #[cfg(feature = "parallel")]
        let outcomes: Vec<RecordOutcome> = {
            use rayon::prelude::*;
            records.par_iter().map(|r| classify_text(&r.text, self.rules)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let outcomes: Vec<RecordOutcome> = records.iter().map(|r| classify_text(&r.text, self.rules)).collect();
        for (record, outcome) in records.iter().zip(&outcomes) {
            self.record(record, outcome);
        }
    }

    fn record(&mut self, record: &GeneRifRecord, outcome: &RecordOutcome) {
        self.report.tally(outcome);
        if !outcome.is_accepted() {
            return;
        }
        match self.index.get(&outcome.text) {
            Some(&i) => {
                self.report.duplicates += 1;
                self.accepted[i].1.extend(&record.pmids);
            }
            None => {
                let sentence = AidaSentence::new(&outcome.text).expect("accepted text is a valid sentence");
                self.index.insert(outcome.text.clone(), self.accepted.len());
                self.accepted.push((sentence, record.pmids.iter().copied().collect()));
            }
        }
    }

    pub fn report(&self) -> &ExtractionReport {
        &self.report
    }

    pub fn finish(self) -> (Vec<Nanopublication>, ExtractionReport) {
        let nanopubs = self
            .accepted
            .iter()
            .map(|(sentence, pmids)| {
                let mut prov = self.prov.clone();
                prov.derived_from = pmids.iter().map(|&p| vocab::pubmed(p)).collect();
                build_aida_nanopub(sentence, &prov, "")
            })
            .collect();
        (nanopubs, self.report)
    }
}

/// Runs the whole pipeline over `records` and returns the nanopublications
/// in order of first appearance together with the tallies.
pub fn extract_corpus(
    records: impl IntoIterator<Item = GeneRifRecord>,
    rules: &RuleSet,
    prov_template: &Provenance,
) -> (Vec<Nanopublication>, ExtractionReport) {
    const BATCH: usize = 4096;
    let mut extractor = Extractor::new(rules, prov_template.clone());
    let mut batch = Vec::with_capacity(BATCH);
    for record in records {
        batch.push(record);
        if batch.len() == BATCH {
            extractor.push_batch(&batch);
            batch.clear();
        }
    }
    extractor.push_batch(&batch);
    extractor.finish()
}
