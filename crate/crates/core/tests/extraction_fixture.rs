use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use aidapub_core::aida::{default_ruleset, validate, Verdict, Violation};
use aidapub_core::extraction::{
    classify_text, extract_corpus, open_generif, strip_prefix, GeneRifRecord, ExtractionReport,
};
use aidapub_core::nanopub::{vocab, Channel, Iri, Provenance};
use chrono::{TimeZone, Utc};
use proptest::prelude::*;

struct Label {
    line: usize,
    verdict: Verdict,
    rejected_by: Option<String>,
    stripped_by: Option<String>,
    violations: BTreeSet<Violation>,
    minor_issues: Vec<String>,
    sentence: Option<String>,
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn opt(s: &str) -> Option<String> {
    (s != "-").then(|| s.to_string())
}

fn labels(name: &str) -> Vec<Label> {
    std::fs::read_to_string(fixture(name))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let c: Vec<&str> = l.split('\t').collect();
            Label {
                line: c[0].parse().unwrap(),
                verdict: match c[1] {
                    "Perfect" => Verdict::Perfect,
                    "MinorIssue" => Verdict::MinorIssue,
                    _ => Verdict::NotAida,
                },
                rejected_by: opt(c[2]),
                stripped_by: opt(c[3]),
                violations: opt(c[4]).map_or_else(BTreeSet::new, |v| v.split(',').map(|x| x.parse().unwrap()).collect()),
                minor_issues: opt(c[5]).map_or_else(Vec::new, |v| v.split('|').map(String::from).collect()),
                sentence: opt(c[6]),
            }
        })
        .collect()
}

fn records(name: &str) -> Vec<GeneRifRecord> {
    let mut reader = open_generif(fixture(name)).unwrap();
    let records: Vec<_> = reader.by_ref().collect();
    assert!(reader.warnings().is_empty(), "{:?}", reader.warnings());
    records
}

fn bot() -> Provenance {
    Provenance::new(
        Iri::new("http://example.org/bots/generif-extractor").unwrap(),
        Utc.with_ymd_and_hms(2012, 11, 20, 0, 0, 0).unwrap(),
        Channel::TextMining,
    )
}

/// The tallies implied by the hand labels.
fn hand_tally(labels: &[Label]) -> ExtractionReport {
    let mut r = ExtractionReport { total: labels.len() as u64, ..Default::default() };
    let mut seen = BTreeSet::new();
    for l in labels {
        if let Some(rule) = &l.stripped_by {
            r.stripped_prefix_count += 1;
            *r.stripped_by_rule.entry(rule.clone()).or_default() += 1;
        }
        match l.verdict {
            Verdict::Perfect => r.perfect += 1,
            Verdict::MinorIssue => r.minor_issue += 1,
            _ => r.not_aida += 1,
        }
        if let Some(rule) = &l.rejected_by {
            *r.rejected_by_rule.entry(rule.clone()).or_default() += 1;
            for v in &l.violations {
                *r.violations.entry(*v).or_default() += 1;
            }
        } else {
            r.accepted += 1;
            if !seen.insert(l.sentence.clone().unwrap()) {
                r.duplicates += 1;
            }
            for issue in &l.minor_issues {
                *r.minor_issues.entry(issue.clone()).or_default() += 1;
            }
        }
    }
    r
}

fn check_fixture(name: &str) -> (usize, ExtractionReport) {
    let rules = default_ruleset();
    let records = records(&format!("{name}.tsv"));
    let labels = labels(&format!("{name}.labels.tsv"));
    assert_eq!(records.len(), labels.len());

    for (record, label) in records.iter().zip(&labels) {
        assert_eq!(record.line, label.line);
        let outcome = classify_text(&record.text, &rules);
        let v = &outcome.validation;
        let ctx = format!("line {}: {:?} -> {:?}", record.line, record.text, outcome);
        assert_eq!(v.verdict, label.verdict, "{ctx}");
        assert_eq!(v.rejected_by, label.rejected_by, "{ctx}");
        assert_eq!(outcome.stripped_by, label.stripped_by, "{ctx}");
        assert_eq!(v.violations, label.violations, "{ctx}");
        assert_eq!(v.minor_issues, label.minor_issues, "{ctx}");
        if let Some(sentence) = &label.sentence {
            assert_eq!(&outcome.text, sentence, "{ctx}");
        }
    }

    let (nanopubs, report) = extract_corpus(records, &rules, &bot());
    let expected: Vec<String> = {
        let mut seen = BTreeSet::new();
        labels.iter().filter_map(|l| l.sentence.clone()).filter(|s| seen.insert(s.clone())).collect()
    };
    let got: Vec<String> =
        nanopubs.iter().map(|np| np.aida_sentence().unwrap().sentence().as_str().to_string()).collect();
    assert_eq!(got, expected);
    assert_eq!(report, hand_tally(&labels));
    assert!(report.counts_balance());
    (nanopubs.len(), report)
}

#[test]
fn twenty_line_fixture_accepts_the_labeled_twelve() {
    let (n, report) = check_fixture("generif_20");
    assert_eq!(n, 12);
    assert_eq!(report.accepted, 12);
    assert_eq!(report.total, 20);
}

#[test]
fn two_hundred_line_fixture_matches_hand_labels() {
    let (n, report) = check_fixture("generif_200");
    assert_eq!(report.total, 200);
    assert_eq!(report.accepted, 109);
    assert_eq!(report.duplicates, 5);
    assert_eq!(n, 104);
}

#[test]
fn gzip_fixture_gives_the_same_result() {
    use flate2::write::GzEncoder;
    use std::io::Write;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("generif.tsv.gz");
    let mut enc = GzEncoder::new(std::fs::File::create(&path).unwrap(), flate2::Compression::default());
    enc.write_all(&std::fs::read(fixture("generif_20.tsv")).unwrap()).unwrap();
    enc.finish().unwrap();
    let plain: Vec<_> = records("generif_20.tsv");
    let zipped: Vec<_> = open_generif(&path).unwrap().collect();
    assert_eq!(plain, zipped);
}

#[test]
fn accepted_sentences_carry_their_pubmed_sources() {
    let rules = default_ruleset();
    let records = records("generif_200.tsv");
    let (nanopubs, _) = extract_corpus(records.clone(), &rules, &bot());
    let mut sources: BTreeMap<String, BTreeSet<u64>> = BTreeMap::new();
    for r in &records {
        let outcome = classify_text(&r.text, &rules);
        if outcome.is_accepted() {
            sources.entry(outcome.text).or_default().extend(&r.pmids);
        }
    }
    for np in &nanopubs {
        let sentence = np.aida_sentence().unwrap().sentence().as_str().to_string();
        let prov = Provenance::from_nanopub(np).unwrap();
        let want: Vec<Iri> = sources[&sentence].iter().map(|&p| vocab::pubmed(p)).collect();
        assert_eq!(prov.derived_from, want, "{sentence}");
        assert_eq!(prov.created_by_channel, Channel::TextMining);
        assert!(np.validate_structure().is_empty());
    }
}

#[test]
fn extraction_is_deterministic() {
    let rules = default_ruleset();
    let a = extract_corpus(records("generif_200.tsv"), &rules, &bot());
    let b = extract_corpus(records("generif_200.tsv"), &rules, &bot());
    assert_eq!(a, b);
}

const PREFIXES: &[&str] = &[
    "These results clearly indicated that ",
    "The authors propose that ",
    "We show that ",
    "Our findings suggest that ",
    "It was shown that ",
    "In conclusion, ",
    "Taken together, ",
    "This study demonstrates that ",
    "Evidence indicates that ",
    "",
];

const BODIES: &[&str] = &[
    "gene X binds protein Y.",
    "p53 represses MDM2.",
    "mRNA levels rise in hypoxia.",
    "Insulin binds INSR.",
    "élastase degrades elastin.",
    "APOE4 increases amyloid deposition.",
    "the complex may bind DNA.",
];

proptest! {
    #[test]
    fn strip_prefix_is_idempotent(p in 0..PREFIXES.len(), b in 0..BODIES.len()) {
        let rules = default_ruleset();
        let text = format!("{}{}", PREFIXES[p], BODIES[b]);
        let (once, _) = strip_prefix(&text, &rules);
        let (twice, applied) = strip_prefix(&once, &rules);
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(applied, None);
    }

    #[test]
    fn accepted_text_revalidates(text in "[A-Za-z ,;.()-]{0,60}", p in 0..PREFIXES.len()) {
        let rules = default_ruleset();
        let outcome = classify_text(&format!("{}{text}", PREFIXES[p]), &rules);
        if outcome.is_accepted() {
            let again = validate(&outcome.text, &rules);
            prop_assert!(again.is_accepted());
            prop_assert_eq!(again, outcome.validation);
        }
    }

    #[test]
    fn counts_always_balance(texts in prop::collection::vec("[A-Za-z ,.]{0,40}", 0..30)) {
        let rules = default_ruleset();
        let records: Vec<GeneRifRecord> = texts
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.trim().is_empty())
            .map(|(i, t)| GeneRifRecord {
                tax_id: 9606,
                gene_id: 1,
                pmids: vec![i as u64 + 1],
                last_update: chrono::NaiveDate::from_ymd_opt(2012, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap(),
                text: t.clone(),
                line: i + 1,
            })
            .collect();
        let n = records.len() as u64;
        let (nanopubs, report) = extract_corpus(records, &rules, &bot());
        prop_assert_eq!(report.total, n);
        prop_assert!(report.counts_balance());
        prop_assert_eq!(nanopubs.len() as u64, report.unique_accepted());
    }
}
