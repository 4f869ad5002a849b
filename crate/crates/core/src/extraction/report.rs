use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::RecordOutcome;
use crate::aida::{Verdict, Violation};

/// Tallies of every extraction decision.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub total: u64,
    /// Records judged Perfect or MinorIssue, duplicates included.
    pub accepted: u64,
    /// Rejected records keyed by the first rule that raised a violation.
    pub rejected_by_rule: BTreeMap<String, u64>,
    pub stripped_prefix_count: u64,
    pub stripped_by_rule: BTreeMap<String, u64>,
    /// Accepted records whose sentence had already been extracted.
    pub duplicates: u64,
    pub perfect: u64,
    pub minor_issue: u64,
    pub not_aida: u64,
    /// Rejected records per violated criterion; a record can count under several.
    pub violations: BTreeMap<Violation, u64>,
    pub minor_issues: BTreeMap<String, u64>,
}

impl ExtractionReport {
    pub(super) fn tally(&mut self, outcome: &RecordOutcome) {
        self.total += 1;
        if let Some(rule) = &outcome.stripped_by {
            self.stripped_prefix_count += 1;
            *self.stripped_by_rule.entry(rule.clone()).or_default() += 1;
        }
        let v = &outcome.validation;
        match v.verdict {
            Verdict::Perfect => self.perfect += 1,
            Verdict::MinorIssue => self.minor_issue += 1,
            Verdict::NotAida | Verdict::Inaccurate => self.not_aida += 1,
        }
        if v.is_accepted() {
            self.accepted += 1;
            for issue in &v.minor_issues {
                *self.minor_issues.entry(issue.clone()).or_default() += 1;
            }
        } else {
            let rule = v.rejected_by.clone().unwrap_or_else(|| "unknown".into());
            *self.rejected_by_rule.entry(rule).or_default() += 1;
            for violation in &v.violations {
                *self.violations.entry(*violation).or_default() += 1;
            }
        }
    }

    pub fn rejected(&self) -> u64 {
        self.rejected_by_rule.values().sum()
    }

    /// Sentences that became nanopublications.
    pub fn unique_accepted(&self) -> u64 {
        self.accepted - self.duplicates
    }

    pub fn counts_balance(&self) -> bool {
        self.accepted + self.rejected() == self.total && self.perfect + self.minor_issue == self.accepted
    }

    /// Combines reports from independently processed parts of a corpus.
    /// Duplicates across parts are not detected.
    pub fn merge(&mut self, other: &ExtractionReport) {
        fn add<K: Ord + Clone>(into: &mut BTreeMap<K, u64>, from: &BTreeMap<K, u64>) {
            for (k, n) in from {
                *into.entry(k.clone()).or_default() += n;
            }
        }
        self.total += other.total;
        self.accepted += other.accepted;
        add(&mut self.rejected_by_rule, &other.rejected_by_rule);
        self.stripped_prefix_count += other.stripped_prefix_count;
        add(&mut self.stripped_by_rule, &other.stripped_by_rule);
        self.duplicates += other.duplicates;
        self.perfect += other.perfect;
        self.minor_issue += other.minor_issue;
        self.not_aida += other.not_aida;
        add(&mut self.violations, &other.violations);
        add(&mut self.minor_issues, &other.minor_issues);
    }

    /// Category rows in bar-chart order: label and count.
    pub fn categories(&self) -> Vec<(&'static str, u64)> {
        let v = |x| self.violations.get(&x).copied().unwrap_or(0);
        vec![
            ("total", self.total),
            ("perfect", self.perfect),
            ("typo etc.", self.minor_issue),
            ("not AIDA", self.not_aida),
            ("not atomic", v(Violation::NotAtomic)),
            ("not independent", v(Violation::NotIndependent)),
            ("not declarative", v(Violation::NotDeclarative)),
            ("not absolute", v(Violation::NotAbsolute)),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown report format {other:?} (expected text or csv)")),
        }
    }
}

/// Renders the category distribution as percentages of the total.
///
/// Text rows look like `perfect, 70.8%`; CSV has the columns
/// `category,count,percent`. With no records every percentage is `n/a`.
pub fn emit_quality_report(report: &ExtractionReport, format: ReportFormat) -> Vec<u8> {
    let pct = |n: u64| {
        if report.total == 0 {
            "n/a".to_string()
        } else {
            format!("{:.1}", n as f64 * 100.0 / report.total as f64)
        }
    };
    let mut out = String::new();
    match format {
        ReportFormat::Text => {
            for (label, n) in report.categories() {
                let p = pct(n);
                let suffix = if report.total == 0 { "" } else { "%" };
                let _ = writeln!(out, "{label}, {p}{suffix}");
            }
        }
        ReportFormat::Csv => {
            out.push_str("category,count,percent\n");
            for (label, n) in report.categories() {
                let _ = writeln!(out, "{},{n},{}", csv_field(label), pct(n));
            }
        }
    }
    out.into_bytes()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
