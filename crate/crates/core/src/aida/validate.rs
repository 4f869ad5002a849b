//! Heuristic AIDA compliance checking.
//!
//! Structural checks (terminal full stop, control characters, length, a
//! finite verb) are built in; everything lexical comes from the [`RuleSet`].
//! Built-in rule ids start with `builtin:` and are applied before the rule
//! file, in the order they appear below.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::rules::{RuleSet, Violation};
use super::sentence::MAX_SENTENCE_CHARS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Perfect,
    MinorIssue,
    NotAida,
    /// Assigned by human curators only; `validate` never produces it.
    Inaccurate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Perfect => "Perfect",
            Verdict::MinorIssue => "MinorIssue",
            Verdict::NotAida => "NotAida",
            Verdict::Inaccurate => "Inaccurate",
        }
    }

    pub fn is_accepted(self) -> bool {
        matches!(self, Verdict::Perfect | Verdict::MinorIssue)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub verdict: Verdict,
    pub violations: BTreeSet<Violation>,
    pub minor_issues: Vec<String>,
    /// Ids of every rule that fired, in application order.
    pub matched_rules: Vec<String>,
    /// The rule responsible for rejection: the first one that raised a violation.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rejected_by: Option<String>,
}

impl ValidationReport {
    pub fn is_accepted(&self) -> bool {
        self.verdict.is_accepted()
    }
}

#[derive(Default)]
struct Builder {
    violations: BTreeSet<Violation>,
    minor_issues: Vec<String>,
    matched_rules: Vec<String>,
    rejected_by: Option<String>,
}

impl Builder {
    fn violation(&mut self, rule: &str, violation: Violation) {
        self.matched_rules.push(rule.to_string());
        self.violations.insert(violation);
        if self.rejected_by.is_none() {
            self.rejected_by = Some(rule.to_string());
        }
    }

    fn minor(&mut self, rule: &str, label: &str) {
        self.matched_rules.push(rule.to_string());
        self.minor_issues.push(label.to_string());
    }

    fn finish(self) -> ValidationReport {
        let verdict = if !self.violations.is_empty() {
            Verdict::NotAida
        } else if !self.minor_issues.is_empty() {
            Verdict::MinorIssue
        } else {
            Verdict::Perfect
        };
        ValidationReport {
            verdict,
            violations: self.violations,
            minor_issues: self.minor_issues,
            matched_rules: self.matched_rules,
            rejected_by: self.rejected_by,
        }
    }
}

/// Judges arbitrary text against the AIDA criteria.
///
/// The text is NFC-normalized and trimmed first; surrounding whitespace is a
/// minor issue. An accepted verdict implies the trimmed text is a valid
/// [`AidaSentence`](super::AidaSentence).
pub fn validate(text: &str, rules: &RuleSet) -> ValidationReport {
    let normalized: String = text.nfc().collect();
    let body = normalized.trim();
    let mut b = Builder::default();

    if body.is_empty() {
        b.violation("builtin:empty", Violation::NotDeclarative);
        return b.finish();
    }
    if body.contains(['\n', '\r']) {
        b.violation("builtin:line-break", Violation::NotAtomic);
    }
    if body.chars().any(|c| c.is_control() && c != '\n' && c != '\r') {
        b.violation("builtin:control-character", Violation::NotDeclarative);
    }
    if body.chars().count() > MAX_SENTENCE_CHARS {
        b.violation("builtin:too-long", Violation::NotAtomic);
    }
    match body.strip_suffix('.') {
        Some(rest) if !rest.ends_with('.') && !rest.trim().is_empty() => {}
        _ => b.violation("builtin:terminal-full-stop", Violation::NotDeclarative),
    }

    let words = words(body);
    let missing_copula = !has_finite_verb(&words) && lacks_copula(&words);
    if !has_finite_verb(&words) && !missing_copula {
        b.violation("builtin:no-finite-verb", Violation::NotDeclarative);
    }

    for rule in &rules.exclusion_patterns {
        if rule.pattern.is_match(body) {
            b.violation(&rule.id, rule.violation);
        }
    }

    if normalized.len() != body.len() {
        b.minor("builtin:surrounding-whitespace", "leading or trailing whitespace");
    }
    if missing_copula {
        b.minor("builtin:missing-copula", "missing copula");
    }
    if body.contains("  ") {
        b.minor("builtin:double-space", "double space");
    }
    if let Some(w) = repeated_word(&words) {
        b.minor("builtin:repeated-word", &format!("repeated word \"{w}\""));
    }
    if starts_lowercase(body) {
        b.minor("builtin:lowercase-start", "sentence starts with a lowercase letter");
    }
    if !balanced_brackets(body) {
        b.minor("builtin:unbalanced-brackets", "unbalanced brackets");
    }
    for rule in &rules.flag_patterns {
        if rule.pattern.is_match(body) {
            b.minor(&rule.id, &rule.label);
        }
    }
    b.finish()
}

fn words(text: &str) -> Vec<String> {
    text.split(|c: char| c.is_whitespace() || matches!(c, ',' | ';' | ':' | '(' | ')' | '[' | ']' | '"'))
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric() && c != '-'))
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Auxiliaries and copulas; any of these counts as a finite verb.
const AUXILIARIES: &[&str] = &[
    "is", "are", "was", "were", "am", "be", "has", "have", "had", "does", "do", "did", "can",
    "cannot", "could", "will", "would", "shall", "should", "may", "might", "must",
];

/// Closed-class words that cannot directly precede a finite verb ending in
/// `-s` or `-ed` (they make the word a noun or an adjective instead).
const NOMINAL_CONTEXT: &[&str] = &[
    "a", "an", "the", "of", "in", "on", "for", "with", "by", "to", "from", "and", "or", "at",
    "as", "into", "between", "among", "its", "their", "his", "her", "these", "those", "this",
    "that", "all", "both", "several", "many", "some", "two", "three", "four", "multiple",
    "various", "other", "such", "no", "not", "than", "via", "during", "after", "before",
    "within", "without", "through", "across", "against", "under", "over", "is", "are", "was",
    "were", "be", "been", "being", "has", "have", "had", "highly", "most", "more", "less",
    "very", "newly", "previously",
];

/// Common nouns ending in `-s` that should never count as verbs.
const S_NOUNS: &[&str] = &[
    "analysis", "basis", "diagnosis", "prognosis", "apoptosis", "metastasis", "fibrosis",
    "sclerosis", "necrosis", "stenosis", "thrombosis", "homeostasis", "tuberculosis",
    "virus", "nucleus", "locus", "status", "stimulus", "uterus", "fetus", "focus", "bonus",
    "corpus", "consensus", "sepsis", "cirrhosis", "osteoporosis", "synthesis", "genesis",
    "crisis", "hypothesis", "axis", "pertussis", "psoriasis", "ascites", "diabetes",
    "mellitus", "herpes", "series", "species", "mumps", "measles", "chaos", "gas", "bias",
    "stress", "process", "class", "access", "mass", "loss", "progress", "success", "illness",
    "sickness", "weakness", "thickness",
];

/// Verbs in base form ("mosquitoes transmit malaria") and irregular past forms.
const BASE_VERBS: &[&str] = &[
    "act", "activate", "affect", "alter", "bind", "block", "cause", "confer", "contain",
    "contribute", "control", "decrease", "depend", "determine", "differ", "display",
    "encode", "enhance", "exhibit", "express", "form", "function", "govern", "impair",
    "increase", "induce", "influence", "inhibit", "interact", "lack", "lead", "limit",
    "localize", "maintain", "mediate", "modulate", "occur", "participate", "play",
    "predict", "prevent", "promote", "protect", "reduce", "regulate", "repress", "require",
    "resist", "result", "show", "stimulate", "suppress", "target", "transmit", "undergo",
    "led", "bound", "found", "made", "took", "gave", "became", "began", "grew", "lost",
    "held", "kept", "underwent",
];

fn is_verb_candidate(word: &str, previous: Option<&str>) -> bool {
    if AUXILIARIES.contains(&word) {
        return true;
    }
    let Some(prev) = previous else { return false };
    if NOMINAL_CONTEXT.contains(&prev) || !word.chars().all(|c| c.is_alphabetic()) || word.len() < 3 {
        return false;
    }
    if BASE_VERBS.contains(&word) {
        return true;
    }
    if word.ends_with("ed") {
        return true;
    }
    word.ends_with('s')
        && !word.ends_with("ss")
        && !word.ends_with("us")
        && !word.ends_with("is")
        && !S_NOUNS.contains(&word)
}

fn has_finite_verb(words: &[String]) -> bool {
    words.iter().enumerate().any(|(i, w)| {
        let prev = if i == 0 { None } else { Some(words[i - 1].as_str()) };
        is_verb_candidate(w, prev)
    })
}

/// Predicative adjectives that show up without their copula ("X helpful in Y").
const PREDICATIVES: &[&str] = &[
    "helpful", "useful", "important", "essential", "necessary", "responsible", "associated",
    "involved", "required", "critical", "crucial", "effective", "beneficial", "sufficient",
    "present", "absent", "elevated", "increased", "decreased", "reduced", "impaired",
    "expressed", "upregulated", "downregulated", "overexpressed", "correlated", "linked",
];

const PREDICATIVE_HEADS: &[&str] = &["in", "for", "with", "to", "by"];

fn lacks_copula(words: &[String]) -> bool {
    words.windows(2).enumerate().any(|(i, pair)| {
        i > 0 && PREDICATIVES.contains(&pair[0].as_str()) && PREDICATIVE_HEADS.contains(&pair[1].as_str())
    })
}

fn repeated_word(words: &[String]) -> Option<&str> {
    words
        .windows(2)
        .find(|p| p[0] == p[1] && p[0].chars().any(|c| c.is_alphabetic()))
        .map(|p| p[0].as_str())
}

/// Lowercase first letter, unless the first token looks like a symbol.
fn starts_lowercase(text: &str) -> bool {
    let first = text.split_whitespace().next().unwrap_or("");
    first.chars().next().is_some_and(char::is_lowercase) && !looks_like_symbol(first)
}

/// Gene and molecule symbols that keep a lowercase first letter: mixed case
/// ("mRNA", "miR-21") or a one- or two-letter stem followed by a digit ("p53").
pub(crate) fn looks_like_symbol(word: &str) -> bool {
    if word.chars().skip(1).any(char::is_uppercase) {
        return true;
    }
    let stem = word.chars().take_while(|c| c.is_alphabetic()).count();
    (1..=2).contains(&stem) && word.chars().nth(stem).is_some_and(|c| c.is_ascii_digit())
}

fn balanced_brackets(text: &str) -> bool {
    let mut stack = Vec::new();
    for c in text.chars() {
        match c {
            '(' | '[' => stack.push(c),
            ')' if stack.pop() != Some('(') => return false,
            ']' if stack.pop() != Some('[') => return false,
            _ => {}
        }
    }
    stack.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aida::rules::default_ruleset;

    fn check(text: &str) -> ValidationReport {
        validate(text, &default_ruleset())
    }

    #[test]
    fn malaria_is_perfect() {
        let r = check("Malaria is transmitted by mosquitoes.");
        assert_eq!(r.verdict, Verdict::Perfect, "{r:?}");
        assert!(r.violations.is_empty() && r.minor_issues.is_empty());
    }

    #[test]
    fn user_study_sentence_is_perfect() {
        let r = check("The hepatic reticuloendothelial function is impaired in cirrhotic patients.");
        assert_eq!(r.verdict, Verdict::Perfect, "{r:?}");
    }

    #[test]
    fn reporting_frame_is_not_absolute() {
        let r = check(
            "The results of this study showed that the hepatic reticuloendothelial function is impaired in cirrhotic patients.",
        );
        assert_eq!(r.verdict, Verdict::NotAida);
        assert_eq!(r.violations, BTreeSet::from([Violation::NotAbsolute]), "{r:?}");
    }

    #[test]
    fn this_effect_is_not_independent() {
        let r = check("This effect is stronger in older patients.");
        assert_eq!(r.violations, BTreeSet::from([Violation::NotIndependent]), "{r:?}");
    }

    #[test]
    fn plural_subjects_with_base_verbs() {
        for text in [
            "Mosquitoes transmit malaria.",
            "BRCA1 mutations increase breast cancer risk.",
            "Statins reduce LDL cholesterol levels.",
        ] {
            assert_eq!(check(text).verdict, Verdict::Perfect, "{text}");
        }
        assert!(check("The increase in LDL cholesterol.").violations.contains(&Violation::NotDeclarative));
    }

    #[test]
    fn declarative_failures() {
        for text in [
            "Malaria is transmitted by mosquitoes",
            "Is malaria transmitted by mosquitoes?",
            "Role of APOE in Alzheimer disease.",
            "Malaria is transmitted by mosquitoes..",
            "",
            "   ",
        ] {
            let r = check(text);
            assert!(r.violations.contains(&Violation::NotDeclarative), "{text:?}: {r:?}");
        }
    }

    #[test]
    fn hedges_are_not_absolute() {
        for text in [
            "Gene X probably binds protein Y.",
            "Gene X may regulate protein Y.",
            "Gene X appears to regulate protein Y.",
            "Gene X was found to regulate protein Y.",
        ] {
            assert!(check(text).violations.contains(&Violation::NotAbsolute), "{text}");
        }
    }

    #[test]
    fn coordination_is_not_atomic() {
        for text in [
            "Gene X binds protein Y; protein Y activates Z.",
            "Gene X binds protein Y, but it does not bind protein Z.",
            "Gene X binds protein Y. Protein Y activates Z.",
        ] {
            assert!(check(text).violations.contains(&Violation::NotAtomic), "{text}");
        }
    }

    #[test]
    fn minor_issues() {
        let r = check("X helpful in treating Y.");
        assert_eq!(r.verdict, Verdict::MinorIssue, "{r:?}");
        assert_eq!(r.minor_issues, ["missing copula"]);
        assert_eq!(check("Gene X binds binds protein Y.").verdict, Verdict::MinorIssue);
        assert_eq!(check("gene X binds protein Y.").verdict, Verdict::MinorIssue);
        assert_eq!(check("p53 binds DNA.").verdict, Verdict::Perfect);
        assert_eq!(check(" Gene X binds protein Y.").verdict, Verdict::MinorIssue);
        assert_eq!(check("Gene X binds protein Y (in vitro.").verdict, Verdict::MinorIssue);
    }

    #[test]
    fn first_violation_names_the_rejecting_rule() {
        let r = check("We show that gene X may bind protein Y.");
        assert_eq!(r.rejected_by.as_deref(), Some("abs.hedge"));
        assert!(r.matched_rules.contains(&"ind.first-person".to_string()));
    }

    #[test]
    fn verdict_invariants_hold() {
        for text in ["A.", "Gene X binds Y.", "this.", "Why?", "Gene  X binds Y."] {
            let r = check(text);
            assert_eq!(r.verdict == Verdict::NotAida, !r.violations.is_empty());
            if r.verdict == Verdict::Perfect {
                assert!(r.minor_issues.is_empty());
            }
        }
    }
}
