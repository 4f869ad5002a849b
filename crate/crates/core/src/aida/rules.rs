//! Data-driven rule sets for sentence filtering and prefix stripping.
//!
//! A rule file is UTF-8 text with one rule per line:
//!
//! ```text
//! <rule-id> TAB <EXCLUDE|STRIP|FLAG> TAB <violation-or-empty> TAB <pattern>
//! ```
//!
//! `EXCLUDE` rules carry one of `NotAtomic`, `NotIndependent`,
//! `NotDeclarative`, `NotAbsolute` in the third column. `STRIP` rules leave it
//! empty. `FLAG` rules report a minor issue and put its label there. Lines
//! starting with `#` are comments; a `# version: <v>` comment names the rule
//! set version. Rules apply in file order.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const DEFAULT_RULES: &str = include_str!("../../rules/default.rules");

/// The four AIDA criteria a sentence can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Violation {
    NotAtomic,
    NotIndependent,
    NotDeclarative,
    NotAbsolute,
}

impl Violation {
    pub const ALL: [Violation; 4] = [
        Violation::NotAtomic,
        Violation::NotIndependent,
        Violation::NotDeclarative,
        Violation::NotAbsolute,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Violation::NotAtomic => "NotAtomic",
            Violation::NotIndependent => "NotIndependent",
            Violation::NotDeclarative => "NotDeclarative",
            Violation::NotAbsolute => "NotAbsolute",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Violation {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Violation::ALL.into_iter().find(|v| v.as_str() == s).ok_or(())
    }
}

#[derive(Debug, Clone)]
pub struct ExclusionRule {
    pub id: String,
    pub pattern: Regex,
    pub violation: Violation,
}

#[derive(Debug, Clone)]
pub struct StripRule {
    pub id: String,
    pub pattern: Regex,
}

#[derive(Debug, Clone)]
pub struct FlagRule {
    pub id: String,
    pub pattern: Regex,
    pub label: String,
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("line {line}: expected 4 tab-separated columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: unknown rule kind {kind:?}")]
    UnknownKind { line: usize, kind: String },
    #[error("line {line}: unknown violation {value:?}")]
    UnknownViolation { line: usize, value: String },
    #[error("line {line}: {kind} rules must leave the violation column empty")]
    UnexpectedViolation { line: usize, kind: &'static str },
    #[error("line {line}: FLAG rule needs a label in the third column")]
    MissingLabel { line: usize },
    #[error("line {line}: duplicate rule id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: pattern of {id:?} does not compile: {source}")]
    Pattern {
        line: usize,
        id: String,
        #[source]
        source: regex::Error,
    },
    #[error("cannot read rule file: {0}")]
    Io(#[from] std::io::Error),
}

/// An ordered, versioned collection of filtering rules.
#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    pub version: Option<String>,
    pub exclusion_patterns: Vec<ExclusionRule>,
    pub prefix_strip_patterns: Vec<StripRule>,
    pub flag_patterns: Vec<FlagRule>,
}

impl RuleSet {
    pub fn parse(source: &str) -> Result<Self, RuleError> {
        let mut rules = RuleSet::default();
        let mut seen = HashSet::new();
        for (idx, raw) in source.lines().enumerate() {
            let line = idx + 1;
            let text = raw.strip_suffix('\r').unwrap_or(raw);
            if let Some(comment) = text.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("version:") {
                    rules.version = Some(v.trim().to_string());
                }
                continue;
            }
            if text.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = text.splitn(4, '\t').collect();
            if cols.len() != 4 {
                return Err(RuleError::ColumnCount { line, found: cols.len() });
            }
            let (id, kind, third, pattern) = (cols[0].trim(), cols[1].trim(), cols[2].trim(), cols[3]);
            if !seen.insert(id.to_string()) {
                return Err(RuleError::DuplicateId { line, id: id.to_string() });
            }
            let compiled = Regex::new(pattern).map_err(|source| RuleError::Pattern {
                line,
                id: id.to_string(),
                source,
            })?;
            match kind {
                "EXCLUDE" => {
                    let violation = third.parse().map_err(|_| RuleError::UnknownViolation {
                        line,
                        value: third.to_string(),
                    })?;
                    rules.exclusion_patterns.push(ExclusionRule {
                        id: id.to_string(),
                        pattern: compiled,
                        violation,
                    });
                }
                "STRIP" => {
                    if !third.is_empty() {
                        return Err(RuleError::UnexpectedViolation { line, kind: "STRIP" });
                    }
                    rules.prefix_strip_patterns.push(StripRule {
                        id: id.to_string(),
                        pattern: compiled,
                    });
                }
                "FLAG" => {
                    if third.is_empty() {
                        return Err(RuleError::MissingLabel { line });
                    }
                    rules.flag_patterns.push(FlagRule {
                        id: id.to_string(),
                        pattern: compiled,
                        label: third.to_string(),
                    });
                }
                other => {
                    return Err(RuleError::UnknownKind {
                        line,
                        kind: other.to_string(),
                    })
                }
            }
        }
        Ok(rules)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self, RuleError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Text of the shipped default rule file.
    pub fn default_source() -> &'static str {
        DEFAULT_RULES
    }

    pub fn len(&self) -> usize {
        self.exclusion_patterns.len() + self.prefix_strip_patterns.len() + self.flag_patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The shipped rule set.
pub fn default_ruleset() -> RuleSet {
    static DEFAULT: std::sync::LazyLock<RuleSet> =
        std::sync::LazyLock::new(|| RuleSet::parse(DEFAULT_RULES).expect("shipped rule file is valid"));
    DEFAULT.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_rules_parse_and_are_versioned() {
        let rules = default_ruleset();
        assert!(rules.version.is_some());
        assert!(!rules.exclusion_patterns.is_empty());
        assert!(!rules.prefix_strip_patterns.is_empty());
    }

    #[test]
    fn default_rules_cover_quoted_prefixes() {
        let rules = default_ruleset();
        for phrase in ["these results clearly indicated that X binds Y.", "the authors propose that X binds Y."] {
            assert!(
                rules.prefix_strip_patterns.iter().any(|r| r.pattern.is_match(phrase)),
                "{phrase}"
            );
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(RuleSet::parse("a\tEXCLUDE\tNotAtomic"), Err(RuleError::ColumnCount { .. })));
        assert!(matches!(RuleSet::parse("a\tDROP\t\tx"), Err(RuleError::UnknownKind { .. })));
        assert!(matches!(
            RuleSet::parse("a\tEXCLUDE\tNotGood\tx"),
            Err(RuleError::UnknownViolation { .. })
        ));
        assert!(matches!(
            RuleSet::parse("a\tSTRIP\tNotAtomic\tx"),
            Err(RuleError::UnexpectedViolation { .. })
        ));
        assert!(matches!(RuleSet::parse("a\tFLAG\t\tx"), Err(RuleError::MissingLabel { .. })));
        assert!(matches!(RuleSet::parse("a\tSTRIP\t\t(x"), Err(RuleError::Pattern { line: 1, .. })));
        assert!(matches!(
            RuleSet::parse("a\tSTRIP\t\tx\n# c\na\tSTRIP\t\ty"),
            Err(RuleError::DuplicateId { line: 3, .. })
        ));
    }

    #[test]
    fn order_and_comments_preserved() {
        let src = "# version: 7\n\nb\tSTRIP\t\t^x\na\tSTRIP\t\t^y\nc\tEXCLUDE\tNotAbsolute\tmay\td\n";
        let rules = RuleSet::parse(src).unwrap();
        assert_eq!(rules.version.as_deref(), Some("7"));
        let ids: Vec<_> = rules.prefix_strip_patterns.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["b", "a"]);
        // A tab inside the pattern column belongs to the pattern.
        assert_eq!(rules.exclusion_patterns[0].pattern.as_str(), "may\td");
    }
}
