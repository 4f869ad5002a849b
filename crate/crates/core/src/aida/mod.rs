//! AIDA sentences: the URI codec and heuristic compliance checking.

mod rules;
mod sentence;
mod validate;

pub use rules::{default_ruleset, ExclusionRule, FlagRule, RuleError, RuleSet, StripRule, Violation};
pub use sentence::{
    decode_uri, decode_uri_str, encode_text, encode_uri, AidaSentence, AidaUri, CodecError,
    SentenceError, AIDA_PREFIX, MAX_SENTENCE_CHARS,
};
pub use validate::{validate, ValidationReport, Verdict};
pub(crate) use validate::looks_like_symbol;
