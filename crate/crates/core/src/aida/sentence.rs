//! AIDA sentences and their `http://purl.org/aida/` URIs.
//!
//! The URI of a sentence is the fixed prefix followed by the sentence text,
//! with spaces written as `+` and everything outside the unreserved set
//! `[A-Za-z0-9._~()-]` percent-encoded as uppercase-hex UTF-8 bytes. The
//! mapping is a bijection between valid sentences and canonical URIs, so a
//! sentence can always be recovered from its URI without any lookup.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::{is_nfc, UnicodeNormalization};

/// Namespace every AIDA URI lives under.
pub const AIDA_PREFIX: &str = "http://purl.org/aida/";

/// Upper bound on sentence length, in Unicode scalar values.
pub const MAX_SENTENCE_CHARS: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SentenceError {
    #[error("sentence is empty")]
    Empty,
    #[error("sentence has leading or trailing whitespace")]
    SurroundingWhitespace,
    #[error("sentence contains a line break or control character (U+{0:04X})")]
    ControlCharacter(u32),
    #[error("sentence does not end with a full stop")]
    MissingFullStop,
    #[error("sentence ends with more than one full stop")]
    RepeatedFullStop,
    #[error("sentence is {0} characters long, the limit is {MAX_SENTENCE_CHARS}")]
    TooLong(usize),
    #[error("sentence text is not in Unicode NFC form")]
    NotNormalized,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("invalid sentence: {0}")]
    InvalidSentence(#[source] SentenceError),
    #[error("URI does not start with {AIDA_PREFIX}: {0}")]
    BadPrefix(String),
    #[error("malformed escape at byte {offset}: {reason}")]
    MalformedEscape { offset: usize, reason: &'static str },
    #[error("decoded text is not an AIDA sentence: {0}")]
    DecodedTextNotAida(#[source] SentenceError),
}

impl CodecError {
    /// Variant name, for machine-readable error output.
    pub fn code(&self) -> &'static str {
        match self {
            CodecError::InvalidSentence(_) => "InvalidSentence",
            CodecError::BadPrefix(_) => "BadPrefix",
            CodecError::MalformedEscape { .. } => "MalformedEscape",
            CodecError::DecodedTextNotAida(_) => "DecodedTextNotAida",
        }
    }
}

/// A sentence that satisfies the surface constraints of an AIDA claim.
///
/// The text is stored in NFC so that equal sentences always produce equal URIs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AidaSentence(String);

impl AidaSentence {
    /// Normalizes `text` to NFC and checks the sentence invariants.
    pub fn new(text: &str) -> Result<Self, SentenceError> {
        let normalized: String = text.nfc().collect();
        check_sentence(&normalized)?;
        Ok(AidaSentence(normalized))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn to_uri(&self) -> AidaUri {
        encode_uri(self)
    }
}

impl fmt::Display for AidaSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for AidaSentence {
    type Error = SentenceError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        AidaSentence::new(&value)
    }
}

impl From<AidaSentence> for String {
    fn from(value: AidaSentence) -> Self {
        value.0
    }
}

fn check_sentence(text: &str) -> Result<(), SentenceError> {
    if text.is_empty() {
        return Err(SentenceError::Empty);
    }
    if text.trim() != text {
        return Err(SentenceError::SurroundingWhitespace);
    }
    if let Some(c) = text.chars().find(|c| c.is_control()) {
        return Err(SentenceError::ControlCharacter(c as u32));
    }
    let chars = text.chars().count();
    if chars > MAX_SENTENCE_CHARS {
        return Err(SentenceError::TooLong(chars));
    }
    let without_stop = text.strip_suffix('.').ok_or(SentenceError::MissingFullStop)?;
    if without_stop.ends_with('.') {
        return Err(SentenceError::RepeatedFullStop);
    }
    if without_stop.trim().is_empty() {
        return Err(SentenceError::Empty);
    }
    if !is_nfc(text) {
        return Err(SentenceError::NotNormalized);
    }
    Ok(())
}

impl AsRef<str> for AidaSentence {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// The URI of an AIDA sentence, always in canonical encoded form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AidaUri(String);

impl AidaUri {
    /// Accepts only canonical URIs, i.e. those that `encode_uri` can produce.
    pub fn parse(uri: &str) -> Result<Self, CodecError> {
        decode_uri_str(uri)?;
        Ok(AidaUri(uri.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The encoded local part after the prefix.
    pub fn local_part(&self) -> &str {
        &self.0[AIDA_PREFIX.len()..]
    }

    pub fn sentence(&self) -> AidaSentence {
        // Construction guarantees the URI decodes.
        decode_uri(self)
    }
}

impl fmt::Display for AidaUri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for AidaUri {
    type Error = CodecError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        AidaUri::parse(&value)
    }
}

impl From<AidaUri> for String {
    fn from(value: AidaUri) -> Self {
        value.0
    }
}

fn is_unreserved(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'.' | b'_' | b'~' | b'(' | b')' | b'-')
}

const HEX_UPPER: &[u8; 16] = b"0123456789ABCDEF";

pub fn encode_uri(sentence: &AidaSentence) -> AidaUri {
    let text = sentence.as_str();
    let mut out = String::with_capacity(AIDA_PREFIX.len() + text.len() * 3 / 2);
    out.push_str(AIDA_PREFIX);
    for &b in text.as_bytes() {
        if b == b' ' {
            out.push('+');
        } else if is_unreserved(b) {
            out.push(b as char);
        } else {
            out.push('%');
            out.push(HEX_UPPER[(b >> 4) as usize] as char);
            out.push(HEX_UPPER[(b & 0x0f) as usize] as char);
        }
    }
    AidaUri(out)
}

/// Validates and encodes raw text in one step.
pub fn encode_text(text: &str) -> Result<AidaUri, CodecError> {
    let sentence = AidaSentence::new(text).map_err(CodecError::InvalidSentence)?;
    Ok(encode_uri(&sentence))
}

pub fn decode_uri(uri: &AidaUri) -> AidaSentence {
    decode_uri_str(uri.as_str()).expect("AidaUri is canonical by construction")
}

/// Decodes an arbitrary string, rejecting anything `encode_uri` would not emit.
pub fn decode_uri_str(uri: &str) -> Result<AidaSentence, CodecError> {
    let local = uri
        .strip_prefix(AIDA_PREFIX)
        .ok_or_else(|| CodecError::BadPrefix(uri.to_string()))?;
    let base = AIDA_PREFIX.len();
    let bytes = local.as_bytes();
    let mut decoded = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'+' => {
                decoded.push(b' ');
                i += 1;
            }
            b'%' => {
                let (hi, lo) = match (bytes.get(i + 1), bytes.get(i + 2)) {
                    (Some(&hi), Some(&lo)) => (hi, lo),
                    _ => {
                        return Err(CodecError::MalformedEscape {
                            offset: base + i,
                            reason: "truncated percent escape",
                        })
                    }
                };
                let value = match (upper_hex_value(hi), upper_hex_value(lo)) {
                    (Some(h), Some(l)) => (h << 4) | l,
                    _ => {
                        return Err(CodecError::MalformedEscape {
                            offset: base + i,
                            reason: "escape must be two uppercase hex digits",
                        })
                    }
                };
                if value == b' ' || is_unreserved(value) {
                    return Err(CodecError::MalformedEscape {
                        offset: base + i,
                        reason: "escaped character must appear literally",
                    });
                }
                decoded.push(value);
                i += 3;
            }
            b if is_unreserved(b) => {
                decoded.push(b);
                i += 1;
            }
            _ => {
                return Err(CodecError::MalformedEscape {
                    offset: base + i,
                    reason: "character must be percent-encoded",
                })
            }
        }
    }
    let text = String::from_utf8(decoded).map_err(|e| CodecError::MalformedEscape {
        offset: base,
        reason: if e.utf8_error().error_len().is_some() {
            "escapes do not form valid UTF-8"
        } else {
            "escapes end inside a UTF-8 sequence"
        },
    })?;
    check_sentence(&text).map_err(CodecError::DecodedTextNotAida)?;
    Ok(AidaSentence(text))
}

fn upper_hex_value(b: u8) -> Option<u8> {
    match b {
        b'0'..=b'9' => Some(b - b'0'),
        b'A'..=b'F' => Some(b - b'A' + 10),
        _ => None,
    }
}
