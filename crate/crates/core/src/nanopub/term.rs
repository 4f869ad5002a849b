use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("not an absolute IRI: {0:?}")]
    NotAbsolute(String),
    #[error("IRI contains a character not allowed in IRIs: {0:?}")]
    IllegalCharacter(String),
    #[error("invalid blank node label: {0:?}")]
    BlankNodeLabel(String),
    #[error("invalid language tag: {0:?}")]
    LanguageTag(String),
    #[error("literals are not allowed in subject position")]
    LiteralSubject,
}

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl Iri {
    pub fn new(iri: impl Into<String>) -> Result<Self, TermError> {
        let iri = iri.into();
        if !has_scheme(&iri) {
            return Err(TermError::NotAbsolute(iri));
        }
        if iri
            .chars()
            .any(|c| c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
        {
            return Err(TermError::IllegalCharacter(iri));
        }
        let bytes = iri.as_bytes();
        let bad_escape = bytes.iter().enumerate().any(|(i, &b)| {
            b == b'%' && !(bytes.get(i + 1..i + 3).is_some_and(|h| h.iter().all(u8::is_ascii_hexdigit)))
        });
        if bad_escape {
            return Err(TermError::IllegalCharacter(iri));
        }
        Ok(Iri(iri))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn has_scheme(s: &str) -> bool {
    let Some(colon) = s.find(':') else { return false };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl TryFrom<String> for Iri {
    type Error = TermError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(value: Iri) -> Self {
        value.0
    }
}

impl From<&crate::aida::AidaUri> for Iri {
    fn from(uri: &crate::aida::AidaUri) -> Self {
        // AIDA URIs only contain unreserved characters, '+' and '%'.
        Iri(uri.as_str().to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlankNode(String);

impl BlankNode {
    /// Labels follow a conservative subset of the Turtle grammar:
    /// `[A-Za-z0-9_]` followed by `[A-Za-z0-9_.-]*`, not ending in `.`.
    pub fn new(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        let mut chars = label.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphanumeric() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
            && !label.ends_with('.');
        if ok {
            Ok(BlankNode(label))
        } else {
            Err(TermError::BlankNodeLabel(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    language: Option<String>,
}

impl Literal {
    pub fn simple(lexical: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), datatype: None, language: None }
    }

    /// `xsd:string` is the implicit datatype of simple literals and is dropped.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        let datatype = (datatype.as_str() != vocab::XSD_STRING).then_some(datatype);
        Literal { lexical: lexical.into(), datatype, language: None }
    }

    /// Language tags are stored lowercased.
    pub fn lang(lexical: impl Into<String>, tag: &str) -> Result<Self, TermError> {
        let valid = !tag.is_empty()
            && tag.split('-').enumerate().all(|(i, part)| {
                !part.is_empty()
                    && part.len() <= 8
                    && part.chars().all(|c| if i == 0 { c.is_ascii_alphabetic() } else { c.is_ascii_alphanumeric() })
            });
        if !valid {
            return Err(TermError::LanguageTag(tag.to_string()));
        }
        Ok(Literal { lexical: lexical.into(), datatype: None, language: Some(tag.to_ascii_lowercase()) })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

/// An RDF term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Iri(Iri),
    BlankNode(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl fmt::Display for Term {
    /// N-Triples form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::BlankNode(b) => write!(f, "_:{}", b.0),
            Term::Literal(l) => {
                f.write_str("\"")?;
                f.write_str(&super::trig::escape_string(&l.lexical))?;
                f.write_str("\"")?;
                if let Some(lang) = &l.language {
                    write!(f, "@{lang}")
                } else if let Some(dt) = &l.datatype {
                    write!(f, "^^{dt}")
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// An RDF triple. Subjects are IRIs or blank nodes, predicates are IRIs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Term>, predicate: Iri, object: impl Into<Term>) -> Result<Self, TermError> {
        let subject = subject.into();
        if matches!(subject, Term::Literal(_)) {
            return Err(TermError::LiteralSubject);
        }
        Ok(Triple { subject, predicate, object: object.into() })
    }

    /// Infallible constructor for IRI subjects.
    pub fn iri(subject: &Iri, predicate: &Iri, object: impl Into<Term>) -> Self {
        Triple { subject: Term::Iri(subject.clone()), predicate: predicate.clone(), object: object.into() }
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
