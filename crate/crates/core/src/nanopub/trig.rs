//! Byte-stable TriG output.
//!
//! Each nanopublication is written as a self-contained chunk: the fixed
//! prefix block, `@base` set to the nanopublication URI, the head graph and
//! then the content graphs in IRI order. Triples are sorted and grouped by
//! subject. IRIs under the base are written relative (`<>`, `<#frag>`).

use std::fmt::Write as _;

use super::model::{NamedGraph, Nanopublication};
use super::term::{Iri, Term, Triple};
use super::vocab;

pub fn serialize_trig(np: &Nanopublication) -> Vec<u8> {
    let mut out = String::new();
    write_nanopub(&mut out, np);
    out.into_bytes()
}

/// Several nanopublications in one document, one chunk after another.
pub fn serialize_trig_all<'a>(nps: impl IntoIterator<Item = &'a Nanopublication>) -> Vec<u8> {
    let mut out = String::new();
    for (i, np) in nps.into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_nanopub(&mut out, np);
    }
    out.into_bytes()
}

fn write_nanopub(out: &mut String, np: &Nanopublication) {
    for (prefix, ns) in vocab::PREFIXES {
        let _ = writeln!(out, "@prefix {prefix}: <{ns}> .");
    }
    let base = np.uri().as_str();
    let _ = writeln!(out, "@base <{base}> .");
    for graph in np.all_graphs() {
        out.push('\n');
        write_graph(out, graph, base);
    }
}

fn write_graph(out: &mut String, graph: &NamedGraph, base: &str) {
    write_iri(out, &graph.name, base);
    if graph.triples.is_empty() {
        out.push_str(" {\n}\n");
        return;
    }
    out.push_str(" {\n");
    let triples: Vec<&Triple> = graph.triples.iter().collect();
    let mut i = 0;
    while i < triples.len() {
        let subject = triples[i].subject();
        let mut j = i;
        while j < triples.len() && triples[j].subject() == subject {
            j += 1;
        }
        out.push_str("  ");
        write_term(out, subject, base);
        for (k, t) in triples[i..j].iter().enumerate() {
            if k > 0 {
                out.push_str(" ;\n    ");
            } else {
                out.push(' ');
            }
            write_iri(out, t.predicate(), base);
            out.push(' ');
            write_term(out, t.object(), base);
        }
        out.push_str(" .\n");
        i = j;
    }
    out.push_str("}\n");
}

fn write_term(out: &mut String, term: &Term, base: &str) {
    match term {
        Term::Iri(iri) => write_iri(out, iri, base),
        Term::BlankNode(b) => {
            out.push_str("_:");
            out.push_str(b.label());
        }
        Term::Literal(l) => {
            out.push('"');
            out.push_str(&escape_string(l.lexical()));
            out.push('"');
            if let Some(lang) = l.language() {
                out.push('@');
                out.push_str(lang);
            } else if let Some(dt) = l.datatype() {
                out.push_str("^^");
                write_iri(out, dt, base);
            }
        }
    }
}

fn write_iri(out: &mut String, iri: &Iri, base: &str) {
    let s = iri.as_str();
    // Relative forms only round-trip when the base has no fragment of its own.
    let base = if base.contains('#') { "\0" } else { base };
    if s == base {
        out.push_str("<>");
        return;
    }
    if let Some(fragment) = s.strip_prefix(base).and_then(|rest| rest.strip_prefix('#')) {
        out.push_str("<#");
        out.push_str(fragment);
        out.push('>');
        return;
    }
    for (prefix, ns) in vocab::PREFIXES {
        if let Some(local) = s.strip_prefix(ns) {
            if is_safe_local(local) {
                out.push_str(prefix);
                out.push(':');
                out.push_str(local);
                return;
            }
        }
    }
    out.push('<');
    out.push_str(s);
    out.push('>');
}

/// Local names we are willing to abbreviate; anything else is written in full.
fn is_safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Escapes a string for a double-quoted Turtle literal.
pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}
