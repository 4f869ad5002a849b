//! TriG reader.
//!
//! Parses the TriG grammar (directives in both `@prefix` and SPARQL style,
//! `GRAPH` blocks, property lists, collections, all literal forms) into named
//! graphs, then groups the graphs into nanopublications by their
//! `np:hasAssertion` heads. Empty graph blocks are kept, since an assertion
//! graph that only contains subgraphs has no triples of its own.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::model::{NamedGraph, Nanopublication, StructureViolation};
use super::term::{has_scheme, BlankNode, Iri, Literal, Term, Triple};
use super::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("nanopublication {uri} is malformed: {}", join_violations(.violations))]
    Structure { uri: Iri, violations: Vec<StructureViolation> },
}

fn join_violations(v: &[StructureViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Named graphs in order of first appearance, plus default-graph triples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub graphs: Vec<NamedGraph>,
    pub default_graph: BTreeSet<Triple>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedTrig {
    /// In order of appearance of their head graphs.
    pub nanopubs: Vec<Nanopublication>,
    /// Named graphs that belong to no nanopublication.
    pub unattached_graphs: Vec<Iri>,
    pub default_graph: BTreeSet<Triple>,
}

/// Parses TriG and groups the graphs into nanopublications.
pub fn parse_trig(input: &[u8]) -> Result<ParsedTrig, TrigError> {
    let text = std::str::from_utf8(input).map_err(|e| {
        let (line, column) = line_col(&String::from_utf8_lossy(&input[..e.valid_up_to()]), e.valid_up_to());
        TrigError::Syntax { line, column, message: "input is not valid UTF-8".into() }
    })?;
    let dataset = parse_dataset(text)?;
    group_nanopubs(dataset)
}

pub fn parse_dataset(text: &str) -> Result<Dataset, TrigError> {
    let mut p = Parser::new(text);
    p.document()?;
    let graphs = p
        .graph_order
        .iter()
        .map(|name| NamedGraph { name: name.clone(), triples: p.graphs.remove(name).unwrap_or_default() })
        .collect();
    Ok(Dataset { graphs, default_graph: p.default_graph })
}

fn group_nanopubs(dataset: Dataset) -> Result<ParsedTrig, TrigError> {
    let has_assertion = vocab::has_assertion();
    let by_name: HashMap<&Iri, &NamedGraph> = dataset.graphs.iter().map(|g| (&g.name, g)).collect();
    let mut claimed: HashSet<Iri> = HashSet::new();
    let mut nanopubs = Vec::new();

    let mut heads: Vec<(Iri, &NamedGraph)> = Vec::new();
    for g in &dataset.graphs {
        let mut subjects: Vec<Iri> = Vec::new();
        for t in g.triples.iter().filter(|t| t.predicate() == &has_assertion) {
            if let Term::Iri(s) = t.subject() {
                if !subjects.contains(s) {
                    subjects.push(s.clone());
                }
            }
        }
        for s in subjects {
            heads.push((s, g));
        }
    }
    let head_names: HashSet<Iri> = heads.iter().map(|(_, g)| g.name.clone()).collect();

    for (uri, head) in &heads {
        let mut wanted: Vec<Iri> = [vocab::has_assertion(), vocab::has_provenance(), vocab::has_publication_info()]
            .iter()
            .flat_map(|p| head.objects(uri, p).filter_map(Term::as_iri).cloned().collect::<Vec<_>>())
            .collect();
        let mut members: Vec<NamedGraph> = Vec::new();
        let mut seen: HashSet<Iri> = HashSet::new();
        let follow = [vocab::contains_graph(), vocab::as_formula()];
        let edges_from = |g: &NamedGraph, wanted: &mut Vec<Iri>| {
            for t in g.triples.iter().filter(|t| follow.contains(t.predicate())) {
                if let Term::Iri(o) = t.object() {
                    wanted.push(o.clone());
                }
            }
        };
        edges_from(head, &mut wanted);
        while let Some(name) = wanted.pop() {
            if name == head.name || !seen.insert(name.clone()) {
                continue;
            }
            if let Some(g) = by_name.get(&name) {
                edges_from(g, &mut wanted);
                members.push((*g).clone());
            }
        }
        claimed.insert(head.name.clone());
        claimed.extend(members.iter().map(|g| g.name.clone()));
        let np = Nanopublication::from_parts(uri.clone(), (*head).clone(), members);
        let violations = np.validate_structure();
        if !violations.is_empty() {
            return Err(TrigError::Structure { uri: uri.clone(), violations });
        }
        nanopubs.push(np);
    }

    let unattached_graphs = dataset
        .graphs
        .iter()
        .filter(|g| !claimed.contains(&g.name) && !head_names.contains(&g.name))
        .map(|g| g.name.clone())
        .collect();
    Ok(ParsedTrig { nanopubs, unattached_graphs, default_graph: dataset.default_graph })
}

fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    base: Option<String>,
    prefixes: HashMap<String, String>,
    graph_order: Vec<Iri>,
    graphs: HashMap<Iri, BTreeSet<Triple>>,
    default_graph: BTreeSet<Triple>,
    anon_counter: usize,
}

type PResult<T> = Result<T, TrigError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            base: None,
            prefixes: HashMap::new(),
            graph_order: Vec::new(),
            graphs: HashMap::new(),
            default_graph: BTreeSet::new(),
            anon_counter: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        self.err_at(self.pos, message)
    }

    fn err_at<T>(&self, pos: usize, message: impl Into<String>) -> PResult<T> {
        let (line, column) = line_col(self.src, pos);
        Err(TrigError::Syntax { line, column, message: message.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{c}', found '{found}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    /// Case-insensitive keyword followed by a non-name character.
    fn at_keyword(&self, kw: &str) -> bool {
        let rest = self.rest();
        rest.len() >= kw.len()
            && rest.is_char_boundary(kw.len())
            && rest[..kw.len()].eq_ignore_ascii_case(kw)
            && !rest[kw.len()..].chars().next().is_some_and(|c| c.is_alphanumeric() || c == '_' || c == ':' || c == '-')
    }

    fn document(&mut self) -> PResult<()> {
        loop {
            self.skip_ws();
            let Some(c) = self.peek() else { return Ok(()) };
            if c == '@' {
                self.at_directive()?;
            } else if self.at_keyword("PREFIX") {
                self.pos += "PREFIX".len();
                self.prefix_body()?;
            } else if self.at_keyword("BASE") {
                self.pos += "BASE".len();
                self.base_body()?;
            } else if self.at_keyword("GRAPH") {
                self.pos += "GRAPH".len();
                self.skip_ws();
                let start = self.pos;
                let name = self.graph_label(start)?;
                self.expect('{')?;
                self.triples_block(Some(&name))?;
            } else if c == '{' {
                self.bump();
                self.triples_block(None)?;
            } else if c == '[' || c == '(' {
                let start = self.pos;
                let subject = self.node_or_collection(None)?;
                self.skip_ws();
                if self.peek() == Some('{') {
                    return self.err_at(start, "blank node graph names are not supported");
                }
                if !matches!(self.peek(), Some('.')) || c == '(' {
                    self.predicate_object_list(&subject, None)?;
                }
                self.expect('.')?;
            } else {
                let start = self.pos;
                let subject = self.subject_term()?;
                self.skip_ws();
                if self.peek() == Some('{') {
                    let name = match subject {
                        Term::Iri(iri) => iri,
                        _ => return self.err_at(start, "blank node graph names are not supported"),
                    };
                    self.bump();
                    self.triples_block(Some(&name))?;
                } else {
                    self.predicate_object_list(&subject, None)?;
                    self.expect('.')?;
                }
            }
        }
    }

    fn at_directive(&mut self) -> PResult<()> {
        if self.rest().starts_with("@prefix") {
            self.pos += "@prefix".len();
            self.prefix_body()?;
            self.expect('.')
        } else if self.rest().starts_with("@base") {
            self.pos += "@base".len();
            self.base_body()?;
            self.expect('.')
        } else {
            self.err("unknown directive")
        }
    }

    fn prefix_body(&mut self) -> PResult<()> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(c.is_alphanumeric() || matches!(c, '_' | '-' | '.')) {
                return self.err("invalid character in prefix name");
            }
            self.bump();
        }
        let prefix = self.src[start..self.pos].to_string();
        self.expect(':')?;
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.prefixes.insert(prefix, iri.as_str().to_string());
        Ok(())
    }

    fn base_body(&mut self) -> PResult<()> {
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(iri.as_str().to_string());
        Ok(())
    }

    fn graph_label(&mut self, start: usize) -> PResult<Iri> {
        match self.subject_term()? {
            Term::Iri(iri) => Ok(iri),
            _ => self.err_at(start, "blank node graph names are not supported"),
        }
    }

    fn triples_block(&mut self, graph: Option<&Iri>) -> PResult<()> {
        if let Some(name) = graph {
            if !self.graphs.contains_key(name) {
                self.graph_order.push(name.clone());
                self.graphs.insert(name.clone(), BTreeSet::new());
            }
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some('}') => {
                    self.bump();
                    return Ok(());
                }
                None => return self.err("unterminated graph block"),
                _ => {}
            }
            let c = self.peek();
            if c == Some('[') {
                let subject = self.node_or_collection(graph)?;
                self.skip_ws();
                if !matches!(self.peek(), Some('.') | Some('}')) {
                    self.predicate_object_list(&subject, graph)?;
                }
            } else {
                let subject = if c == Some('(') { self.node_or_collection(graph)? } else { self.subject_term()? };
                self.predicate_object_list(&subject, graph)?;
            }
            self.skip_ws();
            match self.peek() {
                Some('.') => {
                    self.bump();
                }
                Some('}') => {}
                _ => return self.err("expected '.' or '}' after triples"),
            }
        }
    }

    fn emit(&mut self, graph: Option<&Iri>, triple: Triple) {
        match graph {
            Some(name) => {
                self.graphs.get_mut(name).expect("graph registered").insert(triple);
            }
            None => {
                self.default_graph.insert(triple);
            }
        }
    }

    fn predicate_object_list(&mut self, subject: &Term, graph: Option<&Iri>) -> PResult<()> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                self.skip_ws();
                let object = self.object(graph)?;
                let triple = Triple::new(subject.clone(), predicate.clone(), object).expect("subject checked");
                self.emit(graph, triple);
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | Some('}') | Some(']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> PResult<Iri> {
        if self.peek() == Some('a')
            && self.peek_at(1).is_some_and(|c| c.is_whitespace() || matches!(c, '<' | '[' | '(' | '"' | '_'))
        {
            self.bump();
            return Ok(vocab::rdf_type());
        }
        let start = self.pos;
        match self.peek() {
            Some('_') | Some('[') => self.err_at(start, "predicate must be an IRI"),
            Some('"') | Some('\'') => self.err_at(start, "predicate must be an IRI"),
            _ => self.iri(),
        }
    }

    fn subject_term(&mut self) -> PResult<Term> {
        let start = self.pos;
        match self.peek() {
            Some('"') | Some('\'') => self.err_at(start, "literals are not allowed in subject position"),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-') => {
                self.err_at(start, "literals are not allowed in subject position")
            }
            Some('.') if self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) => {
                self.err_at(start, "literals are not allowed in subject position")
            }
            Some('_') if self.rest().starts_with("_:") => Ok(Term::BlankNode(self.blank_node_label()?)),
            Some(_) if self.at_keyword("true") || self.at_keyword("false") => {
                self.err_at(start, "literals are not allowed in subject position")
            }
            Some(_) => Ok(Term::Iri(self.iri()?)),
            None => self.err("unexpected end of input"),
        }
    }

    fn object(&mut self, graph: Option<&Iri>) -> PResult<Term> {
        match self.peek() {
            Some('[') | Some('(') => self.node_or_collection(graph),
            Some('"') | Some('\'') => Ok(Term::Literal(self.rdf_literal()?)),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-') => Ok(Term::Literal(self.numeric()?)),
            Some('.') if self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) => Ok(Term::Literal(self.numeric()?)),
            Some('_') if self.rest().starts_with("_:") => Ok(Term::BlankNode(self.blank_node_label()?)),
            Some(_) if self.at_keyword("true") || self.at_keyword("false") => {
                let value = if self.at_keyword("true") { "true" } else { "false" };
                self.pos += value.len();
                Ok(Term::Literal(Literal::typed(value, vocab::xsd_boolean())))
            }
            Some(_) => Ok(Term::Iri(self.iri()?)),
            None => self.err("expected an object, found end of input"),
        }
    }

    fn fresh_blank(&mut self) -> BlankNode {
        loop {
            self.anon_counter += 1;
            let label = format!("anon{}", self.anon_counter);
            if !self.src.contains(&format!("_:{label}")) {
                return BlankNode::new(label).expect("valid label");
            }
        }
    }

    /// `[ ... ]` property lists and `( ... )` collections.
    fn node_or_collection(&mut self, graph: Option<&Iri>) -> PResult<Term> {
        match self.bump() {
            Some('[') => {
                let node = Term::BlankNode(self.fresh_blank());
                self.skip_ws();
                if self.peek() != Some(']') {
                    self.predicate_object_list(&node, graph)?;
                }
                self.expect(']')?;
                Ok(node)
            }
            Some('(') => {
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some(')') {
                        self.bump();
                        break;
                    }
                    if self.peek().is_none() {
                        return self.err("unterminated collection");
                    }
                    items.push(self.object(graph)?);
                }
                let mut list = Term::Iri(vocab::rdf_nil());
                for item in items.into_iter().rev() {
                    let cell = Term::BlankNode(self.fresh_blank());
                    self.emit(graph, Triple::new(cell.clone(), vocab::rdf_first(), item).expect("blank subject"));
                    self.emit(graph, Triple::new(cell.clone(), vocab::rdf_rest(), list).expect("blank subject"));
                    list = cell;
                }
                Ok(list)
            }
            _ => unreachable!("called on '[' or '('"),
        }
    }

    fn blank_node_label(&mut self) -> PResult<BlankNode> {
        let start = self.pos;
        self.pos += 2;
        let label_start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\u{B7}') {
                self.bump();
            } else {
                break;
            }
        }
        while self.src[label_start..self.pos].ends_with('.') {
            self.pos -= 1;
        }
        let label = &self.src[label_start..self.pos];
        BlankNode::new(label).or_else(|_| self.err_at(start, format!("unsupported blank node label {label:?}")))
    }

    fn iri(&mut self) -> PResult<Iri> {
        if self.peek() == Some('<') {
            self.iri_ref()
        } else {
            self.prefixed_name()
        }
    }

    fn iri_ref(&mut self) -> PResult<Iri> {
        let start = self.pos;
        if self.bump() != Some('<') {
            return self.err_at(start, "expected an IRI");
        }
        let mut value = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => {
                    let c = self.unicode_escape()?;
                    value.push(c);
                }
                Some(c) if c <= ' ' || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return self.err_at(self.pos - c.len_utf8(), format!("character {c:?} is not allowed in an IRI"));
                }
                Some(c) => value.push(c),
                None => return self.err_at(start, "unterminated IRI"),
            }
        }
        let resolved = if has_scheme(&value) {
            value
        } else {
            match &self.base {
                Some(base) => resolve(base, &value),
                None => return self.err_at(start, format!("relative IRI <{value}> without a base")),
            }
        };
        Iri::new(resolved).or_else(|e| self.err_at(start, e.to_string()))
    }

    fn unicode_escape(&mut self) -> PResult<char> {
        let start = self.pos - 1;
        let len = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.err_at(start, "invalid escape in IRI"),
        };
        self.hex_char(start, len)
    }

    fn hex_char(&mut self, start: usize, len: usize) -> PResult<char> {
        let rest = self.rest();
        let digits = rest.get(..len).filter(|d| d.chars().all(|c| c.is_ascii_hexdigit()));
        let Some(digits) = digits else { return self.err_at(start, "invalid unicode escape") };
        let code = u32::from_str_radix(digits, 16).expect("hex digits");
        self.pos += len;
        char::from_u32(code).map_or_else(|| self.err_at(start, "escape is not a Unicode scalar value"), Ok)
    }

    fn prefixed_name(&mut self) -> PResult<Iri> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                self.bump();
            } else {
                return match c {
                    c if c.is_whitespace() => self.err_at(start, "expected a prefixed name or IRI"),
                    c => self.err_at(self.pos, format!("unexpected character '{c}'")),
                };
            }
        }
        if self.peek() != Some(':') {
            return self.err_at(start, "expected a prefixed name or IRI");
        }
        let prefix = self.src[start..self.pos].to_string();
        self.bump();
        let mut local = String::new();
        let mut raw_len_after_dots = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '\u{B7}') => {
                    self.bump();
                    local.push(c);
                    raw_len_after_dots = 0;
                }
                Some('.') => {
                    self.bump();
                    local.push('.');
                    raw_len_after_dots += 1;
                }
                Some('%') => {
                    let esc_start = self.pos;
                    self.bump();
                    let hex = self.rest().get(..2).filter(|h| h.chars().all(|c| c.is_ascii_hexdigit()));
                    let Some(hex) = hex else { return self.err_at(esc_start, "invalid percent escape") };
                    local.push('%');
                    local.push_str(hex);
                    self.pos += 2;
                    raw_len_after_dots = 0;
                }
                Some('\\') => {
                    self.bump();
                    match self.bump() {
                        Some(c) if "_~.-!$&'()*+,;=/?#@%".contains(c) => local.push(c),
                        _ => return self.err_at(self.pos - 1, "invalid escape in local name"),
                    }
                    raw_len_after_dots = 0;
                }
                _ => break,
            }
        }
        // A trailing '.' ends the statement, it is not part of the name.
        self.pos -= raw_len_after_dots;
        local.truncate(local.len() - raw_len_after_dots);
        let Some(ns) = self.prefixes.get(&prefix) else {
            return self.err_at(start, format!("undefined prefix '{prefix}:'"));
        };
        Iri::new(format!("{ns}{local}")).or_else(|e| self.err_at(start, e.to_string()))
    }

    fn rdf_literal(&mut self) -> PResult<Literal> {
        let lexical = self.string()?;
        match self.peek() {
            Some('@') => {
                self.bump();
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '-') {
                    self.bump();
                }
                let tag = &self.src[start..self.pos];
                Literal::lang(lexical, tag).or_else(|e| self.err_at(start, e.to_string()))
            }
            Some('^') if self.rest().starts_with("^^") => {
                self.pos += 2;
                let dt = self.iri()?;
                Ok(Literal::typed(lexical, dt))
            }
            _ => Ok(Literal::simple(lexical)),
        }
    }

    fn string(&mut self) -> PResult<String> {
        let start = self.pos;
        let quote = self.bump().expect("called on a quote");
        let long = self.rest().starts_with(&format!("{quote}{quote}"));
        if long {
            self.pos += 2;
        }
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return self.err_at(start, "unterminated string"),
                Some(c) if c == quote => {
                    if !long {
                        return Ok(out);
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        // Quotes directly before the closing triple belong to the content.
                        let mut extra = 0;
                        while self.peek_at(2 + extra) == Some(quote) {
                            extra += 1;
                        }
                        for _ in 0..extra {
                            out.push(quote);
                        }
                        self.pos += (2 + extra) * quote.len_utf8();
                        return Ok(out);
                    }
                    out.push(c);
                }
                Some('\\') => {
                    let esc = self.pos - 1;
                    match self.bump() {
                        Some('t') => out.push('\t'),
                        Some('b') => out.push('\u{8}'),
                        Some('n') => out.push('\n'),
                        Some('r') => out.push('\r'),
                        Some('f') => out.push('\u{C}'),
                        Some('"') => out.push('"'),
                        Some('\'') => out.push('\''),
                        Some('\\') => out.push('\\'),
                        Some('u') => out.push(self.hex_char(esc, 4)?),
                        Some('U') => out.push(self.hex_char(esc, 8)?),
                        _ => return self.err_at(esc, "invalid escape sequence"),
                    }
                }
                Some(c) if !long && (c == '\n' || c == '\r') => {
                    return self.err_at(self.pos - 1, "line break in short string");
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn numeric(&mut self) -> PResult<Literal> {
        let start = self.pos;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.bump();
        }
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.bump();
            }
            p.pos - s
        };
        let int_digits = digits(self);
        let mut kind = vocab::xsd_integer();
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            digits(self);
            kind = vocab::xsd_decimal();
        } else if int_digits == 0 {
            return self.err_at(start, "invalid number");
        }
        if matches!(self.peek(), Some('e') | Some('E')) {
            self.bump();
            if matches!(self.peek(), Some('+') | Some('-')) {
                self.bump();
            }
            if digits(self) == 0 {
                return self.err_at(start, "invalid exponent");
            }
            kind = vocab::xsd_double();
        }
        Ok(Literal::typed(&self.src[start..self.pos], kind))
    }
}

/// RFC 3986 reference resolution.
pub(crate) fn resolve(base: &str, reference: &str) -> String {
    let b = split(base);
    let r = split(reference);
    let (authority, path, query);
    if r.scheme.is_some() {
        return reference.to_string();
    }
    if r.authority.is_some() {
        authority = r.authority;
        path = remove_dot_segments(r.path);
        query = r.query;
    } else {
        authority = b.authority;
        if r.path.is_empty() {
            path = b.path.to_string();
            query = r.query.or(b.query);
        } else {
            path = if r.path.starts_with('/') {
                remove_dot_segments(r.path)
            } else {
                let merged = if b.authority.is_some() && b.path.is_empty() {
                    format!("/{}", r.path)
                } else {
                    match b.path.rfind('/') {
                        Some(i) => format!("{}{}", &b.path[..=i], r.path),
                        None => r.path.to_string(),
                    }
                };
                remove_dot_segments(&merged)
            };
            query = r.query;
        }
    }
    let mut out = String::new();
    if let Some(s) = b.scheme {
        out.push_str(s);
        out.push(':');
    }
    if let Some(a) = authority {
        out.push_str("//");
        out.push_str(a);
    }
    out.push_str(&path);
    if let Some(q) = query {
        out.push('?');
        out.push_str(q);
    }
    if let Some(f) = r.fragment {
        out.push('#');
        out.push_str(f);
    }
    out
}

struct Parts<'a> {
    scheme: Option<&'a str>,
    authority: Option<&'a str>,
    path: &'a str,
    query: Option<&'a str>,
    fragment: Option<&'a str>,
}

fn split(s: &str) -> Parts<'_> {
    let (rest, fragment) = match s.split_once('#') {
        Some((r, f)) => (r, Some(f)),
        None => (s, None),
    };
    let (rest, query) = match rest.split_once('?') {
        Some((r, q)) => (r, Some(q)),
        None => (rest, None),
    };
    let (scheme, rest) = if has_scheme(rest) {
        let i = rest.find(':').expect("scheme has a colon");
        (Some(&rest[..i]), &rest[i + 1..])
    } else {
        (None, rest)
    };
    let (authority, path) = match rest.strip_prefix("//") {
        Some(after) => {
            let end = after.find('/').unwrap_or(after.len());
            (Some(&after[..end]), &after[end..])
        }
        None => (None, rest),
    };
    Parts { scheme, authority, path, query, fragment }
}

fn remove_dot_segments(path: &str) -> String {
    let mut input = path;
    let mut output: Vec<&str> = Vec::new();
    let absolute = path.starts_with('/');
    let trailing = path.ends_with("/.") || path.ends_with("/..") || path == "." || path == "..";
    if let Some(stripped) = input.strip_prefix('/') {
        input = stripped;
    }
    for segment in input.split('/') {
        match segment {
            "." => {}
            ".." => {
                output.pop();
            }
            s => output.push(s),
        }
    }
    let mut out = output.join("/");
    if trailing && !out.is_empty() {
        out.push('/');
    }
    if absolute {
        out.insert(0, '/');
    }
    out
}
