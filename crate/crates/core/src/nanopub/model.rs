use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::term::{Iri, Literal, Term, Triple};
use super::vocab;
use crate::aida::{AidaSentence, AidaUri};

/// A named graph: an IRI and a duplicate-free set of triples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NamedGraph {
    pub name: Iri,
    pub triples: BTreeSet<Triple>,
}

impl NamedGraph {
    pub fn new(name: Iri) -> Self {
        NamedGraph { name, triples: BTreeSet::new() }
    }

    pub fn with_triples(name: Iri, triples: impl IntoIterator<Item = Triple>) -> Self {
        NamedGraph { name, triples: triples.into_iter().collect() }
    }

    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Objects of triples matching `(subject, predicate, ?)`.
    pub fn objects<'a>(&'a self, subject: &'a Iri, predicate: &'a Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.triples
            .iter()
            .filter(move |t| t.subject().as_iri() == Some(subject) && t.predicate() == predicate)
            .map(Triple::object)
    }
}

/// Production route of a nanopublication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    Author,
    MetaUser,
    Curator,
    TextMining,
    StructuredExport,
    Bot,
}

impl Channel {
    pub const ALL: [Channel; 6] = [
        Channel::Author,
        Channel::MetaUser,
        Channel::Curator,
        Channel::TextMining,
        Channel::StructuredExport,
        Channel::Bot,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Author => "Author",
            Channel::MetaUser => "MetaUser",
            Channel::Curator => "Curator",
            Channel::TextMining => "TextMining",
            Channel::StructuredExport => "StructuredExport",
            Channel::Bot => "Bot",
        }
    }

    /// Software channels; everything else is a human act.
    pub fn is_automated(self) -> bool {
        matches!(self, Channel::TextMining | Channel::StructuredExport | Channel::Bot)
    }

    fn iri(self) -> Iri {
        vocab::npx(&format!("{}Channel", self.as_str()))
    }

    fn from_iri(iri: &Iri) -> Option<Self> {
        Channel::ALL.into_iter().find(|c| &c.iri() == iri)
    }
}

/// How sure the asserting agent is. Kept out of the sentence itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Certainty {
    Hypothesized,
    Probable,
    Established,
    Unspecified,
}

impl Certainty {
    pub const ALL: [Certainty; 4] =
        [Certainty::Hypothesized, Certainty::Probable, Certainty::Established, Certainty::Unspecified];

    pub fn as_str(self) -> &'static str {
        match self {
            Certainty::Hypothesized => "Hypothesized",
            Certainty::Probable => "Probable",
            Certainty::Established => "Established",
            Certainty::Unspecified => "Unspecified",
        }
    }

    fn iri(self) -> Iri {
        vocab::npx(self.as_str())
    }

    fn from_iri(iri: &Iri) -> Option<Self> {
        Certainty::ALL.into_iter().find(|c| &c.iri() == iri)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub attributed_to: Iri,
    pub generated_at: DateTime<Utc>,
    pub derived_from: Vec<Iri>,
    pub created_by_channel: Channel,
    pub certainty: Certainty,
    /// Settings of the software agent that produced the assertion.
    pub parameters: Option<String>,
}

impl Provenance {
    pub fn new(attributed_to: Iri, generated_at: DateTime<Utc>, channel: Channel) -> Self {
        Provenance {
            attributed_to,
            generated_at,
            derived_from: Vec::new(),
            created_by_channel: channel,
            certainty: Certainty::Unspecified,
            parameters: None,
        }
    }

    fn triples(&self, assertion: &Iri) -> Vec<Triple> {
        let mut out = vec![
            Triple::iri(assertion, &vocab::was_attributed_to(), self.attributed_to.clone()),
            Triple::iri(assertion, &vocab::generated_at_time(), date_time_literal(&self.generated_at)),
            Triple::iri(assertion, &vocab::created_by_channel(), self.created_by_channel.iri()),
            Triple::iri(assertion, &vocab::has_certainty(), self.certainty.iri()),
        ];
        if let Some(p) = &self.parameters {
            out.push(Triple::iri(assertion, &vocab::generated_with_parameters(), Literal::simple(p)));
        }
        out.extend(
            self.derived_from
                .iter()
                .map(|src| Triple::iri(assertion, &vocab::was_derived_from(), src.clone())),
        );
        out
    }

    /// Reads the provenance graph of a nanopublication back into a value.
    pub fn from_nanopub(np: &Nanopublication) -> Option<Provenance> {
        let assertion = np.assertion_iri()?;
        let graph = np.provenance_graph()?;
        let iri_of = |p: Iri| graph.objects(&assertion, &p).find_map(Term::as_iri).cloned();
        let attributed_to = iri_of(vocab::was_attributed_to())?;
        let generated_at = graph.objects(&assertion, &vocab::generated_at_time()).find_map(|t| match t {
            Term::Literal(l) => DateTime::parse_from_rfc3339(l.lexical()).ok().map(|d| d.with_timezone(&Utc)),
            _ => None,
        })?;
        let created_by_channel = iri_of(vocab::created_by_channel()).and_then(|i| Channel::from_iri(&i))?;
        let certainty = iri_of(vocab::has_certainty())
            .and_then(|i| Certainty::from_iri(&i))
            .unwrap_or(Certainty::Unspecified);
        let mut derived_from: Vec<Iri> =
            graph.objects(&assertion, &vocab::was_derived_from()).filter_map(Term::as_iri).cloned().collect();
        derived_from.sort();
        let parameters = graph.objects(&assertion, &vocab::generated_with_parameters()).find_map(|t| match t {
            Term::Literal(l) => Some(l.lexical().to_string()),
            _ => None,
        });
        Some(Provenance { attributed_to, generated_at, derived_from, created_by_channel, certainty, parameters })
    }
}

pub(crate) fn date_time_literal(t: &DateTime<Utc>) -> Literal {
    Literal::typed(t.to_rfc3339_opts(SecondsFormat::AutoSi, true), vocab::xsd_date_time())
}

/// Everything that can be wrong with the structure of a nanopublication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StructureViolation {
    NoAssertion,
    MultipleAssertions(Vec<Iri>),
    AssertionGraphMissing(Iri),
    DanglingGraphRef { from: Iri, to: Iri },
    CycleDetected(Vec<Iri>),
    HeadGraphDuplicated(Iri),
    InvalidSentenceUri(String),
    SentenceOnWrongSubject(Iri),
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureViolation::NoAssertion => f.write_str("head has no np:hasAssertion triple"),
            StructureViolation::MultipleAssertions(a) => {
                write!(f, "head has {} np:hasAssertion triples", a.len())
            }
            StructureViolation::AssertionGraphMissing(g) => write!(f, "assertion graph {g} is missing"),
            StructureViolation::DanglingGraphRef { from, to } => {
                write!(f, "{from} refers to graph {to}, which is not part of the nanopublication")
            }
            StructureViolation::CycleDetected(cycle) => {
                let names: Vec<_> = cycle.iter().map(Iri::as_str).collect();
                write!(f, "np:containsGraph cycle: {}", names.join(" -> "))
            }
            StructureViolation::HeadGraphDuplicated(g) => write!(f, "head graph {g} also listed as a content graph"),
            StructureViolation::InvalidSentenceUri(u) => write!(f, "npx:asSentence object is not an AIDA URI: {u}"),
            StructureViolation::SentenceOnWrongSubject(s) => {
                write!(f, "npx:asSentence attached to {s} instead of the assertion")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("nanopublication has no AIDA sentence in its assertion head")]
    NotAidaNanopub,
    #[error("assertion is already formalized by {0}")]
    AlreadyFormalized(Iri),
    #[error("graph name {0} is already used in this nanopublication")]
    GraphNameTaken(Iri),
    #[error("np:containsGraph cycle through {0:?}")]
    CycleIntroduced(Vec<Iri>),
    #[error("{from} refers to graph {to}, which is not part of the nanopublication")]
    DanglingGraphRef { from: Iri, to: Iri },
    #[error("nanopublication has no usable assertion graph")]
    NoAssertion,
}

/// A nanopublication: a head graph linking the parts, plus the content graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Nanopublication {
    uri: Iri,
    head: NamedGraph,
    graphs: BTreeMap<Iri, NamedGraph>,
}

impl Nanopublication {
    /// Assembles a nanopublication without checking it; see [`validate_structure`].
    pub fn from_parts(uri: Iri, head: NamedGraph, graphs: impl IntoIterator<Item = NamedGraph>) -> Self {
        let mut map: BTreeMap<Iri, NamedGraph> = BTreeMap::new();
        for g in graphs {
            match map.get_mut(&g.name) {
                Some(existing) => existing.triples.extend(g.triples),
                None => {
                    map.insert(g.name.clone(), g);
                }
            }
        }
        Nanopublication { uri, head, graphs: map }
    }

    pub fn uri(&self) -> &Iri {
        &self.uri
    }

    pub fn head(&self) -> &NamedGraph {
        &self.head
    }

    pub fn graphs(&self) -> impl Iterator<Item = &NamedGraph> {
        self.graphs.values()
    }

    pub fn graph(&self, name: &Iri) -> Option<&NamedGraph> {
        self.graphs.get(name)
    }

    /// Head first, then content graphs in IRI order.
    pub fn all_graphs(&self) -> impl Iterator<Item = &NamedGraph> {
        std::iter::once(&self.head).chain(self.graphs.values())
    }

    fn head_link(&self, predicate: &Iri) -> Option<Iri> {
        self.head.objects(&self.uri, predicate).find_map(Term::as_iri).cloned()
    }

    pub fn assertion_iri(&self) -> Option<Iri> {
        self.head_link(&vocab::has_assertion())
    }

    pub fn provenance_graph(&self) -> Option<&NamedGraph> {
        self.graphs.get(&self.head_link(&vocab::has_provenance())?)
    }

    pub fn pubinfo_graph(&self) -> Option<&NamedGraph> {
        self.graphs.get(&self.head_link(&vocab::has_publication_info())?)
    }

    fn find_assertion_link(&self, predicate: &Iri) -> Option<(Iri, Term)> {
        let assertion = self.assertion_iri()?;
        self.graphs.values().find_map(|g| {
            g.objects(&assertion, predicate).next().map(|o| (g.name.clone(), o.clone()))
        })
    }

    /// The AIDA sentence URI of the assertion, if this is an AIDA nanopublication.
    pub fn aida_sentence(&self) -> Option<AidaUri> {
        match self.find_assertion_link(&vocab::as_sentence())? {
            (_, Term::Iri(iri)) => AidaUri::parse(iri.as_str()).ok(),
            _ => None,
        }
    }

    /// Name of the graph holding the asSentence/asFormula pointers.
    pub fn assertion_head_graph(&self) -> Option<Iri> {
        self.find_assertion_link(&vocab::as_sentence()).map(|(g, _)| g)
    }

    pub fn formalization(&self) -> Option<Iri> {
        match self.find_assertion_link(&vocab::as_formula())? {
            (_, Term::Iri(iri)) => Some(iri),
            _ => None,
        }
    }

    /// Suggested name for the formalization body graph.
    pub fn body_graph_name(&self) -> Iri {
        self.local_name("assertionBody")
    }

    fn local_name(&self, fragment: &str) -> Iri {
        Iri::new(format!("{}#{fragment}", self.uri.as_str())).expect("valid IRI")
    }

    /// Attaches a formal body to an AIDA nanopublication's assertion.
    pub fn attach_formalization(&self, body: NamedGraph, partial_about: &[Iri]) -> Result<Self, ModelError> {
        self.attach_formalization_with(body, partial_about, Vec::new())
    }

    /// Like [`attach_formalization`](Self::attach_formalization), also adding
    /// subgraphs that the body links to with `np:containsGraph`.
    pub fn attach_formalization_with(
        &self,
        mut body: NamedGraph,
        partial_about: &[Iri],
        subgraphs: Vec<NamedGraph>,
    ) -> Result<Self, ModelError> {
        let head_graph = self.assertion_head_graph().ok_or(ModelError::NotAidaNanopub)?;
        if let Some(existing) = self.formalization() {
            return Err(ModelError::AlreadyFormalized(existing));
        }
        let assertion = self.assertion_iri().ok_or(ModelError::NoAssertion)?;
        let mut next = self.clone();
        for g in std::iter::once(&body).chain(subgraphs.iter()) {
            if g.name == next.head.name || next.graphs.contains_key(&g.name) {
                return Err(ModelError::GraphNameTaken(g.name.clone()));
            }
        }
        for about in partial_about {
            body.insert(Triple::iri(&body.name, &vocab::rdf_about(), about.clone()));
        }
        let body_name = body.name.clone();
        next.graphs
            .get_mut(&head_graph)
            .expect("assertion head graph exists")
            .insert(Triple::iri(&assertion, &vocab::as_formula(), body_name.clone()));
        next.head.insert(Triple::iri(&assertion, &vocab::contains_graph(), body_name));
        next.graphs.insert(body.name.clone(), body);
        for g in subgraphs {
            if next.graphs.contains_key(&g.name) {
                return Err(ModelError::GraphNameTaken(g.name));
            }
            next.graphs.insert(g.name.clone(), g);
        }
        next.check_containment()?;
        Ok(next)
    }

    /// Adds `sub` as a subgraph of `parent` via `(parent, np:containsGraph, sub)`,
    /// stored in the parent graph.
    pub fn add_subgraph(&self, parent: &Iri, sub: NamedGraph) -> Result<Self, ModelError> {
        if sub.name == self.head.name || self.graphs.contains_key(&sub.name) {
            return Err(ModelError::GraphNameTaken(sub.name));
        }
        let mut next = self.clone();
        let link = Triple::iri(parent, &vocab::contains_graph(), sub.name.clone());
        match next.graphs.get_mut(parent) {
            Some(g) => {
                g.insert(link);
            }
            None => {
                return Err(ModelError::DanglingGraphRef { from: parent.clone(), to: parent.clone() });
            }
        }
        next.graphs.insert(sub.name.clone(), sub);
        next.check_containment()?;
        Ok(next)
    }

    fn check_containment(&self) -> Result<(), ModelError> {
        if let Some(cycle) = find_cycle(&self.containment_edges()) {
            return Err(ModelError::CycleIntroduced(cycle));
        }
        for (from, tos) in self.containment_edges() {
            for to in tos {
                if !self.graphs.contains_key(&to) {
                    return Err(ModelError::DanglingGraphRef { from: from.clone(), to });
                }
            }
        }
        Ok(())
    }

    /// `np:containsGraph` edges declared anywhere in the nanopublication.
    fn containment_edges(&self) -> BTreeMap<Iri, Vec<Iri>> {
        let predicate = vocab::contains_graph();
        let mut edges: BTreeMap<Iri, Vec<Iri>> = BTreeMap::new();
        for g in self.all_graphs() {
            for t in g.triples.iter().filter(|t| t.predicate() == &predicate) {
                if let (Term::Iri(from), Term::Iri(to)) = (t.subject(), t.object()) {
                    edges.entry(from.clone()).or_default().push(to.clone());
                }
            }
        }
        edges
    }

    /// Triples of the assertion graph and every graph it transitively
    /// contains, minus the `containsGraph` and `asFormula` bookkeeping triples.
    pub fn collect_assertion_triples(&self) -> Result<BTreeSet<Triple>, ModelError> {
        let assertion = self.assertion_iri().ok_or(ModelError::NoAssertion)?;
        if !self.graphs.contains_key(&assertion) {
            return Err(ModelError::NoAssertion);
        }
        let edges = self.containment_edges();
        let skip = [vocab::contains_graph(), vocab::as_formula()];
        let mut seen = HashSet::from([assertion.clone()]);
        let mut queue = vec![assertion];
        let mut out = BTreeSet::new();
        while let Some(name) = queue.pop() {
            let graph = &self.graphs[&name];
            out.extend(graph.triples.iter().filter(|t| !skip.contains(t.predicate())).cloned());
            for to in edges.get(&name).into_iter().flatten() {
                if !self.graphs.contains_key(to) {
                    return Err(ModelError::DanglingGraphRef { from: name.clone(), to: to.clone() });
                }
                if seen.insert(to.clone()) {
                    queue.push(to.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn validate_structure(&self) -> Vec<StructureViolation> {
        validate_structure(self)
    }

    /// Copy of this nanopublication with an extra triple in its provenance graph.
    pub fn with_provenance_triple(&self, triple: Triple) -> Option<Self> {
        let name = self.head_link(&vocab::has_provenance())?;
        let mut next = self.clone();
        next.graphs.get_mut(&name)?.insert(triple);
        Some(next)
    }
}

pub fn validate_structure(np: &Nanopublication) -> Vec<StructureViolation> {
    let mut out = Vec::new();
    let assertions: Vec<Iri> =
        np.head.objects(&np.uri, &vocab::has_assertion()).filter_map(Term::as_iri).cloned().collect();
    match assertions.len() {
        0 => out.push(StructureViolation::NoAssertion),
        1 => {
            if !np.graphs.contains_key(&assertions[0]) {
                out.push(StructureViolation::AssertionGraphMissing(assertions[0].clone()));
            }
        }
        _ => out.push(StructureViolation::MultipleAssertions(assertions.clone())),
    }
    if np.graphs.contains_key(&np.head.name) {
        out.push(StructureViolation::HeadGraphDuplicated(np.head.name.clone()));
    }
    for predicate in [vocab::has_provenance(), vocab::has_publication_info()] {
        for target in np.head.objects(&np.uri, &predicate).filter_map(Term::as_iri) {
            if !np.graphs.contains_key(target) {
                out.push(StructureViolation::DanglingGraphRef { from: np.uri.clone(), to: target.clone() });
            }
        }
    }
    let edges = np.containment_edges();
    for (from, tos) in &edges {
        for to in tos {
            if !np.graphs.contains_key(to) {
                out.push(StructureViolation::DanglingGraphRef { from: from.clone(), to: to.clone() });
            }
        }
    }
    if let Some(cycle) = find_cycle(&edges) {
        out.push(StructureViolation::CycleDetected(cycle));
    }
    let as_sentence = vocab::as_sentence();
    let as_formula = vocab::as_formula();
    for g in np.graphs.values() {
        for t in &g.triples {
            if t.predicate() == &as_sentence {
                match t.object() {
                    Term::Iri(iri) if AidaUri::parse(iri.as_str()).is_ok() => {}
                    other => out.push(StructureViolation::InvalidSentenceUri(other.to_string())),
                }
                if let Term::Iri(subject) = t.subject() {
                    if assertions.len() == 1 && subject != &assertions[0] {
                        out.push(StructureViolation::SentenceOnWrongSubject(subject.clone()));
                    }
                }
            }
            if t.predicate() == &as_formula {
                if let (Term::Iri(from), Term::Iri(to)) = (t.subject(), t.object()) {
                    if !np.graphs.contains_key(to) {
                        out.push(StructureViolation::DanglingGraphRef { from: from.clone(), to: to.clone() });
                    }
                }
            }
        }
    }
    out
}

/// Finds one directed cycle, returned as the path that closes on its first node.
fn find_cycle(edges: &BTreeMap<Iri, Vec<Iri>>) -> Option<Vec<Iri>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn visit<'a>(
        node: &'a Iri,
        edges: &'a BTreeMap<Iri, Vec<Iri>>,
        marks: &mut HashMap<&'a Iri, Mark>,
        path: &mut Vec<&'a Iri>,
    ) -> Option<Vec<Iri>> {
        marks.insert(node, Mark::Active);
        path.push(node);
        for next in edges.get(node).into_iter().flatten() {
            match marks.get(next) {
                Some(Mark::Active) => {
                    let start = path.iter().position(|n| *n == next).expect("active node is on the path");
                    let mut cycle: Vec<Iri> = path[start..].iter().map(|n| (*n).clone()).collect();
                    cycle.push(next.clone());
                    return Some(cycle);
                }
                Some(Mark::Done) => {}
                None => {
                    if let Some(c) = visit(next, edges, marks, path) {
                        return Some(c);
                    }
                }
            }
        }
        path.pop();
        marks.insert(node, Mark::Done);
        None
    }
    let mut marks = HashMap::new();
    for node in edges.keys() {
        if !marks.contains_key(node) {
            if let Some(c) = visit(node, edges, &mut marks, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

/// Mints `urn:aidapub:<digest>` for a nanopublication whose graphs are
/// produced by `build` from a base URI. The digest covers the canonical TriG
/// of the content built against a placeholder base, so it depends on the
/// content and salt only.
fn mint(build: impl Fn(&Iri) -> Nanopublication) -> Nanopublication {
    let placeholder = Iri::new(format!("{}self", vocab::NANOPUB_URI_PREFIX)).expect("valid IRI");
    let draft = build(&placeholder);
    let digest = Sha256::digest(super::trig::serialize_trig(&draft));
    let uri = Iri::new(format!("{}{}", vocab::NANOPUB_URI_PREFIX, &hex::encode(digest)[..32])).expect("valid IRI");
    build(&uri)
}

fn part(base: &Iri, fragment: &str) -> Iri {
    Iri::new(format!("{}#{fragment}", base.as_str())).expect("valid IRI")
}

fn skeleton(base: &Iri, prov: &Provenance, salt: &str) -> (NamedGraph, Iri, NamedGraph, NamedGraph) {
    let assertion = part(base, "assertion");
    let provenance = part(base, "provenance");
    let pubinfo = part(base, "pubinfo");
    let head = NamedGraph::with_triples(
        part(base, "Head"),
        [
            Triple::iri(base, &vocab::rdf_type(), vocab::nanopublication()),
            Triple::iri(base, &vocab::has_assertion(), assertion.clone()),
            Triple::iri(base, &vocab::has_provenance(), provenance.clone()),
            Triple::iri(base, &vocab::has_publication_info(), pubinfo.clone()),
        ],
    );
    let prov_graph = NamedGraph::with_triples(provenance, prov.triples(&assertion));
    let pubinfo_graph = NamedGraph::with_triples(
        pubinfo,
        [
            Triple::iri(base, &vocab::mint_salt(), Literal::simple(salt)),
            Triple::iri(base, &vocab::generated_at_time(), date_time_literal(&prov.generated_at)),
        ],
    );
    (head, assertion, prov_graph, pubinfo_graph)
}

/// Builds an AIDA nanopublication: the assertion contains an assertion-head
/// graph pointing at the sentence URI via `npx:asSentence`.
pub fn build_aida_nanopub(sentence: &AidaSentence, prov: &Provenance, salt: &str) -> Nanopublication {
    let sentence_iri = Iri::from(&sentence.to_uri());
    mint(|base| {
        let (mut head, assertion, prov_graph, pubinfo_graph) = skeleton(base, prov, salt);
        let assertion_head = part(base, "assertionHead");
        head.insert(Triple::iri(&assertion, &vocab::contains_graph(), assertion_head.clone()));
        let assertion_graph = NamedGraph::new(assertion.clone());
        let head_graph = NamedGraph::with_triples(
            assertion_head,
            [Triple::iri(&assertion, &vocab::as_sentence(), sentence_iri.clone())],
        );
        Nanopublication::from_parts(base.clone(), head, [assertion_graph, head_graph, prov_graph, pubinfo_graph])
    })
}

/// Builds a plain nanopublication whose assertion graph holds `assertion`.
/// Used for opinions, links and other meta-nanopublications.
pub fn build_plain_nanopub(assertion: &[Triple], prov: &Provenance, salt: &str) -> Nanopublication {
    mint(|base| {
        let (head, assertion_iri, prov_graph, pubinfo_graph) = skeleton(base, prov, salt);
        let graph = NamedGraph::with_triples(assertion_iri, assertion.iter().cloned());
        Nanopublication::from_parts(base.clone(), head, [graph, prov_graph, pubinfo_graph])
    })
}
