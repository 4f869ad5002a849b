use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use aidapub_core::aida::{AidaSentence, AidaUri};
use aidapub_core::clustering::{counts, tokenize, SentenceVector, TfIdfModel};
use aidapub_core::nanopub::{
    build_plain_nanopub, parse_trig, serialize_trig, vocab, Channel, Iri, Nanopublication, Provenance,
    StructureViolation, Term, TrigError, Triple,
};
use chrono::{DateTime, Utc};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};

use crate::journal::{Journal, JournalError, Record};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgentKind {
    Person,
    Bot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agent {
    pub iri: Iri,
    pub display_name: String,
    pub kind: AgentKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpinionKind {
    Agrees,
    Disagrees,
    IsConvinced,
    IsNotConvinced,
}

impl OpinionKind {
    pub const ALL: [OpinionKind; 4] =
        [OpinionKind::Agrees, OpinionKind::Disagrees, OpinionKind::IsConvinced, OpinionKind::IsNotConvinced];

    pub fn predicate(self) -> Iri {
        match self {
            OpinionKind::Agrees => vocab::agrees_with(),
            OpinionKind::Disagrees => vocab::disagrees_with(),
            OpinionKind::IsConvinced => vocab::is_convinced_by(),
            OpinionKind::IsNotConvinced => vocab::is_not_convinced_by(),
        }
    }

    pub fn from_predicate(p: &Iri) -> Option<Self> {
        Self::ALL.into_iter().find(|k| &k.predicate() == p)
    }

    /// Agreement and conviction are separate questions; a later opinion only
    /// replaces an earlier one on the same axis.
    fn axis(self) -> u8 {
        match self {
            OpinionKind::Agrees | OpinionKind::Disagrees => 0,
            OpinionKind::IsConvinced | OpinionKind::IsNotConvinced => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    #[serde(rename = "hasSameMeaning")]
    HasSameMeaning,
    #[serde(rename = "hasRelatedMeaning")]
    HasRelatedMeaning,
}

impl RelationKind {
    pub fn predicate(self) -> Iri {
        match self {
            RelationKind::HasSameMeaning => vocab::has_same_meaning(),
            RelationKind::HasRelatedMeaning => vocab::has_related_meaning(),
        }
    }

    pub fn from_predicate(p: &Iri) -> Option<Self> {
        [RelationKind::HasSameMeaning, RelationKind::HasRelatedMeaning].into_iter().find(|k| &k.predicate() == p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Opinion {
    pub agent: Iri,
    pub statement: AidaUri,
    pub kind: OpinionKind,
    pub nanopub_uri: Iri,
    pub at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Receipt {
    pub uri: Iri,
    pub stored_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssertingNanopub {
    pub nanopub_uri: Iri,
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelatedStatement {
    pub uri: AidaUri,
    pub sentence: AidaSentence,
    pub relation: RelationKind,
    pub nanopub_uri: Iri,
    /// True when the stored triple points from the other statement to this one.
    pub inverse: bool,
    pub attributed_to: Option<Iri>,
    pub channel: Option<Channel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatementView {
    pub sentence: AidaSentence,
    pub uri: AidaUri,
    pub asserting_nanopubs: Vec<AssertingNanopub>,
    pub related: Vec<RelatedStatement>,
    pub opinions: Vec<Opinion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub uri: AidaUri,
    pub sentence: AidaSentence,
    pub score: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum PortalError {
    #[error("nanopublication is malformed: {}", join(.0))]
    StructureInvalid(Vec<StructureViolation>),
    #[error("a different nanopublication is already stored as {0}")]
    ConflictingContentForUri(Iri),
    #[error("not an AIDA URI: {0}")]
    MalformedUri(String),
    #[error("agent {0} is not registered")]
    UnknownAgent(Iri),
    #[error("cannot link {0} to itself")]
    SelfLink(AidaUri),
    #[error("agent {0} is already registered with different details")]
    AgentConflict(Iri),
    #[error("{0}")]
    BadRequest(String),
    #[error("no nanopublication {0}")]
    NotFound(String),
    #[error(transparent)]
    Trig(#[from] TrigError),
    #[error(transparent)]
    Journal(#[from] JournalError),
}

fn join(v: &[StructureViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl PortalError {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            PortalError::StructureInvalid(_) => "StructureInvalid",
            PortalError::ConflictingContentForUri(_) => "ConflictingContentForUri",
            PortalError::MalformedUri(_) => "MalformedUri",
            PortalError::UnknownAgent(_) => "UnknownAgent",
            PortalError::SelfLink(_) => "SelfLink",
            PortalError::AgentConflict(_) => "AgentConflict",
            PortalError::BadRequest(_) => "BadRequest",
            PortalError::NotFound(_) => "NotFound",
            PortalError::Trig(TrigError::Syntax { .. }) => "TrigSyntax",
            PortalError::Trig(TrigError::Structure { .. }) => "StructureInvalid",
            PortalError::Journal(_) => "Journal",
        }
    }
}

/// Whether a publish created a new record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Created,
    AlreadyStored,
}

struct Entry {
    np: Nanopublication,
    stored_at: DateTime<Utc>,
    provenance: Option<Provenance>,
}

struct Link {
    other: AidaUri,
    relation: RelationKind,
    inverse: bool,
    entry: usize,
}

struct OpinionRef {
    agent: Iri,
    kind: OpinionKind,
    entry: usize,
}

#[derive(Default)]
struct State {
    entries: Vec<Entry>,
    by_uri: HashMap<Iri, usize>,
    by_sentence: BTreeMap<AidaUri, Vec<usize>>,
    by_agent: HashMap<Iri, Vec<usize>>,
    links: HashMap<AidaUri, Vec<Link>>,
    opinions: HashMap<AidaUri, Vec<OpinionRef>>,
    agents: BTreeMap<Iri, Agent>,
    /// Bumped whenever the set of asserted sentences changes.
    sentence_generation: u64,
}

impl State {
    fn index(&mut self, np: Nanopublication, stored_at: DateTime<Utc>) {
        let entry = self.entries.len();
        let provenance = Provenance::from_nanopub(&np);
        self.by_uri.insert(np.uri().clone(), entry);
        if let Some(p) = &provenance {
            self.by_agent.entry(p.attributed_to.clone()).or_default().push(entry);
        }
        if let Some(sentence) = np.aida_sentence() {
            let list = self.by_sentence.entry(sentence).or_default();
            if list.is_empty() {
                self.sentence_generation += 1;
            }
            list.push(entry);
        }
        let triples = np.collect_assertion_triples().unwrap_or_default();
        for t in &triples {
            let (Term::Iri(s), Term::Iri(o)) = (t.subject(), t.object()) else { continue };
            if let Some(relation) = RelationKind::from_predicate(t.predicate()) {
                let (Ok(a), Ok(b)) = (AidaUri::parse(s.as_str()), AidaUri::parse(o.as_str())) else { continue };
                if a == b {
                    continue;
                }
                self.links.entry(a.clone()).or_default().push(Link { other: b.clone(), relation, inverse: false, entry });
                self.links.entry(b).or_default().push(Link { other: a, relation, inverse: true, entry });
            }
        }
        if let [t] = triples.iter().collect::<Vec<_>>()[..] {
            if let (Term::Iri(agent), Some(kind), Term::Iri(o)) =
                (t.subject(), OpinionKind::from_predicate(t.predicate()), t.object())
            {
                if let Ok(statement) = AidaUri::parse(o.as_str()) {
                    self.opinions.entry(statement).or_default().push(OpinionRef { agent: agent.clone(), kind, entry });
                }
            }
        }
        self.entries.push(Entry { np, stored_at, provenance });
    }

    fn opinion(&self, statement: &AidaUri, r: &OpinionRef) -> Opinion {
        let e = &self.entries[r.entry];
        Opinion {
            agent: r.agent.clone(),
            statement: statement.clone(),
            kind: r.kind,
            nanopub_uri: e.np.uri().clone(),
            at: e.provenance.as_ref().map_or(e.stored_at, |p| p.generated_at),
        }
    }

    fn view(&self, uri: &AidaUri) -> StatementView {
        let asserting_nanopubs = self
            .by_sentence
            .get(uri)
            .into_iter()
            .flatten()
            .map(|&i| AssertingNanopub {
                nanopub_uri: self.entries[i].np.uri().clone(),
                provenance: self.entries[i].provenance.clone(),
            })
            .collect();

        let mut links: Vec<&Link> = self.links.get(uri).into_iter().flatten().collect();
        // Human links first, then software proposals, each in publication order.
        links.sort_by_key(|l| {
            let automated = self.entries[l.entry].provenance.as_ref().is_none_or(|p| p.created_by_channel.is_automated());
            (automated, l.entry)
        });
        let related = links
            .into_iter()
            .map(|l| {
                let prov = self.entries[l.entry].provenance.as_ref();
                RelatedStatement {
                    uri: l.other.clone(),
                    sentence: l.other.sentence(),
                    relation: l.relation,
                    nanopub_uri: self.entries[l.entry].np.uri().clone(),
                    inverse: l.inverse,
                    attributed_to: prov.map(|p| p.attributed_to.clone()),
                    channel: prov.map(|p| p.created_by_channel),
                }
            })
            .collect();

        let mut latest: BTreeMap<(&Iri, u8), (DateTime<Utc>, usize, &OpinionRef)> = BTreeMap::new();
        for r in self.opinions.get(uri).into_iter().flatten() {
            let at = self.opinion(uri, r).at;
            let slot = latest.entry((&r.agent, r.kind.axis())).or_insert((at, r.entry, r));
            if (at, r.entry) > (slot.0, slot.1) {
                *slot = (at, r.entry, r);
            }
        }
        let mut current: Vec<_> = latest.into_values().collect();
        current.sort_by_key(|&(at, entry, _)| (at, entry));
        let opinions = current.into_iter().map(|(_, _, r)| self.opinion(uri, r)).collect();

        StatementView { sentence: uri.sentence(), uri: uri.clone(), asserting_nanopubs, related, opinions }
    }
}

struct SearchIndex {
    generation: u64,
    model: Option<TfIdfModel>,
    vectors: Vec<SentenceVector>,
}

type Clock = Box<dyn Fn() -> DateTime<Utc> + Send + Sync>;

/// The nanopublication store behind the portal.
///
/// Reads run concurrently; writes are serialized by the lock and reach the
/// journal before they become visible.
pub struct Portal {
    state: RwLock<State>,
    journal: Mutex<Option<Journal>>,
    search: Mutex<Option<Arc<SearchIndex>>>,
    clock: Clock,
}

impl Default for Portal {
    fn default() -> Self {
        Portal::in_memory()
    }
}

impl Portal {
    /// A store without persistence.
    pub fn in_memory() -> Self {
        Portal {
            state: RwLock::new(State::default()),
            journal: Mutex::new(None),
            search: Mutex::new(None),
            clock: Box::new(Utc::now),
        }
    }

    /// Opens the journal at `path`, creating it if needed, and replays it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, PortalError> {
        let (journal, records) = Journal::open(path.as_ref())?;
        let mut state = State::default();
        for (n, record) in records.into_iter().enumerate() {
            match record {
                Record::Agent(agent) => {
                    state.agents.insert(agent.iri.clone(), agent);
                }
                Record::Nanopub { stored_at, trig } => {
                    let parsed = parse_trig(&trig).map_err(|e| JournalError::Corrupt {
                        path: path.as_ref().to_path_buf(),
                        offset: 0,
                        message: format!("record {n}: {e}"),
                    })?;
                    for np in parsed.nanopubs {
                        if !state.by_uri.contains_key(np.uri()) {
                            state.index(np, stored_at);
                        }
                    }
                }
            }
        }
        tracing::info!(nanopubs = state.entries.len(), agents = state.agents.len(), "journal replayed");
        let portal = Portal::in_memory();
        *portal.state.write() = state;
        *portal.journal.lock() = Some(journal);
        Ok(portal)
    }

    /// Replaces the wall clock, for reproducible timestamps.
    pub fn with_clock(mut self, clock: impl Fn() -> DateTime<Utc> + Send + Sync + 'static) -> Self {
        self.clock = Box::new(clock);
        self
    }

    pub fn len(&self) -> usize {
        self.state.read().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn register_agent(&self, agent: Agent) -> Result<Outcome, PortalError> {
        let mut state = self.state.write();
        match state.agents.get(&agent.iri) {
            Some(existing) if *existing == agent => return Ok(Outcome::AlreadyStored),
            Some(_) => return Err(PortalError::AgentConflict(agent.iri)),
            None => {}
        }
        if let Some(j) = self.journal.lock().as_mut() {
            j.append(&Record::Agent(agent.clone()))?;
        }
        state.agents.insert(agent.iri.clone(), agent);
        Ok(Outcome::Created)
    }

    pub fn agent(&self, iri: &Iri) -> Option<Agent> {
        self.state.read().agents.get(iri).cloned()
    }

    pub fn agents(&self) -> Vec<Agent> {
        self.state.read().agents.values().cloned().collect()
    }

    pub fn store_publish(&self, np: Nanopublication) -> Result<(Receipt, Outcome), PortalError> {
        let violations = np.validate_structure();
        if !violations.is_empty() {
            return Err(PortalError::StructureInvalid(violations));
        }
        let mut state = self.state.write();
        if let Some(&i) = state.by_uri.get(np.uri()) {
            let e = &state.entries[i];
            if e.np != np {
                return Err(PortalError::ConflictingContentForUri(np.uri().clone()));
            }
            return Ok((Receipt { uri: np.uri().clone(), stored_at: e.stored_at }, Outcome::AlreadyStored));
        }
        let stored_at = (self.clock)();
        if let Some(j) = self.journal.lock().as_mut() {
            j.append(&Record::Nanopub { stored_at, trig: serialize_trig(&np) })?;
        }
        let receipt = Receipt { uri: np.uri().clone(), stored_at };
        state.index(np, stored_at);
        Ok((receipt, Outcome::Created))
    }

    pub fn nanopub(&self, uri: &Iri) -> Option<Nanopublication> {
        let state = self.state.read();
        state.by_uri.get(uri).map(|&i| state.entries[i].np.clone())
    }

    pub fn receipt(&self, uri: &Iri) -> Option<Receipt> {
        let state = self.state.read();
        state.by_uri.get(uri).map(|&i| Receipt { uri: uri.clone(), stored_at: state.entries[i].stored_at })
    }

    /// Nanopublications attributed to an agent, in publication order.
    pub fn by_agent(&self, agent: &Iri) -> Vec<Iri> {
        let state = self.state.read();
        state.by_agent.get(agent).into_iter().flatten().map(|&i| state.entries[i].np.uri().clone()).collect()
    }

    /// Every asserted sentence, sorted by URI.
    pub fn sentences(&self) -> Vec<AidaUri> {
        self.state.read().by_sentence.keys().cloned().collect()
    }

    pub fn get_statement(&self, uri: &str) -> Result<StatementView, PortalError> {
        let uri = AidaUri::parse(uri).map_err(|e| PortalError::MalformedUri(format!("{uri}: {e}")))?;
        Ok(self.statement(&uri))
    }

    pub fn statement(&self, uri: &AidaUri) -> StatementView {
        self.state.read().view(uri)
    }

    fn require_agent(&self, agent: &Iri) -> Result<(), PortalError> {
        if self.state.read().agents.contains_key(agent) {
            Ok(())
        } else {
            Err(PortalError::UnknownAgent(agent.clone()))
        }
    }

    fn meta_provenance(&self, agent: &Iri) -> Provenance {
        Provenance::new(agent.clone(), (self.clock)(), Channel::MetaUser)
    }

    pub fn post_opinion(&self, agent: &Iri, statement: &AidaUri, kind: OpinionKind) -> Result<Opinion, PortalError> {
        self.require_agent(agent)?;
        let prov = self.meta_provenance(agent);
        let triple = Triple::iri(agent, &kind.predicate(), Iri::from(statement));
        let np = build_plain_nanopub(&[triple], &prov, "");
        let (receipt, _) = self.store_publish(np)?;
        Ok(Opinion {
            agent: agent.clone(),
            statement: statement.clone(),
            kind,
            nanopub_uri: receipt.uri,
            at: prov.generated_at,
        })
    }

    pub fn link_statements(
        &self,
        agent: &Iri,
        a: &AidaUri,
        b: &AidaUri,
        relation: RelationKind,
    ) -> Result<(Receipt, Outcome), PortalError> {
        if a == b {
            return Err(PortalError::SelfLink(a.clone()));
        }
        self.require_agent(agent)?;
        let prov = self.meta_provenance(agent);
        let triple = Triple::iri(&Iri::from(a), &relation.predicate(), Iri::from(b));
        self.store_publish(build_plain_nanopub(&[triple], &prov, ""))
    }

    fn search_index(&self) -> Arc<SearchIndex> {
        let (generation, sentences) = {
            let state = self.state.read();
            (state.sentence_generation, state.by_sentence.keys().cloned().collect::<Vec<_>>())
        };
        let mut cache = self.search.lock();
        if let Some(idx) = cache.as_ref().filter(|i| i.generation == generation) {
            return idx.clone();
        }
        let texts: Vec<AidaSentence> = sentences.iter().map(AidaUri::sentence).collect();
        let model = TfIdfModel::fit_sentences(&texts).ok();
        let vectors = match &model {
            Some(m) => texts.iter().map(|s| m.transform(s)).collect(),
            None => Vec::new(),
        };
        let idx = Arc::new(SearchIndex { generation, model, vectors });
        *cache = Some(idx.clone());
        idx
    }

    /// Stored sentences ranked by tf-idf cosine similarity to `query`.
    pub fn search_sentences(&self, query: &str, limit: usize) -> Vec<SearchHit> {
        let tokens = tokenize(query);
        if tokens.is_empty() || limit == 0 {
            return Vec::new();
        }
        let idx = self.search_index();
        let Some(model) = &idx.model else { return Vec::new() };
        let q = model.weigh_counts(&counts(&tokens));
        let q_norm = q.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        let q: Vec<(u32, f64)> = q.into_iter().map(|(id, w)| (id, w / q_norm)).collect();
        let mut hits: Vec<SearchHit> = idx
            .vectors
            .iter()
            .filter_map(|v| {
                let score = if v.weights == q { 1.0 } else { aidapub_core::clustering::dot(&q, &v.weights) / v.norm };
                (score > 0.0).then(|| SearchHit {
                    uri: v.sentence_uri.clone(),
                    sentence: v.sentence_uri.sentence(),
                    score: score.min(1.0),
                })
            })
            .collect();
        hits.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.uri.cmp(&b.uri)));
        hits.truncate(limit);
        hits
    }
}
