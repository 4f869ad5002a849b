//! Sentence similarity clustering.
//!
//! Every sentence X gets a local environment U_X (its nearest neighbors and
//! their nearest neighbors). U_X is partitioned with k-means several times,
//! always seeded at X, and the points that share X's cluster in enough runs
//! form C_X. When the median distance from X to C_X is above the threshold,
//! X is an isolate.

mod kmeans;
pub mod synthetic;
mod tfidf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::aida::{AidaSentence, AidaUri, SentenceError};
use crate::nanopub::{build_plain_nanopub, vocab, Iri, Nanopublication, Provenance, Triple};

pub use kmeans::{kmeans, kmeans_from, KMeansRun, MAX_ITERATIONS};
pub use tfidf::{cosine_distance, cosine_similarity, counts, dot, tokenize, SentenceVector, TfIdfModel};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClusterError {
    #[error("the corpus is empty")]
    EmptyCorpus,
    #[error("corpus of {size} sentences is too small for n1 = {n1}")]
    CorpusTooSmall { size: usize, n1: usize },
    #[error("invalid clustering parameters: {0}")]
    InvalidParams(String),
    #[error("no sentence at index {0}")]
    NoSuchPoint(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterParams {
    /// First-level nearest neighbors.
    pub n1: usize,
    /// Nearest neighbors taken for each first-level neighbor.
    pub n2: usize,
    pub k: usize,
    pub repetitions: usize,
    /// Median-distance cutoff for isolates.
    pub tau: f64,
    /// Fraction of runs in which a point must share X's cluster.
    pub quorum: f64,
    pub seed: u64,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams { n1: 20, n2: 10, k: 3, repetitions: 10, tau: 0.65, quorum: 0.5, seed: 42 }
    }
}

impl ClusterParams {
    pub fn check(&self) -> Result<(), ClusterError> {
        let bad = |m: &str| Err(ClusterError::InvalidParams(m.into()));
        if self.k == 0 {
            return bad("k must be at least 1");
        }
        if self.n1 < self.k {
            return bad("n1 must be at least k");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1");
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad("tau must be positive");
        }
        if !(self.quorum > 0.0 && self.quorum <= 1.0) {
            return bad("quorum must be in (0, 1]");
        }
        Ok(())
    }

    /// Canonical `key=value` form, used in provenance.
    pub fn canonical(&self) -> String {
        format!(
            "k={};n1={};n2={};quorum={};reps={};seed={};tau={}",
            self.k, self.n1, self.n2, self.quorum, self.repetitions, self.seed, self.tau
        )
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    fn votes_needed(&self) -> usize {
        ((self.quorum * self.repetitions as f64) - 1e-9).ceil().max(1.0) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Corpus index of the base point X.
    pub base: usize,
    pub base_uri: AidaUri,
    /// Corpus indices of C_X, X included; empty for isolates.
    pub members: Vec<usize>,
    /// Median cosine distance from X to the other members.
    pub median_distance: f64,
    pub is_isolate: bool,
}

impl Cluster {
    pub fn member_uris<'a>(&'a self, corpus: &'a [SentenceVector]) -> impl Iterator<Item = &'a AidaUri> + 'a {
        self.members.iter().map(move |&i| &corpus[i].sentence_uri)
    }
}

/// The distinct sentences asserted by `nanopubs`, in order of first appearance.
pub fn corpus_from_nanopubs(nanopubs: &[Nanopublication]) -> Vec<AidaSentence> {
    let mut seen = BTreeSet::new();
    nanopubs.iter().filter_map(Nanopublication::aida_sentence).filter(|u| seen.insert(u.clone())).map(|u| u.sentence()).collect()
}

/// One sentence per non-blank line, deduplicated in order of first
/// appearance. Fails with the 1-based line number of the first invalid line.
pub fn corpus_from_lines(text: &str) -> Result<Vec<AidaSentence>, (usize, SentenceError)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let s = AidaSentence::new(line).map_err(|e| (i + 1, e))?;
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Fits a model on `sentences` and vectorizes them in order.
pub fn vectorize(sentences: &[AidaSentence]) -> Result<(TfIdfModel, Vec<SentenceVector>), ClusterError> {
    let model = TfIdfModel::fit(sentences)?;
    let vectors = sentences.iter().map(|s| model.transform(s)).collect();
    Ok((model, vectors))
}

/// The `n` points nearest to `x`, nearest first. Ties go to the smaller
/// sentence URI, then to the earlier position.
pub fn nearest_neighbors(x: usize, corpus: &[SentenceVector], n: usize) -> Vec<usize> {
    let mut others: Vec<(f64, usize)> = (0..corpus.len())
        .filter(|&i| i != x)
        .map(|i| (cosine_distance(&corpus[x], &corpus[i]), i))
        .collect();
    let order = |a: &(f64, usize), b: &(f64, usize)| {
        a.0.total_cmp(&b.0)
            .then_with(|| corpus[a.1].sentence_uri.cmp(&corpus[b.1].sentence_uri))
            .then(a.1.cmp(&b.1))
    };
    if n < others.len() {
        others.select_nth_unstable_by(n, order);
        others.truncate(n);
    }
    others.sort_by(order);
    others.into_iter().map(|(_, i)| i).collect()
}

fn check_corpus(corpus: &[SentenceVector], params: &ClusterParams) -> Result<(), ClusterError> {
    params.check()?;
    if corpus.is_empty() {
        return Err(ClusterError::EmptyCorpus);
    }
    if corpus.len() <= params.n1 {
        return Err(ClusterError::CorpusTooSmall { size: corpus.len(), n1: params.n1 });
    }
    Ok(())
}

/// U_X: X, its `n1` nearest neighbors and the `n2` nearest neighbors of
/// each of those. Sorted by corpus index.
pub fn local_environment(x: usize, corpus: &[SentenceVector], params: &ClusterParams) -> Result<Vec<usize>, ClusterError> {
    check_corpus(corpus, params)?;
    if x >= corpus.len() {
        return Err(ClusterError::NoSuchPoint(x));
    }
    Ok(environment(x, params, &|i, n| nearest_neighbors(i, corpus, n)))
}

fn environment(x: usize, params: &ClusterParams, knn: &dyn Fn(usize, usize) -> Vec<usize>) -> Vec<usize> {
    let mut env = BTreeSet::from([x]);
    for y in knn(x, params.n1) {
        env.insert(y);
        if params.n2 > 0 {
            env.extend(knn(y, params.n2));
        }
    }
    env.into_iter().collect()
}

/// Dense copies of the environment's vectors over the terms they use.
fn densify(env: &[usize], corpus: &[SentenceVector]) -> Vec<Vec<f64>> {
    let terms: BTreeSet<u32> = env.iter().flat_map(|&i| corpus[i].weights.iter().map(|&(t, _)| t)).collect();
    let column: BTreeMap<u32, usize> = terms.iter().enumerate().map(|(c, &t)| (t, c)).collect();
    env.iter()
        .map(|&i| {
            let v = &corpus[i];
            let mut row = vec![0.0; column.len()];
            for &(t, w) in &v.weights {
                row[column[&t]] = if v.norm > 0.0 { w / v.norm } else { 0.0 };
            }
            row
        })
        .collect()
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn point_rng(params: &ClusterParams, x: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(x as u64);
    rng
}

fn cluster_in(x: usize, env: &[usize], corpus: &[SentenceVector], params: &ClusterParams) -> Cluster {
    let points = densify(env, corpus);
    let pos = env.binary_search(&x).expect("X is in its own environment");
    let mut rng = point_rng(params, x);
    let mut votes = vec![0usize; env.len()];
    for _ in 0..params.repetitions {
        let run = kmeans_from(&points, params.k, pos, &mut rng);
        let own = run.assignment[pos];
        for (v, &a) in votes.iter_mut().zip(&run.assignment) {
            if a == own {
                *v += 1;
            }
        }
    }
    let need = params.votes_needed();
    let members: Vec<usize> =
        env.iter().zip(&votes).filter(|&(&i, &v)| i == x || v >= need).map(|(&i, _)| i).collect();
    let others: Vec<f64> =
        members.iter().filter(|&&i| i != x).map(|&i| cosine_distance(&corpus[x], &corpus[i])).collect();
    let singleton = others.is_empty();
    let median_distance = if singleton { 0.0 } else { median(others) };
    let is_isolate = singleton || median_distance > params.tau;
    Cluster {
        base: x,
        base_uri: corpus[x].sentence_uri.clone(),
        members: if is_isolate { Vec::new() } else { members },
        median_distance,
        is_isolate,
    }
}

/// Finds C_X for the sentence at index `x`.
pub fn cluster_point(x: usize, corpus: &[SentenceVector], params: &ClusterParams) -> Result<Cluster, ClusterError> {
    let env = local_environment(x, corpus, params)?;
    Ok(cluster_in(x, &env, corpus, params))
}

/// An unordered candidate pair for `npx:hasRelatedMeaning`, smaller URI first.
pub type CandidatePair = (AidaUri, AidaUri);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    /// One cluster per corpus sentence, in corpus order.
    pub clusters: Vec<Cluster>,
    /// Base-member pairs of non-isolate clusters, sorted and deduplicated.
    pub pairs: Vec<CandidatePair>,
}

pub fn cluster_corpus(corpus: &[SentenceVector], params: &ClusterParams) -> Result<Clustering, ClusterError> {
    check_corpus(corpus, params)?;
    let reach = params.n1.max(params.n2);
    let indices: Vec<usize> = (0..corpus.len()).collect();
    let knn_all: Vec<Vec<usize>> = map(&indices, |&i| nearest_neighbors(i, corpus, reach));
    let knn = |i: usize, n: usize| knn_all[i][..n.min(knn_all[i].len())].to_vec();
    let clusters = map(&indices, |&x| cluster_in(x, &environment(x, params, &knn), corpus, params));
    let mut pairs = BTreeSet::new();
    for c in clusters.iter().filter(|c| !c.is_isolate) {
        for &m in &c.members {
            let (a, b) = (&c.base_uri, &corpus[m].sentence_uri);
            if a != b {
                pairs.insert(if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) });
            }
        }
    }
    Ok(Clustering { clusters, pairs: pairs.into_iter().collect() })
}

#[cfg(feature = "parallel")]
fn map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

/// One meta-nanopublication per pair asserting `(a, npx:hasRelatedMeaning, b)`.
/// The provenance carries the parameters and their digest.
pub fn emit_relation_nanopubs(pairs: &[CandidatePair], prov_template: &Provenance, params: &ClusterParams) -> Vec<Nanopublication> {
    let mut prov = prov_template.clone();
    prov.parameters = Some(format!("{} sha256:{}", params.canonical(), params.digest()));
    pairs
        .iter()
        .map(|(a, b)| {
            let triple = Triple::iri(&Iri::from(a), &vocab::has_related_meaning(), Iri::from(b));
            build_plain_nanopub(&[triple], &prov, "")
        })
        .collect()
}

/// CSV with one row per cluster member: `base_uri,member_uri,d_x,isolate`.
/// Isolates get a single row with an empty member.
pub fn clusters_csv(clustering: &Clustering, corpus: &[SentenceVector]) -> String {
    let mut out = String::from("base_uri,member_uri,d_x,isolate\n");
    for c in &clustering.clusters {
        let base = csv_field(c.base_uri.as_str());
        if c.is_isolate {
            let _ = writeln!(out, "{base},,{:.6},true", c.median_distance);
        }
        for m in c.member_uris(corpus) {
            let _ = writeln!(out, "{base},{},{:.6},false", csv_field(m.as_str()), c.median_distance);
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Ground-truth quality of a clustering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    /// Mean share of same-group points among the other members of each
    /// non-isolate cluster.
    pub purity: f64,
    /// Share of sentences paired with at least one sentence of their group.
    pub connectivity: f64,
}

pub fn recovery(clustering: &Clustering, corpus: &[SentenceVector], labels: &[usize]) -> Recovery {
    let mut shares = Vec::new();
    for c in clustering.clusters.iter().filter(|c| !c.is_isolate) {
        let others: Vec<usize> = c.members.iter().copied().filter(|&m| m != c.base).collect();
        let same = others.iter().filter(|&&m| labels[m] == labels[c.base]).count();
        shares.push(same as f64 / others.len() as f64);
    }
    let purity = if shares.is_empty() { 0.0 } else { shares.iter().sum::<f64>() / shares.len() as f64 };
    let label_of: BTreeMap<&AidaUri, usize> = corpus.iter().zip(labels).map(|(v, &l)| (&v.sentence_uri, l)).collect();
    let mut connected = BTreeSet::new();
    for (a, b) in &clustering.pairs {
        if label_of[a] == label_of[b] {
            connected.insert(a);
            connected.insert(b);
        }
    }
    let hits = corpus.iter().filter(|v| connected.contains(&v.sentence_uri)).count();
    Recovery { purity, connectivity: hits as f64 / corpus.len().max(1) as f64 }
}
