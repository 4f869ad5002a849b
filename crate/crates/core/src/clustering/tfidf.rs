use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ClusterError;
use crate::aida::{AidaSentence, AidaUri};

/// Splits text into lowercase word tokens.
///
/// Letters and digits form tokens. A hyphen joins two tokens ("x-linked"),
/// and `.` or `,` between digits stays inside a number ("1.5", "10,000").
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| chars[j]);
        let next = chars.get(i + 1).copied();
        let joins = match c {
            '-' => prev.is_some_and(char::is_alphanumeric) && next.is_some_and(char::is_alphanumeric),
            '.' | ',' => prev.is_some_and(|p| p.is_ascii_digit()) && next.is_some_and(|n| n.is_ascii_digit()),
            _ => false,
        };
        if c.is_alphanumeric() || (joins && !cur.is_empty()) {
            cur.extend(c.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Vocabulary and document frequencies of a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfIdfModel {
    vocabulary: BTreeMap<String, u32>,
    df: Vec<u32>,
    n: usize,
}

/// Term ids at or above this value are hashed out-of-vocabulary terms.
const OOV_BASE: u32 = 1 << 31;

impl TfIdfModel {
    pub fn fit<S: AsRef<str>>(corpus: &[S]) -> Result<Self, ClusterError> {
        if corpus.is_empty() {
            return Err(ClusterError::EmptyCorpus);
        }
        let mut df_by_term: BTreeMap<String, u32> = BTreeMap::new();
        for doc in corpus {
            let mut tokens = tokenize(doc.as_ref());
            tokens.sort();
            tokens.dedup();
            for t in tokens {
                *df_by_term.entry(t).or_default() += 1;
            }
        }
        let vocabulary = df_by_term.keys().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        let df = df_by_term.into_values().collect();
        Ok(TfIdfModel { vocabulary, df, n: corpus.len() })
    }

    pub fn fit_sentences(corpus: &[AidaSentence]) -> Result<Self, ClusterError> {
        Self::fit(corpus)
    }

    pub fn corpus_size(&self) -> usize {
        self.n
    }

    pub fn vocabulary_len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn term_id(&self, term: &str) -> Option<u32> {
        self.vocabulary.get(term).copied()
    }

    pub fn df(&self, term: &str) -> u32 {
        self.term_id(term).map_or(0, |id| self.df[id as usize])
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.vocabulary.keys().map(String::as_str)
    }

    /// Smoothed inverse document frequency, `ln((1+N)/(1+df)) + 1`.
    pub fn idf(&self, term: &str) -> f64 {
        ((1.0 + self.n as f64) / (1.0 + self.df(term) as f64)).ln() + 1.0
    }

    /// Raw tf-idf weights (not normalized) for a bag of term counts.
    pub fn weigh_counts(&self, counts: &BTreeMap<String, u32>) -> Vec<(u32, f64)> {
        let mut out: Vec<(u32, f64)> = counts
            .iter()
            .filter(|(_, &tf)| tf > 0)
            .map(|(term, &tf)| {
                let id = self.term_id(term).unwrap_or_else(|| oov_id(term));
                (id, tf as f64 * self.idf(term))
            })
            .collect();
        out.sort_by_key(|&(id, _)| id);
        out
    }

    /// L2-normalized tf-idf weights of a text.
    pub fn weights(&self, text: &str) -> Vec<(u32, f64)> {
        normalize(self.weigh_counts(&counts(&tokenize(text))))
    }

    pub fn transform(&self, sentence: &AidaSentence) -> SentenceVector {
        SentenceVector::from_weights(sentence.to_uri(), self.weights(sentence.as_str()))
    }

    pub fn transform_counts(&self, uri: AidaUri, counts: &BTreeMap<String, u32>) -> SentenceVector {
        SentenceVector::from_weights(uri, normalize(self.weigh_counts(counts)))
    }
}

pub fn counts(tokens: &[String]) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    for t in tokens {
        *out.entry(t.clone()).or_default() += 1;
    }
    out
}

/// FNV-1a, so that the same unseen word gets the same id everywhere.
fn oov_id(term: &str) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for b in term.bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    OOV_BASE | (h & (OOV_BASE - 1))
}

fn normalize(mut weights: Vec<(u32, f64)>) -> Vec<(u32, f64)> {
    let norm = l2(&weights);
    if norm > 0.0 {
        for (_, w) in &mut weights {
            *w /= norm;
        }
    }
    weights
}

fn l2(weights: &[(u32, f64)]) -> f64 {
    weights.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
}

/// A sentence in tf-idf space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceVector {
    pub sentence_uri: AidaUri,
    /// Sorted by term id.
    pub weights: Vec<(u32, f64)>,
    pub norm: f64,
}

impl SentenceVector {
    pub fn from_weights(sentence_uri: AidaUri, mut weights: Vec<(u32, f64)>) -> Self {
        weights.sort_by_key(|&(id, _)| id);
        let norm = l2(&weights);
        SentenceVector { sentence_uri, weights, norm }
    }

    pub fn is_zero(&self) -> bool {
        self.norm == 0.0
    }
}

pub fn dot(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut i, mut j, mut sum) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                sum += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

pub fn cosine_similarity(a: &SentenceVector, b: &SentenceVector) -> f64 {
    if a.is_zero() || b.is_zero() {
        return if a.is_zero() && b.is_zero() { 1.0 } else { 0.0 };
    }
    if a.weights == b.weights {
        return 1.0;
    }
    (dot(&a.weights, &b.weights) / (a.norm * b.norm)).clamp(-1.0, 1.0)
}

/// `1 - cos`, in `[0, 1]` for tf-idf vectors. Two zero vectors are at distance 0.
pub fn cosine_distance(a: &SentenceVector, b: &SentenceVector) -> f64 {
    (1.0 - cosine_similarity(a, b)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> AidaSentence {
        AidaSentence::new(text).unwrap()
    }

    #[test]
    fn tokens() {
        assert_eq!(tokenize("Malaria is transmitted by mosquitoes."), ["malaria", "is", "transmitted", "by", "mosquitoes"]);
        assert_eq!(tokenize("X-linked gene A2 binds DNA."), ["x-linked", "gene", "a2", "binds", "dna"]);
        assert_eq!(tokenize("A."), ["a"]);
        assert_eq!(tokenize("IL-6 rises 1.5-fold in 10,000 (adult) mice, not -5."), [
            "il-6", "rises", "1.5-fold", "in", "10,000", "adult", "mice", "not", "5"
        ]);
        assert_eq!(tokenize("Über-expression of ΑΒΓ."), ["über-expression", "of", "αβγ"]);
    }

    #[test]
    fn single_sentence_model() {
        let m = TfIdfModel::fit(&["Insulin binds the insulin receptor."]).unwrap();
        assert_eq!(m.corpus_size(), 1);
        assert!(m.terms().all(|t| m.df(t) == 1));
        assert_eq!(m.vocabulary_len(), 4);
        assert!(matches!(TfIdfModel::fit::<&str>(&[]), Err(ClusterError::EmptyCorpus)));
    }

    #[test]
    fn weight_formula_by_hand() {
        let m = TfIdfModel::fit(&["rare rare common.", "common other.", "common thing."]).unwrap();
        let raw = m.weigh_counts(&counts(&tokenize("rare rare common.")));
        let rare = raw.iter().find(|(id, _)| *id == m.term_id("rare").unwrap()).unwrap().1;
        assert!((rare - 2.0 * (2.0f64.ln() + 1.0)).abs() < 1e-12);
        let common = raw.iter().find(|(id, _)| *id == m.term_id("common").unwrap()).unwrap().1;
        assert!((common - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distances() {
        let m = TfIdfModel::fit(&["Malaria is transmitted by mosquitoes.", "Insulin lowers glucose."]).unwrap();
        let a = m.transform(&s("Malaria is transmitted by mosquitoes."));
        let b = m.transform(&s("Insulin lowers glucose."));
        assert!((a.norm - 1.0).abs() < 1e-9);
        assert_eq!(cosine_distance(&a, &a.clone()), 0.0);
        assert_eq!(cosine_distance(&a, &b), 1.0);
    }

    #[test]
    fn unseen_words_keep_their_weight() {
        let m = TfIdfModel::fit(&["Malaria is transmitted by mosquitoes."]).unwrap();
        let w = m.weights("Malaria spreads.");
        assert_eq!(w.len(), 2);
        assert!(w.iter().any(|&(id, _)| id >= OOV_BASE));
        assert_eq!(m.weights("Cholera spreads."), m.weights("cholera spreads"));
    }
}
