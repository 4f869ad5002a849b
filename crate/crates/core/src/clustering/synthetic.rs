//! Generated corpora with known groups.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::aida::AidaSentence;

/// Interchangeable phrasings of one claim: subject, predicate, object and
/// an optional qualifier. Topics share some everyday words on purpose.
struct Topic {
    subjects: &'static [&'static str],
    predicates: &'static [&'static str],
    objects: &'static [&'static str],
    qualifiers: &'static [&'static str],
}

const TOPICS: &[Topic] = &[
    Topic {
        subjects: &["Malaria", "Human malaria", "Plasmodium malaria"],
        predicates: &["is transmitted by", "is spread by", "is carried by"],
        objects: &["Anopheles mosquitoes", "infected Anopheles mosquitoes", "bites of Anopheles mosquitoes"],
        qualifiers: &["", "in tropical regions", "in endemic areas", "to humans"],
    },
    Topic {
        subjects: &["Insulin", "Insulin signaling", "Insulin secretion"],
        predicates: &["lowers", "reduces", "decreases"],
        objects: &["blood glucose levels", "plasma glucose levels", "the glucose concentration in blood"],
        qualifiers: &["", "in diabetic patients", "after meals", "in patients"],
    },
    Topic {
        subjects: &["The p53 protein", "Tumor suppressor p53", "Activated p53"],
        predicates: &["induces", "triggers", "promotes"],
        objects: &["apoptosis of damaged cells", "apoptosis after DNA damage", "apoptotic cell death"],
        qualifiers: &["", "in tumor cells", "in cancer cells", "in cells"],
    },
    Topic {
        subjects: &["Statins", "Statin therapy", "Statin treatment"],
        predicates: &["lower", "reduce", "decrease"],
        objects: &["LDL cholesterol", "serum LDL cholesterol levels", "LDL cholesterol concentrations"],
        qualifiers: &["", "in adults", "in hypercholesterolemic patients", "in patients"],
    },
    Topic {
        subjects: &["The APOE4 allele", "APOE epsilon4", "Apolipoprotein E4"],
        predicates: &["increases", "raises", "elevates"],
        objects: &["the risk of Alzheimer disease", "Alzheimer disease risk", "susceptibility to Alzheimer disease"],
        qualifiers: &["", "in carriers", "in elderly people", "in patients"],
    },
    Topic {
        subjects: &["Aspirin", "Low dose aspirin", "Daily aspirin"],
        predicates: &["inhibits", "blocks", "suppresses"],
        objects: &["platelet aggregation", "aggregation of platelets", "platelet activation and aggregation"],
        qualifiers: &["", "in healthy volunteers", "in blood", "in patients"],
    },
    Topic {
        subjects: &["Smoking", "Cigarette smoking", "Tobacco smoking"],
        predicates: &["causes", "increases", "raises"],
        objects: &["lung cancer risk", "the risk of lung cancer", "lung carcinoma incidence"],
        qualifiers: &["", "in adults", "in heavy smokers", "in men"],
    },
    Topic {
        subjects: &["Vitamin D", "Vitamin D supplementation", "Dietary vitamin D"],
        predicates: &["improves", "increases", "enhances"],
        objects: &["intestinal calcium absorption", "calcium absorption in the gut", "absorption of dietary calcium"],
        qualifiers: &["", "in children", "in older adults", "in women"],
    },
];

/// Number of distinct planted groups available.
pub const MAX_GROUPS: usize = TOPICS.len();

/// `groups` planted paraphrase groups of `per_group` distinct sentences each,
/// shuffled. Returns each sentence with its group label.
pub fn planted_corpus(groups: usize, per_group: usize, seed: u64) -> Vec<(AidaSentence, usize)> {
    assert!(groups <= MAX_GROUPS, "at most {MAX_GROUPS} groups");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(groups * per_group);
    for (label, t) in TOPICS.iter().take(groups).enumerate() {
        let mut all = Vec::new();
        for s in t.subjects {
            for p in t.predicates {
                for o in t.objects {
                    for q in t.qualifiers {
                        let tail = if q.is_empty() { String::new() } else { format!(" {q}") };
                        all.push(format!("{s} {p} {o}{tail}."));
                    }
                }
            }
        }
        assert!(per_group <= all.len(), "a topic has {} phrasings", all.len());
        all.shuffle(&mut rng);
        out.extend(all.into_iter().take(per_group).map(|s| (AidaSentence::new(&s).expect("valid sentence"), label)));
    }
    out.shuffle(&mut rng);
    out
}

/// Sentences written for one rewriting task about hepatic reticuloendothelial
/// function, including two phrasings that share little surface form.
pub const SBP_GROUP: [&str; 4] = [
    "The hepatic reticuloendothelial function is impaired in cirrhotic patients.",
    "The degree of hepatic reticuloendothelial function impairment does not differ between cirrhotic patients with and without previous history of SBP.",
    "Hepatic reticuloendothelial function is impaired to the same degree in cirrhotic patients with or without a previous history of SBP.",
    "History of spontaneous bacterial peritonitis does not affect impairment of hepatic reticuloendothelial function in cirrhotic patients.",
];

/// The planted corpus (5 groups of 10, seed 42) followed by [`SBP_GROUP`]
/// as group 5.
pub fn paraphrase_corpus() -> Vec<(AidaSentence, usize)> {
    let mut out = planted_corpus(5, 10, 42);
    out.extend(SBP_GROUP.iter().map(|s| (AidaSentence::new(s).expect("valid sentence"), 5)));
    out
}

/// `n` sentences with no word in common.
pub fn orthogonal_corpus(n: usize) -> Vec<AidaSentence> {
    (0..n)
        .map(|i| AidaSentence::new(&format!("Alpha{i} binds{i} beta{i}.")).expect("valid sentence"))
        .collect()
}

pub fn duplicate_corpus(n: usize) -> Vec<AidaSentence> {
    vec![AidaSentence::new("Malaria is transmitted by mosquitoes.").expect("valid sentence"); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn planted_groups_are_distinct_and_deterministic() {
        let c = planted_corpus(5, 10, 42);
        assert_eq!(c.len(), 50);
        let texts: BTreeSet<&str> = c.iter().map(|(s, _)| s.as_str()).collect();
        assert_eq!(texts.len(), 50);
        for g in 0..5 {
            assert_eq!(c.iter().filter(|(_, l)| *l == g).count(), 10);
        }
        assert_eq!(c, planted_corpus(5, 10, 42));
        assert_ne!(c, planted_corpus(5, 10, 43));
    }

    #[test]
    fn paraphrase_corpus_ends_with_the_sbp_task() {
        let c = paraphrase_corpus();
        assert_eq!(c.len(), 54);
        assert!(c[50..].iter().all(|(_, l)| *l == 5));
    }
}
