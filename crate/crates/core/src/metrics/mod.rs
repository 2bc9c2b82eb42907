//! Retrieval metrics, extraction metrics, and paired significance testing.

mod extraction;
mod rank;
pub mod trec;
mod ttest;

pub use extraction::{
    atci, cprf, cprf_with_partial_weight, extraction_pr, extraction_report, precision_bucket,
    sentence_precision, ExtractionReport, PrecisionBucket, DEFAULT_PARTIAL_WEIGHT,
};
pub use rank::{
    average_precision, evaluate_run, ndcg_at_k, precision_at_k, reciprocal_rank, MetricCutoffs,
    RetrievalReport,
};
pub use ttest::{paired_ttest, PairedTTest};

use std::collections::BTreeMap;

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Graded relevance judgments keyed by (topic-facet id, doc id).
///
/// Grades are signed: TREC Web Track data uses negative grades for spam.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    judgments: BTreeMap<String, BTreeMap<String, i32>>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one judgment; at most one grade per (topic, doc) pair.
    /// Returns false (leaving the first grade in place) on a duplicate.
    pub fn insert(&mut self, topic: &str, doc_id: &str, grade: i32) -> bool {
        let by_doc = self.judgments.entry(topic.to_string()).or_default();
        if by_doc.contains_key(doc_id) {
            return false;
        }
        by_doc.insert(doc_id.to_string(), grade);
        true
    }

    pub fn from_triples<'a, I>(triples: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str, i32)>,
    {
        let mut qrels = Qrels::new();
        for (topic, doc, grade) in triples {
            qrels.insert(topic, doc, grade);
        }
        qrels
    }

    pub fn grade(&self, topic: &str, doc_id: &str) -> Option<i32> {
        self.judgments.get(topic)?.get(doc_id).copied()
    }

    /// All judged (doc, grade) pairs for a topic.
    pub fn judged(&self, topic: &str) -> impl Iterator<Item = (&str, i32)> {
        self.judgments
            .get(topic)
            .into_iter()
            .flat_map(|m| m.iter().map(|(d, &g)| (d.as_str(), g)))
    }

    pub fn has_topic(&self, topic: &str) -> bool {
        self.judgments.contains_key(topic)
    }

    /// Number of docs with grade > 0 for the topic.
    pub fn relevant_count(&self, topic: &str) -> usize {
        self.judged(topic).filter(|&(_, g)| g > 0).count()
    }

    pub fn topics(&self) -> impl Iterator<Item = &str> {
        self.judgments.keys().map(|s| s.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.judgments.is_empty()
    }
}

/// Binary keyword labels aligned 1:1 with a sentence's tokens.
///
/// Serializes as an array of 0/1 integers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSequence(Vec<bool>);

impl LabelSequence {
    pub fn new(labels: Vec<bool>) -> Self {
        LabelSequence(labels)
    }

    pub fn zeros(len: usize) -> Self {
        LabelSequence(vec![false; len])
    }

    /// Builds a sequence of `len` labels with 1s at `positions`.
    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut labels = vec![false; len];
        for p in positions {
            labels[p] = true;
        }
        LabelSequence(labels)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    /// Positions labeled 1.
    pub fn positive_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| l.then_some(i))
    }

    pub fn count_positive(&self) -> usize {
        self.0.iter().filter(|&&l| l).count()
    }
}

impl FromIterator<bool> for LabelSequence {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        LabelSequence(iter.into_iter().collect())
    }
}

impl Serialize for LabelSequence {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for &label in &self.0 {
            seq.serialize_element(&u8::from(label))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LabelSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LabelVisitor;

        impl<'de> Visitor<'de> for LabelVisitor {
            type Value = LabelSequence;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an array of 0/1 labels")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut labels = Vec::with_capacity(seq.size_hint().unwrap_or(0));
                while let Some(value) = seq.next_element::<u8>()? {
                    match value {
                        0 => labels.push(false),
                        1 => labels.push(true),
                        other => {
                            return Err(serde::de::Error::custom(format!(
                                "label must be 0 or 1, got {other}"
                            )))
                        }
                    }
                }
                Ok(LabelSequence(labels))
            }
        }

        deserializer.deserialize_seq(LabelVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qrels_keeps_first_grade_on_duplicate() {
        let mut qrels = Qrels::new();
        assert!(qrels.insert("t1", "d1", 2));
        assert!(!qrels.insert("t1", "d1", 0));
        assert_eq!(qrels.grade("t1", "d1"), Some(2));
    }

    #[test]
    fn qrels_accepts_negative_grades() {
        let qrels = Qrels::from_triples([("t1", "d1", -2), ("t1", "d2", 1)]);
        assert_eq!(qrels.grade("t1", "d1"), Some(-2));
        assert_eq!(qrels.relevant_count("t1"), 1);
    }

    #[test]
    fn label_sequence_serializes_as_ints() {
        let labels = LabelSequence::new(vec![true, false, true]);
        assert_eq!(serde_json::to_string(&labels).unwrap(), "[1,0,1]");
        let back: LabelSequence = serde_json::from_str("[1,0,1]").unwrap();
        assert_eq!(back, labels);
        assert!(serde_json::from_str::<LabelSequence>("[1,2,0]").is_err());
    }

    #[test]
    fn positive_positions_and_from_positions_agree() {
        let labels = LabelSequence::from_positions(6, [0, 2, 5]);
        assert_eq!(labels.positive_positions().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(labels.count_positive(), 3);
    }
}
