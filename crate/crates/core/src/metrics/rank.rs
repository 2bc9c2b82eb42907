//! Ranked-retrieval metrics: nDCG@k, P@k, MRR, MAP.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::Qrels;
use crate::error::MetricsError;
use crate::retrieval::RankedList;
use crate::scalar::Scalar;

/// Gain of a judged grade: negative grades count as 0.
fn gain<S: Scalar>(grade: i32) -> S {
    let g = grade.max(0);
    (S::one() + S::one()).powi(g) - S::one()
}

/// Discount at 1-based rank i: 1 / log2(i + 1).
fn discount<S: Scalar>(rank: usize) -> S {
    S::one() / S::from_count(rank + 1).log2()
}

fn dcg<S: Scalar>(grades: impl Iterator<Item = i32>) -> S {
    grades
        .enumerate()
        .map(|(i, g)| gain::<S>(g) * discount::<S>(i + 1))
        .sum()
}

/// Normalized discounted cumulative gain at cutoff k. The ideal ordering
/// ranks all judged documents by grade; a topic with no positive judgments
/// scores 0.
pub fn ndcg_at_k<S: Scalar>(run: &RankedList<S>, qrels: &Qrels, topic: &str, k: usize) -> S {
    let mut ideal: Vec<i32> = qrels.judged(topic).map(|(_, g)| g.max(0)).collect();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg: S = dcg(ideal.into_iter().take(k));
    if idcg <= S::zero() {
        return S::zero();
    }
    let actual: S = dcg(run
        .entries()
        .iter()
        .take(k)
        .map(|e| qrels.grade(topic, &e.doc_id).unwrap_or(0)));
    actual / idcg
}

fn is_relevant(qrels: &Qrels, topic: &str, doc_id: &str) -> bool {
    qrels.grade(topic, doc_id).unwrap_or(0) > 0
}

/// Precision at k; the denominator is k even when fewer results exist.
pub fn precision_at_k<S: Scalar>(run: &RankedList<S>, qrels: &Qrels, topic: &str, k: usize) -> S {
    let hits = run
        .entries()
        .iter()
        .take(k)
        .filter(|e| is_relevant(qrels, topic, &e.doc_id))
        .count();
    S::from_count(hits) / S::from_count(k)
}

/// 1 / rank of the first relevant document; 0 if none is retrieved.
pub fn reciprocal_rank<S: Scalar>(run: &RankedList<S>, qrels: &Qrels, topic: &str) -> S {
    for (i, entry) in run.entries().iter().enumerate() {
        if is_relevant(qrels, topic, &entry.doc_id) {
            return S::one() / S::from_count(i + 1);
        }
    }
    S::zero()
}

/// Average precision over the full run, divided by the number of relevant
/// documents in the qrels for the topic.
pub fn average_precision<S: Scalar>(run: &RankedList<S>, qrels: &Qrels, topic: &str) -> S {
    let relevant_total = qrels.relevant_count(topic);
    if relevant_total == 0 {
        return S::zero();
    }
    let mut hits = 0usize;
    let mut sum = S::zero();
    for (i, entry) in run.entries().iter().enumerate() {
        if is_relevant(qrels, topic, &entry.doc_id) {
            hits += 1;
            sum += S::from_count(hits) / S::from_count(i + 1);
        }
    }
    sum / S::from_count(relevant_total)
}

/// Which cutoffs to evaluate. The defaults produce exactly the report keys
/// ndcg@3, ndcg@5, ndcg@20, p@3, p@5, mrr, map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricCutoffs {
    pub ndcg: Vec<usize>,
    pub precision: Vec<usize>,
}

impl Default for MetricCutoffs {
    fn default() -> Self {
        MetricCutoffs {
            ndcg: vec![3, 5, 20],
            precision: vec![3, 5],
        }
    }
}

impl MetricCutoffs {
    /// Metric key names in canonical report order.
    pub fn keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = self.ndcg.iter().map(|k| format!("ndcg@{k}")).collect();
        keys.extend(self.precision.iter().map(|k| format!("p@{k}")));
        keys.push("mrr".to_string());
        keys.push("map".to_string());
        keys
    }

    pub fn max_cutoff(&self) -> usize {
        self.ndcg
            .iter()
            .chain(self.precision.iter())
            .copied()
            .max()
            .unwrap_or(0)
    }

    fn evaluate<S: Scalar>(&self, run: &RankedList<S>, qrels: &Qrels, topic: &str) -> MetricRow<S> {
        let mut row = IndexMap::new();
        for &k in &self.ndcg {
            row.insert(format!("ndcg@{k}"), ndcg_at_k(run, qrels, topic, k));
        }
        for &k in &self.precision {
            row.insert(format!("p@{k}"), precision_at_k(run, qrels, topic, k));
        }
        row.insert("mrr".to_string(), reciprocal_rank(run, qrels, topic));
        row.insert("map".to_string(), average_precision(run, qrels, topic));
        row
    }
}

/// Metric name -> value, in canonical key order.
pub type MetricRow<S> = IndexMap<String, S>;

/// Per-topic and mean retrieval metrics for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalReport<S> {
    pub per_topic: IndexMap<String, MetricRow<S>>,
    pub mean: MetricRow<S>,
}

impl<S: Scalar> RetrievalReport<S> {
    /// Values of one metric across topics, in report order.
    pub fn metric_values(&self, key: &str) -> Vec<S> {
        self.per_topic
            .values()
            .filter_map(|row| row.get(key).copied())
            .collect()
    }
}

/// Evaluates one ranked list per topic. Topics must be unique; they are
/// reported in the order given.
pub fn evaluate_run<S: Scalar>(
    runs: &[(String, RankedList<S>)],
    qrels: &Qrels,
    cutoffs: &MetricCutoffs,
) -> Result<RetrievalReport<S>, MetricsError> {
    let mut per_topic: IndexMap<String, MetricRow<S>> = IndexMap::with_capacity(runs.len());
    for (topic, run) in runs {
        if per_topic
            .insert(topic.clone(), cutoffs.evaluate(run, qrels, topic))
            .is_some()
        {
            return Err(MetricsError::DuplicateTopic(topic.clone()));
        }
    }

    let mut mean: MetricRow<S> = IndexMap::new();
    let n = S::from_count(per_topic.len().max(1));
    for key in cutoffs.keys() {
        let sum: S = per_topic
            .values()
            .map(|row| *row.get(&key).expect("every row has every key"))
            .sum();
        let value = if per_topic.is_empty() { S::zero() } else { sum / n };
        mean.insert(key, value);
    }
    Ok(RetrievalReport { per_topic, mean })
}
