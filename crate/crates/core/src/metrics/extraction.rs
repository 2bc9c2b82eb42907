//! Token-tagging metrics: precision/recall, ATCI, CpRF, precision buckets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::LabelSequence;
use crate::error::MetricsError;
use crate::scalar::Scalar;

/// Weight of a partially correct sentence in CpRF.
pub const DEFAULT_PARTIAL_WEIGHT: f64 = 0.5;

fn check_aligned(
    pred: &[LabelSequence],
    gold: &[LabelSequence],
) -> Result<(), MetricsError> {
    if pred.len() != gold.len() {
        return Err(MetricsError::SentenceCountMismatch {
            predicted: pred.len(),
            gold: gold.len(),
        });
    }
    for (i, (p, g)) in pred.iter().zip(gold).enumerate() {
        if p.len() != g.len() {
            return Err(MetricsError::LengthMismatch {
                sentence: i,
                predicted: p.len(),
                gold: g.len(),
            });
        }
    }
    Ok(())
}

/// Micro-averaged precision and recall on the keyword class over all tokens.
/// Both are 0 when their denominator is 0.
pub fn extraction_pr<S: Scalar>(
    pred: &[LabelSequence],
    gold: &[LabelSequence],
) -> Result<(S, S), MetricsError> {
    check_aligned(pred, gold)?;
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fn_ = 0usize;
    for (p, g) in pred.iter().zip(gold) {
        for (pl, gl) in p.iter().zip(g.iter()) {
            match (pl, gl) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
    }
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            S::zero()
        } else {
            S::from_count(num) / S::from_count(den)
        }
    };
    Ok((ratio(tp, tp + fp), ratio(tp, tp + fn_)))
}

/// Average Tag Correct Identification: the mean over sentences of per-token
/// tag accuracy. An empty sentence counts as fully correct.
pub fn atci<S: Scalar>(pred: &[LabelSequence], gold: &[LabelSequence]) -> Result<S, MetricsError> {
    check_aligned(pred, gold)?;
    if pred.is_empty() {
        return Ok(S::zero());
    }
    let sum: S = pred
        .iter()
        .zip(gold)
        .map(|(p, g)| {
            if p.is_empty() {
                return S::one();
            }
            let correct = p.iter().zip(g.iter()).filter(|(a, b)| a == b).count();
            S::from_count(correct) / S::from_count(p.len())
        })
        .sum();
    Ok(sum / S::from_count(pred.len()))
}

/// Correct per Response Fill: a sentence is fully correct if the predicted
/// keyword set equals the gold set, partially correct if they intersect,
/// wrong otherwise. CpRF = (#full + weight * #partial) / #sentences.
pub fn cprf_with_partial_weight<S: Scalar>(
    pred: &[LabelSequence],
    gold: &[LabelSequence],
    partial_weight: S,
) -> Result<S, MetricsError> {
    check_aligned(pred, gold)?;
    if pred.is_empty() {
        return Ok(S::zero());
    }
    let mut score = S::zero();
    for (p, g) in pred.iter().zip(gold) {
        let pset: BTreeSet<usize> = p.positive_positions().collect();
        let gset: BTreeSet<usize> = g.positive_positions().collect();
        if pset == gset {
            score += S::one();
        } else if !pset.is_disjoint(&gset) {
            score += partial_weight;
        }
    }
    Ok(score / S::from_count(pred.len()))
}

/// CpRF with the standard partial weight of 0.5.
pub fn cprf<S: Scalar>(pred: &[LabelSequence], gold: &[LabelSequence]) -> Result<S, MetricsError> {
    cprf_with_partial_weight(pred, gold, S::from_f64_lossy(DEFAULT_PARTIAL_WEIGHT))
}

/// Per-sentence keyword precision. With no predicted keywords this is 1 when
/// the gold set is also empty, else 0.
pub fn sentence_precision<S: Scalar>(pred: &LabelSequence, gold: &LabelSequence) -> S {
    let predicted = pred.count_positive();
    if predicted == 0 {
        return if gold.count_positive() == 0 {
            S::one()
        } else {
            S::zero()
        };
    }
    let tp = pred
        .iter()
        .zip(gold.iter())
        .filter(|&(p, g)| p && g)
        .count();
    S::from_count(tp) / S::from_count(predicted)
}

/// Precision strata for the stratified retrieval analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionBucket {
    Low,
    Medium,
    High,
}

impl std::fmt::Display for PrecisionBucket {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        match self {
            PrecisionBucket::Low => f.write_str("low"),
            PrecisionBucket::Medium => f.write_str("medium"),
            PrecisionBucket::High => f.write_str("high"),
        }
    }
}

/// Buckets a precision value: low below 0.5, medium in [0.5, 0.75), high
/// otherwise.
pub fn precision_bucket<S: Scalar>(p: S) -> Result<PrecisionBucket, MetricsError> {
    if p < S::zero() || p > S::one() {
        return Err(MetricsError::PrecisionOutOfRange(p.to_f64_lossy()));
    }
    let medium = S::from_f64_lossy(0.5);
    let high = S::from_f64_lossy(0.75);
    Ok(if p < medium {
        PrecisionBucket::Low
    } else if p < high {
        PrecisionBucket::Medium
    } else {
        PrecisionBucket::High
    })
}

/// Extraction quality summary for a prediction set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionReport<S> {
    pub precision: S,
    pub recall: S,
    pub atci: S,
    pub cprf: S,
    pub per_sentence_precision: Vec<S>,
}

pub fn extraction_report<S: Scalar>(
    pred: &[LabelSequence],
    gold: &[LabelSequence],
) -> Result<ExtractionReport<S>, MetricsError> {
    let (precision, recall) = extraction_pr(pred, gold)?;
    Ok(ExtractionReport {
        precision,
        recall,
        atci: atci(pred, gold)?,
        cprf: cprf(pred, gold)?,
        per_sentence_precision: pred
            .iter()
            .zip(gold)
            .map(|(p, g)| sentence_precision(p, g))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(bits: &[u8]) -> LabelSequence {
        bits.iter().map(|&b| b == 1).collect()
    }

    #[test]
    fn perfect_predictions_score_one() {
        let gold = vec![seq(&[1, 0, 1, 0, 0, 1])];
        let (p, r) = extraction_pr::<f64>(&gold, &gold).unwrap();
        assert_eq!((p, r), (1.0, 1.0));
        assert_eq!(atci::<f64>(&gold, &gold).unwrap(), 1.0);
        assert_eq!(cprf::<f64>(&gold, &gold).unwrap(), 1.0);
    }

    #[test]
    fn missed_keyword_lowers_recall_only() {
        let gold = vec![seq(&[1, 0, 1, 0, 0, 1])];
        let pred = vec![seq(&[1, 0, 0, 0, 0, 1])];
        let (p, r) = extraction_pr::<f64>(&pred, &gold).unwrap();
        assert_eq!(p, 1.0);
        assert!((r - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn all_zero_predictions_score_zero_by_convention() {
        let gold = vec![seq(&[1, 0, 1])];
        let pred = vec![seq(&[0, 0, 0])];
        let (p, r) = extraction_pr::<f64>(&pred, &gold).unwrap();
        assert_eq!((p, r), (0.0, 0.0));
    }

    #[test]
    fn length_mismatch_names_sentence() {
        let gold = vec![seq(&[1, 0]), seq(&[1, 0, 1])];
        let pred = vec![seq(&[1, 0]), seq(&[1, 0])];
        match extraction_pr::<f64>(&pred, &gold).unwrap_err() {
            MetricsError::LengthMismatch { sentence, .. } => assert_eq!(sentence, 1),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn atci_hand_counts() {
        let gold = vec![seq(&[1, 0, 1])];
        let pred = vec![seq(&[1, 1, 1])];
        assert!((atci::<f64>(&pred, &gold).unwrap() - 2.0 / 3.0).abs() < 1e-12);

        let gold = vec![seq(&[1, 1]), seq(&[1, 1])];
        let pred = vec![seq(&[1, 1]), seq(&[1, 0])];
        assert!((atci::<f64>(&pred, &gold).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn cprf_counts_full_and_partial() {
        // 2 full, 1 partial, 1 wrong -> (2 + 0.5) / 4
        let gold = vec![
            seq(&[1, 0]),
            seq(&[0, 1]),
            seq(&[1, 1, 0]),
            seq(&[1, 0, 0]),
        ];
        let pred = vec![
            seq(&[1, 0]),
            seq(&[0, 1]),
            seq(&[1, 0, 1]),
            seq(&[0, 0, 1]),
        ];
        assert!((cprf::<f64>(&pred, &gold).unwrap() - 0.625).abs() < 1e-12);
    }

    #[test]
    fn empty_keyword_sets_are_fully_correct() {
        let gold = vec![seq(&[0, 0])];
        let pred = vec![seq(&[0, 0])];
        assert_eq!(cprf::<f64>(&pred, &gold).unwrap(), 1.0);
    }

    #[test]
    fn bucket_boundaries() {
        assert_eq!(precision_bucket(0.0f64).unwrap(), PrecisionBucket::Low);
        assert_eq!(precision_bucket(0.4f64).unwrap(), PrecisionBucket::Low);
        assert_eq!(precision_bucket(0.49f64).unwrap(), PrecisionBucket::Low);
        assert_eq!(precision_bucket(0.5f64).unwrap(), PrecisionBucket::Medium);
        assert_eq!(precision_bucket(0.74f64).unwrap(), PrecisionBucket::Medium);
        assert_eq!(precision_bucket(0.75f64).unwrap(), PrecisionBucket::High);
        assert_eq!(precision_bucket(1.0f64).unwrap(), PrecisionBucket::High);
        assert!(precision_bucket(1.01f64).is_err());
        assert!(precision_bucket(-0.1f64).is_err());
    }

    #[test]
    fn sentence_precision_empty_prediction_convention() {
        assert_eq!(sentence_precision::<f64>(&seq(&[0, 0]), &seq(&[0, 0])), 1.0);
        assert_eq!(sentence_precision::<f64>(&seq(&[0, 0]), &seq(&[1, 0])), 0.0);
        assert_eq!(sentence_precision::<f64>(&seq(&[1, 1]), &seq(&[1, 0])), 0.5);
    }
}
