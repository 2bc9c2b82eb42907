//! BM25 ranked retrieval (phase 1) and candidate-set re-ranking (phase 2).

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::IndexError;
use crate::index::InvertedIndex;
use crate::scalar::Scalar;
use crate::text::TokenizedText;

/// BM25 ranking parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params<S> {
    /// Term-frequency saturation, >= 0.
    pub k1: S,
    /// Length normalization, in [0, 1].
    pub b: S,
}

impl<S: Scalar> Default for Bm25Params<S> {
    fn default() -> Self {
        Bm25Params {
            k1: S::from_f64_lossy(1.2),
            b: S::from_f64_lossy(0.75),
        }
    }
}

impl<S: Scalar> Bm25Params<S> {
    pub fn new(k1: S, b: S) -> Result<Self, IndexError> {
        if k1 < S::zero() || b < S::zero() || b > S::one() {
            return Err(IndexError::InvalidParams {
                k1: k1.to_f64_lossy(),
                b: b.to_f64_lossy(),
            });
        }
        Ok(Bm25Params { k1, b })
    }
}

/// One entry of a ranked list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredDoc<S> {
    pub doc_id: String,
    pub score: S,
}

/// Ordered retrieval output: scores non-increasing, no duplicate doc_ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList<S> {
    entries: Vec<ScoredDoc<S>>,
}

impl<S: Scalar> RankedList<S> {
    pub fn empty() -> Self {
        RankedList {
            entries: Vec::new(),
        }
    }

    /// Sorts by descending score, breaking ties by ascending doc_id.
    pub fn from_scores(scores: Vec<(String, S)>) -> Self {
        let mut entries: Vec<ScoredDoc<S>> = scores
            .into_iter()
            .map(|(doc_id, score)| ScoredDoc { doc_id, score })
            .collect();
        entries.sort_by(|a, b| cmp_score_desc(a.score, b.score).then(a.doc_id.cmp(&b.doc_id)));
        debug_assert!(entries.windows(2).all(|w| w[0].doc_id != w[1].doc_id));
        RankedList { entries }
    }

    /// Entries in an externally determined order; scores must already be
    /// non-increasing (the re-ranker uses phase-1 rank, not doc_id, to break
    /// ties).
    pub(crate) fn from_sorted(entries: Vec<ScoredDoc<S>>) -> Self {
        debug_assert!(entries
            .windows(2)
            .all(|w| cmp_score_desc(w[0].score, w[1].score) != Ordering::Greater));
        RankedList { entries }
    }

    pub fn entries(&self) -> &[ScoredDoc<S>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.doc_id.as_str())
    }

    /// The top `depth` entries as a new list.
    pub fn prefix(&self, depth: usize) -> Self {
        RankedList {
            entries: self.entries.iter().take(depth).cloned().collect(),
        }
    }
}

fn cmp_score_desc<S: Scalar>(a: S, b: S) -> Ordering {
    b.partial_cmp(&a).expect("retrieval scores are never NaN")
}

/// Inverse document frequency: ln(1 + (N - df + 0.5) / (df + 0.5)).
///
/// The +1 inside the logarithm keeps scores non-negative even when a term
/// occurs in more than half the corpus.
fn idf<S: Scalar>(doc_count: usize, doc_freq: usize) -> S {
    let n = S::from_count(doc_count);
    let df = S::from_count(doc_freq);
    let half = S::from_f64_lossy(0.5);
    (S::one() + (n - df + half) / (df + half)).ln()
}

/// Term-frequency normalization: tf(k1+1) / (tf + k1(1 - b + b |d|/avgdl)).
fn tf_norm<S: Scalar>(tf: u32, doc_len: u32, avgdl: S, params: &Bm25Params<S>) -> S {
    let tf = S::from_count(tf as usize);
    let dl = S::from_count(doc_len as usize);
    let len_ratio = if avgdl > S::zero() {
        dl / avgdl
    } else {
        S::zero()
    };
    tf * (params.k1 + S::one()) / (tf + params.k1 * (S::one() - params.b + params.b * len_ratio))
}

/// BM25 weight of one (term, doc) pair against an index.
pub(crate) fn term_weight<S: Scalar>(
    index: &InvertedIndex,
    doc_freq: usize,
    tf: u32,
    doc_len: u32,
    params: &Bm25Params<S>,
) -> S {
    let avgdl = S::from_f64_lossy(index.avg_doc_length());
    idf::<S>(index.doc_count(), doc_freq) * tf_norm(tf, doc_len, avgdl, params)
}

/// Deduplicated query surfaces in sorted order. Duplicate query terms
/// contribute once, so the per-document score accumulation order is fixed.
fn unique_terms(query: &TokenizedText) -> BTreeSet<&str> {
    query.surfaces().collect()
}

/// Top-k documents by BM25. Documents sharing no query term score zero and
/// are excluded; ties are broken by ascending doc_id.
pub fn retrieve<S: Scalar>(
    index: &InvertedIndex,
    query: &TokenizedText,
    k: usize,
    params: &Bm25Params<S>,
) -> RankedList<S> {
    let mut scores: HashMap<&str, S> = HashMap::new();
    for term in unique_terms(query) {
        let Some(postings) = index.postings(term) else {
            continue;
        };
        for posting in postings {
            let doc_len = index
                .doc_length(&posting.doc_id)
                .expect("posting doc_id is indexed");
            let w = term_weight(index, postings.len(), posting.term_frequency, doc_len, params);
            *scores.entry(posting.doc_id.as_str()).or_insert_with(S::zero) += w;
        }
    }
    let scored: Vec<(String, S)> = scores
        .into_iter()
        .filter(|&(_, s)| s > S::zero())
        .map(|(id, s)| (id.to_string(), s))
        .collect();
    let mut list = RankedList::from_scores(scored);
    list.entries.truncate(k);
    list
}

/// Re-scores the top `depth` phase-1 candidates against `keyword_query` and
/// reorders them by the new score. Ties keep phase-1 order, then doc_id. An
/// empty keyword query leaves the phase-1 prefix untouched.
pub fn rerank<S: Scalar>(
    index: &InvertedIndex,
    phase1: &RankedList<S>,
    keyword_query: &TokenizedText,
    depth: usize,
    params: &Bm25Params<S>,
) -> RankedList<S> {
    let candidates = &phase1.entries()[..depth.min(phase1.len())];
    let terms = unique_terms(keyword_query);
    if terms.is_empty() {
        return RankedList::from_sorted(candidates.to_vec());
    }

    let mut rescored: Vec<(usize, ScoredDoc<S>)> = candidates
        .iter()
        .enumerate()
        .map(|(rank, entry)| {
            let doc_len = index
                .doc_length(&entry.doc_id)
                .expect("phase-1 doc is indexed");
            let mut score = S::zero();
            for term in &terms {
                let Some(postings) = index.postings(term) else {
                    continue;
                };
                if let Ok(at) = postings.binary_search_by(|p| p.doc_id.as_str().cmp(&entry.doc_id))
                {
                    score += term_weight(
                        index,
                        postings.len(),
                        postings[at].term_frequency,
                        doc_len,
                        params,
                    );
                }
            }
            (
                rank,
                ScoredDoc {
                    doc_id: entry.doc_id.clone(),
                    score,
                },
            )
        })
        .collect();

    rescored.sort_by(|(rank_a, a), (rank_b, b)| {
        cmp_score_desc(a.score, b.score)
            .then(rank_a.cmp(rank_b))
            .then(a.doc_id.cmp(&b.doc_id))
    });
    RankedList::from_sorted(rescored.into_iter().map(|(_, e)| e).collect())
}
