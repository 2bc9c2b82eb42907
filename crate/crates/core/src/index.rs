//! Inverted index construction and persistence.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::IndexError;
use crate::text::{remove_stopwords, tokenize, StopwordList};

const SNAPSHOT_VERSION: u32 = 1;
const SNAPSHOT_FILE: &str = "index.json";

/// A raw corpus document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub body: String,
}

/// One posting: a document containing the term, with its in-document count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc_id: String,
    pub term_frequency: u32,
}

/// Term -> postings map over a corpus, plus the per-document lengths needed
/// for BM25 length normalization. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertedIndex {
    postings: BTreeMap<String, Vec<Posting>>,
    doc_lengths: BTreeMap<String, u32>,
    avg_doc_length: f64,
}

impl InvertedIndex {
    /// Indexes a corpus. Terms are normalized, stopword-free surfaces;
    /// document length is the token count after normalization and stopword
    /// removal. Duplicate doc_ids are rejected.
    pub fn build(docs: &[Document], stops: &StopwordList) -> Result<Self, IndexError> {
        let mut doc_lengths: BTreeMap<String, u32> = BTreeMap::new();
        let mut postings: BTreeMap<String, BTreeMap<String, u32>> = BTreeMap::new();

        for doc in docs {
            if doc_lengths.contains_key(&doc.doc_id) {
                return Err(IndexError::DuplicateDocId(doc.doc_id.clone()));
            }
            let terms = remove_stopwords(&tokenize(&doc.body), stops);
            doc_lengths.insert(doc.doc_id.clone(), terms.len() as u32);
            for token in &terms.tokens {
                *postings
                    .entry(token.surface.clone())
                    .or_default()
                    .entry(doc.doc_id.clone())
                    .or_insert(0) += 1;
            }
        }

        let postings = postings
            .into_iter()
            .map(|(term, by_doc)| {
                // BTreeMap iteration gives postings sorted by doc_id.
                let list = by_doc
                    .into_iter()
                    .map(|(doc_id, term_frequency)| Posting {
                        doc_id,
                        term_frequency,
                    })
                    .collect();
                (term, list)
            })
            .collect();

        Ok(Self::from_parts(postings, doc_lengths))
    }

    fn from_parts(
        postings: BTreeMap<String, Vec<Posting>>,
        doc_lengths: BTreeMap<String, u32>,
    ) -> Self {
        let avg_doc_length = if doc_lengths.is_empty() {
            0.0
        } else {
            doc_lengths.values().map(|&l| l as f64).sum::<f64>() / doc_lengths.len() as f64
        };
        InvertedIndex {
            postings,
            doc_lengths,
            avg_doc_length,
        }
    }

    pub fn doc_count(&self) -> usize {
        self.doc_lengths.len()
    }

    pub fn avg_doc_length(&self) -> f64 {
        self.avg_doc_length
    }

    pub fn doc_length(&self, doc_id: &str) -> Option<u32> {
        self.doc_lengths.get(doc_id).copied()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.doc_lengths.keys().map(|s| s.as_str())
    }

    pub fn postings(&self, term: &str) -> Option<&[Posting]> {
        self.postings.get(term).map(|v| v.as_slice())
    }

    /// Number of documents containing the term.
    pub fn document_frequency(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, |v| v.len())
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(|s| s.as_str())
    }

    /// Writes a versioned snapshot into `dir` (created if missing).
    pub fn save(&self, dir: &Path) -> Result<(), IndexError> {
        std::fs::create_dir_all(dir).map_err(|source| IndexError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let path = dir.join(SNAPSHOT_FILE);
        let snapshot = Snapshot {
            format_version: SNAPSHOT_VERSION,
            doc_lengths: &self.doc_lengths,
            postings: &self.postings,
        };
        let io_err = |source| IndexError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut file = std::fs::File::create(&path).map_err(io_err)?;
        serde_json::to_writer(&mut file, &snapshot)
            .map_err(|e| IndexError::MalformedSnapshot(e.to_string()))?;
        file.write_all(b"\n").map_err(io_err)?;
        Ok(())
    }

    /// Loads a snapshot written by [`InvertedIndex::save`]. The average
    /// document length is recomputed, so a round trip is exact.
    pub fn load(dir: &Path) -> Result<Self, IndexError> {
        let path = dir.join(SNAPSHOT_FILE);
        let file = std::fs::File::open(&path).map_err(|source| IndexError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let snapshot: OwnedSnapshot = serde_json::from_reader(std::io::BufReader::new(file))
            .map_err(|e| IndexError::MalformedSnapshot(e.to_string()))?;
        if snapshot.format_version != SNAPSHOT_VERSION {
            return Err(IndexError::SnapshotVersion {
                found: snapshot.format_version,
                expected: SNAPSHOT_VERSION,
            });
        }
        let index = Self::from_parts(snapshot.postings, snapshot.doc_lengths);
        index.validate()?;
        Ok(index)
    }

    fn validate(&self) -> Result<(), IndexError> {
        for (term, list) in &self.postings {
            for pair in list.windows(2) {
                if pair[0].doc_id >= pair[1].doc_id {
                    return Err(IndexError::MalformedSnapshot(format!(
                        "postings for {term:?} are not sorted by doc_id"
                    )));
                }
            }
            for posting in list {
                if posting.term_frequency == 0 {
                    return Err(IndexError::MalformedSnapshot(format!(
                        "zero term frequency for {term:?} in {:?}",
                        posting.doc_id
                    )));
                }
                if !self.doc_lengths.contains_key(&posting.doc_id) {
                    return Err(IndexError::MalformedSnapshot(format!(
                        "posting references unknown doc {:?}",
                        posting.doc_id
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Snapshot<'a> {
    format_version: u32,
    doc_lengths: &'a BTreeMap<String, u32>,
    postings: &'a BTreeMap<String, Vec<Posting>>,
}

#[derive(Deserialize)]
struct OwnedSnapshot {
    format_version: u32,
    doc_lengths: BTreeMap<String, u32>,
    postings: BTreeMap<String, Vec<Posting>>,
}

/// Reads a JSON-lines corpus: one object per line with "doc_id" and "body".
pub fn read_corpus(path: &Path) -> Result<Vec<Document>, IndexError> {
    let file = std::fs::File::open(path).map_err(|source| IndexError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = std::io::BufReader::new(file);
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| IndexError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document =
            serde_json::from_str(&line).map_err(|e| IndexError::MalformedCorpus {
                line: i + 1,
                message: e.to_string(),
            })?;
        docs.push(doc);
    }
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, body: &str) -> Document {
        Document {
            doc_id: id.to_string(),
            body: body.to_string(),
        }
    }

    #[test]
    fn empty_corpus_builds_empty_index() {
        let index = InvertedIndex::build(&[], &StopwordList::empty()).unwrap();
        assert_eq!(index.doc_count(), 0);
        assert_eq!(index.avg_doc_length(), 0.0);
    }

    #[test]
    fn shared_term_postings_are_sorted_by_doc_id() {
        let docs = vec![doc("d2", "apple pie"), doc("d1", "apple tart")];
        let index = InvertedIndex::build(&docs, &StopwordList::empty()).unwrap();
        let postings = index.postings("apple").unwrap();
        assert_eq!(postings.len(), 2);
        assert_eq!(postings[0].doc_id, "d1");
        assert_eq!(postings[1].doc_id, "d2");
    }

    #[test]
    fn duplicate_doc_id_is_rejected_with_offender() {
        let docs = vec![doc("d1", "a"), doc("d1", "b")];
        let err = InvertedIndex::build(&docs, &StopwordList::empty()).unwrap_err();
        match err {
            IndexError::DuplicateDocId(id) => assert_eq!(id, "d1"),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn all_stopword_doc_has_length_zero_and_no_postings() {
        let stops = StopwordList::from_words(["the", "a"]);
        let docs = vec![doc("d1", "the a the"), doc("d2", "apple")];
        let index = InvertedIndex::build(&docs, &stops).unwrap();
        assert_eq!(index.doc_length("d1"), Some(0));
        assert_eq!(index.doc_count(), 2);
        assert!(index.postings("the").is_none());
        assert_eq!(index.avg_doc_length(), 0.5);
    }

    #[test]
    fn term_frequencies_are_counted() {
        let docs = vec![doc("d1", "apple apple pie")];
        let index = InvertedIndex::build(&docs, &StopwordList::empty()).unwrap();
        assert_eq!(index.postings("apple").unwrap()[0].term_frequency, 2);
        assert_eq!(index.doc_length("d1"), Some(3));
    }

    #[test]
    fn snapshot_round_trip_is_exact() {
        let docs = vec![
            doc("d1", "red apple pie recipe"),
            doc("d2", "car engine repair"),
            doc("d3", "apple pie"),
        ];
        let index = InvertedIndex::build(&docs, &StopwordList::empty()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        index.save(dir.path()).unwrap();
        let loaded = InvertedIndex::load(dir.path()).unwrap();
        assert_eq!(index, loaded);
    }

    #[test]
    fn snapshot_version_is_checked() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("index.json"),
            r#"{"format_version":999,"doc_lengths":{},"postings":{}}"#,
        )
        .unwrap();
        match InvertedIndex::load(dir.path()).unwrap_err() {
            IndexError::SnapshotVersion { found, .. } => assert_eq!(found, 999),
            other => panic!("unexpected error: {other}"),
        }
    }
}
