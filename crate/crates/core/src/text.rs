//! Tokenization, normalization, and stopword handling.
//!
//! Every other module consumes text through [`tokenize`]: lowercase, split on
//! whitespace, strip punctuation at word boundaries. Punctuation inside a
//! word (apostrophes, hyphens) is kept, so "you'll" stays one token.

use std::collections::BTreeSet;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::TextError;

/// One word of a sentence, in normalized and raw form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// Normalized word: lowercased, boundary punctuation stripped. Never
    /// empty, never contains whitespace.
    pub surface: String,
    /// The word as it appeared in the input.
    pub raw: String,
    /// 0-based index within the sentence.
    pub position: usize,
}

/// A tokenized sentence together with its raw source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedText {
    pub tokens: Vec<Token>,
    pub source: String,
}

impl TokenizedText {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Normalized surfaces in sentence order.
    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }

    /// Builds a synthetic sentence from already-normalized surfaces.
    ///
    /// Used to assemble retrieval queries out of tokens picked from other
    /// sentences. Surfaces are normalization fixed-points, so re-tokenizing
    /// the joined source reproduces the same token sequence.
    pub fn from_surfaces<I, T>(surfaces: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let tokens: Vec<Token> = surfaces
            .into_iter()
            .enumerate()
            .map(|(position, s)| {
                let surface: String = s.into();
                debug_assert_eq!(normalize_word(&surface).as_deref(), Some(surface.as_str()));
                Token {
                    raw: surface.clone(),
                    surface,
                    position,
                }
            })
            .collect();
        let source = tokens
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        TokenizedText { tokens, source }
    }

    /// Concatenates sentences into one, renumbering positions.
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a TokenizedText>) -> Self {
        let mut tokens = Vec::new();
        let mut sources = Vec::new();
        for part in parts {
            sources.push(part.source.clone());
            for tok in &part.tokens {
                tokens.push(Token {
                    surface: tok.surface.clone(),
                    raw: tok.raw.clone(),
                    position: tokens.len(),
                });
            }
        }
        TokenizedText {
            tokens,
            source: sources.join(" "),
        }
    }
}

/// Normalizes a single whitespace-free word: lowercase, then strip leading
/// and trailing non-alphanumeric characters. Returns `None` if nothing is
/// left.
pub fn normalize_word(raw: &str) -> Option<String> {
    let lowered = raw.to_lowercase();
    let trimmed = lowered.trim_matches(|c: char| !c.is_alphanumeric());
    if trimmed.is_empty() {
        None
    } else {
        Some(trimmed.to_string())
    }
}

/// Splits text on whitespace, normalizes each word, and drops words that
/// normalize to nothing. Positions are assigned 0..n-1 over the survivors.
pub fn tokenize(text: &str) -> TokenizedText {
    let mut tokens = Vec::new();
    for raw in text.split_whitespace() {
        if let Some(surface) = normalize_word(raw) {
            tokens.push(Token {
                surface,
                raw: raw.to_string(),
                position: tokens.len(),
            });
        }
    }
    TokenizedText {
        tokens,
        source: text.to_string(),
    }
}

/// A set of normalized words to exclude from indexing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    words: BTreeSet<String>,
}

impl StopwordList {
    /// Empty list: nothing is a stopword.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The bundled English list (~300 words).
    pub fn default_english() -> Self {
        static LIST: &str = include_str!("stopwords_en.txt");
        Self::from_lines(LIST.lines().map(|l| Ok(l.to_string())))
            .expect("bundled stopword list parses")
    }

    /// Builds a list from explicit words; each entry is normalized on entry
    /// so the set only ever holds normalization fixed-points.
    pub fn from_words<I, T>(words: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let words = words
            .into_iter()
            .filter_map(|w| normalize_word(w.as_ref()))
            .collect();
        StopwordList { words }
    }

    /// Reads a stopword file: UTF-8, one word per line, '#'-prefixed comment
    /// lines and blank lines ignored.
    pub fn from_path(path: &Path) -> Result<Self, TextError> {
        let file = std::fs::File::open(path).map_err(|source| TextError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let reader = std::io::BufReader::new(file);
        Self::from_lines(reader.lines()).map_err(|source| TextError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    fn from_lines<I>(lines: I) -> Result<Self, std::io::Error>
    where
        I: IntoIterator<Item = Result<String, std::io::Error>>,
    {
        let mut words = BTreeSet::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(word) = normalize_word(line) {
                words.insert(word);
            }
        }
        Ok(StopwordList { words })
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.words.contains(surface)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Drops tokens whose surface is a stopword. Surviving tokens keep their
/// original positions, so the output is no longer position-consecutive.
pub fn remove_stopwords(text: &TokenizedText, stops: &StopwordList) -> TokenizedText {
    TokenizedText {
        tokens: text
            .tokens
            .iter()
            .filter(|t| !stops.contains(&t.surface))
            .cloned()
            .collect(),
        source: text.source.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &TokenizedText) -> Vec<&str> {
        text.surfaces().collect()
    }

    #[test]
    fn tokenize_lowercases_and_strips_boundary_punctuation() {
        let out = tokenize("Conservatives and liberals drink different beer");
        assert_eq!(
            surfaces(&out),
            vec!["conservatives", "and", "liberals", "drink", "different", "beer"]
        );
        let positions: Vec<usize> = out.tokens.iter().map(|t| t.position).collect();
        assert_eq!(positions, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn tokenize_question_mark() {
        assert_eq!(surfaces(&tokenize("How are you?")), vec!["how", "are", "you"]);
    }

    #[test]
    fn tokenize_empty_input() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  \t\n ").is_empty());
        assert!(tokenize("... --- !!!").is_empty());
    }

    #[test]
    fn internal_apostrophes_and_hyphens_survive() {
        let out = tokenize("You'll need well-known words, won't you?");
        assert_eq!(
            surfaces(&out),
            vec!["you'll", "need", "well-known", "words", "won't", "you"]
        );
    }

    #[test]
    fn raw_forms_are_preserved() {
        let out = tokenize("Beer!");
        assert_eq!(out.tokens[0].raw, "Beer!");
        assert_eq!(out.tokens[0].surface, "beer");
    }

    #[test]
    fn remove_stopwords_keeps_positions() {
        let text = tokenize("five german words");
        let stops = StopwordList::from_words(["five"]);
        let kept = remove_stopwords(&text, &stops);
        assert_eq!(surfaces(&kept), vec!["german", "words"]);
        assert_eq!(kept.tokens[0].position, 1);
        assert_eq!(kept.tokens[1].position, 2);
    }

    #[test]
    fn remove_stopwords_can_empty_a_sentence() {
        let text = tokenize("how are you");
        let stops = StopwordList::from_words(["how", "are", "you"]);
        assert!(remove_stopwords(&text, &stops).is_empty());
    }

    #[test]
    fn remove_stopwords_without_overlap_is_identity() {
        let text = tokenize("red apple pie");
        let stops = StopwordList::from_words(["the"]);
        assert_eq!(remove_stopwords(&text, &stops), text);
    }

    #[test]
    fn default_english_list_is_nonempty_and_normalized() {
        let stops = StopwordList::default_english();
        assert!(stops.len() > 250, "got {}", stops.len());
        assert!(stops.contains("the"));
        assert!(stops.contains("you'll"));
        assert!(!stops.contains("apple"));
    }

    #[test]
    fn stopword_entries_are_normalization_fixed_points() {
        let stops = StopwordList::from_words(["The?", "  WON'T "]);
        assert!(stops.contains("the"));
        assert!(stops.contains("won't"));
    }

    #[test]
    fn concat_renumbers_positions() {
        let a = tokenize("red apple");
        let b = tokenize("pie");
        let joined = TokenizedText::concat([&a, &b]);
        assert_eq!(surfaces(&joined), vec!["red", "apple", "pie"]);
        assert_eq!(joined.tokens[2].position, 2);
        assert_eq!(joined.source, "red apple pie");
    }
}
