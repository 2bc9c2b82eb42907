//! Error types, one enum per subsystem.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("failed to read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("duplicate doc_id {0:?} in corpus")]
    DuplicateDocId(String),
    #[error("invalid BM25 parameters: k1={k1}, b={b} (need k1 >= 0 and 0 <= b <= 1)")]
    InvalidParams { k1: f64, b: f64 },
    #[error("failed to access {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed corpus line {line}: {message}")]
    MalformedCorpus { line: usize, message: String },
    #[error("malformed index snapshot: {0}")]
    MalformedSnapshot(String),
    #[error("unsupported index snapshot version {found} (expected {expected})")]
    SnapshotVersion { found: u32, expected: u32 },
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("label sequences for sentence {sentence} have different lengths: predicted {predicted}, gold {gold}")]
    LengthMismatch {
        sentence: usize,
        predicted: usize,
        gold: usize,
    },
    #[error("predicted and gold sets have different sentence counts: {predicted} vs {gold}")]
    SentenceCountMismatch { predicted: usize, gold: usize },
    #[error("precision {0} outside [0, 1]")]
    PrecisionOutOfRange(f64),
    #[error("paired t-test needs at least 2 paired observations, got {0}")]
    TooFewObservations(usize),
    #[error("paired t-test is degenerate: differences have zero variance")]
    ZeroVariance,
    #[error("paired t-test inputs have different lengths: {a} vs {b}")]
    UnpairedInputs { a: usize, b: usize },
    #[error("malformed qrels line {line}: {message}")]
    MalformedQrels { line: usize, message: String },
    #[error("duplicate judgment for topic {topic:?} doc {doc_id:?} at line {line}")]
    DuplicateJudgment {
        topic: String,
        doc_id: String,
        line: usize,
    },
    #[error("malformed run line {line}: {message}")]
    MalformedRun { line: usize, message: String },
    #[error("duplicate topic {0:?} in evaluated runs")]
    DuplicateTopic(String),
    #[error("failed to access {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("failed to access {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record on line {line}: {message}")]
    MalformedRecord { line: usize, message: String },
    #[error("conversation {topic:?} has an empty query")]
    EmptyQuery { topic: String },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("no training samples provided")]
    EmptyTrainingSet,
    #[error("external tagger command is empty")]
    EmptyCommand,
    #[error("failed to run external tagger {command:?}")]
    Spawn {
        command: String,
        #[source]
        source: std::io::Error,
    },
    #[error("external tagger {command:?} exited with {status}: {stderr}")]
    NonZeroExit {
        command: String,
        status: String,
        stderr: String,
    },
    #[error("external tagger output is malformed at sentence {sentence}: {message}")]
    MalformedOutput { sentence: usize, message: String },
    #[error("external tagger returned {got} labels for sentence {sentence}, expected {expected}")]
    LabelCountMismatch {
        sentence: usize,
        expected: usize,
        got: usize,
    },
    #[error("external tagger returned {got} sentences, expected {expected}")]
    SentenceCountMismatch { expected: usize, got: usize },
    #[error("malformed tagger exchange data at line {line}: {message}")]
    MalformedExchange { line: usize, message: String },
    #[error("failed to access {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    MalformedModel(String),
    #[error("unsupported model file version {found} (expected {expected})")]
    ModelVersion { found: u32, expected: u32 },
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid pipeline config: {0}")]
    InvalidConfig(String),
    #[error("extractor failed on turn {topic:?}")]
    Extractor {
        topic: String,
        #[source]
        source: ExtractError,
    },
    #[error("turn {topic:?} role {role} has {predicted} predicted labels but {gold} gold labels")]
    GoldMismatch {
        topic: String,
        role: String,
        predicted: usize,
        gold: usize,
    },
    #[error("no gold labels found for turn {topic:?}")]
    MissingGold { topic: String },
    #[error("failed to access {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}
