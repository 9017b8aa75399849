//! Error type shared by every module in the crate.

use crate::data::Label;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("empty file: no data rows")]
    EmptyFile,

    #[error("bad header: expected `{expected}`, found `{found}`")]
    BadHeader { expected: String, found: String },

    #[error("line {line}: expected {expected} columns, found {found}")]
    MalformedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: score `{token}` is not a finite number")]
    BadScore { line: usize, token: String },

    #[error("line {line}: unknown label `{token}` (expected benign/malignant or 0/1)")]
    UnknownLabel { line: usize, token: String },

    #[error("line {line}: duplicate item id `{id}`")]
    DuplicateId { line: usize, id: String },

    #[error("line {line}: empty item id")]
    EmptyItemId { line: usize },

    #[error("line {line}: feature value `{token}` is not a finite number")]
    BadFeature { line: usize, token: String },

    #[error("{} prediction id(s) missing from the truth table: {}", ids.len(), list_ids(ids))]
    MissingFromTruth { ids: Vec<String> },

    #[error("{} truth id(s) missing from the predictions: {}", ids.len(), list_ids(ids))]
    MissingFromPredictions { ids: Vec<String> },

    #[error("no {} items present", label)]
    ClassAbsent { label: Label },

    #[error("class {label} has {size} item(s), at least {needed} required")]
    ClassTooSmall {
        label: Label,
        size: usize,
        needed: usize,
    },

    #[error("feature {index} is constant; covariance is singular even after ridge")]
    ConstantFeature { index: usize },

    #[error("covariance matrix is not positive definite")]
    NonPositiveDefinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite score for system `{system}`")]
    NonFiniteScore { system: String },

    #[error("rank vectors do not cover the same systems")]
    RankKeyMismatch,

    #[error("rank correlation is undefined: a ranking is completely tied")]
    DegenerateRanks,

    #[error("resampling gave a single-class replicate {retries} times in a row")]
    ResampleExhausted { retries: usize },

    #[error("prediction sets do not share one item universe: {0}")]
    InconsistentItems(String),

    #[error("fold {fold}: {source}")]
    FoldFit {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("system `{system}`: {source}")]
    System {
        system: String,
        #[source]
        source: Box<Error>,
    },

    #[error("bad model document: {0}")]
    ModelFormat(String),

    #[error("no curves to plot")]
    EmptyCurveList,

    #[error("{0}")]
    InvalidParameter(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by the environment (missing/unwritable files)
    /// rather than by invalid input data.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::System { source, .. } | Error::FoldFit { source, .. } => source.is_io(),
            _ => false,
        }
    }
}

fn list_ids(ids: &[String]) -> String {
    const SHOWN: usize = 10;
    let mut out = ids
        .iter()
        .take(SHOWN)
        .cloned()
        .collect::<Vec<_>>()
        .join(", ");
    if ids.len() > SHOWN {
        out.push_str(&format!(", ... ({} more)", ids.len() - SHOWN));
    }
    out
}
