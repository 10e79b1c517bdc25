use thiserror::Error;

use ddp_core::{CoreError, SchemeId, ValidationReport};
use ddp_corpus::FormatError;

#[derive(Debug, Error)]
pub enum ConvertError {
    #[error("invalid tree input: {0}")]
    InvalidRstTree(String),

    #[error("conflicting heads for EDU {edu}")]
    ConflictingHeads { edu: usize },

    #[error("records induce a cycle: {edus:?}")]
    RecordCycle { edus: Vec<usize> },

    #[error("EDU index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("document has no EDUs")]
    EmptyDocument,

    #[error("split of EDU {original_index} in {doc_id}: {msg}")]
    BadSplit {
        doc_id: String,
        original_index: usize,
        msg: String,
    },

    #[error("correction target EDU {0} does not exist")]
    MissingCorrectionTarget(usize),

    #[error("corrections rejected, document unchanged: {0}")]
    InvalidCorrection(ValidationReport),

    #[error("no mapping for ({scheme}, {label})")]
    MissingMapping { scheme: SchemeId, label: String },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Format(#[from] FormatError),
}
