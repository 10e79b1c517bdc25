use thiserror::Error;

use crate::validate::ValidationReport;

#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("invalid tree: {0}")]
    InvalidTree(ValidationReport),

    #[error("not a subtree")]
    NotASubtree,

    #[error("empty EDU set")]
    EmptyEduSet,

    #[error("EDU index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("{0}")]
    Malformed(String),
}
