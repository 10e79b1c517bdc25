use thiserror::Error;

use ddp_core::CoreError;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty training corpus")]
    EmptyCorpus,

    #[error("non-projective gold tree `{doc_id}`, projectivize first")]
    NonProjective { doc_id: String },

    #[error("illegal action {action}")]
    IllegalAction { action: String },

    #[error("model file line {line}: {msg}")]
    ModelFormat { line: usize, msg: String },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl ParseError {
    pub(crate) fn model(line: usize, msg: impl Into<String>) -> Self {
        ParseError::ModelFormat {
            line,
            msg: msg.into(),
        }
    }
}
