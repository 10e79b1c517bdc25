use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("head {head} out of range at line {line} (document has {n_edus} EDUs)")]
    HeadOutOfRange {
        line: usize,
        head: usize,
        n_edus: usize,
    },

    #[error("duplicate dependent {dependent} at line {line}")]
    DuplicateDependent { line: usize, dependent: usize },

    #[error("duplicate mapping for ({scheme}, {original}) at line {line}")]
    DuplicateMapping {
        line: usize,
        scheme: String,
        original: String,
    },

    #[error("cannot serialize: {0}")]
    Unwritable(String),

    #[error("{0}")]
    Data(String),
}

impl FormatError {
    pub fn syntax(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Syntax {
            line,
            msg: msg.into(),
        }
    }
}
