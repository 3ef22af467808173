use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{source_name}: line {line}: {message}")]
    Parse {
        source_name: &'static str,
        line: usize,
        message: String,
    },

    #[error("line {line}: unknown gender code {code:?}")]
    UnknownGenderCode { line: usize, code: String },

    #[error("undecodable byte 0x{byte:02x} at offset {offset} ({encoding})")]
    Encoding {
        offset: u64,
        byte: u8,
        encoding: &'static str,
    },

    #[error("empty token")]
    EmptyToken,

    #[error("invalid token {0:?}: expected lower-case ASCII letters")]
    InvalidToken(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("both classes are required, found only {0}")]
    SingleClass(&'static str),

    #[error("singular information matrix: collinear design columns {columns:?}")]
    Singular { columns: Vec<usize> },

    #[error("model did not converge")]
    NotConverged,

    #[error("line {line}: {message}")]
    Record { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
