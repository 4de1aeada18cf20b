// SPDX-License-Identifier: Apache-2.0
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("value {value} does not fit in a signed {bits}-bit weight")]
    Range { value: i64, bits: u8 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown instance `{0}`")]
    Lookup(String),

    #[error("accumulator overflow: {value} exceeds signed {bits}-bit range")]
    Overflow { value: i64, bits: u32 },

    #[error("invalid generator state: xorshift state must be nonzero")]
    ZeroState,

    #[error("address {addr} out of range for depth {depth}")]
    Address { addr: usize, depth: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("integrity violation: {0}")]
    Integrity(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
