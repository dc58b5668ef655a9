use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A graph order (or other size) outside the range an operation supports.
    #[error("{what}: order {got} outside supported range {min}..={max}")]
    Size {
        what: &'static str,
        got: usize,
        min: usize,
        max: usize,
    },

    #[error("index {index} out of range 1..={len}")]
    Bounds { index: usize, len: usize },

    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("vertex {vertex} out of range for graph of order {n}")]
    Vertex { vertex: usize, n: usize },

    #[error("census file line {line}: {msg}")]
    CensusLoad { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),

    /// An exact identity that must hold did not.
    #[error("check failed: {0}")]
    Mismatch(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn check_order(what: &'static str, n: usize, min: usize, max: usize) -> Result<()> {
    if n < min || n > max {
        return Err(Error::Size {
            what,
            got: n,
            min,
            max,
        });
    }
    Ok(())
}
