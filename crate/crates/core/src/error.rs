use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("supports overlap on ({0}, {1}]")]
    Overlap(f64, f64),
    #[error("translate-dilate needs 0 <= a < 1 and 0 < r <= 1 - a, got a = {a}, r = {r}")]
    InvalidTransport { a: f64, r: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("class violation: {0}")]
    ClassViolation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no catalog witness for {0}")]
    CatalogMiss(String),
    #[error("extraction failed: {0}")]
    Extraction(String),
    #[error("invalid descriptor: {0}")]
    Descriptor(String),
    #[error("not available in closed form: {0}")]
    NotClosedForm(String),
}

pub type Result<T> = std::result::Result<T, Error>;
