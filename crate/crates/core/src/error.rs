use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("loop at vertex {0}")]
    Loop(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid cyclic order: {0}")]
    InvalidOrder(String),
    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),
    #[error("invalid bundling: {0}")]
    InvalidBundling(String),
    #[error("invalid frame drawing: {0}")]
    InvalidFrame(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid render spec: {0}")]
    InvalidRenderSpec(String),
    #[error("unknown region {0}")]
    UnknownRegion(usize),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
