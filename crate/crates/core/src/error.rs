use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("Hermiticity violation: {0}")]
    Hermiticity(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("graph is disconnected: {0}")]
    Disconnected(String),
    #[error("no such edge: {0}")]
    MissingEdge(String),
    #[error("family does not fit the graph: {0}")]
    FamilyMismatch(String),
    #[error("invalid Majorana table: {0}")]
    InvalidTable(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("not a logical operator: {0}")]
    NotLogical(String),
    #[error("non-Hermitian operator: {0}")]
    NonHermitian(String),
    #[error("operators do not commute: {0}")]
    NonCommuting(String),
    #[error("non-Clifford gate: {0}")]
    NonClifford(String),
    #[error("matrix is not orthogonal: {0}")]
    NonOrthogonal(String),
    #[error("inconsistent constraints: {0}")]
    InconsistentConstraints(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("resource guard: {0}")]
    ResourceGuard(String),
    #[error("wrong encoding: {0}")]
    WrongEncoding(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) | Error::InsufficientSamples(_) => 3,
            Error::ResourceGuard(_) | Error::Budget(_) => 4,
            _ => 2,
        }
    }
}
