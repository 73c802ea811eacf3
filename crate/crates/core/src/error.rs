use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("sigma_{t} is undefined for n = {n} (need 1 <= t <= n)")]
    DegreeOutOfRange { t: u32, n: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("index tuple {tuple:?} is not {m}-admissible")]
    NotAdmissible { tuple: Vec<usize>, m: usize },

    #[error("cannot expand a set on {from} variable sets to {to}")]
    ExpansionTarget { from: usize, to: usize },

    #[error("unsupported catalog request: {0}")]
    Catalog(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("memory budget exceeded: {buckets} fingerprint buckets (limit {limit})")]
    MemoryBudget { buckets: usize, limit: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
