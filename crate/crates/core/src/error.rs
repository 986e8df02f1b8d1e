use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("duplicate edge name `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{name}` has invalid length {length}")]
    InvalidLength { name: String, length: f64 },
    #[error("invalid vertex partition: {0}")]
    InvalidPartition(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph is not equilateral")]
    NotEquilateral,
    #[error("graph is not a cycle")]
    NotACycle,
    #[error("graph has dependent cycles")]
    DependentCycles,
    #[error("invalid vertex cut: {0}")]
    InvalidCut(String),
    #[error("unknown builtin graph `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid parameter for `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("inconsistent subspace at vertex {vertex}: {reason}")]
    InconsistentSubspace { vertex: usize, reason: String },
    #[error("unsupported vertex conditions: {0}")]
    UnsupportedCondition(String),
    #[error("boundary vertex set must lie in the natural boundary; `{0}` has degree > 1")]
    BoundaryNotLeaf(String),
    #[error("k = {k} is not a secular root (smallest singular value {sigma_min:e})")]
    NotARoot { k: f64, sigma_min: f64 },
    #[error(
        "eigenvalue count {found} inconsistent with Weyl estimate {expected:.3} at k = {k}; suspected missed cluster in [{lo}, {hi}]"
    )]
    WeylMismatch {
        k: f64,
        found: usize,
        expected: f64,
        lo: f64,
        hi: f64,
    },
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("length {0} is not representable as an exact rational")]
    NotRational(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
