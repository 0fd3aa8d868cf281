use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("enumeration cap of {0} exceeded")]
    CapExceeded(usize),

    #[error("the feasible family is empty")]
    NoFeasibleSet,

    #[error("agent {0} belongs to every feasible set")]
    MonopolyDetected(usize),

    #[error("flow value is unbounded: an s-t path of infinite-capacity arcs exists")]
    UnboundedFlow,

    #[error("base flow is infeasible: {0}")]
    InfeasibleBase(String),

    #[error("the given set is not a vertex cover")]
    NotAVertexCover,

    #[error("the explicit base family is not a matroid")]
    NotAMatroid,

    #[error("agent {0} is not selected under the given bids")]
    NotAWinner(usize),

    #[error("allocation rule behaves non-monotonically around agent {0}")]
    NotMonotone(usize),

    #[error("threshold bisection inconclusive after the configured depth; bracket [{lo}, {hi}]")]
    BisectionInconclusive { lo: String, hi: String },

    #[error("unknown instance `{0}`")]
    UnknownInstance(String),

    #[error("unsatisfiable generator parameters: {0}")]
    UnsatisfiableParams(String),

    #[error("lower-bound audit failed: {0}")]
    AuditFailed(String),

    #[error("the base family is empty")]
    EmptyFamily,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
