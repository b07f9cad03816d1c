use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector length {found} does not match dimension {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("edge ({i}, {j}, {t}) is out of range for order {n}")]
    EdgeOutOfRange {
        i: usize,
        j: usize,
        t: usize,
        n: usize,
    },

    #[error("edge index {index} is out of range for order {n}")]
    EdgeIndexOutOfRange { index: usize, n: usize },

    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0} is not allowed in a simple graph")]
    SelfLoop(usize),

    #[error("image is not a permutation of 1..={0}")]
    InvalidPermutation(usize),

    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },

    #[error("oracle scale exceeded: order {n} is above the cap of {cap}")]
    ScaleExceeded { n: usize, cap: usize },

    #[error("order {0} is not supported here")]
    UnsupportedOrder(usize),

    #[error("complement enumeration does not list each missing edge exactly once")]
    InvalidEnumeration,

    #[error("vector is not supported in the time-graph (edge index {0} carries a nonzero row)")]
    NotSupported(usize),

    #[error("internal inconsistency: {0}")]
    Inconsistent(&'static str),
}
