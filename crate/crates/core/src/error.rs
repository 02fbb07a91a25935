use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("series is not pointed: its linear part is not the identity")]
    NotPointed,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("field `{0}` is fermionic; only bosonic models are supported")]
    Fermionic(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("enumeration exceeded the cap of {0} diagrams")]
    CapExceeded(usize),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("contraction produced a vertex outside the model's vertex types: {0}")]
    OutsideVertexTypes(String),

    #[error("component of arity {0} is not S_n-invariant")]
    NotInvariant(usize),

    #[error("element outside the carrier: {0}")]
    OutsideCarrier(String),

    #[error("color signatures differ")]
    SignatureMismatch,
}
