use thiserror::Error;

/// Errors raised by the algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("atom count {0} is outside the supported range 1..={max}", max = crate::ATOM_CAPACITY)]
    AtomCount(usize),
    #[error("algebra would have {atoms} atoms, above the configured maximum of {max}")]
    SizeBound { atoms: usize, max: usize },
    #[error("element {bits:#x} is not a member of an algebra with {atom_count} atoms")]
    ForeignElement { bits: u64, atom_count: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("polynomial arity {0} exceeds the supported maximum of {max}", max = crate::poly::MAX_ARITY)]
    ArityTooLarge(usize),
    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("operands live in different ambient algebras ({left} vs {right} atoms)")]
    AmbientMismatch { left: usize, right: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("sandwich violated at coordinate {0}: low is not below high")]
    SandwichViolation(usize),
    #[error("index set {0:?} is not saturated")]
    NotSaturated(Vec<usize>),
    #[error("index {index} out of range for a filtration of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("the elements do not form a chain: position {0} is not below position {next}", next = .0 + 1)]
    NotAChain(usize),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("empty level range: p must be strictly below q")]
    EmptyLevelRange,
    #[error("term parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("legs disagree on the common subalgebra at atom {0} of the target")]
    IncompatibleLegs(usize),
    #[error("internal solver failure: {0}")]
    SolverFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
