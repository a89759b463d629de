use alloc::string::String;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("sequence is not admissible")]
    InadmissibleSequence,
    #[error("division is not exact")]
    DivisionNotExact,
    #[error("substituted value is not a unit")]
    NonUnitSubstitution,
    #[error("diagram boundary is not closed")]
    NotClosed,
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("invalid braid word: {0}")]
    InvalidBraidWord(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("position {0} out of range")]
    InvalidPosition(usize),
    #[error("rotation would move a crossing onto the affine position")]
    WrapCrossing,
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
}
