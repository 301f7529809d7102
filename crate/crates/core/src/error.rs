use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("relation violation: {0}")]
    RelationViolation(String),
    #[error("operation requires a nonzero element")]
    ZeroElement,
    #[error("unsupported tower: {0}")]
    UnsupportedTower(String),
    #[error("`{0}` is not a Laurent layer usable here")]
    NotLaurentLayer(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("scaling factor must be nonzero")]
    ZeroScalar,
    #[error("Pfister slot must be nonzero")]
    ZeroSlot,
    #[error("entry `{0}` has no monomial-type valuation")]
    NonMonomialEntry(String),
    #[error("conic layer does not match the quaternion algebra: {0}")]
    ConicMismatch(String),
    #[error("ramification index {0} is even")]
    EvenRamification(i64),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
