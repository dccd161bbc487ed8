use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("empty generator list")]
    NoGenerators,
    #[error("element is not a member of the group")]
    NotInGroup,
    #[error("group order {order} exceeds enumeration bound {bound}")]
    OrderBound { order: String, bound: u64 },
    #[error("{0} is not an odd prime in the supported range")]
    BadPrime(u64),
    #[error("singular matrix")]
    Singular,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("genus is not a non-negative integer for type {ty} and order {order}")]
    NonIntegralGenus { ty: String, order: String },
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("parity pattern: {0}")]
    Parity(String),
    #[error("hypermap: {0}")]
    Hypermap(String),
    #[error("character table: {0}")]
    CharacterTable(String),
    #[error("count {value} is not within tolerance of an integer")]
    NonIntegralCount { value: f64 },
    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("unknown example id {0:?}")]
    UnknownExample(String),
}

pub type Result<T> = std::result::Result<T, Error>;
