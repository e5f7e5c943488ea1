use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator lies in the maximal ideal")]
    DenominatorInMaximalIdeal,
    #[error("xi is undefined for zero input")]
    ZeroInput,
    #[error("xi is unbounded: numerator vanishes modulo p^{0}")]
    XiUnbounded(u32),
    #[error("invalid mixed characteristic: {0}")]
    InvalidMixedChar(String),
    #[error("no ancestor of {n} has digit {s} equal to zero")]
    NoSuchAncestor { n: u64, s: i64 },
    #[error("set {set:?} is not {dir}-admissible for {n}")]
    NotAdmissible { set: Vec<u32>, n: u64, dir: &'static str },
    #[error("sets are not nested")]
    NotNested,
    #[error("boundary mismatch: {0} vs {1}")]
    BoundaryMismatch(usize, usize),
    #[error("zero morphism has no through degree")]
    ZeroMorphism,
    #[error("cannot close {k} strands of {n}")]
    BadStrandCount { n: usize, k: usize },
    #[error("coefficient is not local: {0}")]
    CoefficientNotLocal(String),
    #[error("parity mismatch between {0} and {1}")]
    ParityMismatch(usize, usize),
    #[error("idempotent family is not unipotent at {0}")]
    FamilyNotUnipotent(usize),
    #[error("tableaux have different shapes")]
    ShapeMismatch,
    #[error("0 is not in Lambda_0 when delta vanishes")]
    NotInLambdaZero,
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
