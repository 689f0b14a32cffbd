//! Error type shared by the engine.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch in {context}: expected {expected:?}, found {found:?}")]
    ShapeMismatch { context: String, expected: (usize, usize), found: (usize, usize) },
    #[error("duplicate basis label in degree {degree}")]
    DuplicateLabel { degree: i32 },
    #[error("differential does not square to zero")]
    NotAComplex,
    #[error("map is not a chain map")]
    NotAChainMap,
    #[error("maps do not share a target")]
    BaseMismatch,
    #[error("elements live over different carriers or coefficient algebras")]
    CarrierMismatch,
    #[error("expected degree {expected}, found {found}")]
    DegreeError { expected: i32, found: String },
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("window overflow: {0}")]
    WindowOverflow(String),
    #[error("window {0} is too small")]
    BadWindow(i64),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("invalid semicosimplicial dgLa: {0}")]
    InvalidSc(String),
    #[error("objects are defined on different covers")]
    CoverMismatch,
    #[error("not a first-order Maurer-Cartan element")]
    NotFirstOrderMC,
    #[error("dgLa axiom violated: {0}")]
    AxiomViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("nilpotency order {0} is not supported")]
    UnsupportedOrder(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("cohomology not stable at window {window}")]
    WindowNotStable { window: i64 },
    #[error("internal check failed: {0}")]
    InternalCheck(String),
    #[error("k = {k} exceeds h0 = {h0}")]
    KTooLarge { k: usize, h0: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

impl Error {
    /// Process exit code for a failure of this kind: 1 input, 2 hypothesis,
    /// 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HypothesisViolated(_) => 2,
            Error::InternalCheck(_) | Error::NotAComplex | Error::NotAChainMap | Error::AxiomViolation(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
