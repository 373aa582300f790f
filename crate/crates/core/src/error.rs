use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field configuration: {0}")]
    InvalidField(String),
    #[error("exponent {beta} is outside the lattice (1/{denominator})Z")]
    OffLattice { beta: String, denominator: u32 },
    #[error("type mismatch: cannot add quasi-polynomials of types {0} and {1}")]
    TypeMismatch(String, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not log-free: {0}")]
    NotLogFree(String),
    #[error("zero input: {0}")]
    ZeroInput(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("exact division failed: {0}")]
    Division(String),
    #[error("singular Wronskian: {0}")]
    Singular(String),
    #[error("not regularizable in type: {0}")]
    NotRegularizableInType(String),
    #[error("not in the kernel of the operator: residual {0}")]
    NotInKernel(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("internal identity violated: {0}")]
    Assertion(String),
}

pub type Result<T> = std::result::Result<T, Error>;
