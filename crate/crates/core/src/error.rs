use thiserror::Error;

/// Errors raised by the workbench.
///
/// Resource exhaustion is kept separate from mathematical failure so callers
/// can tell a blown budget from a false statement.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid ring declaration: {0}")]
    InvalidRing(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("congruence violated: {0}")]
    Congruence(String),
    #[error("identity `{equation}` fails; defect = {defect}")]
    Identity { equation: String, defect: String },
    #[error("search budget exhausted: {0}")]
    SearchExhausted(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("associated-prime oracle omission: {0}")]
    OracleOmission(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("ring `{0}` is not registered with the model")]
    UnregisteredRing(String),
    #[error("class is not in filtration step F^{0}")]
    NotInFiltration(usize),
    #[error("truncation {requested} exceeds the model's lambda table (bound {bound})")]
    Truncation { requested: usize, bound: usize },
    #[error("fixture error: {0}")]
    Fixture(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }
}
