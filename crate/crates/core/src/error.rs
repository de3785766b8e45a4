use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    InvalidModulus(u64),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("objects live over different base instances")]
    InstanceMismatch,
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("not exact: {0}")]
    NotExact(String),
    #[error("quiver has an oriented cycle: {0}")]
    CyclicQuiver(String),
    #[error("quiver is not left-rooted (filtration stalls at {stalled:?})")]
    NotLeftRooted { stalled: Vec<String> },
    #[error("quiver is not right-rooted (filtration stalls at {stalled:?})")]
    NotRightRooted { stalled: Vec<String> },
    #[error("oracle soundness failure at {context}: {reason}")]
    OracleSoundness { context: String, reason: String },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn oracle(context: impl Into<String>, reason: impl Into<String>) -> Error {
        Error::OracleSoundness { context: context.into(), reason: reason.into() }
    }
}
