use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("element `{0}` declared twice")]
    DuplicateElement(String),
    #[error("bound `{0}` is not a declared element")]
    BoundNotElement(String),
    #[error("element index out of range")]
    IndexOutOfRange,
    #[error("empty right-hand side in one-sided entailment")]
    EmptyRhs,
    #[error("assignment has no image for `{0}`")]
    IncompleteAssignment(String),
    #[error("relation pair references unknown carrier member {0}")]
    UnknownCarrierMember(usize),
}

/// Errors from the term and formula readers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("`{0}` requires a bounded base")]
    MissingBound(&'static str),
}

impl SyntaxError {
    pub(crate) fn at(offset: usize, message: impl Into<String>) -> Self {
        SyntaxError::Parse {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("base set must declare bounds 0 and 1")]
    Unbounded,
    #[error("relation is {found}, engine needs {expected}")]
    WrongArity {
        expected: &'static str,
        found: &'static str,
    },
    #[error("entailment disagrees with the order on singletons: {lhs} |- {rhs} is {entails} but {lhs} <= {rhs} is {leq}")]
    SingletonMismatch {
        lhs: String,
        rhs: String,
        entails: bool,
        leq: bool,
    },
    #[error("relation and engine refer to different base sets")]
    BaseMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("malformed node at {path}: {message}")]
    Malformed { path: String, message: String },
    #[error("rejected node at {path}: {message}")]
    Rejected { path: String, message: String },
    #[error("unsupported document version `{0}`")]
    Version(String),
    #[error("document error at offset {offset}: {message}")]
    Document { offset: usize, message: String },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
