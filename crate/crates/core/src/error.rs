use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate sort declaration `{0}`")]
    DuplicateSort(String),
    #[error("reference to undeclared sort {0}")]
    UnboundSort(String),
    #[error("constant in `{atom}` is outside sort `{sort}`")]
    OutOfDomain { atom: String, sort: String },
    #[error("variable `{var}` in rule `{rule}` is not bound by a sorted positive body atom")]
    UnboundVariable { var: String, rule: String },
    #[error("sort `{0}` has an empty domain")]
    EmptySort(String),
    #[error("abstraction error: {0}")]
    Abstraction(String),
    #[error("mapping error: {0}")]
    Mapping(String),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("{0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
