use thiserror::Error;

/// Errors raised by graph ingestion and by the algebraic operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed graph object: {0}")]
    Json(String),

    #[error("edge endpoint `{0}` is not a declared vertex")]
    UndeclaredVertex(String),

    #[error("vertex `{0}` is declared twice")]
    DuplicateVertex(String),

    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),

    #[error("edge {{{0}, {1}}} is listed twice")]
    DuplicateEdge(String, String),

    #[error("`{0}` is not a valid vertex name")]
    InvalidName(String),

    #[error("graphs are limited to {max} vertices, got {got}")]
    TooManyVertices { max: usize, got: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("a relation needs at least one element")]
    EmptyRelation,

    #[error("translation by {0} is undefined: its inverse is not in the point")]
    DomainViolation(String),

    #[error("`{0}` does not name a component of the opposite graph")]
    UnknownComponent(String),

    #[error("{count} components exceed the enumeration bound {bound}")]
    BoundExceeded { count: usize, bound: usize },

    #[error("the graph has non-trivial centre (isolated vertices of the opposite graph: {0:?})")]
    NonTrivialCentre(Vec<String>),

    #[error("the two ideals are equal; nothing separates them")]
    EqualIdeals,
}

pub type Result<T> = std::result::Result<T, Error>;
