use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field extension degree {0} is outside 2..=16")]
    FieldBits(u32),
    #[error("polynomial {poly:#x} does not have degree {w}")]
    PolyDegree { poly: u32, w: u32 },
    #[error("polynomial {poly:#x} is not primitive (x has order {cycle})")]
    NotPrimitive { poly: u32, cycle: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("symbol {value:#x} is not an element of a field of size {q}")]
    SymbolRange { value: u32, q: usize },
    #[error("invalid code parameters: {0}")]
    CodeParams(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },
    #[error("invalid error pattern: {0}")]
    Pattern(String),
    #[error("singular system")]
    Singular,
    #[error("invalid simulation config: {0}")]
    SimConfig(String),
    #[error("invalid bounds input: {0}")]
    Bounds(String),
    #[error("line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, got: impl ToString) -> Error {
        Error::Dimension { expected: expected.to_string(), got: got.to_string() }
    }
}
