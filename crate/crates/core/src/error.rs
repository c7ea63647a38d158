use thiserror::Error;

/// Errors raised by the symbolic engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("cannot differentiate with respect to `{0}`: not a coordinate")]
    NotACoordinate(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("operands belong to different variable sets")]
    VariableSetMismatch,
    #[error("operands belong to different generator tables")]
    TableMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("derivation has no action entry for generator `{0}`")]
    MissingGeneratorAction(String),
    #[error("substitution for `{name}` has degree {got}, expected {expected}")]
    DegreeMismatch {
        name: String,
        expected: i64,
        got: i64,
    },
    #[error("bivector component {0} is not antisymmetric")]
    NotAntisymmetric(String),
    #[error("action length {got} does not match Lie algebra dimension {expected}")]
    ActionLength { expected: usize, got: usize },
    #[error("operation requires a Hamilton action")]
    HamiltonActionRequired,
    #[error("model fails validity check `{0}`; pass the bypass flag to build anyway")]
    InvalidModel(String),
    #[error("element mixes y and X generators; not a multivector or form")]
    MixedElement,
    #[error("chain is not a cycle: nonzero boundary in dimension {0}")]
    NotACycle(usize),
    #[error("superchain must be purely 2-dimensional for the action integral")]
    ActionChain,
    #[error("no superfield assigned to generator `{0}`")]
    UnassignedGenerator(String),
    #[error("superfield for `{name}` has intrinsic degree {got}, expected {expected}")]
    ConfigurationDegree {
        name: String,
        expected: i64,
        got: i64,
    },
    #[error("{file}:{line}: {msg}")]
    ModelFile {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
