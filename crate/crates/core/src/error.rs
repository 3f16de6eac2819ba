use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    Shape(String),

    #[error("not a Latin square: {line} {index} repeats element {value}")]
    NotLatinSquare {
        line: &'static str,
        index: usize,
        value: usize,
    },

    #[error("no identity element")]
    NoIdentity,

    #[error("element {0} has no two-sided inverse")]
    MissingInverse(usize),

    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("subgroup is not contained in the ambient subgroup")]
    NotNested,

    #[error("{0} does not divide the group order")]
    NoSuchPrime(usize),

    #[error("group is not solvable")]
    NotSolvable,

    #[error("sequence does not generate the subgroup")]
    NotGenerating,

    #[error("element {0} is not uniquely a product of the two decomposition factors")]
    ProductMismatch(usize),

    #[error("map is not an isomorphism of augmented pairs: {0}")]
    NotPairIso(String),

    #[error("malformed encoding: {0}")]
    MalformedEncoding(String),

    #[error("witness failed verification: {0}")]
    WitnessVerificationFailed(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
