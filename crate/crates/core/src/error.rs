use thiserror::Error;

/// Errors raised across the field, group, scheme and codec layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("element is not a quadratic residue")]
    NotASquare,

    #[error("bit length {0} is too small (need at least 8)")]
    BitLengthTooSmall(u64),

    #[error("modulus is too large for this operation")]
    TooLarge,

    #[error("modulus is not a usable odd prime")]
    BadModulus,

    #[error("point is not on the conic")]
    NotOnConic,

    #[error("scale factor does not satisfy d = d' s^2")]
    BadScale,

    #[error("parameter m satisfies m^2 = d and has no point")]
    SingularParameter,

    #[error("message does not fit into the scheme's plaintext capacity")]
    MessageTooLarge,

    #[error("no padding counter produced an encodable message")]
    EncodingFailure,

    #[error("key or ciphertext belongs to a different scheme")]
    SchemeMismatch,

    #[error("invalid key or ciphertext: {0}")]
    InvalidValue(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
