use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size must be at least {min}, got {got}")]
    SizeTooSmall { min: usize, got: usize },

    #[error("size {got} exceeds the supported maximum of {max}")]
    SizeTooLarge { max: usize, got: usize },

    #[error("size {n} is above the enumeration ceiling {ceiling}")]
    AboveCeiling { n: usize, ceiling: usize },

    #[error("leaf set must not be empty")]
    EmptyLeafSet,

    #[error("leaf index {index} out of range for a tree with {size} leaves")]
    LeafOutOfRange { index: usize, size: usize },

    #[error("tree sizes differ: left has {left} leaves, right has {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("matching is not a bijection on {size} leaves")]
    NotBijection { size: usize },

    #[error("tree is neither strippable nor a caterpillar")]
    NotStrippable,

    #[error("invalid multideck: {0}")]
    InvalidMultideck(String),

    #[error("no tree of size {size} has this multideck")]
    NoTreeMatches { size: usize },

    #[error("{count} trees of size {size} share this multideck")]
    MultipleTreesMatch { size: usize, count: usize },

    #[error("inconsistent multideck: {0}")]
    Inconsistent(String),

    #[error("multideck is shared by {count} tanglegrams of size {size}")]
    Ambiguous { size: usize, count: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }
}
