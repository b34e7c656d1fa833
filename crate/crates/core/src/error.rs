use crate::polyalg::Polynomial;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("the zero polynomial has no well-defined (1+x) multiplicity or mode")]
    ZeroPolynomial,

    #[error("coefficient {index} is negative; shape analysis needs a counting sequence")]
    NegativeCoefficient { index: usize },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid caterpillar spec: {0}")]
    InvalidSpec(String),

    #[error("tree has {vertices} vertices, above the brute-force cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },

    #[error("brute-force cap {0} exceeds the hard ceiling of {max}", max = crate::treegraph::MAX_CAP)]
    CapTooLarge(usize),

    #[error("m = {0:?} is not non-decreasing")]
    NotMonotone(Vec<usize>),

    #[error(
        "factoring p_{n} gave (1+x)^{found_k} * {found_q}, the closed form predicts (1+x)^{expected_k} * {expected_q}"
    )]
    Integrity {
        n: usize,
        expected_k: usize,
        found_k: usize,
        expected_q: Polynomial,
        found_q: Polynomial,
    },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("cannot parse {0:?} as an integer coefficient")]
    ParseCoefficient(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
