use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("weight vector has no nonzero entry")]
    ZeroWeight,

    #[error("valuation system is empty")]
    EmptySystem,

    #[error("variable index {0} is invisible to every valuation")]
    ZeroColumn(usize),

    #[error("germ does not vanish at the origin")]
    UnitGerm,

    #[error("valuation {0} is not centred at the maximal ideal; the oracle needs all weights positive")]
    OutOfOracleScope(usize),

    #[error("Newton polyhedron has no compact facet")]
    NoCompactFacet,

    #[error("factor (1 - t^0) is not allowed")]
    ZeroExponentFactor,

    #[error("substitution sends a factor to (1 - t^0)")]
    DegenerateSubstitution,

    #[error("no numerator factor dominates every other factor")]
    NoDominantFactor,

    #[error("componentwise-maximal numerator factor is not unique")]
    DominantNotUnique,

    #[error("dominant factor {dominant:?} ties with factor {other:?} in some component")]
    DominanceTie { dominant: Vec<u32>, other: Vec<u32> },

    #[error("halfspace region is empty")]
    EmptyRegion,

    #[error("malformed halfspace system: {0}")]
    MalformedHalfspaces(String),

    #[error("halfspace region has a non-lattice vertex {0}")]
    NonLatticeVertex(String),

    #[error("invalid resolution graph: {0}")]
    InvalidGraph(String),

    #[error("intersection matrix is singular")]
    SingularMatrix,

    #[error("intersection matrix is not negative definite (leading minor {0})")]
    NotNegativeDefinite(usize),

    #[error("intersection matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),

    #[error("non-integral result: {0}")]
    NonIntegral(String),

    #[error("negative result: {0}")]
    Negative(String),

    #[error("graph has no Rees vertex (no arrows)")]
    NoReesVertex,

    #[error("count is infinite: valuation {0} is not positive on every generator")]
    InfiniteCount(usize),

    #[error("invalid semigroup presentation: {0}")]
    InvalidPresentation(String),

    #[error("truncation {trunc:?} is below the required level {required:?}")]
    TruncationTooSmall { trunc: Vec<i64>, required: Vec<i64> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
