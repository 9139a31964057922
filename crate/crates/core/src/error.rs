use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("class of rank {found} does not belong to lattice `{lattice}` of rank {expected}")]
    RankMismatch {
        lattice: String,
        expected: usize,
        found: usize,
    },

    #[error(
        "lattice `{lattice}`: gram matrix is not square ({rows} rows, row {row} has {len} entries)"
    )]
    NotSquare {
        lattice: String,
        rows: usize,
        row: usize,
        len: usize,
    },

    #[error("lattice `{lattice}`: gram matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { lattice: String, i: usize, j: usize },

    #[error("lattice `{lattice}`: {labels} basis labels for rank {rank}")]
    LabelCount {
        lattice: String,
        labels: usize,
        rank: usize,
    },

    #[error("lattice `{lattice}`: stored c1^2 = {stored} but K.K = {computed}")]
    CanonicalMismatch {
        lattice: String,
        stored: String,
        computed: String,
    },

    #[error("lattice `{lattice}`: c1^2 + c2 = {sum} is not divisible by 12 (Noether)")]
    NoetherIntegrality { lattice: String, sum: String },

    #[error("blowup count must be non-negative, got {0}")]
    NegativeBlowupCount(i64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("trivial normal bundle required: D.D = {d_sq}")]
    NontrivialNormalBundle { d_sq: String },

    #[error("genus of the branch divisor is not an integer: {0}")]
    NonIntegralGenus(String),

    #[error("unmet hypotheses: {}", .0.join("; "))]
    UnmetHypotheses(Vec<String>),

    #[error("the multiplicity must be finite for this operation")]
    InfiniteMultiplicity,

    #[error("value {0} is not an integer")]
    NonIntegral(String),

    #[error("the zero polynomial has no contact order")]
    ZeroPolynomial,

    #[error("inner series of a composition must have zero constant term (found {0})")]
    NonzeroConstantTerm(String),

    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),

    #[error("truncation order must be positive")]
    ZeroTruncation,

    #[error("both components of the germ vanish identically mod t^{0}")]
    DegenerateGerm(usize),
}
