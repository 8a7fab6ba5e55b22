use thiserror::Error;

/// Which necessary condition of the conjugation construction failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Necessity {
    /// Fewer than two parts besides `P0`.
    TooFewParts,
    /// Part `index` (1-based) has larger rank than `P0`.
    PartExceedsP0 { index: usize },
    /// `rank(P0) > n - rank(P0)`.
    P0ExceedsComplement,
}

impl std::fmt::Display for Necessity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Necessity::TooFewParts => write!(f, "at least two parts besides P0 are required"),
            Necessity::PartExceedsP0 { index } => {
                write!(f, "part {index} has larger rank than P0")
            }
            Necessity::P0ExceedsComplement => write!(f, "rank(P0) exceeds rank(I - P0)"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("matrix is not normal (residual {0:.3e})")]
    NotNormal(f64),
    #[error("not a projection: {0}")]
    NotProjection(String),
    #[error("eigenvalue clusters too close to separate (gap {0:.3e})")]
    ClusterAmbiguous(f64),
    #[error("singular-value margin too small to certify a dimension (margin {margin:.3e}, gap ratio {ratio:.3e})")]
    MarginTooSmall { margin: f64, ratio: f64 },
    #[error("projections have different ranks ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error("projections are not orthogonal (residual {0:.3e})")]
    NotOrthogonal(f64),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("invalid rank list: {0}")]
    InvalidRanks(String),
    #[error("necessary condition violated: {0}")]
    NecessityViolated(Necessity),
    #[error("projections do not form a partition of the identity: {0}")]
    PartitionInvalid(String),
    #[error("corner generators do not generate the corner: {0}")]
    CornerGenerationFailed(String),
    #[error("projection is not in the MASA (residual {0:.3e})")]
    PNotInMasa(f64),
    #[error("rank condition violated: rank {rank} exceeds n/2 with n = {n}")]
    RankCondition { rank: usize, n: usize },
    #[error("input is a scalar multiple of the identity")]
    ScalarInput,
    #[error("k = {k} exceeds n/2 with n = {n}")]
    KTooLarge { n: usize, k: usize },
    #[error("partition hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("block shape infeasible: {0}")]
    ShapeInfeasible(String),
    #[error("spectrum too clustered for a stable split: {0}")]
    SpectrumTooClustered(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("word algebra did not stabilize within {0} levels")]
    NotStabilized(usize),
    #[error("irreducibility oracles disagree: commutant dim {commutant_dim}, word dim {word_dim}")]
    OracleDisagreement {
        commutant_dim: usize,
        word_dim: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
