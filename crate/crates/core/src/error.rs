use thiserror::Error;

use crate::linalg::Coloring;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. [`Error::name`] gives the stable
/// machine-readable identifier printed by the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("a {rows}x{cols} matrix has no maximal minors (rows > cols)")]
    BadShape { rows: usize, cols: usize },
    #[error("coloring does not use the expected number of each color")]
    ColorCountMismatch,
    #[error("matrices do not sum to the identity")]
    NotIdentitySum,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("sum of matrices is singular")]
    SingularSum,
    #[error("enumeration of {count} items exceeds cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u128 },
    #[error("color map is not surjective onto 1..={target}")]
    NotSurjective { target: usize },
    #[error("measure is not pure (ranks sum to {rank_sum}, n = {n})")]
    NotPure { rank_sum: usize, n: usize },
    #[error("matrix {index} of a pure measure is not a projection")]
    ProjectionViolation { index: usize },
    #[error("matrices are not symmetric")]
    NotSymmetric,
    #[error("matrices do not commute")]
    NotCommuting,
    #[error("root finding failed: {0}")]
    RootFindingFailure(String),
    #[error("factorization mismatch: max deviation {0:e}")]
    FactorizationMismatch(f64),
    #[error("assembled image basis is singular")]
    DegenerateImages,
    #[error("Plücker coordinates have opposite signs at columns {0}")]
    SignIncompatible(String),
    #[error("stacked row matrix is singular")]
    SingularStack,
    #[error("too many minors: {count} exceeds cap {cap}")]
    TooManyMinors { count: u128, cap: u128 },
    #[error("no Kasteleyn signing satisfies the face rule")]
    NoSigningFound,
    #[error("face {face} violates the Kasteleyn sign rule")]
    FaceRuleViolated { face: usize },
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
    #[error("graph too large for enumeration: {0}")]
    TooLarge(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("signing is not Pfaffian: permutation {witness} has a negative term")]
    NotPfaffianSigning { witness: String },
    #[error("no Pfaffian signing exists")]
    NotPfaffian,
    #[error("negative conditional probability after prefix {prefix}")]
    NegativeConditional { prefix: String },
    #[error("conditioning on a null event after prefix {prefix}")]
    ZeroDenominator { prefix: String },
    #[error("negative probability at coloring {0}")]
    NegativeProbability(Coloring),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::SizeMismatch(_) => "SizeMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::Singular => "Singular",
            Error::BadShape { .. } => "BadShape",
            Error::ColorCountMismatch => "ColorCountMismatch",
            Error::NotIdentitySum => "NotIdentitySum",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::SingularSum => "SingularSum",
            Error::EnumerationTooLarge { .. } => "EnumerationTooLarge",
            Error::NotSurjective { .. } => "NotSurjective",
            Error::NotPure { .. } => "NotPure",
            Error::ProjectionViolation { .. } => "ProjectionViolation",
            Error::NotSymmetric => "NotSymmetric",
            Error::NotCommuting => "NotCommuting",
            Error::RootFindingFailure(_) => "RootFindingFailure",
            Error::FactorizationMismatch(_) => "FactorizationMismatch",
            Error::DegenerateImages => "DegenerateImages",
            Error::SignIncompatible(_) => "SignIncompatible",
            Error::SingularStack => "SingularStack",
            Error::TooManyMinors { .. } => "TooManyMinors",
            Error::NoSigningFound => "NoSigningFound",
            Error::FaceRuleViolated { .. } => "FaceRuleViolated",
            Error::NoPerfectMatching => "NoPerfectMatching",
            Error::TooLarge(_) => "TooLarge",
            Error::Disconnected => "Disconnected",
            Error::NumericalFailure(_) => "NumericalFailure",
            Error::NotPfaffianSigning { .. } => "NotPfaffianSigning",
            Error::NotPfaffian => "NotPfaffian",
            Error::NegativeConditional { .. } => "NegativeConditional",
            Error::ZeroDenominator { .. } => "ZeroDenominator",
            Error::NegativeProbability(_) => "NegativeProbability",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Schema(_) => "SchemaViolation",
            Error::FileNotFound(_) => "FileNotFound",
            Error::Io(_) => "IoError",
        }
    }
}
