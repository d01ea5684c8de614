use alloc::string::String;

/// Errors raised by the toripos kernel.
///
/// Every variant has a stable machine-readable code (see [`Error::code`]) and
/// belongs to one of two classes: the input describes nothing valid
/// ([`Error::is_internal`] is false), or an internal consistency check failed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rays do not span the ambient space")]
    RaysNotSpanning,
    #[error("prescribed pairings are inconsistent")]
    Inconsistent,
    #[error("solution is not a lattice point")]
    NonIntegral,
    #[error("not a fan: {0}")]
    NotAFan(String),
    #[error("support is not complete: {0}")]
    IncompleteSupport(String),
    #[error("cone {0} is not smooth")]
    NotSmoothCone(usize),
    #[error("fan is not smooth")]
    NotSmooth,
    #[error("empty input")]
    EmptyInput,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("incompatible local data: {0}")]
    IncompatibleLocalData(String),
    #[error("invalid Klyachko data: {0}")]
    InvalidKlyachkoData(String),
    #[error("point lies outside the support of the fan")]
    PointOutsideSupport,
    #[error("vector is not a section of the given character")]
    NotASection,
    #[error("not a refinement: {0}")]
    NotARefinement(String),
    #[error("bundle is not nef")]
    NotNef,
    #[error("bundle is not ample")]
    NotAmple,
    #[error("input line bundle is not globally generated: {0}")]
    NotGloballyGeneratedInput(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroVector => "zero_vector",
            Error::RankMismatch { .. } => "rank_mismatch",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::RaysNotSpanning => "rays_not_spanning",
            Error::Inconsistent => "inconsistent",
            Error::NonIntegral => "non_integral",
            Error::NotAFan(_) => "not_a_fan",
            Error::IncompleteSupport(_) => "incomplete_support",
            Error::NotSmoothCone(_) => "not_smooth_cone",
            Error::NotSmooth => "not_smooth",
            Error::EmptyInput => "empty_input",
            Error::NotFullDimensional => "not_full_dimensional",
            Error::IncompatibleLocalData(_) => "incompatible_local_data",
            Error::InvalidKlyachkoData(_) => "invalid_klyachko_data",
            Error::PointOutsideSupport => "point_outside_support",
            Error::NotASection => "not_a_section",
            Error::NotARefinement(_) => "not_a_refinement",
            Error::NotNef => "not_nef",
            Error::NotAmple => "not_ample",
            Error::NotGloballyGeneratedInput(_) => "not_globally_generated_input",
            Error::InvalidInput(_) => "invalid_input",
            Error::InternalInconsistency(_) => "internal_inconsistency",
            Error::TheoremViolation(_) => "theorem_violation",
        }
    }

    /// True when the error signals a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInconsistency(_) | Error::TheoremViolation(_))
    }
}

pub type Result<T> = core::result::Result<T, Error>;
