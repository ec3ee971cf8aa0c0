use thiserror::Error;

/// Failures raised by the certified pipeline.
///
/// Variants whose [`Error::is_precision_related`] returns `true` mean the
/// working precision was not enough to decide something; drivers retry them
/// at a higher precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial is not a square: residual coefficient {index} is certified nonzero")]
    NotASquare { index: usize },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("undecidable at {precision} bits: {what}")]
    Undecidable { what: String, precision: usize },

    #[error("incidence violation: {0}")]
    IncidenceViolation(String),

    #[error("conics coincide projectively")]
    IdenticalConics,

    #[error("conic is singular (determinant certified zero)")]
    SingularConic,

    #[error("dual conics are not transversal; bitangents have multiplicity")]
    DegenerateDuals,

    #[error("transverse did not close within {max_steps} steps")]
    NoClosure { max_steps: usize },

    #[error("malformed transverse: {0}")]
    MalformedTransverse(String),

    #[error("closure defect has the same sign at both ends of the bracket ({lo:e}, {hi:e})")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("validation failed: {0}")]
    ValidationFailed(String),

    #[error("unexpected degeneracy: {0}")]
    UnexpectedDegeneracy(String),

    #[error("gluing data belong to different arrangements")]
    ArrangementMismatch,

    #[error("branch curve meets component {component} with odd multiplicity")]
    OddMultiplicity { component: usize },

    #[error("branch curve passes through node {node}")]
    SupportHitsNode { node: usize },

    #[error("gluing sign at node {node} could not be certified")]
    SignUncertified { node: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("arrangement is not nodal: {0}")]
    NotNodal(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Whether a retry at higher working precision may succeed.
    pub fn is_precision_related(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted(_) | Error::Undecidable { .. } | Error::SignUncertified { .. }
        )
    }

    pub(crate) fn undecidable(what: impl Into<String>, precision: usize) -> Self {
        Error::Undecidable {
            what: what.into(),
            precision,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
