use thiserror::Error;

/// Unified error type for the library.
///
/// Scenario errors always name the offending key so a misconfigured file can
/// be fixed without reading source code.
#[derive(Debug, Error)]
pub enum Error {
    /// A required scenario key is absent.
    #[error("scenario: missing key `{0}`")]
    MissingKey(&'static str),

    /// A scenario key is present but unusable (wrong type, out of range,
    /// violated cross-field invariant).
    #[error("scenario: key `{field}`: {reason}")]
    InvalidScenario { field: String, reason: String },

    /// The scenario document is not syntactically valid.
    #[error("scenario: {0}")]
    ScenarioSyntax(String),

    /// An MCS table failed structural validation.
    #[error("mcs table: {0}")]
    InvalidMcsTable(String),

    /// An argument is outside the mathematical domain of an operation.
    #[error("{op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// Adaptive quadrature hit its depth cap before meeting the tolerance.
    /// `best` carries the deepest estimate so callers can decide whether it
    /// is still usable.
    #[error("quadrature over [{a}, {b}] did not converge (best estimate {best:e})")]
    QuadratureNonConvergence { a: f64, b: f64, best: f64 },

    /// The link budget cannot reach the lowest MCS threshold anywhere in the
    /// cell, so no coverage radius exists.
    #[error("coverage infeasible: {0}")]
    InfeasibleCoverage(String),

    /// Conditional PRB moments were requested but the outage probability is
    /// one, leaving no served mass to condition on.
    #[error("no served probability mass: outage probability is 1")]
    EmptyServedMass,

    /// A rendered table could not be parsed back.
    #[error("table: {0}")]
    Table(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidScenario {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
