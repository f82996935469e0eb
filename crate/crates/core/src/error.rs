use thiserror::Error;

/// Errors raised by the sensing workbench.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A range of zero between the array and an evaluation point.
    #[error("singular range: point coincides with the array origin")]
    SingularRange,

    /// No secondary user receives any signal, so weights are undefined.
    #[error("degenerate scenario: {0}")]
    DegenerateScenario(String),

    /// Array shapes disagree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A truncated series did not certify its tail within the term budget.
    #[error("series did not converge after {terms} terms (residual mass {residual:e})")]
    Convergence { terms: usize, residual: f64 },

    /// A numerical kernel failed (eigen-solver, determinant, overflow).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Threshold bracketing exhausted its doubling budget.
    #[error("threshold bracket not found: {0}")]
    Bracket(String),
}

impl Error {
    /// Short machine-readable tag used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::SingularRange => "singular-range",
            Error::DegenerateScenario(_) => "degenerate-scenario",
            Error::Dimension(_) => "dimension",
            Error::Convergence { .. } => "convergence",
            Error::Numerical(_) => "numerical",
            Error::Bracket(_) => "bracket",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
