use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("{0}")]
    Domain(String),
    #[error("w is not vexillary: {0}")]
    NotVexillary(String),
    #[error("w is not below v in Bruhat order")]
    NotBelow,
    #[error("v is not minimal in its coset: {0}")]
    NotCosetMinimal(String),
    /// Enumeration stopped at the configured state cap.
    #[error("state cap of {cap} exceeded after {states} states")]
    StateCap { cap: usize, states: usize },
    /// The input is valid but beyond what this build will search.
    #[error("{0}")]
    Capability(String),
    /// Two independent computations disagreed, or the input is inconsistent.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Machine-readable tag used by the CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NotVexillary(_) => "not-vexillary",
            Error::NotBelow => "not-below",
            Error::NotCosetMinimal(_) => "not-coset-minimal",
            Error::StateCap { .. } => "state-cap",
            Error::Capability(_) => "capability",
            Error::Invariant(_) => "invariant",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::StateCap { .. } | Error::Capability(_) => 3,
            _ => 2,
        }
    }
}
