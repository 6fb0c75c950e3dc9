use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Caller supplied an argument outside the operation's domain.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A closure iteration grew past its declared bound.
    #[error("lie closure diverged: dimension {dim} exceeds bound {max_dim}")]
    Divergence { dim: usize, max_dim: usize },
    /// Eigenvalues that should be distinct fell inside the clustering gap.
    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),
    /// An internal identity that must hold to tolerance did not.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    /// A subalgebra or involution could not be built as advertised.
    #[error("construction failed: {0}")]
    Construction(String),
    /// Shipped data did not match its recorded checksum or could not be parsed.
    #[error("data integrity: {0}")]
    DataIntegrity(String),
}

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
