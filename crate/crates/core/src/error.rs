//! Error type shared across the toolkit.

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Array geometry parameters are out of range.
    #[error("invalid array geometry: {0}")]
    InvalidGeometry(String),

    /// Source set parameters are out of range.
    #[error("invalid source set: {0}")]
    InvalidSources(String),

    /// Scenario-level parameters are inconsistent.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// An angle fell outside the visible region (-90 deg, +90 deg).
    #[error("angle {0} deg is outside the open interval (-90, 90)")]
    AngleOutOfRange(f64),

    /// A matrix expected to be Hermitian was not, beyond tolerance.
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,

    /// A matrix was singular to working precision.
    #[error("matrix is singular to working precision")]
    Singular,

    /// A least-squares system did not have full column rank.
    #[error("least-squares system is rank deficient")]
    RankDeficient,

    /// An iterative eigenvalue or root-finding routine failed to converge.
    #[error("{0} failed to converge")]
    Convergence(&'static str),

    /// Generic precondition violation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Half-power width could not be measured: the main lobe never decays
    /// to half of its peak inside the scanned range.
    #[error("lobe wider than scan range")]
    LobeWiderThanScanRange,

    /// A metric required estimates but every trial was excluded.
    #[error("no usable trials: {0}")]
    EmptyEnsemble(String),

    /// Filesystem problem while writing or reading artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Configuration file could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
