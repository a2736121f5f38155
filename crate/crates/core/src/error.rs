use thiserror::Error;

/// Error taxonomy shared by all modules.
///
/// `Domain` means the inputs are outside the supported range, `Precision`
/// means an evaluation could not be certified at the requested tolerance
/// even after escalation, `Construction` means an internally assembled
/// object failed a structural check (convention mismatch), `Degenerate`
/// means a generically nonzero quantity vanished numerically.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision failure: {0}")]
    Precision(String),
    #[error("construction failure: {0}")]
    Construction(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
