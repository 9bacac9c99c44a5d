use thiserror::Error;

/// Errors raised across the crate.
///
/// Node indices carried in messages are 1-based (report convention); all
/// internal indexing is 0-based.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("graph is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("polar form undefined: r_{node} = {value:e} is not positive")]
    Domain { node: usize, value: f64 },

    #[error("trajectory diverged at t = {time}")]
    Divergence { time: f64 },

    #[error("phase of node {node} undefined at t = {time} (r = {amplitude:e})")]
    PhaseUndefined { node: usize, time: f64, amplitude: f64 },

    #[error("phase of node {node} jumped by {jump} between consecutive samples at t = {time}; sample more densely")]
    Undersampled { node: usize, time: f64, jump: f64 },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
