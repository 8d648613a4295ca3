use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("domain error in {func}: argument {arg} outside (0, inf)")]
    Domain { func: &'static str, arg: f64 },

    #[error("{field} exceeds the f64 range at x = {x}")]
    Overflow { field: &'static str, x: usize },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("index {x} out of range (max {max})")]
    OutOfRange { x: usize, max: usize },

    #[error("path length {n} exceeds the enumeration cap {cap}")]
    EnumerationCap { n: u32, cap: u32 },

    #[error("no asymptotic regime for {what}")]
    NoRegime { what: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
