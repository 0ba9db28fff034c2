use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("genus must be at least {min}, got {got}")]
    Genus { min: usize, got: usize },

    #[error("truncation level must be at least {min}, got {got}")]
    Level { min: usize, got: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("not a mapping class: {0}")]
    NotMappingClass(String),

    #[error("class bounds differ: {0} vs {1}")]
    ClassMismatch(usize, usize),

    #[error("not in the Torelli group I({k}): generator {generator} moves")]
    NotTorelli { k: usize, generator: String },

    #[error("element is not integral: {0}")]
    NotIntegral(String),

    #[error("chain is not a cycle: {0}")]
    NotACycle(String),

    #[error("term {0} lies outside g ∧ l; input was not represented by a cycle")]
    OutsideTensor(String),

    #[error("resource budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: String,
        needed: usize,
        limit: usize,
    },

    #[error("calibration: {0}")]
    Calibration(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
