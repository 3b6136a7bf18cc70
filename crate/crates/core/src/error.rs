use std::fmt;

use thiserror::Error;

/// Which smallness condition on the strip height was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cap {
    /// Strict touching of the graph by hyperbolas.
    Touch,
    /// Contraction of the contact-offset equation.
    Banach,
}

impl fmt::Display for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cap::Touch => f.write_str("delta_touch"),
            Cap::Banach => f.write_str("delta_banach"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid spline: {0}")]
    Validation(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("delta = {delta} is not strictly below {cap} = {cap_value}")]
    Inadmissible { cap: Cap, delta: f64, cap_value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contact solve at x = {x}, height = {height} did not converge in {iterations} iterations")]
    NonConvergence { x: f64, height: f64, iterations: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("at grid point (x = {x}, d = {d}): {source}")]
    AtPoint {
        x: f64,
        d: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
