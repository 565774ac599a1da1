use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A computed intersection point left the positive octant. Only happens
    /// when an instance sits on the edge of the feasibility tests.
    #[error("inconsistent geometry: {0}")]
    InconsistentGeometry(String),

    #[error("power layout does not match scenario {0}")]
    ScenarioMismatch(&'static str),

    #[error("rate table has {rows} rows but only {cols} columns")]
    Dimension { rows: usize, cols: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}
