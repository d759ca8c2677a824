use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series is empty")]
    Empty,
    #[error("series has {len} observations, at least {min} required")]
    TooShort { len: usize, min: usize },
    #[error("observation {index} is not finite")]
    NonFinite { index: usize },
    #[error("index {index} outside the valid range [1, {max}]")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("significance level {0} must lie strictly between 0 and 1")]
    InvalidAlpha(f64),
    #[error("number of bootstrap resamples must be at least 1")]
    NoResamples,
    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("prewhitening inapplicable: near-unit-root correction (rho* = {rho_star})")]
    NearUnitRoot { rho_star: f64 },
}

impl Error {
    /// True for failures caused by the data itself rather than by arguments.
    pub fn is_degenerate_data(&self) -> bool {
        matches!(self, Error::Degenerate(_) | Error::NearUnitRoot { .. })
    }
}
