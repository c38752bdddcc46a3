use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Argument lies outside the domain where the quantity is defined
    /// (for example at or beyond a Gamma pole).
    #[error("domain error: {0}")]
    Domain(String),

    /// Argument lies outside the range the implementation supports.
    #[error("{what} = {value} outside supported range [{lo}, {hi}]")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error(
        "quadrature did not converge on [{a}, {b}]: estimate {value:e}, error {error:e} \
         after {intervals} intervals"
    )]
    Quadrature {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
        intervals: usize,
    },

    /// An exact identity that must hold by construction was violated.
    #[error("identity violated: {0}")]
    Identity(String),
}
