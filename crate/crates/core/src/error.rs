use thiserror::Error;

/// Where a truncated infinite process failed to settle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    /// Power series of a (p,q)-exponential.
    Series,
    /// Jackson sum towards the origin (j -> +inf).
    SmallNodeTail,
    /// Jackson sum towards infinity (j -> -inf).
    LargeNodeTail,
    /// Sum over the Baskakov basis index k.
    BasisSum,
}

impl core::fmt::Display for Site {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            Site::Series => "exponential series",
            Site::SmallNodeTail => "small-node tail",
            Site::LargeNodeTail => "large-node tail",
            Site::BasisSum => "basis sum",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("{site} did not converge within {limit} terms")]
    NonConvergence { site: Site, limit: usize },
    #[error("growth bound violated at x = {at}: |f(x)| = {value} > {bound}")]
    GrowthViolation { at: f64, value: f64, bound: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
