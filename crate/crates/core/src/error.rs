use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the operation is defined.
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("exponents must be strictly increasing (violated at index {index})")]
    NotIncreasing { index: usize },

    #[error("duplicate exponent {exponent}")]
    DuplicateExponent { exponent: f64 },

    /// Inter-block ratios cannot be bracketed by [q, q^{2N}] with q > 1.
    #[error("ratio collapse at block {block}: ratio {ratio} is below the required {required}")]
    RatioCollapse { block: usize, ratio: f64, required: f64 },

    #[error("block {block} has {size} exponents, more than the cap {cap}")]
    BlockTooLarge { block: usize, size: usize, cap: usize },

    #[error("invalid block layout: {0}")]
    BlockLayout(String),

    #[error("exponent {exponent} does not belong to the spectrum")]
    Membership { exponent: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Quadrature or series approximation did not reach the requested tolerance.
    #[error("accuracy not reached: estimate {estimate} with error bound {error_bound}")]
    Accuracy { estimate: f64, error_bound: f64 },

    /// The finite spectrum is too short for the requested evaluation point.
    #[error("truncation dominates at t = {t}: lambda_max * (1 - t) = {product} < 10")]
    Truncation { t: f64, product: f64 },

    /// Malformed spec file; the message names the offending field.
    #[error("invalid spec file: {0}")]
    Parse(String),

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
}

pub(crate) fn ensure_domain(ok: bool, name: &'static str, value: f64, expected: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain { name, value, expected })
    }
}
