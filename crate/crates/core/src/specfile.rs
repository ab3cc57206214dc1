//! JSON spec files for spectra, measures, polynomials and embedding problems.
//!
//! Every parser validates through the type's own constructor, so a file that
//! parses is a valid object. Error messages name the offending field.

use serde::de::DeserializeOwned;

use crate::embeddings::EmbeddingProblem;
use crate::error::{Error, Result};
use crate::measure::MeasureSpec;
use crate::poly::MuntzPolynomial;
use crate::spectrum::BlockSpectrum;

/// Largest spec file accepted, in bytes.
pub const MAX_SPEC_BYTES: usize = 1 << 20;

fn parse<T: DeserializeOwned>(what: &str, text: &str) -> Result<T> {
    if text.len() > MAX_SPEC_BYTES {
        return Err(Error::Parse(format!(
            "{what}: file of {} bytes exceeds {MAX_SPEC_BYTES}",
            text.len()
        )));
    }
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn parse_spectrum(text: &str) -> Result<BlockSpectrum> {
    parse("spectrum", text)
}

pub fn parse_measure(text: &str) -> Result<MeasureSpec> {
    parse("measure", text)
}

pub fn parse_polynomial(text: &str) -> Result<MuntzPolynomial> {
    parse("polynomial", text)
}

/// `{"spectrum": …, "measure": …, "p": …, "beta": …, "rhs_alpha": …}`.
pub fn parse_problem(text: &str) -> Result<EmbeddingProblem> {
    parse("problem", text)
}
