//! Seeded random block polynomials and order-independent empirical brackets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::MuntzPolynomial;
use crate::spectrum::BlockSpectrum;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream for one trial; depends only on `(seed, trial)`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial)))
}

pub fn gaussian_coefficients(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// I.i.d. standard normal coefficient on every exponent of the spectrum.
pub fn random_polynomial(spectrum: &BlockSpectrum, rng: &mut ChaCha8Rng) -> Result<MuntzPolynomial> {
    let coeffs = gaussian_coefficients(rng, spectrum.len());
    MuntzPolynomial::from_spectrum(spectrum, &coeffs)
}

/// Random polynomial supported in block `k`.
pub fn random_block_polynomial(spectrum: &BlockSpectrum, k: usize, rng: &mut ChaCha8Rng) -> Result<MuntzPolynomial> {
    let block = spectrum.block(k);
    let coeffs = gaussian_coefficients(rng, block.len());
    MuntzPolynomial::new(block.iter().copied().zip(coeffs))
}

/// Extremes of a sampled statistic with the trials attaining them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub min: f64,
    pub max: f64,
    pub argmin: u64,
    pub argmax: u64,
    pub samples: usize,
    /// Trials dropped because the sample was degenerate (e.g. a zero block).
    pub skipped: Vec<u64>,
}

impl Bracket {
    fn from_values(values: &[(u64, Option<f64>)]) -> Result<Self> {
        let mut bracket = Bracket {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            argmin: 0,
            argmax: 0,
            samples: 0,
            skipped: Vec::new(),
        };
        for &(trial, value) in values {
            match value {
                Some(v) => {
                    bracket.samples += 1;
                    if v < bracket.min {
                        bracket.min = v;
                        bracket.argmin = trial;
                    }
                    if v > bracket.max {
                        bracket.max = v;
                        bracket.argmax = trial;
                    }
                }
                None => bracket.skipped.push(trial),
            }
        }
        if bracket.samples == 0 {
            return Err(Error::Degenerate("every sample was degenerate"));
        }
        Ok(bracket)
    }
}

/// A bracket at `trials` samples and at `2 trials`, where the smaller run is
/// the prefix of the larger one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stability {
    pub seed: u64,
    pub base: Bracket,
    pub doubled: Bracket,
    pub drift_min: f64,
    pub drift_max: f64,
}

impl Stability {
    pub fn is_stable(&self, tol: f64) -> bool {
        self.drift_min < tol && self.drift_max < tol
    }
}

fn relative_drift(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn evaluate<F>(seed: u64, range: std::ops::Range<u64>, statistic: &F) -> Result<Vec<(u64, Option<f64>)>>
where
    F: Fn(u64, &mut ChaCha8Rng) -> Result<f64> + Sync,
{
    range
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            match statistic(trial, &mut rng) {
                Ok(v) if v.is_finite() => Ok((trial, Some(v))),
                Ok(_) | Err(Error::Degenerate(_)) => Ok((trial, None)),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Bracket of `statistic` over `trials` seeded samples, evaluated in parallel.
/// Degenerate or non-finite samples are skipped and listed.
pub fn empirical_bracket<F>(trials: u64, seed: u64, statistic: F) -> Result<Bracket>
where
    F: Fn(u64, &mut ChaCha8Rng) -> Result<f64> + Sync,
{
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    Bracket::from_values(&evaluate(seed, 0..trials, &statistic)?)
}

/// Brackets at `trials` and `2 trials` samples with their relative drift.
pub fn stability_scan<F>(trials: u64, seed: u64, statistic: F) -> Result<Stability>
where
    F: Fn(u64, &mut ChaCha8Rng) -> Result<f64> + Sync,
{
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let values = evaluate(seed, 0..2 * trials, &statistic)?;
    let base = Bracket::from_values(&values[..trials as usize])?;
    let doubled = Bracket::from_values(&values)?;
    Ok(Stability {
        seed,
        drift_min: relative_drift(base.min, doubled.min),
        drift_max: relative_drift(base.max, doubled.max),
        base,
        doubled,
    })
}
