//! Quasi-lacunary exponent sequences with an explicit block partition.
//!
//! Blocks are stored as start indices into the exponent list. The ratio test
//! between consecutive blocks compares their first exponents (block anchors):
//! a valid spectrum has `q <= anchor[k+1] / anchor[k] <= q^{2N}` with `q > 1`,
//! where `N` bounds every block size.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_domain, Error, Result};

/// Upper bound on the number of exponents in any generated spectrum.
pub const MAX_EXPONENTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumSpec")]
pub struct BlockSpectrum {
    exponents: Vec<f64>,
    block_starts: Vec<usize>,
    ratio_lower: f64,
    block_cap: usize,
}

/// Lacunarity parameters returned by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lacunarity {
    /// Largest `q` with every inter-block ratio in `[q, q^{2N}]`.
    pub q: f64,
    /// Largest block size.
    pub n: usize,
}

fn check_exponents(exponents: &[f64]) -> Result<()> {
    if exponents.is_empty() {
        return Err(Error::Degenerate("empty exponent list"));
    }
    if exponents.len() > MAX_EXPONENTS {
        return Err(Error::BlockLayout(format!(
            "{} exponents exceed the limit of {MAX_EXPONENTS}",
            exponents.len()
        )));
    }
    for (i, &x) in exponents.iter().enumerate() {
        ensure_domain(x > 0.0 && x.is_finite(), "exponent", x, "0 < exponent < inf")?;
        if i > 0 && x <= exponents[i - 1] {
            return Err(if x == exponents[i - 1] {
                Error::DuplicateExponent { exponent: x }
            } else {
                Error::NotIncreasing { index: i }
            });
        }
    }
    Ok(())
}

fn check_starts(len: usize, block_starts: &[usize]) -> Result<()> {
    match block_starts.first() {
        Some(0) => {}
        _ => return Err(Error::BlockLayout("first block must start at index 0".into())),
    }
    for pair in block_starts.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::BlockLayout(format!(
                "block starts must increase ({} then {})",
                pair[0], pair[1]
            )));
        }
    }
    if let Some(&last) = block_starts.last() {
        if last >= len {
            return Err(Error::BlockLayout(format!(
                "block start {last} is past the last exponent"
            )));
        }
    }
    Ok(())
}

fn block_sizes(len: usize, block_starts: &[usize]) -> impl Iterator<Item = usize> + '_ {
    block_starts
        .iter()
        .enumerate()
        .map(move |(k, &start)| block_starts.get(k + 1).copied().unwrap_or(len) - start)
}

/// Checks the block-size and inter-block ratio constraints and returns the
/// attained `(q, N)`: `N` is the largest block and `q` the smallest anchor ratio.
///
/// A single block has no ratio constraint; `q` is then reported as infinity.
pub fn validate(exponents: &[f64], block_starts: &[usize]) -> Result<Lacunarity> {
    check_exponents(exponents)?;
    check_starts(exponents.len(), block_starts)?;
    let n = block_sizes(exponents.len(), block_starts).max().unwrap_or(1);

    let ratios: Vec<f64> = block_starts
        .windows(2)
        .map(|w| exponents[w[1]] / exponents[w[0]])
        .collect();
    if ratios.is_empty() {
        return Ok(Lacunarity { q: f64::INFINITY, n });
    }
    let (min_block, q) = ratios
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    let max_ratio = ratios.iter().copied().fold(f64::MIN, f64::max);
    // Need q^{2N} >= max_ratio, i.e. q >= max_ratio^{1/(2N)}.
    let required = max_ratio.powf(1.0 / (2 * n) as f64);
    if q <= 1.0 || q < required {
        return Err(Error::RatioCollapse {
            block: min_block + 1,
            ratio: q,
            required: required.max(1.0),
        });
    }
    Ok(Lacunarity { q, n })
}

impl BlockSpectrum {
    /// Builds a spectrum, validating it and enforcing `block_cap` on block sizes.
    pub fn new(exponents: Vec<f64>, block_starts: Vec<usize>, block_cap: usize) -> Result<Self> {
        let lac = validate(&exponents, &block_starts)?;
        for (block, size) in block_sizes(exponents.len(), &block_starts).enumerate() {
            if size > block_cap {
                return Err(Error::BlockTooLarge {
                    block,
                    size,
                    cap: block_cap,
                });
            }
        }
        let spectrum = Self {
            exponents,
            block_starts,
            ratio_lower: lac.q,
            block_cap,
        };
        debug_assert!(spectrum.block_cap >= lac.n);
        Ok(spectrum)
    }

    /// Builds a spectrum with `N` equal to its largest block.
    pub fn from_blocks(exponents: Vec<f64>, block_starts: Vec<usize>) -> Result<Self> {
        let lac = validate(&exponents, &block_starts)?;
        Self::new(exponents, block_starts, lac.n)
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn block_starts(&self) -> &[usize] {
        &self.block_starts
    }

    pub fn ratio_lower(&self) -> f64 {
        self.ratio_lower
    }

    pub fn block_cap(&self) -> usize {
        self.block_cap
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.block_starts.len()
    }

    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        let start = self.block_starts[k];
        let end = self.block_starts.get(k + 1).copied().unwrap_or(self.exponents.len());
        start..end
    }

    pub fn block(&self, k: usize) -> &[f64] {
        &self.exponents[self.block_range(k)]
    }

    /// Smallest exponent of block `k`.
    pub fn anchor(&self, k: usize) -> f64 {
        self.exponents[self.block_starts[k]]
    }

    /// Block index holding exponent index `i`.
    pub fn block_of_index(&self, i: usize) -> usize {
        match self.block_starts.binary_search(&i) {
            Ok(k) => k,
            Err(k) => k - 1,
        }
    }

    /// Index of an exponent, matched to a relative tolerance of 1e-12.
    pub fn index_of(&self, exponent: f64) -> Option<usize> {
        let pos = self.exponents.partition_point(|&x| x < exponent);
        [pos.checked_sub(1), Some(pos)]
            .into_iter()
            .flatten()
            .filter(|&i| i < self.exponents.len())
            .find(|&i| (self.exponents[i] - exponent).abs() <= 1e-12 * exponent.abs())
    }

    /// Finite surrogate of `Σ 1/λ_k`.
    pub fn reciprocal_sum(&self) -> f64 {
        self.exponents.iter().map(|x| 1.0 / x).sum()
    }

    /// The spectrum restricted to its first `blocks` blocks.
    pub fn truncated(&self, blocks: usize) -> Result<Self> {
        ensure_domain(
            blocks >= 1 && blocks <= self.num_blocks(),
            "blocks",
            blocks as f64,
            "1 <= blocks <= num_blocks",
        )?;
        let end = self.block_range(blocks - 1).end;
        Self::new(
            self.exponents[..end].to_vec(),
            self.block_starts[..blocks].to_vec(),
            self.block_cap,
        )
    }
}

/// Exponent generators accepted in spectrum files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Generator {
    Lacunary { lambda0: f64, ratio: f64, count: usize },
    QuasiLacunary { bases: Vec<f64>, ratio: f64, count: usize },
}

/// JSON form of a spectrum: either explicit `exponents` (with optional
/// `block_starts`, defaulting to singleton blocks, and `block_cap`) or a
/// `generator`. `ratio_lower` is recomputed, except that a single block keeps
/// a supplied value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_starts: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
}

impl SpectrumSpec {
    pub fn build(self) -> Result<BlockSpectrum> {
        match (self.exponents, self.generator) {
            (Some(exponents), None) => {
                let starts = self.block_starts.unwrap_or_else(|| (0..exponents.len()).collect());
                let mut spectrum = match self.block_cap {
                    Some(cap) => BlockSpectrum::new(exponents, starts, cap)?,
                    None => BlockSpectrum::from_blocks(exponents, starts)?,
                };
                if let (1, Some(q)) = (spectrum.num_blocks(), self.ratio_lower) {
                    ensure_domain(q > 1.0 && q.is_finite(), "ratio_lower", q, "q > 1")?;
                    spectrum.ratio_lower = q;
                }
                Ok(spectrum)
            }
            (None, Some(generator)) => {
                if self.block_starts.is_some() || self.block_cap.is_some() {
                    return Err(Error::BlockLayout(
                        "block_starts and block_cap cannot accompany a generator".into(),
                    ));
                }
                match generator {
                    Generator::Lacunary { lambda0, ratio, count } => generate_lacunary(lambda0, ratio, count),
                    Generator::QuasiLacunary { bases, ratio, count } => generate_quasi_lacunary(&bases, ratio, count),
                }
            }
            (Some(_), Some(_)) => Err(Error::BlockLayout(
                "give either exponents or generator, not both".into(),
            )),
            (None, None) => Err(Error::BlockLayout("missing field `exponents` (or `generator`)".into())),
        }
    }
}

impl TryFrom<SpectrumSpec> for BlockSpectrum {
    type Error = Error;

    fn try_from(spec: SpectrumSpec) -> Result<Self> {
        spec.build()
    }
}

/// Geometric spectrum `λ_k = lambda0 · ratio^k`, `k < count`, in singleton blocks.
pub fn generate_lacunary(lambda0: f64, ratio: f64, count: usize) -> Result<BlockSpectrum> {
    ensure_domain(lambda0 > 0.0 && lambda0.is_finite(), "lambda0", lambda0, "lambda0 > 0")?;
    ensure_domain(ratio > 1.0 && ratio.is_finite(), "ratio", ratio, "ratio > 1")?;
    ensure_domain(
        (1..=MAX_EXPONENTS).contains(&count),
        "count",
        count as f64,
        "1 <= count <= 10000",
    )?;
    let exponents: Vec<f64> = (0..count).map(|k| lambda0 * ratio.powi(k as i32)).collect();
    let mut spectrum = BlockSpectrum::new(exponents, (0..count).collect(), 1)?;
    if count == 1 {
        spectrum.ratio_lower = ratio;
    }
    Ok(spectrum)
}

/// Union of the lacunary sequences `base_i · ratio^k`, grouped into blocks.
///
/// A new block starts when an exponent exceeds the current block anchor by
/// more than a factor `sqrt(ratio)`, so each block holds at most one term per
/// base and `N = bases.len()`.
pub fn generate_quasi_lacunary(bases: &[f64], ratio: f64, count: usize) -> Result<BlockSpectrum> {
    if bases.is_empty() {
        return Err(Error::Degenerate("no bases"));
    }
    ensure_domain(ratio > 1.0 && ratio.is_finite(), "ratio", ratio, "ratio > 1")?;
    for &b in bases {
        ensure_domain(b >= 1.0 && b < ratio, "base", b, "1 <= base < ratio")?;
    }
    ensure_domain(
        count >= 1 && count.saturating_mul(bases.len()) <= MAX_EXPONENTS,
        "count",
        count as f64,
        "1 <= count * bases <= 10000",
    )?;
    let mut exponents: Vec<f64> = (0..count)
        .flat_map(|k| bases.iter().map(move |b| b * ratio.powi(k as i32)))
        .collect();
    exponents.sort_by(f64::total_cmp);
    if let Some(w) = exponents.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateExponent { exponent: w[0] });
    }
    let split = ratio.sqrt();
    let mut block_starts = vec![0];
    let mut anchor = exponents[0];
    for (i, &x) in exponents.iter().enumerate().skip(1) {
        if x / anchor > split {
            block_starts.push(i);
            anchor = x;
        }
    }
    let mut spectrum = BlockSpectrum::new(exponents, block_starts, bases.len())?;
    if spectrum.num_blocks() == 1 {
        spectrum.ratio_lower = ratio;
    }
    Ok(spectrum)
}
