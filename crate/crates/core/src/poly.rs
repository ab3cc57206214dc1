//! Müntz polynomials `f(t) = Σ a_k t^{λ_k}` with real exponents and coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_domain, Error, Result};
use crate::spectrum::BlockSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    #[serde(rename = "lambda")]
    pub exponent: f64,
    pub coeff: f64,
}

/// A finite Müntz polynomial.
///
/// Exponents are strictly increasing and no stored coefficient is zero. An
/// exponent of exactly 0 is the constant term. Negative exponents only arise
/// from [`MuntzPolynomial::derivative`]; such polynomials are unbounded at 0.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawPolynomial")]
pub struct MuntzPolynomial {
    terms: Vec<Term>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolynomial {
    terms: Vec<Term>,
}

impl TryFrom<RawPolynomial> for MuntzPolynomial {
    type Error = Error;

    fn try_from(raw: RawPolynomial) -> Result<Self> {
        Self::new(raw.terms.into_iter().map(|t| (t.exponent, t.coeff)))
    }
}

/// Location and value of `max |f|` on [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub value: f64,
    pub argmax: f64,
}

#[inline]
fn power(t: f64, exponent: f64) -> f64 {
    if t == 0.0 {
        return match exponent.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Greater) => 0.0,
            Some(std::cmp::Ordering::Equal) => 1.0,
            _ => f64::INFINITY,
        };
    }
    t.powf(exponent)
}

impl MuntzPolynomial {
    /// Builds a polynomial from `(exponent, coefficient)` pairs in any order.
    /// Zero coefficients are dropped; repeated exponents are rejected.
    pub fn new(terms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut terms: Vec<Term> = terms
            .into_iter()
            .map(|(exponent, coeff)| Term { exponent, coeff })
            .collect();
        for term in &terms {
            ensure_domain(term.exponent.is_finite(), "exponent", term.exponent, "finite")?;
            ensure_domain(term.coeff.is_finite(), "coeff", term.coeff, "finite")?;
        }
        terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        if let Some(w) = terms.windows(2).find(|w| w[0].exponent == w[1].exponent) {
            return Err(Error::DuplicateExponent {
                exponent: w[0].exponent,
            });
        }
        terms.retain(|t| t.coeff != 0.0);
        Ok(Self { terms })
    }

    pub fn monomial(exponent: f64, coeff: f64) -> Result<Self> {
        Self::new([(exponent, coeff)])
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Coefficients aligned with the spectrum's exponents.
    pub fn from_spectrum(spectrum: &BlockSpectrum, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != spectrum.len() {
            return Err(Error::Precondition(format!(
                "{} coefficients for a spectrum of {} exponents",
                coeffs.len(),
                spectrum.len()
            )));
        }
        Self::new(spectrum.exponents().iter().copied().zip(coeffs.iter().copied()))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.exponent)
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.first().is_some_and(|t| t.exponent == 0.0)
    }

    pub fn min_exponent(&self) -> Option<f64> {
        self.terms.first().map(|t| t.exponent)
    }

    pub fn max_exponent(&self) -> Option<f64> {
        self.terms.last().map(|t| t.exponent)
    }

    /// `Σ λ_k` over the stored terms.
    pub fn exponent_sum(&self) -> f64 {
        self.exponents().sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exponent: t.exponent,
                    coeff: c * t.coeff,
                })
                .filter(|t| t.coeff != 0.0)
                .collect(),
        }
    }

    /// Term-wise sum; coefficients of shared exponents are added.
    pub fn add(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let next = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) if a.exponent == b.exponent => {
                    i += 1;
                    j += 1;
                    Term {
                        exponent: a.exponent,
                        coeff: a.coeff + b.coeff,
                    }
                }
                (Some(a), Some(b)) if a.exponent < b.exponent => {
                    i += 1;
                    *a
                }
                (Some(_), Some(b)) | (None, Some(b)) => {
                    j += 1;
                    *b
                }
                (Some(a), None) => {
                    i += 1;
                    *a
                }
                (None, None) => unreachable!(),
            };
            if next.coeff != 0.0 {
                terms.push(next);
            }
        }
        Self { terms }
    }

    /// Evaluation without the domain check; `t = 0` is the limit value.
    #[inline]
    pub fn eval_unchecked(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.coeff * power(t, term.exponent)).sum()
    }

    /// Evaluation from both `t` and `1 - t`; near 1 the logarithm is taken
    /// from the complement, which matters for exponents in the thousands.
    #[inline]
    pub fn eval_split(&self, t: f64, comp: f64) -> f64 {
        if t <= 0.5 {
            return self.eval_unchecked(t);
        }
        let log_t = (-comp).ln_1p();
        self.terms
            .iter()
            .map(|term| term.coeff * (term.exponent * log_t).exp())
            .sum()
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        ensure_domain((0.0..=1.0).contains(&t), "t", t, "0 <= t <= 1")?;
        Ok(self.eval_unchecked(t))
    }

    /// Term-wise derivative `Σ λ a t^{λ-1}`; constant terms vanish.
    pub fn derivative(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|t| t.exponent != 0.0)
                .map(|t| Term {
                    exponent: t.exponent - 1.0,
                    coeff: t.exponent * t.coeff,
                })
                .collect(),
        }
    }

    /// `T_ρ f(t) = f(ρ t)`, i.e. `a_k ↦ a_k ρ^{λ_k}`.
    pub fn dilate(&self, rho: f64) -> Result<Self> {
        ensure_domain(rho > 0.0 && rho <= 1.0, "rho", rho, "0 < rho <= 1")?;
        Ok(Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exponent: t.exponent,
                    coeff: t.coeff * power(rho, t.exponent),
                })
                .filter(|t| t.coeff != 0.0)
                .collect(),
        })
    }

    /// Evaluation points used for sup-norm search and root bracketing: a
    /// uniform grid of 2049 points plus a log-spaced cluster within `10/λ_max`
    /// of `t = 1`, where block polynomials attain their maxima.
    pub fn search_grid(&self) -> Vec<f64> {
        const UNIFORM: usize = 2048;
        const CLUSTER: usize = 512;
        let mut grid: Vec<f64> = (0..=UNIFORM).map(|i| i as f64 / UNIFORM as f64).collect();
        let lambda_max = self.max_exponent().unwrap_or(1.0).max(1.0);
        let reach = (10.0 / lambda_max).min(1.0);
        grid.extend((0..CLUSTER).map(|j| {
            let decades = 10.0 * j as f64 / (CLUSTER - 1) as f64;
            1.0 - reach * 10f64.powf(-decades)
        }));
        grid.retain(|t| (0.0..=1.0).contains(t));
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        grid
    }

    /// `max_{[0,1]} |f|` to relative accuracy ~1e-10, with its location.
    pub fn sup_norm(&self) -> Result<SupNorm> {
        if self.is_zero() {
            return Err(Error::Degenerate("sup norm of the zero polynomial"));
        }
        if self.min_exponent().is_some_and(|e| e < 0.0) {
            return Err(Error::Degenerate("polynomial is unbounded near t = 0"));
        }
        let grid = self.search_grid();
        let values: Vec<f64> = grid.iter().map(|&t| self.eval_unchecked(t).abs()).collect();
        let best = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .expect("nonempty grid");
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        let (t_refined, v_refined) = golden_section_max(|t| self.eval_unchecked(t).abs(), lo, hi);
        let (argmax, value) = if v_refined > values[best] {
            (t_refined, v_refined)
        } else {
            (grid[best], values[best])
        };
        Ok(SupNorm { value, argmax })
    }

    /// Sign changes of `f` in (0, 1), located by bisection on the search grid.
    pub fn roots(&self) -> Vec<f64> {
        if self.len() < 2 {
            return Vec::new();
        }
        let grid = self.search_grid();
        let mut roots = Vec::new();
        let mut prev_t = grid[0];
        let mut prev_v = self.eval_unchecked(prev_t);
        for &t in &grid[1..] {
            let v = self.eval_unchecked(t);
            if v == 0.0 && t > 0.0 && t < 1.0 {
                roots.push(t);
            } else if prev_v != 0.0 && v != 0.0 && (prev_v < 0.0) != (v < 0.0) {
                roots.push(self.bisect(prev_t, t, prev_v));
            }
            prev_t = t;
            prev_v = v;
        }
        roots.retain(|&r| r > 0.0 && r < 1.0);
        roots.dedup();
        roots
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, lo_value: f64) -> f64 {
        let lo_negative = lo_value < 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = self.eval_unchecked(mid);
            if v == 0.0 {
                return mid;
            }
            if (v < 0.0) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Splits the terms along the spectrum's blocks.
    pub fn block_decompose(&self, spectrum: &BlockSpectrum) -> Result<BlockDecomposition> {
        let mut blocks: Vec<Vec<Term>> = vec![Vec::new(); spectrum.num_blocks()];
        for term in &self.terms {
            let index = spectrum.index_of(term.exponent).ok_or(Error::Membership {
                exponent: term.exponent,
            })?;
            blocks[spectrum.block_of_index(index)].push(*term);
        }
        Ok(BlockDecomposition {
            blocks: blocks.into_iter().map(|terms| MuntzPolynomial { terms }).collect(),
        })
    }
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..120 {
        if (b - a).abs() <= 1e-15 * b.abs().max(1e-300) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Block components `f_k ∈ F_k` of a polynomial over a [`BlockSpectrum`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<MuntzPolynomial>,
}

impl BlockDecomposition {
    pub fn from_blocks(blocks: Vec<MuntzPolynomial>) -> Self {
        Self { blocks }
    }

    /// Reassembles the parent polynomial.
    pub fn sum(&self) -> MuntzPolynomial {
        self.blocks.iter().fold(MuntzPolynomial::zero(), |acc, b| acc.add(b))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &MuntzPolynomial)> {
        self.blocks.iter().enumerate().filter(|(_, b)| !b.is_zero())
    }
}
