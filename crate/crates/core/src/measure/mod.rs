//! Positive Borel measures on [0, 1]: tails, moments and integrals.

mod cantor;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_domain, Error, Result};
use crate::quad::{self, QuadratureConfig};

/// A measure on [0, 1].
///
/// The JSON form is tagged by `kind`: `jacobi`, `cantor`, `atomic` or `tail`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields, try_from = "RawMeasure")]
pub enum MeasureSpec {
    /// `dν_α = (1 - t)^α dt`, `α > -1`.
    #[serde(rename = "jacobi")]
    JacobiWeight { alpha: f64 },
    /// Self-similar Cantor measure of mass 1 with contraction `r ∈ (0, 1/2]`.
    #[serde(rename = "cantor")]
    CantorSelfSimilar { r: f64 },
    /// Point masses `(t, w)` with `t ∈ [0, 1]`, `w > 0`.
    #[serde(rename = "atomic")]
    Atomic { atoms: Vec<(f64, f64)> },
    /// Synthetic envelope `μ([1 - ε, 1]) = C ε^β`; supports tail queries only.
    #[serde(rename = "tail")]
    TailEnvelope {
        beta: f64,
        #[serde(rename = "C")]
        constant: f64,
    },
}

#[derive(Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum RawMeasure {
    #[serde(rename = "jacobi")]
    Jacobi { alpha: f64 },
    #[serde(rename = "cantor")]
    Cantor { r: f64 },
    #[serde(rename = "atomic")]
    Atomic { atoms: Vec<(f64, f64)> },
    #[serde(rename = "tail")]
    Tail {
        beta: f64,
        #[serde(rename = "C")]
        constant: f64,
    },
}

impl TryFrom<RawMeasure> for MeasureSpec {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        match raw {
            RawMeasure::Jacobi { alpha } => Self::jacobi(alpha),
            RawMeasure::Cantor { r } => Self::cantor(r),
            RawMeasure::Atomic { atoms } => Self::atomic(atoms),
            RawMeasure::Tail { beta, constant } => Self::tail_envelope(beta, constant),
        }
    }
}

/// Power-law fit of `ε ↦ μ([1 - ε, 1])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaClassFit {
    pub beta_hat: f64,
    pub constant_hat: f64,
    pub grid: Vec<f64>,
    /// `ln tail - (ln C + β̂ ln ε)` at the grid points with nonzero tail.
    pub residuals: Vec<f64>,
    /// `sup_ε tail(ε) / ε^β` for the reference exponent.
    pub sup_ratio: f64,
    pub reference_beta: f64,
}

impl MeasureSpec {
    pub fn jacobi(alpha: f64) -> Result<Self> {
        let m = Self::JacobiWeight { alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn cantor(r: f64) -> Result<Self> {
        let m = Self::CantorSelfSimilar { r };
        m.validate()?;
        Ok(m)
    }

    /// Atoms are sorted by location.
    pub fn atomic(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut atoms: Vec<(f64, f64)> = atoms.into_iter().collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let m = Self::Atomic { atoms };
        m.validate()?;
        Ok(m)
    }

    pub fn dirac(t: f64) -> Result<Self> {
        Self::atomic([(t, 1.0)])
    }

    pub fn tail_envelope(beta: f64, constant: f64) -> Result<Self> {
        let m = Self::TailEnvelope { beta, constant };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::JacobiWeight { alpha } => {
                ensure_domain(*alpha > -1.0 && alpha.is_finite(), "alpha", *alpha, "alpha > -1")
            }
            Self::CantorSelfSimilar { r } => ensure_domain(*r > 0.0 && *r <= 0.5, "r", *r, "0 < r <= 1/2"),
            Self::Atomic { atoms } => {
                if atoms.is_empty() {
                    return Err(Error::Degenerate("atomic measure without atoms"));
                }
                for &(t, w) in atoms {
                    ensure_domain((0.0..=1.0).contains(&t), "atom", t, "0 <= t <= 1")?;
                    ensure_domain(w > 0.0 && w.is_finite(), "weight", w, "0 < w < inf")?;
                }
                if atoms.windows(2).any(|p| p[1].0 < p[0].0) {
                    return Err(Error::Precondition("atoms must be sorted by location".into()));
                }
                Ok(())
            }
            Self::TailEnvelope { beta, constant } => {
                ensure_domain(*beta > 0.0 && beta.is_finite(), "beta", *beta, "beta > 0")?;
                ensure_domain(*constant > 0.0 && constant.is_finite(), "C", *constant, "C > 0")
            }
        }
    }

    pub fn mass(&self) -> f64 {
        match self {
            Self::JacobiWeight { alpha } => 1.0 / (alpha + 1.0),
            Self::CantorSelfSimilar { .. } => 1.0,
            Self::Atomic { atoms } => atoms.iter().map(|a| a.1).sum(),
            Self::TailEnvelope { constant, .. } => *constant,
        }
    }

    /// Tail exponent implied by the construction, when one is known.
    pub fn natural_beta(&self) -> Option<f64> {
        match self {
            Self::JacobiWeight { alpha } => Some(alpha + 1.0),
            Self::CantorSelfSimilar { r } => Some(cantor::dimension(*r)),
            Self::TailEnvelope { beta, .. } => Some(*beta),
            Self::Atomic { .. } => None,
        }
    }

    /// `μ([1 - ε, 1])` for `0 < ε <= 1`.
    pub fn tail(&self, eps: f64) -> Result<f64> {
        ensure_domain(eps > 0.0 && eps <= 1.0, "eps", eps, "0 < eps <= 1")?;
        Ok(match self {
            Self::JacobiWeight { alpha } => eps.powf(alpha + 1.0) / (alpha + 1.0),
            Self::CantorSelfSimilar { r } => cantor::tail(eps, *r),
            Self::Atomic { atoms } => atoms.iter().filter(|&&(t, _)| 1.0 - t <= eps).map(|a| a.1).sum(),
            Self::TailEnvelope { beta, constant } => constant * eps.powf(*beta),
        })
    }

    /// `∫ t^λ dμ` for `λ >= 0`, with an error bound where it is approximated.
    pub fn moment_with_bound(&self, lambda: f64) -> Result<(f64, f64)> {
        ensure_domain(lambda >= 0.0 && lambda.is_finite(), "lambda", lambda, "lambda >= 0")?;
        match self {
            Self::JacobiWeight { alpha } => Ok((quad::weighted_monomial(lambda, *alpha)?, 0.0)),
            Self::CantorSelfSimilar { r } => {
                let est = cantor::moment(lambda, *r);
                Ok((est.value, est.error_bound))
            }
            Self::Atomic { atoms } => Ok((
                atoms
                    .iter()
                    .map(|&(t, w)| if lambda == 0.0 { w } else { w * t.powf(lambda) })
                    .sum(),
                0.0,
            )),
            Self::TailEnvelope { .. } => Err(Error::Unsupported("a tail envelope only supports tail queries")),
        }
    }

    /// `∫ t^λ dμ`; fails with an accuracy error when the approximation bound
    /// exceeds `1e-10` relative.
    pub fn moment(&self, lambda: f64) -> Result<f64> {
        let (value, bound) = self.moment_with_bound(lambda)?;
        if bound > 1e-10 * value.abs() {
            return Err(Error::Accuracy {
                estimate: value,
                error_bound: bound,
            });
        }
        Ok(value)
    }

    /// `∫ g dμ` to `cfg.rel_tol`.
    pub fn integrate<F>(&self, g: F, cfg: &QuadratureConfig) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        self.integrate_split(|t, _| g(t), &[], cfg)
    }

    /// `∫ g dμ` where `g` receives `(t, 1 - t)`; `breakpoints` mark kinks of `g`
    /// in (0, 1) for the Lebesgue-type measures.
    pub fn integrate_split<F>(&self, g: F, breakpoints: &[f64], cfg: &QuadratureConfig) -> Result<f64>
    where
        F: Fn(f64, f64) -> f64,
    {
        cfg.validate()?;
        match self {
            Self::JacobiWeight { alpha } => Ok(quad::integrate_weighted_pieces(g, *alpha, breakpoints, cfg)?.value),
            Self::CantorSelfSimilar { r } => Ok(cantor::integrate(g, *r, cfg.rel_tol)?.value),
            Self::Atomic { atoms } => {
                let mut total = 0.0;
                for &(t, w) in atoms {
                    let v = g(t, 1.0 - t);
                    if !v.is_finite() {
                        return Err(Error::Precondition(format!("integrand is not finite at atom t = {t}")));
                    }
                    total += w * v;
                }
                Ok(total)
            }
            Self::TailEnvelope { .. } => Err(Error::Unsupported("integration against a tail envelope")),
        }
    }

    /// Cauchy-type transform `∫ dμ(t) / (1 - ρ t)` with `gap = 1 - ρ`.
    pub fn cauchy_transform(&self, gap: f64, cfg: &QuadratureConfig) -> Result<f64> {
        ensure_domain(gap > 0.0 && gap <= 1.0, "1 - rho", gap, "0 < 1 - rho <= 1")?;
        let rho = 1.0 - gap;
        match self {
            Self::CantorSelfSimilar { r } => Ok(cantor::cauchy_transform(gap, *r)),
            _ => self.integrate_split(|_, comp| 1.0 / (gap + rho * comp), &[], cfg),
        }
    }

    /// Least-squares slope of `ln μ([1-ε,1])` against `ln ε`, ignoring zero
    /// tails, together with `sup tail(ε)/ε^β` for the reference `β`.
    pub fn beta_class_fit(&self, eps_grid: &[f64], reference_beta: f64) -> Result<BetaClassFit> {
        if eps_grid.len() < 4 {
            return Err(Error::Precondition("beta fit needs at least 4 grid points".into()));
        }
        ensure_domain(
            reference_beta > 0.0 && reference_beta.is_finite(),
            "beta",
            reference_beta,
            "beta > 0",
        )?;
        let (lo, hi) = eps_grid
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e)));
        if hi / lo < 1e3 {
            return Err(Error::Precondition("beta fit grid must span 3 decades".into()));
        }
        let tails = eps_grid.iter().map(|&e| self.tail(e)).collect::<Result<Vec<f64>>>()?;
        let points: Vec<(f64, f64)> = eps_grid
            .iter()
            .zip(&tails)
            .filter(|(_, &t)| t > 0.0)
            .map(|(&e, &t)| (e.ln(), t.ln()))
            .collect();
        if points.len() < 2 {
            return Err(Error::Degenerate("tail vanishes on the fit grid"));
        }
        let (slope, intercept) = least_squares(&points);
        if slope.is_nan() || slope <= 0.0 {
            return Err(Error::Degenerate("tail does not decay on the fit grid"));
        }
        let residuals = points.iter().map(|&(x, y)| y - (intercept + slope * x)).collect();
        let sup_ratio = eps_grid
            .iter()
            .zip(&tails)
            .map(|(&e, &t)| t / e.powf(reference_beta))
            .fold(0.0, f64::max);
        Ok(BetaClassFit {
            beta_hat: slope,
            constant_hat: intercept.exp(),
            grid: eps_grid.to_vec(),
            residuals,
            sup_ratio,
            reference_beta,
        })
    }
}

/// Ordinary least squares `y ≈ a + b x`, returning `(b, a)`.
pub(crate) fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, mean_y - slope * mean_x)
}
