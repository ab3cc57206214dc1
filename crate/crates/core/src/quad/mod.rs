//! Integration engines: Beta/log-Gamma closed forms and tanh-sinh quadrature
//! for Jacobi-weighted integrals on [0, 1].
//!
//! Integrands receive both `t` and `1 - t`. The complement is computed from
//! the node table rather than by subtraction, so weights such as
//! `(1 - t)^α` and near-singular kernels like `1 / (1 - ρ t)` stay accurate at
//! nodes that sit closer to 1 than machine epsilon.

mod special;
mod tanh_sinh;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_domain, Error, Result};

pub use special::{beta_asymptotic_check, beta_function, gamma, ln_beta, ln_gamma};

/// Tolerances and budgets shared by every numerical integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_levels: usize,
    /// Nodes closer than this to an endpoint are dropped when the integrand is
    /// not finite there.
    pub endpoint_cut: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_levels: 12,
            endpoint_cut: 1e-15,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, max_levels: usize, endpoint_cut: f64) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            max_levels,
            endpoint_cut,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_domain(
            self.rel_tol > 0.0 && self.rel_tol <= 1e-2,
            "rel_tol",
            self.rel_tol,
            "0 < rel_tol <= 1e-2",
        )?;
        ensure_domain(
            self.max_levels >= 3,
            "max_levels",
            self.max_levels as f64,
            "max_levels >= 3",
        )?;
        ensure_domain(
            self.endpoint_cut >= 0.0 && self.endpoint_cut < 0.5,
            "endpoint_cut",
            self.endpoint_cut,
            "0 <= endpoint_cut < 0.5",
        )
    }

    /// Same budgets with a tighter tolerance, for inner integrals of nested quadrature.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            rel_tol: (self.rel_tol * factor).max(1e-14),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    /// Difference between the last two level estimates.
    pub error_estimate: f64,
    pub levels: usize,
    pub evaluations: usize,
}

const MIN_LEVELS: usize = 3;

fn level_step(level: usize) -> f64 {
    if level == 0 {
        1.0
    } else {
        (0.5f64).powi(level as i32)
    }
}

/// Core engine on `[a, b] ⊂ [0, 1]`; `g` receives `(t, 1 - t)`.
fn tanh_sinh_interval<F>(g: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    cfg.validate()?;
    ensure_domain(
        (0.0..=1.0).contains(&a) && a <= b && b <= 1.0,
        "interval",
        a,
        "0 <= a <= b <= 1",
    )?;
    let width = b - a;
    if width == 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            levels: 0,
            evaluations: 0,
        });
    }
    let one_minus_b = 1.0 - b;
    let mut sum = 0.0;
    let mut evaluations = 0;
    let mut previous: Option<f64> = None;
    let mut last = QuadResult {
        value: 0.0,
        error_estimate: f64::INFINITY,
        levels: 0,
        evaluations: 0,
    };
    for level in 0..cfg.max_levels {
        let level_sum = tanh_sinh::with_level(level, |nodes| -> Result<f64> {
            let mut acc = 0.0;
            for node in nodes {
                let t = a + width * node.x;
                let comp = one_minus_b + width * node.comp;
                let value = g(t, comp);
                if !value.is_finite() {
                    if width * node.x.min(node.comp) < cfg.endpoint_cut {
                        continue;
                    }
                    return Err(Error::Precondition(format!("integrand is not finite at t = {t}")));
                }
                acc += node.weight * value;
            }
            evaluations += nodes.len();
            Ok(acc)
        })?;
        sum += level_sum;
        let estimate = width * sum * level_step(level);
        let error_estimate = previous.map_or(f64::INFINITY, |p| (estimate - p).abs());
        last = QuadResult {
            value: estimate,
            error_estimate,
            levels: level + 1,
            evaluations,
        };
        if level + 1 >= MIN_LEVELS
            && (error_estimate <= cfg.rel_tol * estimate.abs() || (estimate == 0.0 && error_estimate == 0.0))
        {
            return Ok(last);
        }
        previous = Some(estimate);
    }
    Err(Error::Accuracy {
        estimate: last.value,
        error_bound: last.error_estimate,
    })
}

/// `∫_a^b g(t) dt` for `0 <= a <= b <= 1`, with `g` receiving `(t, 1 - t)`.
pub fn integrate_interval<F>(g: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    tanh_sinh_interval(g, a, b, cfg)
}

fn check_alpha(alpha: f64) -> Result<()> {
    ensure_domain(alpha > -1.0 && alpha.is_finite(), "alpha", alpha, "alpha > -1")
}

#[inline]
fn jacobi_weight(comp: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        (alpha * comp.ln()).exp()
    }
}

/// `∫_0^1 g(t)(1 - t)^α dt` with full diagnostics; `g` receives `(t, 1 - t)`.
pub fn integrate_weighted_split<F>(g: F, alpha: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    check_alpha(alpha)?;
    tanh_sinh_interval(|t, c| g(t, c) * jacobi_weight(c, alpha), 0.0, 1.0, cfg)
}

/// `∫_0^1 g(t)(1 - t)^α dt` to `cfg.rel_tol`.
///
/// Always numerical; use [`weighted_monomial`] for the closed form of `g = t^λ`.
pub fn integrate_weighted<F>(g: F, alpha: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_weighted_split(|t, _| g(t), alpha, cfg).map(|r| r.value)
}

/// Weighted integral split at interior breakpoints (roots of the integrand's
/// base polynomial, kinks of `|f|^p`). Breakpoints outside (0, 1) are ignored.
pub fn integrate_weighted_pieces<F>(g: F, alpha: f64, breakpoints: &[f64], cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    check_alpha(alpha)?;
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > 0.0 && x < 1.0).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(0.0);
    edges.extend(cuts);
    edges.push(1.0);

    let weighted = |t: f64, c: f64| g(t, c) * jacobi_weight(c, alpha);
    let mut total = QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        levels: 0,
        evaluations: 0,
    };
    for pair in edges.windows(2) {
        let piece = tanh_sinh_interval(weighted, pair[0], pair[1], cfg)?;
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
        total.levels = total.levels.max(piece.levels);
        total.evaluations += piece.evaluations;
    }
    Ok(total)
}

/// Closed form `∫_0^1 t^λ (1 - t)^α dt = B(λ + 1, α + 1)`.
pub fn weighted_monomial(lambda: f64, alpha: f64) -> Result<f64> {
    ensure_domain(lambda > -1.0, "lambda", lambda, "lambda > -1")?;
    check_alpha(alpha)?;
    beta_function(lambda + 1.0, alpha + 1.0)
}

/// Successive level estimates of the weighted integral, for convergence diagnostics.
pub fn level_estimates<F>(g: F, alpha: f64, levels: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    check_alpha(alpha)?;
    let mut sum = 0.0;
    let mut out = Vec::with_capacity(levels);
    for level in 0..levels {
        sum += tanh_sinh::with_level(level, |nodes| {
            nodes
                .iter()
                .map(|n| n.weight * g(n.x) * jacobi_weight(n.comp, alpha))
                .filter(|v| v.is_finite())
                .sum::<f64>()
        });
        out.push(sum * level_step(level));
    }
    Ok(out)
}
