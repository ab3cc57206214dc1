//! Self-similar Cantor measure generated by `x ↦ r x` and `x ↦ r x + (1 - r)`
//! with equal weights 1/2, for `0 < r <= 1/2`. Its tail exponent is
//! `log 2 / log(1/r)`.
//!
//! Cylinders are tracked as `(left end, width, gap to 1, mass)`; the gap is
//! carried exactly through the subdivision so that `1 - t` stays accurate
//! close to the right endpoint.

use crate::error::{Error, Result};

/// Scaled coordinates within this distance of a cylinder endpoint are snapped to it.
const SNAP: f64 = 1e-12;
/// Largest integer moment computed by the binomial self-similarity recursion.
pub(crate) const MAX_RECURSION_MOMENT: usize = 512;
const MAX_DEPTH: usize = 200;

pub(crate) fn dimension(r: f64) -> f64 {
    std::f64::consts::LN_2 / (1.0 / r).ln()
}

/// Distribution function `μ([0, x])`.
pub(crate) fn cdf(x: f64, r: f64) -> f64 {
    let mut x = x;
    let mut value = 0.0;
    let mut mass = 1.0;
    for _ in 0..MAX_DEPTH * 8 {
        if x >= 1.0 - SNAP {
            return value + mass;
        }
        if x <= 0.0 {
            return value;
        }
        if x <= r {
            x /= r;
        } else if x < 1.0 - r {
            return value + 0.5 * mass;
        } else {
            value += 0.5 * mass;
            x = (x - (1.0 - r)) / r;
            // Cancellation can leave a spurious positive residue at the left end.
            if x <= SNAP {
                return value;
            }
        }
        mass *= 0.5;
        if mass < f64::MIN_POSITIVE {
            break;
        }
    }
    value
}

/// `μ([1 - ε, 1])`, equal to `μ([0, ε])` by the symmetry `t ↦ 1 - t`.
pub(crate) fn tail(eps: f64, r: f64) -> f64 {
    cdf(eps, r)
}

/// Raw integer moments `m_0..=m_n` from
/// `m_n (1 - r^n) = 1/2 Σ_{k<n} C(n,k) r^k (1-r)^{n-k} m_k`.
pub(crate) fn integer_moments(n: usize, r: f64) -> Vec<f64> {
    let mut moments = Vec::with_capacity(n + 1);
    moments.push(1.0);
    let odds = r / (1.0 - r);
    for order in 1..=n {
        let mut weight = (1.0 - r).powi(order as i32);
        let mut sum = 0.0;
        for (k, &m) in moments.iter().enumerate() {
            sum += weight * m;
            weight *= (order - k) as f64 / (k + 1) as f64 * odds;
        }
        moments.push(0.5 * sum / (1.0 - r.powi(order as i32)));
    }
    moments
}

/// Central moments `E[(t - 1/2)^j]`, `j = 0..=n`; odd orders vanish by symmetry.
///
/// With `Y = t - 1/2` one has `Y = r Y' ± (1 - r)/2`, hence
/// `M_n (1 - r^n) = Σ_{k<n, n-k even} C(n,k) r^k ((1-r)/2)^{n-k} M_k`.
pub(crate) fn central_moments(n: usize, r: f64) -> Vec<f64> {
    let half_gap = 0.5 * (1.0 - r);
    let mut moments = vec![0.0; n + 1];
    moments[0] = 1.0;
    for order in (2..=n).step_by(2) {
        let mut sum = 0.0;
        let mut binom = 1.0;
        for (k, &m) in moments.iter().enumerate().take(order) {
            if (order - k) % 2 == 0 {
                sum += binom * r.powi(k as i32) * half_gap.powi((order - k) as i32) * m;
            }
            binom *= (order - k) as f64 / (k + 1) as f64;
        }
        moments[order] = sum / (1.0 - r.powi(order as i32));
    }
    moments
}

#[derive(Debug, Clone, Copy)]
struct Cylinder {
    left: f64,
    width: f64,
    gap: f64,
    mass: f64,
    depth: usize,
}

impl Cylinder {
    const UNIT: Cylinder = Cylinder {
        left: 0.0,
        width: 1.0,
        gap: 0.0,
        mass: 1.0,
        depth: 0,
    };

    fn center(&self) -> (f64, f64) {
        (self.left + 0.5 * self.width, self.gap + 0.5 * self.width)
    }

    fn children(&self, r: f64) -> [Cylinder; 2] {
        let width = self.width * r;
        let mass = 0.5 * self.mass;
        let depth = self.depth + 1;
        [
            Cylinder {
                left: self.left,
                width,
                gap: self.gap + self.width * (1.0 - r),
                mass,
                depth,
            },
            Cylinder {
                left: self.left + self.width * (1.0 - r),
                width,
                gap: self.gap,
                mass,
                depth,
            },
        ]
    }
}

/// A moment together with a bound on its approximation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

/// `∫ t^λ dμ` for real `λ >= 0`.
///
/// Integer orders up to [`MAX_RECURSION_MOMENT`] use the exact recursion.
/// Otherwise the unit interval is subdivided into cylinders; on each cylinder
/// with centre `c` and width `s` small enough that `λ s / c <= 1/2`, the
/// integral is the binomial series `c^λ Σ_j C(λ, j) (s/c)^j M_j` in the
/// central moments `M_j` of the rescaled measure. Cylinders whose upper bound
/// `mass · (right end)^λ` is negligible are pruned and charged to the bound.
pub(crate) fn moment(lambda: f64, r: f64) -> Estimate {
    if lambda == 0.0 {
        return Estimate {
            value: 1.0,
            error_bound: 0.0,
        };
    }
    if lambda.fract() == 0.0 && lambda <= MAX_RECURSION_MOMENT as f64 {
        let n = lambda as usize;
        let value = integer_moments(n, r)[n];
        return Estimate {
            value,
            error_bound: 4.0 * f64::EPSILON * n as f64 * value,
        };
    }
    cylinder_moment(lambda, r)
}

fn series_order_cap() -> usize {
    160
}

pub(crate) fn cylinder_moment(lambda: f64, r: f64) -> Estimate {
    let central = central_moments(series_order_cap(), r);
    // Lower bound from the rightmost cylinder [1 - r^d, 1] of mass 2^{-d}.
    let lower = (0..64)
        .map(|d| {
            let width = r.powi(d);
            0.5f64.powi(d) * (lambda * (-width).ln_1p()).exp()
        })
        .fold(0.0, f64::max);
    let prune = 1e-18 * lower;

    let mut value = 0.0;
    let mut error_bound = 0.0;
    let mut stack = vec![Cylinder::UNIT];
    while let Some(cyl) = stack.pop() {
        let (c, comp_c) = cyl.center();
        let right = 1.0 - cyl.gap;
        let log_c = if c > 0.5 { (-comp_c).ln_1p() } else { c.ln() };
        let upper = cyl.mass * (lambda * right.ln()).exp();
        if upper <= prune || cyl.depth >= MAX_DEPTH {
            value += cyl.mass * (lambda * log_c).exp();
            error_bound += upper;
            continue;
        }
        let x = cyl.width / c;
        if cyl.left > 0.0 && x * lambda.max(1.0) <= 0.5 {
            let (sum, tail) = binomial_series(lambda, x, &central);
            let scale = cyl.mass * (lambda * log_c).exp();
            value += scale * sum;
            error_bound += scale * tail;
            continue;
        }
        stack.extend(cyl.children(r));
    }
    Estimate { value, error_bound }
}

/// `Σ_j C(λ, j) x^j M_j` over even `j`, returning the sum and a tail bound.
fn binomial_series(lambda: f64, x: f64, central: &[f64]) -> (f64, f64) {
    let mut sum = 1.0;
    let mut coeff = 1.0; // C(λ, j) x^j
    let mut last = 1.0;
    for (j, &c) in central.iter().enumerate().skip(1) {
        coeff *= (lambda - (j - 1) as f64) / j as f64 * x;
        if j % 2 == 1 {
            continue;
        }
        let term = coeff * c;
        sum += term;
        last = term.abs();
        if last <= 1e-17 * sum.abs() && j as f64 > lambda {
            break;
        }
    }
    (sum, 2.0 * last)
}

/// Adaptive cylinder midpoint rule for `∫ g dμ`; `g` receives `(t, 1 - t)`.
///
/// A cylinder is accepted once its midpoint value and the sum over its two
/// children agree to `abs_tol · mass`; the finer value is kept.
const CAUCHY_TERMS: usize = 64;

/// `∫ dμ(t) / (1 - ρ t)` for `gap = 1 - ρ ∈ (0, 1]`.
///
/// Self-similarity gives `F(ρ) = F(rρ)/2 + F(ρ')/(2(1 - ρ + rρ))` with
/// `1 - ρ' = (1 - ρ)/(1 - ρ + rρ)`. Arguments at most 1/2 are summed as the
/// moment series `Σ ρ^n m_n`; the gap grows by about `1/r` per step.
pub(crate) fn cauchy_transform(gap: f64, r: f64) -> f64 {
    let moments = integer_moments(CAUCHY_TERMS, r);
    let series = |rho: f64| moments.iter().rev().fold(0.0, |acc, &m| acc * rho + m);
    let mut gap = gap;
    let mut scale = 1.0;
    let mut total = 0.0;
    loop {
        let rho = 1.0 - gap;
        if rho <= 0.5 {
            return total + scale * series(rho);
        }
        let denom = gap + r * rho;
        total += 0.5 * scale * series(r * rho);
        scale *= 0.5 / denom;
        gap /= denom;
    }
}

pub(crate) fn integrate<F>(g: F, r: f64, rel_tol: f64) -> Result<Estimate>
where
    F: Fn(f64, f64) -> f64,
{
    const MIN_DEPTH: usize = 4;
    const SCALE_DEPTH: i32 = 6;
    const MAX_ADAPT_DEPTH: usize = 60;

    let eval = |cyl: &Cylinder| -> Result<f64> {
        let (c, comp) = cyl.center();
        let v = g(c, comp);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Precondition(format!("integrand is not finite at t = {c}")))
        }
    };

    let mut scale_stack = vec![Cylinder::UNIT];
    let mut scale = 0.0;
    while let Some(cyl) = scale_stack.pop() {
        if cyl.depth as i32 == SCALE_DEPTH {
            scale += cyl.mass * eval(&cyl)?.abs();
        } else {
            scale_stack.extend(cyl.children(r));
        }
    }
    let abs_tol = rel_tol * scale;

    let mut value = 0.0;
    let mut error_bound = 0.0;
    let mut stack = vec![(Cylinder::UNIT, eval(&Cylinder::UNIT)?)];
    while let Some((cyl, coarse_value)) = stack.pop() {
        let [left, right] = cyl.children(r);
        let (lv, rv) = (eval(&left)?, eval(&right)?);
        let coarse = cyl.mass * coarse_value;
        let fine = left.mass * lv + right.mass * rv;
        let diff = (fine - coarse).abs();
        if cyl.depth >= MIN_DEPTH && diff <= abs_tol * cyl.mass {
            value += fine;
            error_bound += diff;
            continue;
        }
        if cyl.depth >= MAX_ADAPT_DEPTH {
            value += fine;
            error_bound += diff;
            continue;
        }
        stack.push((left, lv));
        stack.push((right, rv));
    }
    if error_bound > rel_tol * value.abs().max(scale) * 10.0 {
        return Err(Error::Accuracy {
            estimate: value,
            error_bound,
        });
    }
    Ok(Estimate { value, error_bound })
}
