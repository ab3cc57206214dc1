//! `L^p` integrals of Müntz polynomials against measures and power weights.

use crate::error::{ensure_domain, Error, Result};
use crate::measure::MeasureSpec;
use crate::poly::MuntzPolynomial;
use crate::quad::{self, QuadratureConfig};

#[inline]
pub(crate) fn abs_pow(v: f64, p: f64) -> f64 {
    if p == 1.0 {
        v.abs()
    } else if p == 2.0 {
        v * v
    } else {
        v.abs().powf(p)
    }
}

fn check_p(p: f64) -> Result<()> {
    ensure_domain(p >= 1.0 && p.is_finite(), "p", p, "1 <= p < inf")
}

/// `∫ |f|^p dμ`. Monomials use the measure's moments (the Beta closed form
/// for Jacobi weights); otherwise the integral is split at the sign changes
/// of `f`.
pub fn lp_integral(f: &MuntzPolynomial, mu: &MeasureSpec, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_p(p)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    if let [term] = f.terms() {
        let lambda = p * term.exponent;
        match mu {
            MeasureSpec::JacobiWeight { alpha } => {
                if lambda <= -1.0 {
                    return Err(Error::Domain {
                        name: "exponent",
                        value: term.exponent,
                        expected: "p * exponent > -1 for integrability",
                    });
                }
                return Ok(abs_pow(term.coeff, p) * quad::weighted_monomial(lambda, *alpha)?);
            }
            MeasureSpec::TailEnvelope { .. } => {}
            // Moments that miss their accuracy bound fall through to quadrature.
            _ => {
                if let Ok(m) = mu.moment(lambda) {
                    return Ok(abs_pow(term.coeff, p) * m);
                }
            }
        }
    }
    let roots = f.roots();
    mu.integrate_split(|t, c| abs_pow(f.eval_split(t, c), p), &roots, cfg)
}

/// `‖f‖_{L^p(μ)}`.
pub fn lp_norm(f: &MuntzPolynomial, mu: &MeasureSpec, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(lp_integral(f, mu, p, cfg)?.powf(1.0 / p))
}

/// `∫_0^1 |f(t)|^p t^λ dt`, the norm of the measures `t^{λ_k} dt`.
pub fn power_weight_integral(f: &MuntzPolynomial, lambda: f64, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_p(p)?;
    ensure_domain(lambda > -1.0 && lambda.is_finite(), "lambda", lambda, "lambda > -1")?;
    if f.is_zero() {
        return Ok(0.0);
    }
    if let [term] = f.terms() {
        let total = p * term.exponent + lambda;
        ensure_domain(total > -1.0, "exponent", term.exponent, "p * exponent + lambda > -1")?;
        return Ok(abs_pow(term.coeff, p) / (total + 1.0));
    }
    let roots = f.roots();
    let weight = |t: f64, c: f64| {
        if lambda == 0.0 {
            1.0
        } else if t <= 0.5 {
            t.powf(lambda)
        } else {
            (lambda * (-c).ln_1p()).exp()
        }
    };
    Ok(quad::integrate_weighted_pieces(|t, c| abs_pow(f.eval_split(t, c), p) * weight(t, c), 0.0, &roots, cfg)?.value)
}
