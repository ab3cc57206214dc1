//! Ratio statistics for the pointwise, Newman, Bernstein, decoupling,
//! dilation and derivative inequalities on Müntz polynomials.
//!
//! Every statement of the form `A ≲ B` is measured as the ratio `A / B`; the
//! implicit constant is then the supremum of that ratio over admissible inputs.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_domain, Error, Result};
use crate::measure::MeasureSpec;
use crate::norms::{abs_pow, lp_integral, lp_norm, power_weight_integral};
use crate::poly::{BlockDecomposition, MuntzPolynomial};
use crate::quad::{self, QuadratureConfig};
use crate::sampling::{self, Stability};
use crate::spectrum::BlockSpectrum;

/// Input at which a ratio was attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    None,
    Point { t: f64 },
    Sample { seed: u64, trial: u64 },
    Polynomial { poly: MuntzPolynomial },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RatioContext {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
}

impl RatioContext {
    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }
    pub fn with_q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }
    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }
    pub fn with_block(mut self, block: usize) -> Self {
        self.block = Some(block);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub ratio: f64,
    pub witness: Witness,
    pub context: RatioContext,
}

impl RatioReport {
    pub(crate) fn new(ratio: f64, witness: Witness, context: RatioContext) -> Result<Self> {
        if !ratio.is_finite() || ratio < 0.0 {
            return Err(Error::Degenerate("ratio is not a finite nonnegative number"));
        }
        Ok(Self {
            ratio,
            witness,
            context,
        })
    }
}

fn check_p(p: f64) -> Result<()> {
    ensure_domain(p >= 1.0 && p.is_finite(), "p", p, "1 <= p < inf")
}

fn nonzero(f: &MuntzPolynomial) -> Result<()> {
    if f.is_zero() {
        Err(Error::Degenerate("zero polynomial"))
    } else {
        Ok(())
    }
}

fn vanishes_at_zero(f: &MuntzPolynomial) -> Result<()> {
    nonzero(f)?;
    if f.has_constant_term() {
        return Err(Error::Precondition("f(0) must vanish but f has a constant term".into()));
    }
    Ok(())
}

/// `‖f'‖_∞`, infinite when `f'` is unbounded at 0 and zero for constants.
fn derivative_sup(f: &MuntzPolynomial) -> Result<(f64, f64)> {
    let d = f.derivative();
    if d.is_zero() {
        return Ok((0.0, 0.0));
    }
    if d.min_exponent().is_some_and(|e| e < 0.0) {
        return Ok((f64::INFINITY, 0.0));
    }
    let s = d.sup_norm()?;
    Ok((s.value, s.argmax))
}

/// The block of `spectrum` containing every exponent of `f`.
pub fn block_of(f: &MuntzPolynomial, spectrum: &BlockSpectrum) -> Result<usize> {
    nonzero(f)?;
    let mut block = None;
    for exponent in f.exponents() {
        let index = spectrum.index_of(exponent).ok_or(Error::Membership { exponent })?;
        let k = spectrum.block_of_index(index);
        match block {
            None => block = Some(k),
            Some(b) if b != k => return Err(Error::Precondition(format!("polynomial spans blocks {b} and {k}"))),
            _ => {}
        }
    }
    Ok(block.expect("nonzero polynomial"))
}

/// `sup_x |f(x)| / (x^{λ_min/N} ‖f‖_∞)` over the sup-norm search grid, where
/// `λ_min` is the smallest exponent of the block holding `f_k`.
pub fn pointwise_block_ratio(f_k: &MuntzPolynomial, spectrum: &BlockSpectrum) -> Result<RatioReport> {
    let k = block_of(f_k, spectrum)?;
    let sup = f_k.sup_norm()?.value;
    let exponent = spectrum.block(k)[0] / spectrum.block_cap() as f64;
    let mut best = (0.0, 0.0);
    for t in f_k.search_grid() {
        let denom = t.powf(exponent) * sup;
        if t == 0.0 || denom == 0.0 {
            continue;
        }
        let r = f_k.eval_unchecked(t).abs() / denom;
        if r > best.0 {
            best = (r, t);
        }
    }
    RatioReport::new(
        best.0,
        Witness::Point { t: best.1 },
        RatioContext::default().with_block(k),
    )
}

/// `‖f'‖_∞ / ((Σ λ_k) ‖f‖_∞)`.
pub fn newman_ratio(f: &MuntzPolynomial) -> Result<RatioReport> {
    let sup = f.sup_norm()?.value;
    let (dsup, at) = derivative_sup(f)?;
    if dsup == 0.0 {
        return RatioReport::new(0.0, Witness::None, RatioContext::default());
    }
    if dsup.is_infinite() {
        return Err(Error::Degenerate("derivative is unbounded near t = 0"));
    }
    RatioReport::new(
        dsup / (f.exponent_sum() * sup),
        Witness::Point { t: at },
        RatioContext::default(),
    )
}

/// `‖f_k‖_{L^p(μ)} / (λ^δ ‖f_k‖_{L^q(ν_α)})` with `δ = (1+α)/q - β/p` and `λ`
/// the smallest exponent of `f_k`.
pub fn bernstein_ratio(
    f_k: &MuntzPolynomial,
    p: f64,
    q_exp: f64,
    alpha: f64,
    mu: &MeasureSpec,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<RatioReport> {
    check_p(p)?;
    ensure_domain(q_exp >= 1.0 && q_exp.is_finite(), "q", q_exp, "1 <= q < inf")?;
    ensure_domain(beta > 0.0 && beta.is_finite(), "beta", beta, "beta > 0")?;
    nonzero(f_k)?;
    let nu = MeasureSpec::jacobi(alpha)?;
    let lambda = f_k.min_exponent().expect("nonzero polynomial");
    ensure_domain(lambda > 0.0, "exponent", lambda, "block exponents > 0")?;
    let delta = (1.0 + alpha) / q_exp - beta / p;
    let num = lp_norm(f_k, mu, p, cfg)?;
    let den = lambda.powf(delta) * lp_norm(f_k, &nu, q_exp, cfg)?;
    RatioReport::new(
        num / den,
        Witness::None,
        RatioContext::default()
            .with_p(p)
            .with_q(q_exp)
            .with_alpha(alpha)
            .with_beta(beta),
    )
}

/// `‖f‖_{L^p(ν_α)} / min{‖f‖_∞^{1+e} / ‖f'‖_∞^e, ‖f‖_∞}` with `e = (1+α)/p`.
pub fn flat_lower_ratio(f_k: &MuntzPolynomial, p: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<RatioReport> {
    check_p(p)?;
    let nu = MeasureSpec::jacobi(alpha)?;
    let sup = f_k.sup_norm()?.value;
    let (dsup, _) = derivative_sup(f_k)?;
    let e = (1.0 + alpha) / p;
    let flat = if dsup == 0.0 {
        f64::INFINITY
    } else {
        sup.powf(1.0 + e) / dsup.powf(e)
    };
    let lower = flat.min(sup);
    if lower == 0.0 {
        return Err(Error::Degenerate("lower bound vanishes"));
    }
    RatioReport::new(
        lp_norm(f_k, &nu, p, cfg)? / lower,
        Witness::None,
        RatioContext::default().with_p(p).with_alpha(alpha),
    )
}

/// Grid values of `(1-t)^α Σ λ_k^α t^{λ_k}` and their extremes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelBracket {
    pub min: f64,
    pub max: f64,
    pub argmin: f64,
    pub argmax: f64,
    pub values: Vec<(f64, f64)>,
}

impl KernelBracket {
    pub fn spread(&self) -> f64 {
        self.max / self.min
    }
}

pub const KERNEL_T_MIN: f64 = 0.5;
pub const KERNEL_T_MAX: f64 = 1.0 - 1e-8;
pub const KERNEL_TRUNCATION: f64 = 10.0;

/// `(1-t)^α Σ_k λ_k^α t^{λ_k}` at a single point, without guards.
pub fn kernel_value(spectrum: &BlockSpectrum, alpha: f64, t: f64) -> f64 {
    let log_t = t.ln();
    let sum: f64 = spectrum
        .exponents()
        .iter()
        .map(|&l| (alpha * l.ln() + l * log_t).exp())
        .sum();
    (1.0 - t).powf(alpha) * sum
}

/// Kernel estimate on a grid in `[0.5, 1 - 1e-8]`. Fails with a truncation
/// error where the spectrum is too short to represent the infinite sum.
pub fn kernel_ratio(spectrum: &BlockSpectrum, alpha: f64, t_grid: &[f64]) -> Result<KernelBracket> {
    ensure_domain(alpha > 0.0 && alpha.is_finite(), "alpha", alpha, "alpha > 0")?;
    if t_grid.is_empty() {
        return Err(Error::Precondition("empty t grid".into()));
    }
    let lambda_max = *spectrum.exponents().last().expect("nonempty spectrum");
    let mut out = KernelBracket {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        argmin: f64::NAN,
        argmax: f64::NAN,
        values: Vec::with_capacity(t_grid.len()),
    };
    for &t in t_grid {
        ensure_domain(
            (KERNEL_T_MIN..=KERNEL_T_MAX).contains(&t),
            "t",
            t,
            "0.5 <= t <= 1 - 1e-8",
        )?;
        let product = lambda_max * (1.0 - t);
        if product < KERNEL_TRUNCATION {
            return Err(Error::Truncation { t, product });
        }
        let v = kernel_value(spectrum, alpha, t);
        if v < out.min {
            out.min = v;
            out.argmin = t;
        }
        if v > out.max {
            out.max = v;
            out.argmax = t;
        }
        out.values.push((t, v));
    }
    Ok(out)
}

/// `‖Σ f_k‖_{L^p(ν_α)} / (Σ ‖f_k‖^p_{L^p(ν_α)})^{1/p}`.
pub fn decoupling_ratio(
    blocks: &BlockDecomposition,
    p: f64,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<RatioReport> {
    check_p(p)?;
    let nu = MeasureSpec::jacobi(alpha)?;
    let mut den = 0.0;
    let mut any = false;
    for (_, block) in blocks.nonzero() {
        den += lp_integral(block, &nu, p, cfg)?;
        any = true;
    }
    if !any {
        return Err(Error::Degenerate("every block is zero"));
    }
    let num = lp_integral(&blocks.sum(), &nu, p, cfg)?;
    RatioReport::new(
        (num / den).powf(1.0 / p),
        Witness::None,
        RatioContext::default().with_p(p).with_alpha(alpha),
    )
}

/// Decoupling ratios of random polynomials over `spectrum` at `trials` and
/// `2 trials` samples.
pub fn decoupling_scan(
    spectrum: &BlockSpectrum,
    p: f64,
    alpha: f64,
    trials: u64,
    seed: u64,
    cfg: &QuadratureConfig,
) -> Result<Stability> {
    sampling::stability_scan(trials, seed, |_, rng| {
        let f = sampling::random_polynomial(spectrum, rng)?;
        Ok(decoupling_ratio(&f.block_decompose(spectrum)?, p, alpha, cfg)?.ratio)
    })
}

/// `‖T_ρ f‖ / ‖f‖ · ρ^{(λ_k+1)/p}` in `L^p(t^{λ_k} dt)`, never above 1.
pub fn dilation_norm_check(
    f: &MuntzPolynomial,
    rho: f64,
    p: f64,
    lambda_k: f64,
    cfg: &QuadratureConfig,
) -> Result<RatioReport> {
    check_p(p)?;
    nonzero(f)?;
    ensure_domain(
        lambda_k > 0.0 && lambda_k.is_finite(),
        "lambda_k",
        lambda_k,
        "lambda_k > 0",
    )?;
    let dilated = f.dilate(rho)?;
    let den = power_weight_integral(f, lambda_k, p, cfg)?;
    if den == 0.0 {
        return Err(Error::Degenerate("f vanishes in L^p(t^λ dt)"));
    }
    let num = power_weight_integral(&dilated, lambda_k, p, cfg)?;
    RatioReport::new(
        (num / den).powf(1.0 / p) * rho.powf((lambda_k + 1.0) / p),
        Witness::None,
        RatioContext::default().with_p(p),
    )
}

/// `‖f_k‖ / ‖f‖` in `L^p(t^{λ_k} dt)`, with `λ_k` the first exponent of block `k`.
pub fn block_projection_ratio(
    f: &MuntzPolynomial,
    spectrum: &BlockSpectrum,
    k: usize,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<RatioReport> {
    check_p(p)?;
    nonzero(f)?;
    if k >= spectrum.num_blocks() {
        return Err(Error::Precondition(format!(
            "block {k} out of range ({} blocks)",
            spectrum.num_blocks()
        )));
    }
    let blocks = f.block_decompose(spectrum)?;
    let f_k = &blocks.blocks[k];
    if f_k.is_zero() {
        return Err(Error::Precondition(format!("block {k} of f is zero")));
    }
    let lambda = spectrum.anchor(k);
    let num = power_weight_integral(f_k, lambda, p, cfg)?;
    let den = power_weight_integral(f, lambda, p, cfg)?;
    RatioReport::new(
        (num / den).powf(1.0 / p),
        Witness::None,
        RatioContext::default().with_p(p).with_block(k),
    )
}

/// `∫|f|^p dν_α / ∫|f'|^p dν_{α+p}` for `f(0) = 0`.
pub fn derivative_switch_ratio(f: &MuntzPolynomial, p: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<RatioReport> {
    check_p(p)?;
    vanishes_at_zero(f)?;
    let nu = MeasureSpec::jacobi(alpha)?;
    let nu_shifted = MeasureSpec::jacobi(alpha + p)?;
    let num = lp_integral(f, &nu, p, cfg)?;
    let den = lp_integral(&f.derivative(), &nu_shifted, p, cfg)?;
    RatioReport::new(
        num / den,
        Witness::None,
        RatioContext::default().with_p(p).with_alpha(alpha),
    )
}

/// Total variation of `|f|^p` on `[0, t]`, tabulated at the monotonicity
/// breakpoints of `|f|` (roots and critical points).
struct PowerVariation<'a> {
    f: &'a MuntzPolynomial,
    p: f64,
    breaks: Vec<f64>,
    levels: Vec<f64>,
    cumulative: Vec<f64>,
}

impl<'a> PowerVariation<'a> {
    fn new(f: &'a MuntzPolynomial, p: f64) -> Self {
        let mut breaks = vec![0.0];
        breaks.extend(f.roots());
        breaks.extend(f.derivative().roots());
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let levels: Vec<f64> = breaks.iter().map(|&b| abs_pow(f.eval_unchecked(b), p)).collect();
        let mut cumulative = vec![0.0];
        for w in levels.windows(2) {
            let last = *cumulative.last().expect("nonempty");
            cumulative.push(last + (w[1] - w[0]).abs());
        }
        Self {
            f,
            p,
            breaks,
            levels,
            cumulative,
        }
    }

    fn at(&self, t: f64, comp: f64) -> f64 {
        let i = self.breaks.partition_point(|&b| b <= t) - 1;
        let here = abs_pow(self.f.eval_split(t, comp), self.p);
        self.cumulative[i] + (here - self.levels[i]).abs()
    }
}

/// `∫|f|^p dμ / ∫∫ |f'(ρt)| |f(ρt)|^{p-1} dμ(t) dρ` for `f(0) = 0`.
///
/// The inner integral is `V_0^t(|f|^p) / (p t)`, the variation of `|f|^p`
/// on `[0, t]`, which follows from the substitution `s = ρ t`.
pub fn derivative_translation_ratio(
    f: &MuntzPolynomial,
    p: f64,
    mu: &MeasureSpec,
    cfg: &QuadratureConfig,
) -> Result<RatioReport> {
    check_p(p)?;
    vanishes_at_zero(f)?;
    let variation = PowerVariation::new(f, p);
    let f_prime = f.derivative();
    let inner = |t: f64, comp: f64| {
        if t == 0.0 {
            // ρ-integrand is constant: |f'(0)| |f(0)|^{p-1}.
            return if p > 1.0 {
                0.0
            } else {
                f_prime.eval_unchecked(0.0).abs()
            };
        }
        variation.at(t, comp) / (p * t)
    };
    let den = mu.integrate_split(inner, &variation.breaks[1..], cfg)?;
    let num = lp_integral(f, mu, p, cfg)?;
    RatioReport::new(num / den, Witness::None, RatioContext::default().with_p(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocMaxCheck {
    /// Location of `max |f|`.
    pub x0: f64,
    /// `1 - A ‖f‖_∞ / ‖f'‖_∞`.
    pub lower: f64,
    pub satisfied: bool,
}

/// Whether `1 - A‖f‖_∞/‖f'‖_∞ <= x0 <= 1` at the maximizer `x0` of `|f|`.
pub fn loc_max_check(f_k: &MuntzPolynomial, a: f64) -> Result<LocMaxCheck> {
    ensure_domain(a > 0.0 && a.is_finite(), "A", a, "A > 0")?;
    let sup = f_k.sup_norm()?;
    let (dsup, _) = derivative_sup(f_k)?;
    let lower = if dsup == 0.0 {
        f64::NEG_INFINITY
    } else {
        1.0 - a * sup.value / dsup
    };
    Ok(LocMaxCheck {
        x0: sup.argmax,
        lower,
        satisfied: lower <= sup.argmax && sup.argmax <= 1.0,
    })
}

/// Log-spaced `ε` grid on `[1e-12, 1]`, four points per decade.
pub fn tail_check_grid() -> Vec<f64> {
    (0..=48).map(|i| 10f64.powf(-(i as f64) / 4.0)).collect()
}

/// Verifies `μ([1-ε, 1]) <= C ε^β` (up to 1e-9 relative) on [`tail_check_grid`].
pub fn check_tail_envelope(mu: &MeasureSpec, beta: f64, constant: f64) -> Result<()> {
    for eps in tail_check_grid() {
        let tail = mu.tail(eps)?;
        let bound = constant * eps.powf(beta);
        if tail > bound * (1.0 + 1e-9) {
            return Err(Error::Precondition(format!(
                "tail {tail:e} exceeds C eps^beta = {bound:e} at eps = {eps:e}"
            )));
        }
    }
    Ok(())
}

/// `∫ g dμ / ∫ g(x) β C (1-x)^{β-1} dx` for `g` nonnegative and nondecreasing,
/// after checking the tail envelope `μ([1-ε,1]) <= C ε^β`.
pub fn ipp_check<G>(g: G, mu: &MeasureSpec, beta: f64, constant: f64, cfg: &QuadratureConfig) -> Result<RatioReport>
where
    G: Fn(f64) -> f64,
{
    ensure_domain(beta > 0.0 && beta.is_finite(), "beta", beta, "beta > 0")?;
    ensure_domain(constant > 0.0 && constant.is_finite(), "C", constant, "C > 0")?;
    check_tail_envelope(mu, beta, constant)?;
    let num = mu.integrate(&g, cfg)?;
    let den = beta * constant * quad::integrate_weighted(&g, beta - 1.0, cfg)?;
    if den == 0.0 {
        return Err(Error::Degenerate("g vanishes identically"));
    }
    RatioReport::new(num / den, Witness::None, RatioContext::default().with_beta(beta))
}
