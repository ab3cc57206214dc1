//! Carleson embeddings of Müntz spaces: summability diagnostics, embedding
//! ratios, extremal constant search and Schur kernel sums.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_domain, Error, Result};
use crate::inequalities::{RatioContext, RatioReport, Witness};
use crate::measure::{least_squares, MeasureSpec};
use crate::norms::lp_norm;
use crate::poly::MuntzPolynomial;
use crate::quad::{self, QuadratureConfig};
use crate::sampling;
use crate::spectrum::BlockSpectrum;

/// Term slope below which a series is declared convergent.
pub const CONVERGE_SLOPE: f64 = -0.1;
/// Term slope at or above which a series is declared divergent.
pub const DIVERGE_SLOPE: f64 = -0.02;

/// `‖f‖_{L^p(μ)} ≲ ‖f‖_{L^{p/β}(ν)}` over the Müntz space of `spectrum`, where
/// `ν` is Lebesgue measure or the Jacobi weight `ν_{rhs_alpha}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProblem")]
pub struct EmbeddingProblem {
    pub spectrum: BlockSpectrum,
    pub mu: MeasureSpec,
    pub p: f64,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs_alpha: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    spectrum: BlockSpectrum,
    #[serde(alias = "measure")]
    mu: MeasureSpec,
    p: f64,
    beta: f64,
    #[serde(default)]
    rhs_alpha: Option<f64>,
}

impl TryFrom<RawProblem> for EmbeddingProblem {
    type Error = Error;

    fn try_from(raw: RawProblem) -> Result<Self> {
        Self::new(raw.spectrum, raw.mu, raw.p, raw.beta, raw.rhs_alpha)
    }
}

impl EmbeddingProblem {
    pub fn new(spectrum: BlockSpectrum, mu: MeasureSpec, p: f64, beta: f64, rhs_alpha: Option<f64>) -> Result<Self> {
        let problem = Self {
            spectrum,
            mu,
            p,
            beta,
            rhs_alpha,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_domain(self.beta > 0.0 && self.beta.is_finite(), "beta", self.beta, "beta > 0")?;
        ensure_domain(self.p >= 1.0 && self.p.is_finite(), "p", self.p, "1 <= p < inf")?;
        if self.beta >= 1.0 {
            ensure_domain(self.p >= self.beta, "p", self.p, "p >= beta when beta >= 1")?;
        }
        if let Some(alpha) = self.rhs_alpha {
            ensure_domain(alpha > -1.0 && alpha.is_finite(), "rhs_alpha", alpha, "alpha > -1")?;
        }
        self.mu.validate()
    }

    /// Measure of the right-hand side norm.
    pub fn rhs_measure(&self) -> MeasureSpec {
        MeasureSpec::JacobiWeight {
            alpha: self.rhs_alpha.unwrap_or(0.0),
        }
    }

    /// Exponent `p/β` of the right-hand side norm.
    pub fn rhs_exponent(&self) -> f64 {
        self.p / self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

/// Partial sums of a nonnegative series with a heuristic convergence verdict.
///
/// `slope` is the least-squares slope of `ln(term)` over the second half of
/// the terms: per index for [`moment_series`], per unit of `ln(1/δ)` for
/// [`double_integral_condition`]. Terms that underflow to zero at the end of
/// the sequence count as convergence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDiagnosis {
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub verdict: Verdict,
    pub slope: Option<f64>,
}

fn diagnose(xs: &[f64], terms: &[f64]) -> (Verdict, Option<f64>) {
    let n = terms.len();
    if n < 4 {
        return (Verdict::Inconclusive, None);
    }
    let tail = n / 2..n;
    let fit = |range: std::ops::Range<usize>| -> Option<f64> {
        let pts: Vec<(f64, f64)> = range
            .filter(|&i| terms[i] > 0.0)
            .map(|i| (xs[i], terms[i].ln()))
            .collect();
        (pts.len() >= 2).then(|| least_squares(&pts).0)
    };
    let underflow = terms[n - 1] == 0.0 && terms.iter().any(|&t| t > 0.0);
    if underflow {
        return (Verdict::Converges, fit(tail).or_else(|| fit(0..n)));
    }
    match fit(tail) {
        Some(s) if s < CONVERGE_SLOPE => (Verdict::Converges, Some(s)),
        Some(s) if s >= DIVERGE_SLOPE => (Verdict::Diverges, Some(s)),
        slope => (Verdict::Inconclusive, slope),
    }
}

fn partial_sums(terms: &[f64]) -> Vec<f64> {
    terms
        .iter()
        .scan(0.0, |acc, &t| {
            *acc += t;
            Some(*acc)
        })
        .collect()
}

fn check_beta_below_one(beta: f64) -> Result<()> {
    ensure_domain(beta > 0.0 && beta < 1.0, "beta", beta, "0 < beta < 1")
}

/// First `k` terms of `Σ λ_k^{β/(1-β)} (∫ t^{pλ_k} dμ)^{1/(1-β)}`.
pub fn moment_series(problem: &EmbeddingProblem, k: usize) -> Result<SeriesDiagnosis> {
    check_beta_below_one(problem.beta)?;
    ensure_domain(
        k >= 1 && k <= problem.spectrum.len(),
        "K",
        k as f64,
        "1 <= K <= spectrum length",
    )?;
    let beta = problem.beta;
    let terms = problem.spectrum.exponents()[..k]
        .iter()
        .map(|&lambda| {
            let m = problem.mu.moment(problem.p * lambda)?;
            Ok(if m == 0.0 {
                0.0
            } else {
                ((beta * lambda.ln() + m.ln()) / (1.0 - beta)).exp()
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let xs: Vec<f64> = (0..k).map(|i| i as f64).collect();
    let (verdict, slope) = diagnose(&xs, &terms);
    Ok(SeriesDiagnosis {
        partial_sums: partial_sums(&terms),
        terms,
        verdict,
        slope,
    })
}

/// `∫ dμ(t) / (1 - ρ t)` with `gap = 1 - ρ`.
pub fn inner_cauchy_integral(mu: &MeasureSpec, gap: f64, cfg: &QuadratureConfig) -> Result<f64> {
    mu.cauchy_transform(gap, cfg)
}

/// Truncated outer integrals `I(δ) = ∫_0^{1-δ} (∫ dμ(t)/(1-ρt))^{1/(1-β)} dρ`.
///
/// The outer variable is `v = ln(1/(1-ρ))`. Terms are the increments of `I`
/// between consecutive grid points (sorted by decreasing `δ`) and the verdict
/// is read from their density per unit `v`.
pub fn double_integral_condition(
    mu: &MeasureSpec,
    beta: f64,
    delta_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<SeriesDiagnosis> {
    check_beta_below_one(beta)?;
    mu.validate()?;
    let mut deltas = delta_grid.to_vec();
    for &d in &deltas {
        ensure_domain(d > 0.0 && d < 1.0, "delta", d, "0 < delta < 1")?;
    }
    deltas.sort_by(|a, b| b.total_cmp(a));
    deltas.dedup();
    let power = 1.0 / (1.0 - beta);
    let outer = |v: f64| -> Result<f64> {
        let gap = (-v).exp();
        Ok(inner_cauchy_integral(mu, gap, cfg)?.powf(power) * gap)
    };
    let mut terms = Vec::with_capacity(deltas.len());
    let mut densities = Vec::with_capacity(deltas.len());
    let mut xs = Vec::with_capacity(deltas.len());
    let mut v_prev = 0.0;
    for &d in &deltas {
        let v = -d.ln();
        let width = v - v_prev;
        // Evaluation errors inside the quadrature closure are surfaced after it.
        let failure = std::cell::RefCell::new(None);
        let piece = quad::integrate_interval(
            |u, _| match outer(v_prev + width * u) {
                Ok(x) => x,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            0.0,
            1.0,
            cfg,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let increment = width * piece?.value;
        terms.push(increment);
        densities.push(increment / width);
        xs.push(v);
        v_prev = v;
    }
    let (verdict, slope) = diagnose(&xs, &densities);
    Ok(SeriesDiagnosis {
        partial_sums: partial_sums(&terms),
        terms,
        verdict,
        slope,
    })
}

fn check_member(f: &MuntzPolynomial, spectrum: &BlockSpectrum) -> Result<()> {
    if f.is_zero() {
        return Err(Error::Degenerate("zero polynomial"));
    }
    for exponent in f.exponents() {
        spectrum.index_of(exponent).ok_or(Error::Membership { exponent })?;
    }
    Ok(())
}

fn ratio_unchecked(f: &MuntzPolynomial, problem: &EmbeddingProblem, cfg: &QuadratureConfig) -> Result<f64> {
    let num = lp_norm(f, &problem.mu, problem.p, cfg)?;
    let den = lp_norm(f, &problem.rhs_measure(), problem.rhs_exponent(), cfg)?;
    if den == 0.0 {
        return Err(Error::Degenerate("right-hand side norm vanishes"));
    }
    Ok(num / den)
}

fn problem_context(problem: &EmbeddingProblem) -> RatioContext {
    let ctx = RatioContext::default().with_p(problem.p).with_beta(problem.beta);
    match problem.rhs_alpha {
        Some(alpha) => ctx.with_alpha(alpha),
        None => ctx,
    }
}

/// `‖f‖_{L^p(μ)} / ‖f‖_{L^{p/β}(ν)}` for `f` over the problem's spectrum.
pub fn embedding_ratio(f: &MuntzPolynomial, problem: &EmbeddingProblem, cfg: &QuadratureConfig) -> Result<RatioReport> {
    check_member(f, &problem.spectrum)?;
    RatioReport::new(
        ratio_unchecked(f, problem, cfg)?,
        Witness::None,
        problem_context(problem),
    )
}

/// Outcome of [`embedding_constant_search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantSearch {
    /// Best ratio, witnessed by the refined polynomial.
    pub report: RatioReport,
    pub start_trial: u64,
    pub start_ratio: f64,
    pub seed: u64,
    /// Trials whose random polynomial was degenerate.
    pub skipped: Vec<u64>,
}

/// Largest embedding ratio over `trials` seeded random polynomials, refined
/// by multiplicative coordinate ascent (`c_i × (1 ± step)`, step halving from
/// 0.5) for `ascent_steps` rounds.
pub fn embedding_constant_search(
    problem: &EmbeddingProblem,
    trials: u64,
    seed: u64,
    ascent_steps: usize,
    cfg: &QuadratureConfig,
) -> Result<ConstantSearch> {
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let n = problem.spectrum.len();
    let evaluate = |coeffs: &[f64]| -> Result<Option<f64>> {
        let f = MuntzPolynomial::from_spectrum(&problem.spectrum, coeffs)?;
        if f.is_zero() {
            return Ok(None);
        }
        match ratio_unchecked(&f, problem, cfg) {
            Ok(r) if r.is_finite() => Ok(Some(r)),
            Ok(_) | Err(Error::Degenerate(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let samples = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let coeffs = sampling::gaussian_coefficients(&mut sampling::trial_rng(seed, trial), n);
            Ok((trial, evaluate(&coeffs)?, coeffs))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut skipped = Vec::new();
    let mut best: Option<(u64, f64, Vec<f64>)> = None;
    for (trial, ratio, coeffs) in samples {
        match ratio {
            None => skipped.push(trial),
            Some(r) => {
                if best.as_ref().is_none_or(|b| r > b.1) {
                    best = Some((trial, r, coeffs));
                }
            }
        }
    }
    let (start_trial, start_ratio, mut coeffs) = best.ok_or(Error::Degenerate("every sample was degenerate"))?;
    let mut best_ratio = start_ratio;
    let mut step = 0.5;
    for _ in 0..ascent_steps {
        for i in 0..n {
            for factor in [1.0 + step, 1.0 - step] {
                let mut trial = coeffs.clone();
                trial[i] *= factor;
                if let Some(r) = evaluate(&trial)? {
                    if r > best_ratio {
                        best_ratio = r;
                        coeffs = trial;
                        break;
                    }
                }
            }
        }
        step *= 0.5;
    }
    let witness = MuntzPolynomial::from_spectrum(&problem.spectrum, &coeffs)?;
    Ok(ConstantSearch {
        report: RatioReport::new(
            best_ratio,
            Witness::Polynomial { poly: witness },
            problem_context(problem),
        )?,
        start_trial,
        start_ratio,
        seed,
        skipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub k: usize,
    pub lambda: f64,
    /// `μ([1 - 1/λ_k, 1])`.
    pub tail: f64,
    /// `e^p ∫ t^{pλ_k} dμ`.
    pub moment_bound: f64,
    /// `λ_k^{-β}`.
    pub power: f64,
}

/// Tail, moment bound and `λ^{-β}` at each `k` in `k_range`.
pub fn tail_necessity_check(problem: &EmbeddingProblem, k_range: std::ops::Range<usize>) -> Result<Vec<TailRow>> {
    if k_range.end > problem.spectrum.len() {
        return Err(Error::Precondition(format!(
            "k range ends at {} but the spectrum has {} exponents",
            k_range.end,
            problem.spectrum.len()
        )));
    }
    let p = problem.p;
    k_range
        .map(|k| {
            let lambda = problem.spectrum.exponents()[k];
            Ok(TailRow {
                k,
                lambda,
                tail: problem.mu.tail((1.0 / lambda).min(1.0))?,
                moment_bound: p.exp() * problem.mu.moment(p * lambda)?,
                power: lambda.powf(-problem.beta),
            })
        })
        .collect()
}

/// `‖f‖_{L^{p/β}} / ‖f‖_{L^p(ν_α)}` with `β = 1 + α`, `α ∈ (-1, 0)`.
///
/// The remark behind this reverse embedding tests against the positive
/// polynomials `h_1 = Σ ‖f_k‖_r λ_k^{β/p} t^{λ_k}` and
/// `h_2 = Σ ‖f_k‖_r^{(p-β)/β} λ_k^{(p-β)/p} t^{λ_k}` with `r = p/β`. The
/// three displayed bounds become ratio checks:
///
/// ```
/// use muntzlab::embeddings::reverse_embedding_check;
/// use muntzlab::measure::MeasureSpec;
/// use muntzlab::norms::lp_norm;
/// use muntzlab::poly::MuntzPolynomial;
/// use muntzlab::quad::QuadratureConfig;
/// use muntzlab::spectrum::generate_lacunary;
///
/// let cfg = QuadratureConfig::default();
/// let (alpha, p) = (-0.5, 2.0);
/// let beta = 1.0 + alpha;
/// let r = p / beta;
/// let s = generate_lacunary(1.0, 2.0, 8).unwrap();
/// let coeffs = [0.7, -1.3, 0.4, 2.1, -0.6, 1.0, -0.9, 0.3];
/// let f = MuntzPolynomial::from_spectrum(&s, &coeffs).unwrap();
/// let lebesgue = MeasureSpec::jacobi(0.0).unwrap();
/// let norm_r = |g: &MuntzPolynomial| lp_norm(g, &lebesgue, r, &cfg).unwrap();
///
/// let blocks = f.block_decompose(&s).unwrap();
/// let block_norms: Vec<f64> = blocks.blocks.iter().map(|b| norm_r(b)).collect();
/// let lambdas = s.exponents();
/// let h1 = MuntzPolynomial::new(lambdas.iter().zip(&block_norms).map(|(&l, &n)| {
///     (l, n * l.powf(beta / p))
/// })).unwrap();
/// let h2 = MuntzPolynomial::new(lambdas.iter().zip(&block_norms).map(|(&l, &n)| {
///     (l, n.powf((p - beta) / beta) * l.powf((p - beta) / p))
/// })).unwrap();
/// let gram = |a: &MuntzPolynomial, b: &MuntzPolynomial| -> f64 {
///     a.terms().iter().flat_map(|x| b.terms().iter().map(move |y| {
///         x.coeff * y.coeff / (x.exponent + y.exponent + 1.0)
///     })).sum()
/// };
/// let pairing = gram(&h1, &h2);
///
/// // Hölder step of the dual bound: an exact inequality.
/// let nu_alpha = MeasureSpec::jacobi(alpha).unwrap();
/// let nu_dual = MeasureSpec::jacobi(-alpha / (p - 1.0)).unwrap();
/// let holder = lp_norm(&h1, &nu_alpha, p, &cfg).unwrap()
///     * lp_norm(&h2, &nu_dual, p / (p - 1.0), &cfg).unwrap();
/// assert!(pairing <= holder * (1.0 + 1e-9));
/// // Second step of the dual bound: ‖g‖ in L^{p/(p-1)}(ν) against L^{p/(p-β)}.
/// let dual_ratio = lp_norm(&h2, &nu_dual, p / (p - 1.0), &cfg).unwrap()
///     / lp_norm(&h2, &lebesgue, p / (p - beta), &cfg).unwrap();
/// assert!(dual_ratio.is_finite() && dual_ratio > 0.0);
///
/// // Lower bound for the pairing by its diagonal, then by ‖f‖_r^r.
/// let diagonal: f64 = lambdas.iter().zip(&block_norms)
///     .map(|(&l, &n)| n.powf(r) * l / (2.0 * l + 1.0))
///     .sum();
/// assert!(pairing >= diagonal);
/// assert!(diagonal / norm_r(&f).powf(r) > 0.1);
///
/// // Upper bound for h_2 against the block sum.
/// let h2_ratio = lp_norm(&h2, &lebesgue, p / (p - beta), &cfg).unwrap().powf(p / (p - beta))
///     / block_norms.iter().map(|n| n.powf(r)).sum::<f64>();
/// assert!(h2_ratio.is_finite() && h2_ratio < 100.0);
///
/// let reverse = reverse_embedding_check(&f, p, alpha, &cfg).unwrap();
/// assert!(reverse.ratio > 0.0 && reverse.ratio < 100.0);
/// ```
pub fn reverse_embedding_check(f: &MuntzPolynomial, p: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<RatioReport> {
    ensure_domain(alpha > -1.0 && alpha < 0.0, "alpha", alpha, "-1 < alpha < 0")?;
    let beta = 1.0 + alpha;
    ensure_domain(p > beta && p.is_finite(), "p", p, "p > beta = 1 + alpha")?;
    if f.is_zero() {
        return Err(Error::Degenerate("zero polynomial"));
    }
    let lebesgue = MeasureSpec::JacobiWeight { alpha: 0.0 };
    let nu = MeasureSpec::jacobi(alpha)?;
    let num = lp_norm(f, &lebesgue, p / beta, cfg)?;
    let den = lp_norm(f, &nu, p, cfg)?;
    RatioReport::new(
        num / den,
        Witness::None,
        RatioContext::default().with_p(p).with_alpha(alpha).with_beta(beta),
    )
}

/// Suprema of the Schur test sums for the kernel
/// `Φ_{n-1}(z) = z_1⋯z_{n-1} / (1 + z_1^{p_1} + ⋯ + z_{n-1}^{p_{n-1}})`
/// with `z_j = (λ_{i_j} / λ_{i_n})^{β/p_j}`.
///
/// Rows fix the leading indices `(i_1, …, i_{n-1})` and sum over `i_n`;
/// columns fix `i_n` and sum over the leading indices. Fixed indices range
/// over `0..=i_max`, summed indices over the whole spectrum. For `n = 2`,
/// `Φ_1(x) = x / (1 + x^p)` and rows are `Σ_j Φ((λ_i/λ_j)^{β/p})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurSums {
    pub row_sup: f64,
    pub col_sup: f64,
    pub row_argmax: Vec<usize>,
    pub col_argmax: usize,
}

/// Largest `len^{n-1} · (i_max+1)` enumeration accepted.
pub const SCHUR_WORK_LIMIT: f64 = 2e9;

fn log_phi(log_z: &[f64], exponents: &[f64]) -> f64 {
    // ln(1 + Σ e^{p_j ln z_j}) by log-sum-exp.
    let mut top = 0.0f64;
    for (lz, p) in log_z.iter().zip(exponents) {
        top = top.max(p * lz);
    }
    let mut acc = (-top).exp();
    for (lz, p) in log_z.iter().zip(exponents) {
        acc += (p * lz - top).exp();
    }
    log_z.iter().sum::<f64>() - (top + acc.ln())
}

/// Kernel value `Φ_{n-1}` at leading indices `lead` and last index `last`.
pub fn schur_kernel(log_lambdas: &[f64], exponents: &[f64], beta: f64, lead: &[usize], last: usize) -> f64 {
    let mut log_z = [0.0f64; 16];
    let m = lead.len();
    for j in 0..m {
        log_z[j] = beta / exponents[j] * (log_lambdas[lead[j]] - log_lambdas[last]);
    }
    log_phi(&log_z[..m], &exponents[..m]).exp()
}

fn advance(odometer: &mut [usize], limit: usize) -> bool {
    for digit in odometer.iter_mut().rev() {
        *digit += 1;
        if *digit < limit {
            return true;
        }
        *digit = 0;
    }
    false
}

/// Schur row and column suprema by direct enumeration. `exponents` holds
/// `p_1, …, p_n` with `Σ 1/p_j = 1`.
pub fn schur_kernel_sums(spectrum: &BlockSpectrum, exponents: &[f64], beta: f64, i_max: usize) -> Result<SchurSums> {
    let n = exponents.len();
    if !(2..=16).contains(&n) {
        return Err(Error::Precondition(format!(
            "Schur sums need 2 to 16 exponents, got {n}"
        )));
    }
    for &p in exponents {
        ensure_domain(p > 1.0 && p.is_finite(), "p_j", p, "1 < p_j < inf")?;
    }
    let reciprocal: f64 = exponents.iter().map(|p| 1.0 / p).sum();
    ensure_domain(
        (reciprocal - 1.0).abs() <= 1e-12,
        "sum 1/p_j",
        reciprocal,
        "sum of 1/p_j equal to 1 within 1e-12",
    )?;
    ensure_domain(beta > 0.0 && beta.is_finite(), "beta", beta, "beta > 0")?;
    let len = spectrum.len();
    if i_max >= len {
        return Err(Error::Precondition(format!(
            "i_max = {i_max} needs a spectrum longer than {len}"
        )));
    }
    let work = (len as f64).powi(n as i32 - 1) * (i_max + 1) as f64 * 2.0;
    if work > SCHUR_WORK_LIMIT {
        return Err(Error::Unsupported("Schur enumeration exceeds the work limit"));
    }
    let log_lambdas: Vec<f64> = spectrum.exponents().iter().map(|l| l.ln()).collect();
    let lead_count = n - 1;

    let (col_sup, col_argmax) = (0..=i_max)
        .into_par_iter()
        .map(|last| {
            let mut lead = vec![0usize; lead_count];
            let mut sum = 0.0;
            loop {
                sum += schur_kernel(&log_lambdas, exponents, beta, &lead, last);
                if !advance(&mut lead, len) {
                    break;
                }
            }
            (sum, last)
        })
        .reduce(|| (f64::NEG_INFINITY, 0), pick_max);

    let mut leads = Vec::new();
    let mut lead = vec![0usize; lead_count];
    loop {
        leads.push(lead.clone());
        if !advance(&mut lead, i_max + 1) {
            break;
        }
    }
    let (row_sup, row_index) = leads
        .par_iter()
        .enumerate()
        .map(|(idx, lead)| {
            let sum: f64 = (0..len)
                .map(|last| schur_kernel(&log_lambdas, exponents, beta, lead, last))
                .sum();
            (sum, idx)
        })
        .reduce(|| (f64::NEG_INFINITY, 0), pick_max);

    Ok(SchurSums {
        row_sup,
        col_sup,
        row_argmax: leads[row_index].clone(),
        col_argmax,
    })
}

fn pick_max(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::beta_function;
    use crate::spectrum::generate_lacunary;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn geo(count: usize) -> BlockSpectrum {
        generate_lacunary(1.0, 2.0, count).unwrap()
    }

    fn problem(mu: MeasureSpec, p: f64, beta: f64, count: usize) -> EmbeddingProblem {
        EmbeddingProblem::new(geo(count), mu, p, beta, None).unwrap()
    }

    #[test]
    fn problem_validation() {
        let nu0 = MeasureSpec::jacobi(0.0).unwrap();
        assert!(EmbeddingProblem::new(geo(3), nu0.clone(), 1.5, 2.0, None).is_err());
        assert!(EmbeddingProblem::new(geo(3), nu0.clone(), 0.5, 0.5, None).is_err());
        assert!(EmbeddingProblem::new(geo(3), nu0.clone(), 2.0, 2.0, Some(-1.0)).is_err());
        assert!(EmbeddingProblem::new(geo(3), nu0, 2.0, 0.5, Some(0.5)).is_ok());
        let parsed: EmbeddingProblem = serde_json::from_str(
            r#"{"spectrum":{"generator":{"kind":"lacunary","lambda0":1,"ratio":2,"count":5}},
                "measure":{"kind":"cantor","r":0.3333333333333333},"p":2,"beta":0.63}"#,
        )
        .unwrap();
        assert_eq!(parsed.spectrum.len(), 5);
        let err = serde_json::from_str::<EmbeddingProblem>(
            r#"{"spectrum":{"exponents":[1,2]},"mu":{"kind":"jacobi","alpha":0},"p":0.5,"beta":1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("p = 0.5"));
    }

    #[test]
    fn moment_series_examples() {
        let beta = 0.5;
        for &p in &[1.0, 2.0] {
            let nu = MeasureSpec::jacobi(beta - 1.0).unwrap();
            let d = moment_series(&problem(nu, p, beta, 30), 30).unwrap();
            assert_eq!(d.verdict, Verdict::Diverges);
            assert!(d.slope.unwrap().abs() < 0.02);
        }
        let half = MeasureSpec::dirac(0.5).unwrap();
        let d = moment_series(&problem(half, 1.0, beta, 30), 30).unwrap();
        assert_eq!(d.verdict, Verdict::Converges);
        let tail = (d.partial_sums[29] - d.partial_sums[9]).abs();
        assert!(tail <= 1e-12 * d.partial_sums[29]);

        let one = MeasureSpec::dirac(1.0).unwrap();
        let d = moment_series(&problem(one, 1.0, beta, 20), 20).unwrap();
        assert_eq!(d.verdict, Verdict::Diverges);
        for (i, t) in d.terms.iter().enumerate() {
            assert!((t / 2f64.powi(i as i32) - 1.0).abs() < 1e-14);
        }
        let nu0 = MeasureSpec::jacobi(0.0).unwrap();
        assert!(moment_series(&problem(nu0, 1.0, 1.0, 5), 5).is_err());
    }

    #[test]
    fn partial_sums_nondecreasing() {
        let cantor = MeasureSpec::cantor(1.0 / 3.0).unwrap();
        let d = moment_series(&problem(cantor, 2.0, 0.5, 24), 24).unwrap();
        assert!(d.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(d.verdict, Verdict::Converges);
    }

    fn delta_grid() -> Vec<f64> {
        (2..=24).map(|i| 10f64.powf(-(i as f64) / 2.0)).collect()
    }

    #[test]
    fn double_integral_examples() {
        let half = MeasureSpec::dirac(0.5).unwrap();
        let d = double_integral_condition(&half, 0.5, &delta_grid(), &cfg()).unwrap();
        assert_eq!(d.verdict, Verdict::Converges);
        // ∫_0^{1-δ} (1 - ρ/2)^{-2} dρ = 2/(1 - (1-δ)/2) - 2
        let last = *d.partial_sums.last().unwrap();
        let delta = 1e-12;
        assert!((last - (2.0 / (1.0 - (1.0 - delta) / 2.0) - 2.0)).abs() < 1e-9);

        let one = MeasureSpec::dirac(1.0).unwrap();
        let d = double_integral_condition(&one, 0.5, &delta_grid(), &cfg()).unwrap();
        assert_eq!(d.verdict, Verdict::Diverges);

        let nu = MeasureSpec::jacobi(-0.5).unwrap();
        let d = double_integral_condition(&nu, 0.5, &delta_grid(), &cfg()).unwrap();
        assert_eq!(d.verdict, Verdict::Diverges);
        assert!(d.slope.unwrap().abs() < 0.02);
    }

    #[test]
    fn inner_integral_against_closed_form() {
        // ∫_0^1 dt / (1 - ρ t) = -ln(1 - ρ) / ρ
        let nu0 = MeasureSpec::jacobi(0.0).unwrap();
        for &gap in &[0.5, 1e-3, 1e-9] {
            let got = inner_cauchy_integral(&nu0, gap, &cfg()).unwrap();
            let expected = -gap.ln() / (1.0 - gap);
            assert!((got / expected - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn embedding_ratio_examples() {
        let nu0 = MeasureSpec::jacobi(0.0).unwrap();
        let prob = problem(nu0, 2.5, 1.0, 6);
        let f = MuntzPolynomial::from_spectrum(&prob.spectrum, &[1.0, -2.0, 0.5, 3.0, -1.0, 0.2]).unwrap();
        assert_eq!(embedding_ratio(&f, &prob, &cfg()).unwrap().ratio, 1.0);

        let (p, beta) = (2.0, 1.5);
        let nu = MeasureSpec::jacobi(beta - 1.0).unwrap();
        let prob = problem(nu, p, beta, 12);
        for k in [3usize, 11] {
            let lambda = prob.spectrum.exponents()[k];
            let f = MuntzPolynomial::monomial(lambda, 1.0).unwrap();
            let got = embedding_ratio(&f, &prob, &cfg()).unwrap().ratio;
            let closed = beta_function(p * lambda + 1.0, beta).unwrap().powf(1.0 / p)
                / (p * lambda / beta + 1.0).powf(-beta / p);
            assert!((got / closed - 1.0).abs() < 1e-12);
        }

        let one = MeasureSpec::dirac(1.0).unwrap();
        let prob = problem(one, 2.0, 1.0, 12);
        let f = MuntzPolynomial::monomial(1024.0, 1.0).unwrap();
        let got = embedding_ratio(&f, &prob, &cfg()).unwrap().ratio;
        assert!((got / (2.0 * 1024.0 + 1.0f64).sqrt() - 1.0).abs() < 1e-12);

        let outside = MuntzPolynomial::monomial(3.0, 1.0).unwrap();
        assert!(matches!(
            embedding_ratio(&outside, &prob, &cfg()),
            Err(Error::Membership { .. })
        ));
    }

    #[test]
    fn constant_search_examples() {
        let nu0 = MeasureSpec::jacobi(0.0).unwrap();
        let prob = problem(nu0, 2.0, 1.0, 6);
        let s = embedding_constant_search(&prob, 8, 3, 2, &cfg()).unwrap();
        assert_eq!(s.report.ratio, 1.0);

        let half = MeasureSpec::dirac(0.5).unwrap();
        let prob = problem(half, 2.0, 0.5, 6);
        let a = embedding_constant_search(&prob, 16, 9, 3, &cfg()).unwrap();
        let b = embedding_constant_search(&prob, 16, 9, 3, &cfg()).unwrap();
        assert_eq!(a, b);
        assert!(a.report.ratio >= a.start_ratio);
        let Witness::Polynomial { poly } = &a.report.witness else {
            panic!("expected a polynomial witness");
        };
        let again = embedding_ratio(poly, &prob, &cfg()).unwrap().ratio;
        assert!(a.report.ratio >= again * (1.0 - 1e-12));
    }

    #[test]
    fn tail_necessity_examples() {
        let beta = 0.5;
        let nu = MeasureSpec::jacobi(beta - 1.0).unwrap();
        let rows = tail_necessity_check(&problem(nu, 1.0, beta, 20), 0..20).unwrap();
        for row in &rows[5..] {
            assert!((row.tail / row.power - 1.0 / beta).abs() < 1e-10);
            assert!(row.tail <= row.moment_bound);
        }
        let half = MeasureSpec::dirac(0.5).unwrap();
        // [1 - 1/2, 1] still holds the atom; from λ = 4 on the tail is empty.
        let rows = tail_necessity_check(&problem(half, 1.0, beta, 10), 1..10).unwrap();
        assert_eq!(rows[0].tail, 1.0);
        assert!(rows[1..].iter().all(|r| r.tail == 0.0));
        let one = MeasureSpec::dirac(1.0).unwrap();
        let rows = tail_necessity_check(&problem(one, 1.0, beta, 10), 0..10).unwrap();
        assert!(rows.iter().all(|r| r.tail == 1.0));
        assert!(rows[9].power < 0.05);
    }

    #[test]
    fn reverse_embedding_monomials() {
        // (4λ+1)^{-1/4} / B(2λ+1, 1/2)^{1/2} tends to (π)^{-1/4} 2^{-1/2} ... bounded.
        let mut values = Vec::new();
        for &lambda in &[1.0, 10.0, 1e3, 1e5] {
            let f = MuntzPolynomial::monomial(lambda, 1.0).unwrap();
            let r = reverse_embedding_check(&f, 2.0, -0.5, &cfg()).unwrap().ratio;
            let closed = (4.0 * lambda + 1.0f64).powf(-0.25) / beta_function(2.0 * lambda + 1.0, 0.5).unwrap().sqrt();
            assert!((r / closed - 1.0).abs() < 1e-12);
            values.push(r);
        }
        assert!(values.iter().all(|v| *v > 0.3 && *v < 3.0));
        assert!(reverse_embedding_check(&MuntzPolynomial::monomial(1.0, 1.0).unwrap(), 0.4, -0.5, &cfg()).is_err());
    }

    #[test]
    fn schur_bilinear() {
        let phi_diag = schur_kernel(&[0.0], &[2.0, 2.0], 1.0, &[0], 0);
        assert_eq!(phi_diag, 0.5);
        let s = geo(80);
        let sums = schur_kernel_sums(&s, &[2.0, 2.0], 1.0, 40).unwrap();
        // Row i = 40 sums over m = i - j in [-39, 40].
        let direct: f64 = (-39..=40)
            .map(|m: i32| 2f64.powf(m as f64 / 2.0) / (1.0 + 2f64.powi(m)))
            .sum();
        assert!((sums.row_sup - direct).abs() < 1e-12);
        assert!((sums.row_sup - sums.col_sup).abs() < 1e-12);
        let smaller = schur_kernel_sums(&s, &[2.0, 2.0], 1.0, 20).unwrap();
        assert!(smaller.row_sup <= sums.row_sup);
        assert!(schur_kernel_sums(&s, &[2.0, 3.0], 1.0, 20).is_err());
        assert!(schur_kernel_sums(&s, &[2.0, 2.0], 1.0, 80).is_err());
    }

    #[test]
    fn schur_trilinear_is_finite_and_monotone() {
        let s = geo(40);
        let p = [3.0, 3.0, 3.0];
        let a = schur_kernel_sums(&s, &p, 1.0, 6).unwrap();
        let b = schur_kernel_sums(&s, &p, 1.0, 12).unwrap();
        assert!(a.row_sup.is_finite() && a.col_sup.is_finite());
        assert!(b.row_sup >= a.row_sup && b.col_sup >= a.col_sup);
        // Brute force of one column sum.
        let lambdas: Vec<f64> = s.exponents().iter().map(|l| l.ln()).collect();
        let mut col = 0.0;
        for i in 0..40 {
            for j in 0..40 {
                let z1 = (s.exponents()[i] / s.exponents()[6]).powf(1.0 / 3.0);
                let z2 = (s.exponents()[j] / s.exponents()[6]).powf(1.0 / 3.0);
                col += z1 * z2 / (1.0 + z1.powi(3) + z2.powi(3));
            }
        }
        let got: f64 = (0..40)
            .flat_map(|i| (0..40).map(move |j| [i, j]))
            .map(|lead| schur_kernel(&lambdas, &p, 1.0, &lead, 6))
            .sum();
        assert!((got - col).abs() < 1e-12 * col);
    }
}
