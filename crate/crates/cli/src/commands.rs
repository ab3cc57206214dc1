//! One function per subcommand. Each returns the report fields and CSV rows;
//! writing them out happens in [`crate::run`].

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use muntzlab::embeddings::{self, EmbeddingProblem, SeriesDiagnosis, Verdict};
use muntzlab::inequalities::{self, KERNEL_TRUNCATION, KERNEL_T_MAX, KERNEL_T_MIN};
use muntzlab::measure::MeasureSpec;
use muntzlab::poly::MuntzPolynomial;
use muntzlab::quad::QuadratureConfig;
use muntzlab::sampling::{self, Stability};
use muntzlab::specfile::{self, MAX_SPEC_BYTES};
use muntzlab::spectrum::{generate_lacunary, BlockSpectrum};
use serde_json::{json, Value};

use crate::args::{BernsteinArgs, ClassifyArgs, DecouplingArgs, EmbeddingArgs, KernelArgs, SchurArgs, SpectrumArgs};
use crate::report::{sha256_hex, to_value, CsvRow, Status};
use crate::CliError;

pub const DEFAULT_SAMPLING_TOL: f64 = 0.05;
pub const DEFAULT_SCHUR_TOL: f64 = 1e-3;
pub const DEFAULT_CLASS_TOL: f64 = 0.01;

/// Everything a check produces apart from the report metadata.
#[derive(Debug, Default)]
pub struct Outcome {
    pub input_digests: BTreeMap<String, String>,
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub status: Option<Status>,
    pub rows: Vec<CsvRow>,
}

impl Outcome {
    fn param(&mut self, name: &str, value: impl Into<Value>) {
        self.parameters.insert(name.to_string(), value.into());
    }

    /// Reads a spec file, records its digest under `flag` and returns the text.
    fn read_input(&mut self, flag: &str, path: &Path) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Input {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        if bytes.len() > MAX_SPEC_BYTES {
            return Err(CliError::Input {
                path: path.display().to_string(),
                message: format!("file exceeds {MAX_SPEC_BYTES} bytes"),
            });
        }
        self.input_digests.insert(flag.to_string(), sha256_hex(&bytes));
        String::from_utf8(bytes).map_err(|_| CliError::Input {
            path: path.display().to_string(),
            message: "file is not UTF-8".into(),
        })
    }

    fn spectrum(&mut self, path: &Path) -> Result<BlockSpectrum, CliError> {
        let text = self.read_input("spectrum", path)?;
        specfile::parse_spectrum(&text).map_err(|e| CliError::spec(path, e))
    }

    fn measure(&mut self, path: &Path) -> Result<MeasureSpec, CliError> {
        let text = self.read_input("measure", path)?;
        specfile::parse_measure(&text).map_err(|e| CliError::spec(path, e))
    }
}

fn check_tol(tol: Option<f64>, default: f64) -> Result<f64, CliError> {
    let tol = tol.unwrap_or(default);
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::Argument(format!("--tol must be positive, got {tol}")))
    }
}

fn check_trials(trials: u64) -> Result<u64, CliError> {
    if trials == 0 {
        Err(CliError::Argument("--trials must be at least 1".into()))
    } else {
        Ok(trials)
    }
}

fn bracket_rows(check: &str, p1: f64, p2: f64, stability: &Stability) -> Vec<CsvRow> {
    let mut rows = Vec::with_capacity(4);
    for (label, bracket) in [("base", &stability.base), ("doubled", &stability.doubled)] {
        rows.push(CsvRow::new(
            check,
            Some(p1),
            Some(p2),
            bracket.min,
            format!("{label} min trial {}", bracket.argmin),
        ));
        rows.push(CsvRow::new(
            check,
            Some(p1),
            Some(p2),
            bracket.max,
            format!("{label} max trial {}", bracket.argmax),
        ));
    }
    rows
}

/// Stable brackets with a strictly positive, finite lower end.
fn sampling_status(stability: &Stability, tol: f64) -> Status {
    let b = &stability.doubled;
    Status::from_bool(b.samples > 0 && b.min > 0.0 && b.max.is_finite() && stability.is_stable(tol))
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let s = out.spectrum(&args.spectrum)?;
    out.results = json!({
        "len": s.len(),
        "num_blocks": s.num_blocks(),
        "block_cap": s.block_cap(),
        "ratio_lower": s.ratio_lower(),
        "reciprocal_sum": s.reciprocal_sum(),
        "exponents": s.exponents(),
        "block_starts": s.block_starts(),
    });
    out.rows = s
        .exponents()
        .iter()
        .enumerate()
        .map(|(i, &l)| CsvRow::new("spectrum", Some(i as f64), Some(s.block_of_index(i) as f64), l, ""))
        .collect();
    out.status = Some(Status::Pass);
    Ok(out)
}

pub fn decoupling(args: &DecouplingArgs, seed: u64) -> Result<Outcome, CliError> {
    let tol = check_tol(args.out.tol, DEFAULT_SAMPLING_TOL)?;
    let trials = check_trials(args.trials)?;
    let mut out = Outcome::default();
    let s = out.spectrum(&args.spectrum)?;
    out.param("p", args.p);
    out.param("alpha", args.alpha);
    out.param("trials", trials);
    out.param("tol", tol);
    let cfg = QuadratureConfig::default();
    let stability = inequalities::decoupling_scan(&s, args.p, args.alpha, trials, seed, &cfg)?;
    let status = sampling_status(&stability, tol);
    out.results = json!({
        "c1": stability.base.min,
        "c2": stability.base.max,
        "stability": to_value(&stability)?,
    });
    out.rows = bracket_rows("decoupling", args.p, args.alpha, &stability);
    out.status = Some(status);
    Ok(out)
}

/// Log-spaced grid in `1 - t` from 1/2 down to the truncation limit.
pub fn kernel_grid(spectrum: &BlockSpectrum, points: usize) -> Result<Vec<f64>, CliError> {
    let lambda_max = *spectrum.exponents().last().expect("nonempty spectrum");
    let gap_lo = (1.0 - KERNEL_T_MAX).max(KERNEL_TRUNCATION / lambda_max);
    let gap_hi = 1.0 - KERNEL_T_MIN;
    if gap_lo > gap_hi {
        return Err(CliError::Argument(format!(
            "spectrum too short for the kernel scan: largest exponent {lambda_max} needs to be at least {}",
            KERNEL_TRUNCATION / gap_hi
        )));
    }
    if points < 2 {
        return Err(CliError::Argument("--points must be at least 2".into()));
    }
    let ratio = (gap_lo / gap_hi).ln();
    Ok((0..points)
        .map(|i| {
            let gap = gap_hi * (ratio * i as f64 / (points - 1) as f64).exp();
            (1.0 - gap).clamp(KERNEL_T_MIN, KERNEL_T_MAX)
        })
        .collect())
}

pub fn kernel(args: &KernelArgs) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let s = out.spectrum(&args.spectrum)?;
    out.param("alpha", args.alpha);
    out.param("points", args.points);
    if args.alpha.is_nan() || args.alpha <= 0.0 {
        return Err(muntzlab::Error::Domain {
            name: "alpha",
            value: args.alpha,
            expected: "alpha > 0 for the kernel estimate",
        }
        .into());
    }
    let grid = kernel_grid(&s, args.points)?;
    let bracket = inequalities::kernel_ratio(&s, args.alpha, &grid)?;
    out.rows = bracket
        .values
        .iter()
        .map(|&(t, v)| CsvRow::new("kernel", Some(t), Some(args.alpha), v, ""))
        .collect();
    out.status = Some(Status::from_bool(bracket.min > 0.0 && bracket.max.is_finite()));
    out.results = json!({
        "min": bracket.min,
        "max": bracket.max,
        "argmin": bracket.argmin,
        "argmax": bracket.argmax,
        "spread": bracket.spread(),
    });
    Ok(out)
}

pub fn bernstein(args: &BernsteinArgs, seed: u64) -> Result<Outcome, CliError> {
    let tol = check_tol(args.out.tol, DEFAULT_SAMPLING_TOL)?;
    let trials = check_trials(args.trials)?;
    let mut out = Outcome::default();
    let s = out.spectrum(&args.spectrum)?;
    let mu = out.measure(&args.measure)?;
    let q = args.q_exp.unwrap_or(args.p);
    out.param("p", args.p);
    out.param("q", q);
    out.param("alpha", args.alpha);
    out.param("beta", args.beta);
    out.param("trials", trials);
    out.param("tol", tol);
    let cfg = QuadratureConfig::default();
    let blocks = s.num_blocks() as u64;
    let stability = sampling::stability_scan(trials, seed, |trial, rng| {
        let k = (trial % blocks) as usize;
        let f_k = sampling::random_block_polynomial(&s, k, rng)?;
        Ok(inequalities::bernstein_ratio(&f_k, args.p, q, args.alpha, &mu, args.beta, &cfg)?.ratio)
    })?;
    out.status = Some(sampling_status(&stability, tol));
    out.results = json!({
        "c1": stability.base.min,
        "c2": stability.base.max,
        "stability": to_value(&stability)?,
    });
    out.rows = bracket_rows("bernstein", args.p, args.beta, &stability);
    Ok(out)
}

fn embedding_problem(args: &EmbeddingArgs, out: &mut Outcome) -> Result<EmbeddingProblem, CliError> {
    if let Some(path) = &args.problem {
        let text = out.read_input("problem", path)?;
        let mut problem = specfile::parse_problem(&text).map_err(|e| CliError::spec(path, e))?;
        if args.p.is_some() || args.beta.is_some() || args.alpha.is_some() {
            problem = EmbeddingProblem::new(
                problem.spectrum,
                problem.mu,
                args.p.unwrap_or(problem.p),
                args.beta.unwrap_or(problem.beta),
                args.alpha.or(problem.rhs_alpha),
            )?;
        }
        return Ok(problem);
    }
    let missing = |flag: &str| CliError::Argument(format!("embedding needs --problem or --{flag}"));
    let spectrum = out.spectrum(args.spectrum.as_deref().ok_or_else(|| missing("spectrum"))?)?;
    let mu = out.measure(args.measure.as_deref().ok_or_else(|| missing("measure"))?)?;
    let p = args.p.ok_or_else(|| missing("p"))?;
    let beta = args.beta.ok_or_else(|| missing("beta"))?;
    Ok(EmbeddingProblem::new(spectrum, mu, p, beta, args.alpha)?)
}

pub fn embedding(args: &EmbeddingArgs, seed: u64) -> Result<Outcome, CliError> {
    let trials = check_trials(args.trials)?;
    let mut out = Outcome::default();
    let problem = embedding_problem(args, &mut out)?;
    out.param("p", problem.p);
    out.param("beta", problem.beta);
    out.param("rhs_alpha", to_value(&problem.rhs_alpha)?);
    out.param("trials", trials);
    out.param("ascent", args.ascent);
    let cfg = QuadratureConfig::default();

    let mut monomials = Vec::with_capacity(problem.spectrum.len());
    for (k, &lambda) in problem.spectrum.exponents().iter().enumerate() {
        let ratio = embeddings::embedding_ratio(&MuntzPolynomial::monomial(lambda, 1.0)?, &problem, &cfg)?.ratio;
        out.rows.push(CsvRow::new(
            "embedding_monomial",
            Some(k as f64),
            Some(lambda),
            ratio,
            "",
        ));
        monomials.push(json!({ "k": k, "lambda": lambda, "ratio": ratio }));
    }
    let search = embeddings::embedding_constant_search(&problem, trials, seed, args.ascent, &cfg)?;
    out.rows.push(CsvRow::new(
        "embedding_constant",
        Some(trials as f64),
        Some(args.ascent as f64),
        search.report.ratio,
        format!("start trial {}", search.start_trial),
    ));
    let tails = if matches!(problem.mu, MeasureSpec::TailEnvelope { .. }) {
        Value::Null
    } else {
        let rows = embeddings::tail_necessity_check(&problem, 0..problem.spectrum.len())?;
        for row in &rows {
            out.rows.push(CsvRow::new(
                "embedding_tail",
                Some(row.k as f64),
                Some(row.lambda),
                row.tail,
                "",
            ));
        }
        to_value(&rows)?
    };
    out.results = json!({
        "constant": search.report.ratio,
        "search": to_value(&search)?,
        "monomial_ratios": monomials,
        "tail_rows": tails,
    });
    out.status = Some(Status::Pass);
    Ok(out)
}

/// `δ = 10^{-i/2}` for `i = 1..=24`.
pub fn delta_grid() -> Vec<f64> {
    (1..=24).map(|i| 10f64.powf(-(i as f64) / 2.0)).collect()
}

/// Two conclusive verdicts that disagree.
pub fn contradictory(a: Verdict, b: Verdict) -> bool {
    a != Verdict::Inconclusive && b != Verdict::Inconclusive && a != b
}

/// The moment series and the double integral for `β < 1`.
pub fn summability(
    problem: &EmbeddingProblem,
    cfg: &QuadratureConfig,
) -> Result<(SeriesDiagnosis, SeriesDiagnosis), CliError> {
    let series = embeddings::moment_series(problem, problem.spectrum.len())?;
    let double = embeddings::double_integral_condition(&problem.mu, problem.beta, &delta_grid(), cfg)?;
    Ok((series, double))
}

pub fn classify(args: &ClassifyArgs) -> Result<Outcome, CliError> {
    let tol = check_tol(args.out.tol, DEFAULT_CLASS_TOL)?;
    let mut out = Outcome::default();
    let mu = out.measure(&args.measure)?;
    let spectrum = match &args.spectrum {
        Some(path) => out.spectrum(path)?,
        None => generate_lacunary(1.0, 2.0, 40)?,
    };
    out.param("beta", args.beta);
    out.param("p", args.p);
    out.param("tol", tol);
    let cfg = QuadratureConfig::default();

    let grid = inequalities::tail_check_grid();
    let fit = mu.beta_class_fit(&grid, args.beta)?;
    for (&eps, residual) in fit.grid.iter().zip(&fit.residuals) {
        out.rows.push(CsvRow::new(
            "classify_tail_residual",
            Some(eps),
            Some(args.beta),
            *residual,
            "",
        ));
    }
    let member = fit.beta_hat + tol >= args.beta;

    let mut status = Status::Pass;
    let summability = if args.beta < 1.0 && !matches!(mu, MeasureSpec::TailEnvelope { .. }) {
        let problem = EmbeddingProblem::new(spectrum, mu, args.p, args.beta, None)?;
        let (series, double) = summability(&problem, &cfg)?;
        for (k, s) in series.partial_sums.iter().enumerate() {
            out.rows.push(CsvRow::new(
                "classify_moment_series",
                Some(k as f64),
                Some(args.beta),
                *s,
                "",
            ));
        }
        for (d, s) in delta_grid().iter().zip(&double.partial_sums) {
            out.rows.push(CsvRow::new(
                "classify_double_integral",
                Some(*d),
                Some(args.beta),
                *s,
                "",
            ));
        }
        let clash = contradictory(series.verdict, double.verdict);
        status = Status::from_bool(!clash);
        json!({
            "moment_series": to_value(&series)?,
            "double_integral": to_value(&double)?,
            "coherent": !clash,
        })
    } else {
        Value::Null
    };
    out.results = json!({
        "beta_hat": fit.beta_hat,
        "constant_hat": fit.constant_hat,
        "sup_ratio": fit.sup_ratio,
        "tail_class_member": member,
        "summability": summability,
    });
    out.status = Some(status);
    Ok(out)
}

fn conjugate_exponents(p: f64) -> Result<Vec<f64>, CliError> {
    if p > 1.0 && p.is_finite() {
        Ok(vec![p, p / (p - 1.0)])
    } else {
        Err(CliError::Argument(format!(
            "--p must exceed 1 for the Schur sums, got {p}"
        )))
    }
}

pub fn schur(args: &SchurArgs) -> Result<Outcome, CliError> {
    let tol = check_tol(args.out.tol, DEFAULT_SCHUR_TOL)?;
    let mut out = Outcome::default();
    let s = out.spectrum(&args.spectrum)?;
    let exponents = match &args.exponents {
        Some(list) => list.clone(),
        None => conjugate_exponents(args.p)?,
    };
    out.param("exponents", to_value(&exponents)?);
    out.param("beta", args.beta);
    out.param("i_max", args.i_max);
    out.param("tol", tol);
    if 2 * args.i_max >= s.len() {
        return Err(CliError::Argument(format!(
            "the spectrum needs more than {} exponents to compare i_max = {} with its double",
            2 * args.i_max,
            args.i_max
        )));
    }
    let base = embeddings::schur_kernel_sums(&s, &exponents, args.beta, args.i_max)?;
    let doubled = embeddings::schur_kernel_sums(&s, &exponents, args.beta, 2 * args.i_max)?;
    let row_change = (doubled.row_sup - base.row_sup).abs();
    let col_change = (doubled.col_sup - base.col_sup).abs();
    for (i, sums) in [(args.i_max, &base), (2 * args.i_max, &doubled)] {
        out.rows.push(CsvRow::new(
            "schur_row",
            Some(i as f64),
            Some(args.beta),
            sums.row_sup,
            "",
        ));
        out.rows.push(CsvRow::new(
            "schur_col",
            Some(i as f64),
            Some(args.beta),
            sums.col_sup,
            "",
        ));
    }
    out.results = json!({
        "base": to_value(&base)?,
        "doubled": to_value(&doubled)?,
        "row_change": row_change,
        "col_change": col_change,
    });
    out.status = Some(Status::from_bool(row_change < tol && col_change < tol));
    Ok(out)
}
