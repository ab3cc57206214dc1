//! Default property suites run by `muntzlab all`.

use muntzlab::embeddings::{self, EmbeddingProblem, Verdict};
use muntzlab::inequalities;
use muntzlab::measure::MeasureSpec;
use muntzlab::quad::{self, QuadratureConfig};
use muntzlab::sampling;
use muntzlab::spectrum::{generate_lacunary, validate};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::commands::{contradictory, kernel_grid, summability, Outcome, DEFAULT_SAMPLING_TOL};
use crate::report::{to_value, CsvRow, Status};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub status: Status,
    pub details: Value,
}

type SuiteFn = fn(u64, u64, &QuadratureConfig) -> Result<(bool, Value), CliError>;

pub const SUITES: [(&str, SuiteFn); 10] = [
    ("quad", quad_suite),
    ("beta_asymptotics", beta_suite),
    ("spectrum", spectrum_suite),
    ("cantor", cantor_suite),
    ("decoupling", decoupling_suite),
    ("kernel", kernel_suite),
    ("dilation", dilation_suite),
    ("summability", summability_suite),
    ("embedding", embedding_suite),
    ("schur", schur_suite),
];

fn quad_suite(_: u64, _: u64, cfg: &QuadratureConfig) -> Result<(bool, Value), CliError> {
    let mut worst: f64 = 0.0;
    for &lambda in &[0.5, 3.0, 47.0, 1e3, 1e4] {
        for &alpha in &[-0.5, 0.0, 1.0, 2.5] {
            let got = quad::integrate_weighted(|t| t.powf(lambda), alpha, cfg)?;
            let exact = quad::beta_function(lambda + 1.0, alpha + 1.0)?;
            worst = worst.max(((got - exact) / exact).abs());
        }
    }
    Ok((worst < 1e-8, json!({ "max_relative_error": worst })))
}

fn beta_suite(_: u64, _: u64, _: &QuadratureConfig) -> Result<(bool, Value), CliError> {
    let mut worst: f64 = 0.0;
    for beta in [0.5, 1.0, 2.0] {
        let (_, value) = quad::beta_asymptotic_check(beta, &[1e4])?[0];
        worst = worst.max((value - 1.0).abs());
    }
    Ok((worst < 0.02, json!({ "max_deviation_at_1e4": worst })))
}

fn spectrum_suite(_: u64, _: u64, _: &QuadratureConfig) -> Result<(bool, Value), CliError> {
    let s = generate_lacunary(1.0, 2.0, 20)?;
    let lac = validate(s.exponents(), s.block_starts())?;
    let rejected = validate(
        &(1..=20).map(f64::from).collect::<Vec<_>>(),
        &(0..20).collect::<Vec<_>>(),
    )
    .is_err();
    Ok((
        lac.q == 2.0 && lac.n == 1 && rejected,
        json!({ "q": lac.q, "n": lac.n, "dense_rejected": rejected }),
    ))
}

fn cantor_suite(_: u64, _: u64, _: &QuadratureConfig) -> Result<(bool, Value), CliError> {
    let mu = MeasureSpec::cantor(1.0 / 3.0)?;
    let mut exact = true;
    for m in 0..=15 {
        exact &= mu.tail(3f64.powi(-m))? == 2f64.powi(-m);
    }
    let fit = mu.beta_class_fit(&inequalities::tail_check_grid(), 2f64.ln() / 3f64.ln())?;
    let target = 2f64.ln() / 3f64.ln();
    let ok = exact && (fit.beta_hat - target).abs() < 0.01;
    Ok((
        ok,
        json!({ "exact_tails": exact, "beta_hat": fit.beta_hat, "dimension": target }),
    ))
}

fn decoupling_suite(trials: u64, seed: u64, cfg: &QuadratureConfig) -> Result<(bool, Value), CliError> {
    let s = generate_lacunary(1.0, 2.0, 12)?;
    let stability = inequalities::decoupling_scan(&s, 2.0, 0.0, trials, seed, cfg)?;
    let ok = stability.base.min > 0.0 && stability.is_stable(DEFAULT_SAMPLING_TOL);
    Ok((ok, to_value(&stability)?))
}

fn kernel_suite(_: u64, _: u64, _: &QuadratureConfig) -> Result<(bool, Value), CliError> {
    let s = generate_lacunary(1.0, 2.0, 60)?;
    let longer = generate_lacunary(1.0, 2.0, 65)?;
    let grid = kernel_grid(&s, 32)?;
    let bracket = inequalities::kernel_ratio(&s, 1.0, &grid)?;
    let extended = inequalities::kernel_ratio(&longer, 1.0, &grid)?;
    let change = bracket
        .values
        .iter()
        .zip(&extended.values)
        .map(|(a, b)| (a.1 - b.1).abs())
        .fold(0.0, f64::max);
    let ok = bracket.min > 0.0 && bracket.max.is_finite() && change < 1e-6;
    Ok((
        ok,
        json!({ "min": bracket.min, "max": bracket.max, "extension_change": change }),
    ))
}

fn dilation_suite(trials: u64, seed: u64, cfg: &QuadratureConfig) -> Result<(bool, Value), CliError> {
    let s = generate_lacunary(1.0, 2.0, 8)?;
    let bracket = sampling::empirical_bracket(trials, seed, |_, rng| {
        let f = sampling::random_polynomial(&s, rng)?;
        let g = sampling::gaussian_coefficients(rng, 2);
        let rho = 1.0 / (1.0 + g[0].abs());
        let lambda_k = s.exponents()[(g[1].abs() * 3.0) as usize % s.len()];
        Ok(inequalities::dilation_norm_check(&f, rho, 2.0, lambda_k, cfg)?.ratio)
    })?;
    Ok((bracket.max <= 1.0 + 1e-9, to_value(&bracket)?))
}

fn summability_suite(_: u64, _: u64, cfg: &QuadratureConfig) -> Result<(bool, Value), CliError> {
    let s = generate_lacunary(1.0, 2.0, 40)?;
    let measures = [
        ("jacobi(-1/2)", MeasureSpec::jacobi(-0.5)?),
        ("atomic(0.5)", MeasureSpec::dirac(0.5)?),
        ("atomic(1)", MeasureSpec::dirac(1.0)?),
        ("cantor(1/3)", MeasureSpec::cantor(1.0 / 3.0)?),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (name, mu) in measures {
        let problem = EmbeddingProblem::new(s.clone(), mu, 2.0, 0.5, None)?;
        let (series, double) = summability(&problem, cfg)?;
        let coherent = !contradictory(series.verdict, double.verdict);
        ok &= coherent;
        details.push(json!({
            "measure": name,
            "moment_series": series.verdict,
            "double_integral": double.verdict,
            "coherent": coherent,
        }));
    }
    let nu = EmbeddingProblem::new(s, MeasureSpec::jacobi(-0.5)?, 1.0, 0.5, None)?;
    let diverges = embeddings::moment_series(&nu, 40)?.verdict == Verdict::Diverges;
    Ok((
        ok && diverges,
        json!({ "measures": details, "jacobi_remark_diverges": diverges }),
    ))
}

fn embedding_suite(trials: u64, seed: u64, cfg: &QuadratureConfig) -> Result<(bool, Value), CliError> {
    let s = generate_lacunary(1.0, 2.0, 6)?;
    let problem = EmbeddingProblem::new(s, MeasureSpec::jacobi(0.0)?, 2.0, 1.0, None)?;
    let search = embeddings::embedding_constant_search(&problem, trials.min(50), seed, 2, cfg)?;
    let ratio = search.report.ratio;
    Ok(((ratio - 1.0).abs() < 1e-9, json!({ "constant": ratio })))
}

fn schur_suite(_: u64, _: u64, _: &QuadratureConfig) -> Result<(bool, Value), CliError> {
    let s = generate_lacunary(1.0, 2.0, 97)?;
    let base = embeddings::schur_kernel_sums(&s, &[2.0, 2.0], 1.0, 24)?;
    let doubled = embeddings::schur_kernel_sums(&s, &[2.0, 2.0], 1.0, 48)?;
    let change = (doubled.row_sup - base.row_sup)
        .abs()
        .max((doubled.col_sup - base.col_sup).abs());
    Ok((
        change < 1e-3,
        json!({ "row_sup": doubled.row_sup, "col_sup": doubled.col_sup, "change": change }),
    ))
}

pub fn all(trials: u64, seed: u64) -> Result<Outcome, CliError> {
    if trials == 0 {
        return Err(CliError::Argument("--trials must be at least 1".into()));
    }
    let cfg = QuadratureConfig::default();
    let mut out = Outcome::default();
    out.parameters.insert("trials".into(), json!(trials));
    let mut status = Status::Pass;
    let mut results = Vec::with_capacity(SUITES.len());
    for (name, suite) in SUITES {
        let (suite_status, details) = match suite(trials, seed, &cfg) {
            Ok((ok, details)) => (Status::from_bool(ok), details),
            Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
        };
        status = status.and(suite_status);
        out.rows.push(CsvRow::new(
            "all",
            None,
            None,
            f64::from(u8::from(suite_status == Status::Pass)),
            name,
        ));
        results.push(SuiteResult {
            name: name.to_string(),
            status: suite_status,
            details,
        });
    }
    out.results = to_value(&results)?;
    out.status = Some(status);
    Ok(out)
}
