//! Reference tables for `run-suite`. Each row carries a `pass` flag and any
//! failing row makes the command exit 1.

use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;

use seqmerit::autocorr::max_sidelobe_binary;
use seqmerit::families::{all_ones, alternating, barker, BARKER_LENGTHS};
use seqmerit::merit::{l4_norm_fourth_binary, merit_factor_binary};
use seqmerit::quadrature::{exact_l4_integral, golden_nodes, qmc_l4_integral};

use crate::Format;
use crate::{csv_text, Failure, Output, Payload, SuiteName};

const QMC_NODE_COUNTS: [usize; 3] = [1_000, 10_000, 100_000];

#[derive(Serialize)]
struct BarkerRow {
    n: usize,
    max_sidelobe: i64,
    l4_fourth: i64,
    l4_expected: i64,
    merit_num: i64,
    merit_den: i64,
    merit_expected_num: i64,
    merit_expected_den: i64,
    merit: f64,
    pass: bool,
}

fn barker_table() -> Result<Vec<BarkerRow>, Failure> {
    BARKER_LENGTHS
        .iter()
        .map(|&n| {
            let signs = barker(n)?.signs().expect("binary family");
            let n64 = n as i64;
            let l4_expected = n64 * n64 + n64 - i64::from(n % 2 == 1);
            let merit_expected = if n % 2 == 0 {
                Ratio::from_integer(n64)
            } else {
                Ratio::new(n64 * n64, n64 - 1)
            };
            let side = max_sidelobe_binary(&signs)?;
            let l4 = l4_norm_fourth_binary(&signs);
            let merit = merit_factor_binary(&signs)?;
            Ok(BarkerRow {
                n,
                max_sidelobe: side,
                l4_fourth: l4,
                l4_expected,
                merit_num: *merit.numer(),
                merit_den: *merit.denom(),
                merit_expected_num: *merit_expected.numer(),
                merit_expected_den: *merit_expected.denom(),
                merit: *merit.numer() as f64 / *merit.denom() as f64,
                pass: side <= 1 && l4 == l4_expected && merit == merit_expected,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct MinimalRow {
    n: usize,
    all_ones_num: i64,
    all_ones_den: i64,
    alternating_num: i64,
    alternating_den: i64,
    formula_num: i64,
    formula_den: i64,
    pass: bool,
}

fn minimal_table(n_max: usize) -> Result<Vec<MinimalRow>, Failure> {
    if !(2..=100_000).contains(&n_max) {
        return Err(Failure::Usage(format!(
            "--n-max must be in 2..=100000, got {n_max}"
        )));
    }
    (2..=n_max)
        .map(|n| {
            let n64 = n as i64;
            let formula = Ratio::new(3 * n64 * n64, 2 * n64.pow(3) - 3 * n64 * n64 + n64);
            let ones = merit_factor_binary(&all_ones(n)?.signs().expect("binary family"))?;
            let alt = merit_factor_binary(&alternating(n)?.signs().expect("binary family"))?;
            Ok(MinimalRow {
                n,
                all_ones_num: *ones.numer(),
                all_ones_den: *ones.denom(),
                alternating_num: *alt.numer(),
                alternating_den: *alt.denom(),
                formula_num: *formula.numer(),
                formula_den: *formula.denom(),
                pass: ones == formula && alt == formula,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct QmcRow {
    #[serde(rename = "N")]
    nodes: usize,
    value: f64,
    exact: f64,
    abs_error: f64,
    relative_error: f64,
    error_bound: f64,
    error_bound_bernstein: f64,
    pass: bool,
}

fn qmc_convergence() -> Result<Vec<QmcRow>, Failure> {
    let s = barker(13)?;
    let exact = exact_l4_integral(&s);
    QMC_NODE_COUNTS
        .iter()
        .map(|&count| {
            let q = qmc_l4_integral(&s, &golden_nodes(count)?);
            let abs_error = (q.value - exact).abs();
            Ok(QmcRow {
                nodes: count,
                value: q.value,
                exact,
                abs_error,
                relative_error: abs_error / exact,
                error_bound: q.error_bound,
                error_bound_bernstein: q.error_bound_bernstein,
                pass: abs_error <= q.error_bound,
            })
        })
        .collect()
}

fn finish<T: Serialize>(
    rows: Vec<T>,
    passes: impl Iterator<Item = bool>,
    label: impl Fn(&T) -> String,
    format: Format,
) -> Result<Output, Failure> {
    let failures: Vec<String> = rows
        .iter()
        .zip(passes)
        .filter(|(_, pass)| !pass)
        .map(|(row, _)| format!("row {} deviates", label(row)))
        .collect();
    let payload = match format {
        Format::Csv => Payload::Text(csv_text(&rows)?),
        Format::Json => Payload::Json(json!({ "rows": rows, "all_pass": failures.is_empty() })),
        Format::Pm => {
            return Err(Failure::Usage(
                "run-suite supports json and csv output".into(),
            ))
        }
    };
    Ok(Output {
        payload,
        warnings: Vec::new(),
        failures,
    })
}

pub fn run_suite(name: SuiteName, n_max: usize, format: Format) -> Result<Output, Failure> {
    match name {
        SuiteName::BarkerTable => {
            let rows = barker_table()?;
            let passes: Vec<bool> = rows.iter().map(|r| r.pass).collect();
            finish(rows, passes.into_iter(), |r| format!("n={}", r.n), format)
        }
        SuiteName::MinimalTable => {
            let rows = minimal_table(n_max)?;
            let passes: Vec<bool> = rows.iter().map(|r| r.pass).collect();
            finish(rows, passes.into_iter(), |r| format!("n={}", r.n), format)
        }
        SuiteName::QmcConvergence => {
            let rows = qmc_convergence()?;
            let passes: Vec<bool> = rows.iter().map(|r| r.pass).collect();
            finish(
                rows,
                passes.into_iter(),
                |r| format!("N={}", r.nodes),
                format,
            )
        }
    }
}
