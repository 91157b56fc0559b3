//! `seqmerit` command-line front end.
//!
//! Every command prints one JSON envelope `{command, inputs, result,
//! warnings}` with sorted keys unless `--format csv` or `--format pm` asks
//! for a raw table or sequence list. Exit codes: 0 success, 1 tolerance or
//! consistency failure, 2 usage or parse error.

mod suite;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use seqmerit::autocorr::{max_sidelobe, AutocorrelationProfile};
use seqmerit::designs::{
    difference_set_gamma, hadamard_scan, is_perfect, two_level_gamma, verify_difference_set,
};
use seqmerit::families::{Family, FamilyDescriptor};
use seqmerit::merit::MeritReport;
use seqmerit::quadrature::{
    equispaced_nodes, exact_l4_integral, exact_node_count, golden_nodes, kronecker_nodes,
    midpoint_nodes, qmc_l4_integral, spectrum_samples, QuadratureMethod, QuadratureResult,
};
use seqmerit::search::{
    bound_check_report, enumerate_bounded, merit_records, SearchMode, SearchSpec, DEFAULT_MAX_N,
    RECORDS_MAX_N,
};
use seqmerit::sequence::{canonical_signs, parse_sequence, render_pm};
use seqmerit::{Error, Sequence};

const MAX_N_ENV: &str = "SEQMERIT_MAX_N";

#[derive(Parser, Serialize)]
#[command(
    name = "seqmerit",
    version,
    about = "Merit factor, L4 norm and sidelobe toolkit"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add a Unix timestamp to the envelope.
    #[arg(long, global = true)]
    timestamps: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pm,
}

#[derive(clap::Args, Serialize)]
struct SequenceInput {
    /// Sequence as a '+/-' string or JSON object.
    sequence: Option<String>,
    /// Read the sequence from a file instead.
    #[arg(long, conflicts_with = "sequence")]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Autocorrelation profile, merit factor and structure of one sequence.
    Analyze {
        #[command(flatten)]
        input: SequenceInput,
        /// Also run the golden-ratio QMC route with this many nodes.
        #[arg(long)]
        qmc_nodes: Option<usize>,
        /// Emit M equispaced samples of |s|^2 and |s|^4.
        #[arg(long, value_name = "M")]
        spectrum_samples: Option<usize>,
    },
    /// Generate a member of a sequence family.
    Generate {
        #[arg(value_enum)]
        family: FamilyArg,
        /// Length, prime or odd length depending on the family.
        param: usize,
    },
    /// Enumerate binary sequences whose sidelobes are bounded by c.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Enumerate)]
        mode: ModeArg,
        /// Report one representative per symmetry class.
        #[arg(long)]
        symmetry: bool,
        /// Check every survivor against the merit lower bound.
        #[arg(long)]
        check_bound: bool,
    },
    /// Best merit factor for every length up to max-n.
    Records {
        #[arg(long)]
        max_n: usize,
    },
    /// L4 integral by the exact rule or over a QMC node set.
    Integrate {
        #[command(flatten)]
        input: SequenceInput,
        /// Number of QMC nodes; omit for the exact rule.
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, value_enum, default_value_t = GeneratorArg::Golden)]
        generator: GeneratorArg,
        /// Irrational for the kronecker generator.
        #[arg(long)]
        alpha: Option<f64>,
        /// Number of plot samples of |s|^4 for CSV output.
        #[arg(long, value_name = "M")]
        samples: Option<usize>,
    },
    /// Check whether a residue set is a cyclic difference set.
    VerifyDs {
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
        #[arg(long)]
        v: usize,
    },
    /// Exhaustive search for circulant Hadamard rows of length n.
    HadamardScan {
        #[arg(long)]
        n: usize,
    },
    /// Reproduce a reference table.
    RunSuite {
        #[arg(value_enum)]
        name: SuiteName,
        /// Largest n for minimal-table.
        #[arg(long, default_value_t = 16)]
        n_max: usize,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyArg {
    AllOnes,
    Alternating,
    Barker,
    Legendre,
    Chirp,
    TurynPerfect,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::AllOnes => Family::AllOnes,
            FamilyArg::Alternating => Family::Alternating,
            FamilyArg::Barker => Family::Barker,
            FamilyArg::Legendre => Family::Legendre,
            FamilyArg::Chirp => Family::Chirp,
            FamilyArg::TurynPerfect => Family::TurynPerfect,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Enumerate,
    Count,
    Records,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum GeneratorArg {
    Golden,
    Kronecker,
    Equispaced,
    Midpoint,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    BarkerTable,
    MinimalTable,
    QmcConvergence,
}

/// What a command produced.
pub enum Payload {
    Json(Value),
    /// Raw text for csv and pm formats, printed verbatim.
    Text(String),
}

pub struct Output {
    pub payload: Payload,
    pub warnings: Vec<String>,
    /// Tolerance or assertion failures; any entry makes the exit code 1.
    pub failures: Vec<String>,
}

impl Output {
    fn json(value: Value) -> Self {
        Output {
            payload: Payload::Json(value),
            warnings: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn text(text: String) -> Self {
        Output {
            payload: Payload::Text(text),
            warnings: Vec::new(),
            failures: Vec::new(),
        }
    }
}

pub enum Failure {
    Usage(String),
    Tolerance(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent { .. } | Error::RouteFailure(_) => {
                Failure::Tolerance(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<Output, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn csv_text<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn read_sequence(input: &SequenceInput) -> Result<Sequence, Failure> {
    let text = match (&input.sequence, &input.file) {
        (Some(s), None) => s.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
        _ => return Err(usage("give a sequence or --file")),
    };
    Ok(parse_sequence(text.trim())?)
}

fn guard_override(default: usize) -> Result<usize, Failure> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{MAX_N_ENV}={v:?} is not a length"))),
        Err(_) => Ok(default),
    }
}

fn analyze(
    input: &SequenceInput,
    qmc_nodes: Option<usize>,
    samples: Option<usize>,
    format: Format,
) -> CmdResult {
    let s = read_sequence(input)?;
    let profile = AutocorrelationProfile::new(&s);
    if format == Format::Csv {
        return match samples {
            Some(m) => Ok(Output::text(csv_text(&spectrum_samples(&s, m))?)),
            None => Ok(Output::text(csv_text(&profile.rows())?)),
        };
    }
    if format == Format::Pm {
        return Err(usage("analyze supports json and csv output"));
    }
    let merit = MeritReport::compute(&s, qmc_nodes)?;
    let mut warnings = Vec::new();
    let gamma = match s.signs() {
        Some(signs) if signs.len() >= 2 => two_level_gamma(&s).ok().map(|g| (g, signs)),
        _ => None,
    };
    let canonical = s.signs().map(|signs| render_pm(&canonical_signs(&signs)));
    if let Some(signs) = s.signs() {
        if signs.len() >= 2 && signs.iter().all(|&x| x == signs[0]) {
            warnings.push(
                "L4 of the constant sequence is n(2n^2+1)/3; the often-quoted n(2n+1)/3 is a misprint"
                    .to_string(),
            );
        }
    }
    let mut result = json!({
        "n": s.len(),
        "sequence": to_value(&s.to_json()),
        "pm": s.to_pm_string(),
        "canonical": canonical,
        "profile": to_value(&profile),
        "merit": to_value(&merit),
        "max_sidelobe": max_sidelobe(&s).ok(),
        "is_perfect": is_perfect(&s),
        "two_level_gamma": gamma.map(|(g, _)| g),
    });
    if let Some(m) = samples {
        result["spectrum_samples"] = to_value(&spectrum_samples(&s, m));
    }
    let mut out = Output::json(result);
    out.warnings = warnings;
    Ok(out)
}

fn generate(family: FamilyArg, param: usize, format: Format) -> CmdResult {
    let family = Family::from(family);
    let s = FamilyDescriptor::new(family, param).generate()?;
    match format {
        Format::Pm => match s.to_pm_string() {
            Some(pm) => Ok(Output::text(pm + "\n")),
            None => Err(usage(format!("{family} is not binary; use json output"))),
        },
        Format::Csv => Err(usage("generate supports json and pm output")),
        Format::Json => Ok(Output::json(json!({
            "family": family.name(),
            "parameter": param,
            "sequence": to_value(&s.to_json()),
            "pm": s.to_pm_string(),
        }))),
    }
}

fn search(
    n: usize,
    bound: f64,
    mode: ModeArg,
    symmetry: bool,
    check_bound: bool,
    format: Format,
) -> CmdResult {
    let mode = match mode {
        ModeArg::Enumerate => SearchMode::Enumerate,
        ModeArg::Count => SearchMode::Count,
        ModeArg::Records => SearchMode::Records,
    };
    let spec = SearchSpec::new(n, bound, mode)
        .with_symmetry(symmetry)
        .with_max_n(guard_override(DEFAULT_MAX_N)?);
    let outcome = enumerate_bounded(&spec)?;
    let mut warnings = Vec::new();
    if (n == 4 || n == 5) && bound.floor() == 2.0 {
        warnings.push(format!(
            "published survivor lists for n = {n}, c = 2 are not closed under negation; \
             this result comes from exhaustive search"
        ));
    }
    let check = if check_bound && outcome.bound > 0 {
        Some(bound_check_report(&spec)?)
    } else {
        None
    };
    let failures = match &check {
        Some(r) if r.violations > 0 => {
            vec![format!(
                "{} survivors fall below the merit lower bound",
                r.violations
            )]
        }
        _ => Vec::new(),
    };
    let payload = match format {
        Format::Pm => Payload::Text(match mode {
            SearchMode::Count => format!("{}\n", outcome.count),
            SearchMode::Records => outcome
                .record
                .as_ref()
                .map(|r| render_pm(&r.witness) + "\n")
                .unwrap_or_default(),
            SearchMode::Enumerate => outcome
                .sequences
                .iter()
                .map(|s| render_pm(s) + "\n")
                .collect(),
        }),
        Format::Csv => return Err(usage("search supports json and pm output")),
        Format::Json => {
            let mut result = to_value(&outcome);
            result["sequences_pm"] = to_value(
                &outcome
                    .sequences
                    .iter()
                    .map(|s| render_pm(s))
                    .collect::<Vec<_>>(),
            );
            if let Some(r) = &check {
                result["bound_check"] = to_value(r);
            }
            Payload::Json(result)
        }
    };
    Ok(Output {
        payload,
        warnings,
        failures,
    })
}

#[derive(Serialize)]
struct RecordRow {
    n: usize,
    #[serde(rename = "F_num")]
    f_num: i64,
    #[serde(rename = "F_den")]
    f_den: i64,
    witness: String,
}

fn records(max_n: usize, format: Format) -> CmdResult {
    let recs = merit_records(max_n, guard_override(RECORDS_MAX_N)?)?;
    let rows: Vec<RecordRow> = recs
        .iter()
        .map(|r| RecordRow {
            n: r.n,
            f_num: r.merit.num,
            f_den: r.merit.den,
            witness: render_pm(&r.witness),
        })
        .collect();
    match format {
        Format::Csv => Ok(Output::text(csv_text(&rows)?)),
        Format::Pm => Ok(Output::text(
            rows.iter().map(|r| r.witness.clone() + "\n").collect(),
        )),
        Format::Json => {
            let mut value = to_value(&recs);
            for (v, r) in value.as_array_mut().expect("array").iter_mut().zip(&rows) {
                v["witness_pm"] = Value::String(r.witness.clone());
                v["merit_factor"] = json!(r.f_num as f64 / r.f_den as f64);
            }
            Ok(Output::json(value))
        }
    }
}

fn integrate(
    input: &SequenceInput,
    nodes: Option<usize>,
    generator: GeneratorArg,
    alpha: Option<f64>,
    samples: Option<usize>,
    format: Format,
) -> CmdResult {
    let s = read_sequence(input)?;
    if format == Format::Csv {
        let m = samples.unwrap_or_else(|| exact_node_count(s.len()));
        let rows: Vec<_> = spectrum_samples(&s, m)
            .into_iter()
            .map(|p| SampleRow {
                x: p.x,
                fourth: p.fourth,
            })
            .collect();
        return Ok(Output::text(csv_text(&rows)?));
    }
    if format == Format::Pm {
        return Err(usage("integrate supports json and csv output"));
    }
    let exact = exact_l4_integral(&s);
    let q = match nodes {
        None => QuadratureResult {
            value: exact,
            method: QuadratureMethod::Exact,
            nodes: exact_node_count(s.len()),
            error_bound: 0.0,
            error_bound_bernstein: 0.0,
        },
        Some(count) => {
            let set = match generator {
                GeneratorArg::Golden => golden_nodes(count)?,
                GeneratorArg::Kronecker => kronecker_nodes(
                    alpha.ok_or_else(|| usage("--generator kronecker needs --alpha"))?,
                    count,
                )?,
                GeneratorArg::Equispaced => equispaced_nodes(count)?,
                GeneratorArg::Midpoint => midpoint_nodes(count)?,
            };
            qmc_l4_integral(&s, &set)
        }
    };
    let abs_error = (q.value - exact).abs();
    let within = abs_error <= q.error_bound.max(1e-9 * exact);
    let mut result = to_value(&q);
    result["exact_value"] = json!(exact);
    result["abs_error"] = json!(abs_error);
    result["within_bound"] = json!(within);
    if let Some(m) = samples {
        result["samples"] = to_value(&spectrum_samples(&s, m));
    }
    let mut out = Output::json(result);
    if !within {
        out.failures.push(format!(
            "quadrature error {abs_error:e} exceeds the error bound {:e}",
            q.error_bound
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct SampleRow {
    x: f64,
    fourth: f64,
}

fn verify_ds(set: &[usize], v: usize) -> CmdResult {
    match verify_difference_set(set, v) {
        Ok(ds) => {
            let gamma = difference_set_gamma(&ds)?;
            Ok(Output::json(json!({
                "verified": true,
                "v": ds.v,
                "k": ds.k,
                "lambda": ds.lambda,
                "members": ds.members,
                "counting_identity": ds.counting_identity_holds(),
                "gamma": gamma,
            })))
        }
        Err(e @ Error::NotDifferenceSet { .. }) => Ok(Output::json(json!({
            "verified": false,
            "v": v,
            "reason": e.to_string(),
        }))),
        Err(e) => Err(e.into()),
    }
}

fn hadamard(n: usize, format: Format) -> CmdResult {
    let scan = hadamard_scan(n)?;
    match format {
        Format::Pm => Ok(Output::text(
            scan.perfect_rows.iter().map(|r| r.clone() + "\n").collect(),
        )),
        Format::Csv => Err(usage("hadamard-scan supports json and pm output")),
        Format::Json => {
            let mut result = to_value(&scan);
            result["count"] = json!(scan.perfect_rows.len());
            Ok(Output::json(result))
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let format = cli.format;
    match &cli.command {
        Command::Analyze {
            input,
            qmc_nodes,
            spectrum_samples,
        } => analyze(input, *qmc_nodes, *spectrum_samples, format),
        Command::Generate { family, param } => generate(*family, *param, format),
        Command::Search {
            n,
            bound,
            mode,
            symmetry,
            check_bound,
        } => search(*n, *bound, *mode, *symmetry, *check_bound, format),
        Command::Records { max_n } => records(*max_n, format),
        Command::Integrate {
            input,
            nodes,
            generator,
            alpha,
            samples,
        } => integrate(input, *nodes, *generator, *alpha, *samples, format),
        Command::VerifyDs { set, v } => verify_ds(set, *v),
        Command::HadamardScan { n } => hadamard(*n, format),
        Command::RunSuite { name, n_max } => suite::run_suite(*name, *n_max, format),
    }
}

fn command_name(cli: &Cli) -> String {
    match to_value(&cli.command) {
        Value::Object(map) => map.keys().next().cloned().unwrap_or_default(),
        Value::String(s) => s,
        _ => String::new(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Tolerance(msg)) => {
            eprintln!("failure: {msg}");
            return ExitCode::from(1);
        }
    };
    let mut stdout = std::io::stdout().lock();
    let written = match out.payload {
        Payload::Text(text) => stdout.write_all(text.as_bytes()),
        Payload::Json(result) => {
            let mut envelope = json!({
                "command": command_name(&cli),
                "inputs": to_value(&cli),
                "result": result,
                "warnings": out.warnings,
            });
            if !out.failures.is_empty() {
                envelope["failures"] = to_value(&out.failures);
            }
            if cli.timestamps {
                let now = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs_f64())
                    .unwrap_or(0.0);
                envelope["timestamp"] = json!(now);
            }
            let text = serde_json::to_string_pretty(&envelope).expect("serializable");
            writeln!(stdout, "{text}")
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    for f in &out.failures {
        eprintln!("failure: {f}");
    }
    if out.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
