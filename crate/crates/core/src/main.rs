//! Command-line front end: construct / reduce / verify / sweep / union.
//!
//! Exit codes: 0 success, 1 I/O or internal error, 2 sequence parse error,
//! 3 invalid lambda, 4 violated reduction hypothesis, 5 verification failure.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use threshold_spectra_core::error::Error;
use threshold_spectra_core::matrix::{assemble, DenseSymmetricMatrix};
use threshold_spectra_core::model::{enumerate_threshold_graphs, BlockSequence};
use threshold_spectra_core::oracle::DEFAULT_MATCH_TOL;
use threshold_spectra_core::reduction::{run_reduction, ReductionTrace, SymbolicSpectrum};
use threshold_spectra_core::verify::{verify_sequence, verify_union, VerificationReport};
use threshold_spectra_core::weights::{matrix_weights, UniformWeights};

#[derive(Parser)]
#[command(
    name = "threshold-spectra",
    version,
    about = "Build and verify threshold-graph matrices with at most four distinct eigenvalues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the matrix and the full weight set for one sequence.
    Construct {
        /// Binary ("001101") or caret ("0^2 1^2 0 1") sequence.
        sequence: String,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Write output here instead of stdout. With --format csv the weight
        /// dump goes to `OUT.weights.json` alongside the matrix.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exact reduction chain and emit the audit trace.
    Reduce {
        sequence: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check pattern, exact spectrum, numeric spectrum and distinct count.
    Verify {
        sequence: String,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        lambda: f64,
        /// Relative residual allowed when matching eigenvalues to targets.
        #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify every sequence with at most --nmax vertices.
    Sweep {
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the disjoint union of several sequences (block-diagonal matrix).
    Union {
        #[arg(required = true)]
        sequences: Vec<String>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(err) => match err {
                Error::EmptyInput
                | Error::LeadingOne
                | Error::MalformedToken { .. }
                | Error::ZeroCount { .. } => 2,
                Error::LambdaZero | Error::LambdaNotFinite { .. } => 3,
                Error::HypothesisViolation(_) => 4,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(err) => err.to_string(),
            CliError::Io(err) => err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(5),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

/// Returns Ok(true) on success, Ok(false) when a verification check failed.
fn run(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Construct { sequence, lambda, format, out } => {
            let seq = BlockSequence::parse(&sequence)?;
            let weights = matrix_weights(&seq);
            let matrix = assemble(&seq, &weights, lambda)?;
            emit_construct(&seq, lambda, &weights, &matrix, format, out.as_deref())?;
            Ok(true)
        }
        Command::Reduce { sequence, format, out } => {
            let seq = BlockSequence::parse(&sequence)?;
            let (trace, spectrum) = run_reduction(&seq)?;
            emit_reduce(&seq, &trace, &spectrum, format, out.as_deref())?;
            Ok(true)
        }
        Command::Verify { sequence, lambda, tol, format, out } => {
            let seq = BlockSequence::parse(&sequence)?;
            let report = verify_sequence(&seq, lambda, tol)?;
            emit(&render_verify(&report, format), out.as_deref())?;
            Ok(report.all_ok())
        }
        Command::Sweep { nmax, lambda, tol, format, out } => {
            let (text, failures) = run_sweep(nmax, lambda, tol, format)?;
            emit(&text, out.as_deref())?;
            Ok(failures == 0)
        }
        Command::Union { sequences, lambda, tol, format, out } => {
            let seqs = sequences
                .iter()
                .map(|s| BlockSequence::parse(s))
                .collect::<Result<Vec<_>, _>>()?;
            let report = verify_union(&seqs, lambda, tol)?;
            let text = match format {
                Format::Json => to_json(&report),
                Format::Csv => {
                    let mut out = String::from(
                        "n,lambda,components,spectrum_ok,distinct_count,residual_max\n",
                    );
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{:e}",
                        report.n,
                        report.lambda,
                        report.components.len(),
                        report.spectrum_ok,
                        report.distinct_count,
                        report.residual_max
                    );
                    out
                }
                Format::Pretty => {
                    let mut out = String::new();
                    let _ = writeln!(out, "union of {} components, n = {}", report.components.len(), report.n);
                    for c in &report.components {
                        let _ = writeln!(out, "  {}  ({})", c.sequence, if c.all_ok() { "ok" } else { "FAILED" });
                    }
                    let _ = writeln!(out, "spectrum {}", report.predicted_multiplicities);
                    let _ = writeln!(
                        out,
                        "spectrum_ok = {}, distinct_count = {}, residual_max = {:.3e}",
                        report.spectrum_ok, report.distinct_count, report.residual_max
                    );
                    out
                }
            };
            emit(&text, out.as_deref())?;
            Ok(report.all_ok())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstructDocument<'a> {
    sequence: String,
    n: usize,
    r: usize,
    lambda: f64,
    matrix: &'a DenseSymmetricMatrix,
    weights: &'a UniformWeights,
}

fn emit_construct(
    seq: &BlockSequence,
    lambda: f64,
    weights: &UniformWeights,
    matrix: &DenseSymmetricMatrix,
    format: Format,
    out: Option<&Path>,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let doc = ConstructDocument {
                sequence: seq.render(),
                n: seq.n(),
                r: seq.r(),
                lambda,
                matrix,
                weights,
            };
            emit(&to_json(&doc), out)
        }
        Format::Csv => {
            emit(&matrix.to_csv(), out)?;
            if let Some(path) = out {
                let mut weights_path = path.as_os_str().to_owned();
                weights_path.push(".weights.json");
                std::fs::write(weights_path, to_json(weights))?;
            }
            Ok(())
        }
        Format::Pretty => {
            let mut text = String::new();
            let _ = writeln!(text, "sequence: {}  (n = {}, r = {})", seq.render(), seq.n(), seq.r());
            let _ = writeln!(text, "lambda = {}", lambda);
            let _ = writeln!(text, "vertex weights:");
            for bag in 1..=seq.r() {
                let _ = writeln!(text, "  p[{}] = {}", bag, weights.vertex_weight(bag));
            }
            let _ = writeln!(text, "internal edge weights:");
            for bag in 1..=seq.r() {
                let _ = writeln!(text, "  eps[{}] = {}", bag, weights.internal_weight(bag));
            }
            let _ = writeln!(text, "cross edge weights (value / sqrt(radical)):");
            for (&(i, j), w) in weights.cross_weights() {
                let _ = writeln!(text, "  eps[{},{}] = ({}) / sqrt({})", i, j, w.value, w.radicand);
            }
            let _ = writeln!(text, "matrix:");
            for row in matrix.rows() {
                let cells: Vec<String> = row.iter().map(|x| format!("{:>12.6}", x)).collect();
                let _ = writeln!(text, "  {}", cells.join(" "));
            }
            emit(&text, out)
        }
    }
}

#[derive(Serialize)]
struct ReduceDocument<'a> {
    sequence: String,
    n: usize,
    r: usize,
    #[serde(flatten)]
    trace: &'a ReductionTrace,
    spectrum: &'a SymbolicSpectrum,
}

fn emit_reduce(
    seq: &BlockSequence,
    trace: &ReductionTrace,
    spectrum: &SymbolicSpectrum,
    format: Format,
    out: Option<&Path>,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let doc = ReduceDocument {
                sequence: seq.render(),
                n: seq.n(),
                r: seq.r(),
                trace,
                spectrum,
            };
            emit(&to_json(&doc), out)
        }
        Format::Csv => {
            let mut text = String::from("k,eigenvalue\n");
            for (idx, x) in trace.chain.iter().enumerate() {
                let _ = writeln!(text, "{},{}", idx + 1, x);
            }
            let _ = writeln!(text, "final,{}", trace.final_singleton);
            let _ = writeln!(text, "isolated_zero,{}", trace.isolated_zero_count);
            let _ = writeln!(text, "isolated_lambda,{}", trace.isolated_lambda_count);
            emit(&text, out)
        }
        Format::Pretty => {
            let mut text = String::new();
            let _ = writeln!(text, "sequence: {}  (n = {}, r = {})", seq.render(), seq.n(), seq.r());
            let _ = writeln!(
                text,
                "isolated vertices: {} with weight 0, {} with weight lambda",
                trace.isolated_zero_count, trace.isolated_lambda_count
            );
            for (idx, x) in trace.chain.iter().enumerate() {
                let _ = writeln!(text, "x_{} = {}", idx + 1, x);
            }
            let _ = writeln!(text, "final singleton = {}", trace.final_singleton);
            let _ = writeln!(text, "spectrum = {}", spectrum);
            emit(&text, out)
        }
    }
}

fn render_verify(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let mut text = String::from(
                "n,r,sequence,lambda,pattern_ok,spectrum_ok,distinct_count,residual_max\n",
            );
            let _ = writeln!(
                text,
                "{},{},{},{},{},{},{},{:e}",
                report.n,
                report.r,
                report.sequence,
                report.lambda,
                report.pattern_ok,
                report.spectrum_ok,
                report.distinct_count,
                report.residual_max
            );
            text
        }
        Format::Pretty => {
            let mut text = String::new();
            let _ = writeln!(
                text,
                "sequence: {}  (n = {}, r = {}), lambda = {}",
                report.sequence, report.n, report.r, report.lambda
            );
            let _ = writeln!(text, "pattern_ok      = {}", report.pattern_ok);
            let _ = writeln!(text, "spectrum_ok     = {}", report.spectrum_ok);
            let _ = writeln!(text, "distinct_count  = {}", report.distinct_count);
            let _ = writeln!(text, "residual_max    = {:.3e}", report.residual_max);
            let _ = writeln!(text, "multiplicities  = {}", report.predicted_multiplicities);
            let eigen: Vec<String> =
                report.numeric_eigenvalues.iter().map(|x| format!("{:.6}", x)).collect();
            let _ = writeln!(text, "eigenvalues     = [{}]", eigen.join(", "));
            let _ = writeln!(text, "verdict         = {}", if report.all_ok() { "PASS" } else { "FAIL" });
            text
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    r: usize,
    sequence: String,
    distinct_count: usize,
    spectrum_ok: bool,
    pattern_ok: bool,
}

#[derive(Serialize)]
struct SweepDocument {
    n_max: usize,
    lambda: f64,
    rows: Vec<SweepRow>,
    max_distinct_count: usize,
    failures: usize,
}

fn run_sweep(
    n_max: usize,
    lambda: f64,
    tol: f64,
    format: Format,
) -> Result<(String, usize), CliError> {
    let mut rows = Vec::new();
    let mut failures = 0;
    let mut max_distinct = 0;
    for seq in enumerate_threshold_graphs(n_max) {
        let report = verify_sequence(&seq, lambda, tol)?;
        if !report.all_ok() {
            failures += 1;
        }
        max_distinct = max_distinct.max(report.distinct_count);
        rows.push(SweepRow {
            n: report.n,
            r: report.r,
            sequence: report.sequence,
            distinct_count: report.distinct_count,
            spectrum_ok: report.spectrum_ok,
            pattern_ok: report.pattern_ok,
        });
    }
    let doc = SweepDocument { n_max, lambda, rows, max_distinct_count: max_distinct, failures };
    let text = match format {
        Format::Json => to_json(&doc),
        Format::Csv => {
            let mut text = String::from("n,r,sequence,distinct_count,spectrum_ok,pattern_ok\n");
            for row in &doc.rows {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{},{}",
                    row.n, row.r, row.sequence, row.distinct_count, row.spectrum_ok, row.pattern_ok
                );
            }
            let _ = writeln!(
                text,
                "summary,max_distinct_count={},failures={}",
                doc.max_distinct_count, doc.failures
            );
            text
        }
        Format::Pretty => {
            let mut text = String::new();
            for row in &doc.rows {
                let _ = writeln!(
                    text,
                    "n={:<2} r={:<2} distinct={} spectrum_ok={:<5} pattern_ok={:<5} {}",
                    row.n, row.r, row.distinct_count, row.spectrum_ok, row.pattern_ok, row.sequence
                );
            }
            let _ = writeln!(
                text,
                "checked {} sequences: max distinct_count = {}, failures = {}",
                doc.rows.len(),
                doc.max_distinct_count,
                doc.failures
            );
            text
        }
    };
    Ok((text, doc.failures))
}
