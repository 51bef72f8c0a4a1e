//! Python bindings for the threshold-spectra toolkit.
//!
//! Exposes the main types and operations: parsing and inspecting threshold
//! graphs, constructing their matrices, running the exact reduction, and the
//! numeric oracle. Build the cdylib and import it as `threshold_spectra`
//! (see python/smoke_test.py at the repository root for a loader).

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use threshold_spectra_core::error::Error;
use threshold_spectra_core::matrix::{assemble, block_diagonal, DenseSymmetricMatrix};
use threshold_spectra_core::model::{enumerate_threshold_graphs, BlockSequence};
use threshold_spectra_core::oracle::{self, DEFAULT_JACOBI_TOL, DEFAULT_MATCH_TOL};
use threshold_spectra_core::reduction::{
    predicted_spectrum, run_reduction, EigenvalueKind, SymbolicSpectrum,
};
use threshold_spectra_core::verify::verify_sequence;
use threshold_spectra_core::weights::matrix_weights;

fn lib_err(err: Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn multiplicity_map(spectrum: &SymbolicSpectrum) -> BTreeMap<i64, usize> {
    EigenvalueKind::ALL
        .into_iter()
        .map(|kind| (kind.coefficient(), spectrum.count(kind)))
        .collect()
}

fn matrix_rows(m: &DenseSymmetricMatrix) -> Vec<Vec<f64>> {
    m.rows().map(|row| row.to_vec()).collect()
}

/// A threshold graph parsed from a binary or caret-notation sequence.
#[pyclass(frozen)]
struct ThresholdGraph {
    inner: BlockSequence,
}

#[pymethods]
impl ThresholdGraph {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(ThresholdGraph { inner: BlockSequence::parse(text).map_err(lib_err)? })
    }

    /// Number of vertices.
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Number of blocks (bags).
    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    /// Canonical caret rendering, e.g. "0^2 1^3 0^2 1^2".
    fn render(&self) -> String {
        self.inner.render()
    }

    /// Raw binary rendering, e.g. "001110011".
    fn render_binary(&self) -> String {
        self.inner.render_binary()
    }

    /// Blocks as (bit, count) pairs.
    fn blocks(&self) -> Vec<(u8, usize)> {
        self.inner
            .blocks()
            .iter()
            .map(|b| (if b.bit.as_char() == '1' { 1 } else { 0 }, b.count))
            .collect()
    }

    /// Symmetric boolean adjacency matrix under the bag layout.
    fn adjacency(&self) -> Vec<Vec<bool>> {
        let adj = self.inner.adjacency();
        (0..adj.n())
            .map(|u| (0..adj.n()).map(|v| adj.is_edge(u, v)).collect())
            .collect()
    }

    /// The constructed symmetric matrix at a concrete nonzero lambda.
    #[pyo3(signature = (lam=1.0))]
    fn matrix(&self, lam: f64) -> PyResult<Vec<Vec<f64>>> {
        let m = assemble(&self.inner, &matrix_weights(&self.inner), lam).map_err(lib_err)?;
        Ok(matrix_rows(&m))
    }

    /// Closed-form multiplicities as a dict keyed by the coefficient of lambda.
    fn predicted_multiplicities(&self) -> BTreeMap<i64, usize> {
        multiplicity_map(&predicted_spectrum(&self.inner))
    }

    /// Run the exact reduction chain.
    fn reduce(&self) -> PyResult<ReductionSummary> {
        let (trace, spectrum) = run_reduction(&self.inner).map_err(lib_err)?;
        let coefficient = |x| {
            EigenvalueKind::of_scalar(x)
                .map(EigenvalueKind::coefficient)
                .expect("chain values are classified during the reduction")
        };
        Ok(ReductionSummary {
            isolated_zero_count: trace.isolated_zero_count,
            isolated_lambda_count: trace.isolated_lambda_count,
            chain: trace.chain.iter().map(coefficient).collect(),
            final_singleton: coefficient(&trace.final_singleton),
            multiplicities: multiplicity_map(&spectrum),
        })
    }

    /// Full verification pipeline (pattern, exact vs numeric spectrum,
    /// distinct count).
    #[pyo3(signature = (lam=1.0, tol=DEFAULT_MATCH_TOL))]
    fn verify(&self, lam: f64, tol: f64) -> PyResult<VerificationReport> {
        let report = verify_sequence(&self.inner, lam, tol).map_err(lib_err)?;
        Ok(VerificationReport {
            n: report.n,
            r: report.r,
            sequence: report.sequence,
            lam: report.lambda,
            pattern_ok: report.pattern_ok,
            spectrum_ok: report.spectrum_ok,
            distinct_count: report.distinct_count,
            residual_max: report.residual_max,
            predicted_multiplicities: multiplicity_map(&report.predicted_multiplicities),
            numeric_eigenvalues: report.numeric_eigenvalues,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __str__(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!("ThresholdGraph(\"{}\")", self.inner.render())
    }
}

/// Outcome of the exact reduction: eigenvalues appear as integer
/// coefficients of lambda (-1, 0, 1 or 2).
#[pyclass(frozen)]
struct ReductionSummary {
    #[pyo3(get)]
    isolated_zero_count: usize,
    #[pyo3(get)]
    isolated_lambda_count: usize,
    #[pyo3(get)]
    chain: Vec<i64>,
    #[pyo3(get)]
    final_singleton: i64,
    #[pyo3(get)]
    multiplicities: BTreeMap<i64, usize>,
}

#[pymethods]
impl ReductionSummary {
    fn __repr__(&self) -> String {
        format!(
            "ReductionSummary(chain={:?}, final={}, multiplicities={:?})",
            self.chain, self.final_singleton, self.multiplicities
        )
    }
}

/// Verdict of the verification pipeline for one sequence at one lambda.
#[pyclass(frozen)]
struct VerificationReport {
    #[pyo3(get)]
    n: usize,
    #[pyo3(get)]
    r: usize,
    #[pyo3(get)]
    sequence: String,
    #[pyo3(get, name = "lam")]
    lam: f64,
    #[pyo3(get)]
    pattern_ok: bool,
    #[pyo3(get)]
    spectrum_ok: bool,
    #[pyo3(get)]
    distinct_count: usize,
    #[pyo3(get)]
    residual_max: f64,
    #[pyo3(get)]
    predicted_multiplicities: BTreeMap<i64, usize>,
    #[pyo3(get)]
    numeric_eigenvalues: Vec<f64>,
}

#[pymethods]
impl VerificationReport {
    fn all_ok(&self) -> bool {
        self.pattern_ok && self.spectrum_ok && self.distinct_count <= 4
    }

    fn __repr__(&self) -> String {
        format!(
            "VerificationReport(sequence=\"{}\", pattern_ok={}, spectrum_ok={}, distinct_count={})",
            self.sequence, self.pattern_ok, self.spectrum_ok, self.distinct_count
        )
    }
}

/// Eigenvalues of a symmetric matrix, sorted ascending (cyclic Jacobi).
#[pyfunction]
#[pyo3(signature = (rows, tol=DEFAULT_JACOBI_TOL))]
fn jacobi_eigenvalues(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<Vec<f64>> {
    let m = DenseSymmetricMatrix::from_rows(rows).map_err(lib_err)?;
    let spectrum = oracle::jacobi_eigenvalues(&m, tol).map_err(lib_err)?;
    Ok(spectrum.values().to_vec())
}

/// Number of clusters among the values when split at gaps above cluster_tol.
#[pyfunction]
fn count_distinct(mut values: Vec<f64>, cluster_tol: f64) -> usize {
    values.sort_by(f64::total_cmp);
    oracle::count_distinct(&oracle::NumericSpectrum::from_sorted(values), cluster_tol)
}

/// Every sequence with at most n_max vertices, canonically rendered.
#[pyfunction]
fn enumerate_sequences(n_max: usize) -> Vec<String> {
    enumerate_threshold_graphs(n_max).map(|s| s.render()).collect()
}

/// Block-diagonal matrix of several sequences sharing one lambda.
#[pyfunction]
#[pyo3(signature = (texts, lam=1.0))]
fn union_matrix(texts: Vec<String>, lam: f64) -> PyResult<Vec<Vec<f64>>> {
    let mut parts = Vec::with_capacity(texts.len());
    for text in &texts {
        let seq = BlockSequence::parse(text).map_err(lib_err)?;
        parts.push(assemble(&seq, &matrix_weights(&seq), lam).map_err(lib_err)?);
    }
    Ok(matrix_rows(&block_diagonal(&parts)))
}

#[pymodule]
fn threshold_spectra(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ThresholdGraph>()?;
    m.add_class::<ReductionSummary>()?;
    m.add_class::<VerificationReport>()?;
    m.add_function(wrap_pyfunction!(jacobi_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(count_distinct, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_sequences, m)?)?;
    m.add_function(wrap_pyfunction!(union_matrix, m)?)?;
    Ok(())
}
