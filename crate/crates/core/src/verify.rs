//! End-to-end verification: assemble the matrix, check its sparsity pattern,
//! derive the exact spectrum, and confirm it against the numeric oracle.

use serde::Serialize;

use crate::error::Error;
use crate::matrix::{assemble, block_diagonal, pattern_check, DenseSymmetricMatrix};
use crate::model::BlockSequence;
use crate::oracle::{
    count_distinct, jacobi_eigenvalues, match_spectrum, NumericSpectrum, DEFAULT_CLUSTER_TOL,
    DEFAULT_JACOBI_TOL,
};
use crate::reduction::{run_reduction, SymbolicSpectrum};
use crate::weights::matrix_weights;

/// Machine-readable verdict for one sequence at one λ.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub r: usize,
    pub sequence: String,
    pub lambda: f64,
    pub pattern_ok: bool,
    pub spectrum_ok: bool,
    pub distinct_count: usize,
    pub residual_max: f64,
    pub predicted_multiplicities: SymbolicSpectrum,
    pub numeric_eigenvalues: Vec<f64>,
}

impl VerificationReport {
    /// Did every check pass, including the four-distinct-eigenvalues bound?
    pub fn all_ok(&self) -> bool {
        self.pattern_ok && self.spectrum_ok && self.distinct_count <= 4
    }
}

/// Run the full pipeline for one sequence: constructed matrix, pattern check,
/// exact reduction, Jacobi oracle, spectrum match, distinct count.
pub fn verify_sequence(
    seq: &BlockSequence,
    lambda: f64,
    tol: f64,
) -> Result<VerificationReport, Error> {
    let weights = matrix_weights(seq);
    let matrix = assemble(seq, &weights, lambda)?;
    let pattern_ok = pattern_check(&matrix, seq)?;
    let (_, spectrum) = run_reduction(seq)?;
    let numeric = jacobi_eigenvalues(&matrix, DEFAULT_JACOBI_TOL)?;
    let matched = match_spectrum(&numeric, &spectrum, lambda, tol)?;
    let distinct = count_distinct(&numeric, DEFAULT_CLUSTER_TOL * lambda.abs().max(1.0));
    Ok(VerificationReport {
        n: seq.n(),
        r: seq.r(),
        sequence: seq.render(),
        lambda,
        pattern_ok,
        spectrum_ok: matched.ok,
        distinct_count: distinct,
        residual_max: matched.max_residual,
        predicted_multiplicities: spectrum,
        numeric_eigenvalues: numeric.values().to_vec(),
    })
}

/// Verdict for a disjoint union of components sharing one λ.
#[derive(Debug, Clone, Serialize)]
pub struct UnionReport {
    pub n: usize,
    pub lambda: f64,
    pub components: Vec<VerificationReport>,
    pub spectrum_ok: bool,
    pub distinct_count: usize,
    pub residual_max: f64,
    pub predicted_multiplicities: SymbolicSpectrum,
    pub numeric_eigenvalues: Vec<f64>,
}

impl UnionReport {
    pub fn all_ok(&self) -> bool {
        self.components.iter().all(|c| c.all_ok())
            && self.spectrum_ok
            && self.distinct_count <= 4
    }
}

/// Assemble the block-diagonal matrix of the given components (same λ for
/// all) and check that its spectrum is the multiset union of the component
/// spectra, still within the four admissible values.
pub fn verify_union(
    seqs: &[BlockSequence],
    lambda: f64,
    tol: f64,
) -> Result<UnionReport, Error> {
    let mut components = Vec::with_capacity(seqs.len());
    let mut parts: Vec<DenseSymmetricMatrix> = Vec::with_capacity(seqs.len());
    let mut combined = SymbolicSpectrum::new();
    for seq in seqs {
        components.push(verify_sequence(seq, lambda, tol)?);
        parts.push(assemble(seq, &matrix_weights(seq), lambda)?);
        let (_, spectrum) = run_reduction(seq)?;
        combined = combined.union(&spectrum);
    }
    let union_matrix = block_diagonal(&parts);
    let numeric = jacobi_eigenvalues(&union_matrix, DEFAULT_JACOBI_TOL)?;
    let matched = match_spectrum(&numeric, &combined, lambda, tol)?;
    let distinct = count_distinct(&numeric, DEFAULT_CLUSTER_TOL * lambda.abs().max(1.0));
    Ok(UnionReport {
        n: union_matrix.n(),
        lambda,
        components,
        spectrum_ok: matched.ok,
        distinct_count: distinct,
        residual_max: matched.max_residual,
        predicted_multiplicities: combined,
        numeric_eigenvalues: numeric.values().to_vec(),
    })
}

/// The spectrum of a numeric matrix, used by tests that compare a direct
/// eigensolve against the union of part spectra.
pub fn numeric_spectrum_of(m: &DenseSymmetricMatrix) -> Result<NumericSpectrum, Error> {
    jacobi_eigenvalues(m, DEFAULT_JACOBI_TOL)
}
