//! Independent numeric verification.
//!
//! The eigensolver is a from-scratch cyclic Jacobi iteration, the simplest
//! provably convergent method for symmetric matrices. It shares no code with
//! the exact reduction path, which is the point: the two routes to the
//! spectrum must agree without either trusting the other.

use serde::Serialize;

use crate::error::Error;
use crate::matrix::DenseSymmetricMatrix;
use crate::reduction::{EigenvalueKind, SymbolicSpectrum};

/// Default relative stopping threshold for the Jacobi sweep.
pub const DEFAULT_JACOBI_TOL: f64 = 1e-12;
/// Default relative residual allowed when matching numeric eigenvalues to
/// their symbolic targets.
pub const DEFAULT_MATCH_TOL: f64 = 1e-9;
/// Default relative gap used when counting distinct eigenvalues.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

const SWEEP_LIMIT: usize = 100;
const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenvalues with multiplicity, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericSpectrum {
    values: Vec<f64>,
}

impl NumericSpectrum {
    pub fn from_sorted(values: Vec<f64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        NumericSpectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps run until the off-diagonal Frobenius norm drops below
/// `tol * ||M||_F` (at most 100 sweeps; Jacobi converges quadratically, so
/// hitting the limit signals a defect, not a hard matrix). Deterministic for
/// a given input.
pub fn jacobi_eigenvalues(
    m: &DenseSymmetricMatrix,
    tol: f64,
) -> Result<NumericSpectrum, Error> {
    let n = m.n();
    let norm = m.frobenius_norm();

    for i in 0..n {
        for j in i + 1..n {
            let delta = (m.get(i, j) - m.get(j, i)).abs();
            if delta > SYMMETRY_TOL * norm {
                return Err(Error::NonSymmetric { i, j, delta });
            }
        }
    }

    let mut a: Vec<f64> = (0..n).flat_map(|i| m.row(i).to_vec()).collect();
    let off = |a: &[f64]| -> f64 {
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sum += a[i * n + j] * a[i * n + j];
                }
            }
        }
        sum.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > tol * norm {
        if sweeps >= SWEEP_LIMIT {
            return Err(Error::NoConvergence { limit: SWEEP_LIMIT, off: off(&a) });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // t = sign(theta) / (|theta| + sqrt(theta^2 + 1)), guarded
                // against overflow for extreme diagonal/pivot ratios.
                let t = if theta.abs() > 1e100 {
                    0.5 / theta
                } else if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    1.0 / (theta - (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
            }
        }
    }

    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    values.sort_by(f64::total_cmp);
    Ok(NumericSpectrum { values })
}

/// One numeric eigenvalue matched to its nearest symbolic target.
#[derive(Debug, Clone, Serialize)]
pub struct AssignedEigenvalue {
    pub value: f64,
    /// Coefficient of λ of the matched target.
    pub target: i64,
    pub residual: f64,
}

/// Outcome of matching a numeric spectrum against symbolic multiplicities.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumMatch {
    pub ok: bool,
    pub max_residual: f64,
    /// Per-target counts observed among the numeric eigenvalues, in the order
    /// -λ, 0, λ, 2λ.
    pub observed_counts: [usize; 4],
    pub expected_counts: [usize; 4],
    pub assignments: Vec<AssignedEigenvalue>,
}

/// Match each numeric eigenvalue to the nearest target `c·λ`,
/// `c ∈ {-1, 0, 1, 2}`. Succeeds iff every residual is at most
/// `tol · max(1, |λ|)` and the per-target counts equal the symbolic
/// multiplicities exactly. Targets are separated by |λ|, far above any sane
/// tolerance, so nearest-target assignment is unambiguous.
pub fn match_spectrum(
    numeric: &NumericSpectrum,
    symbolic: &SymbolicSpectrum,
    lambda: f64,
    tol: f64,
) -> Result<SpectrumMatch, Error> {
    if numeric.len() != symbolic.total() {
        return Err(Error::SizeMismatch { numeric: numeric.len(), symbolic: symbolic.total() });
    }
    let mut observed = [0usize; 4];
    let mut assignments = Vec::with_capacity(numeric.len());
    let mut max_residual: f64 = 0.0;
    for &value in numeric.values() {
        let (slot, kind) = EigenvalueKind::ALL
            .into_iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| {
                (value - x.numeric(lambda))
                    .abs()
                    .total_cmp(&(value - y.numeric(lambda)).abs())
            })
            .expect("four targets");
        let residual = (value - kind.numeric(lambda)).abs();
        observed[slot] += 1;
        max_residual = max_residual.max(residual);
        assignments.push(AssignedEigenvalue {
            value,
            target: kind.coefficient(),
            residual,
        });
    }
    let expected = [
        symbolic.count(EigenvalueKind::MinusLambda),
        symbolic.count(EigenvalueKind::Zero),
        symbolic.count(EigenvalueKind::Lambda),
        symbolic.count(EigenvalueKind::TwoLambda),
    ];
    let ok = observed == expected && max_residual <= tol * lambda.abs().max(1.0);
    Ok(SpectrumMatch {
        ok,
        max_residual,
        observed_counts: observed,
        expected_counts: expected,
        assignments,
    })
}

/// Number of clusters when the sorted eigenvalues are split at every gap
/// larger than `cluster_tol` (single linkage).
pub fn count_distinct(numeric: &NumericSpectrum, cluster_tol: f64) -> usize {
    let values = numeric.values();
    if values.is_empty() {
        return 0;
    }
    1 + values.windows(2).filter(|w| w[1] - w[0] > cluster_tol).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BlockSequence;
    use crate::weights::matrix_weights;

    fn eig(rows: Vec<Vec<f64>>) -> Vec<f64> {
        let m = DenseSymmetricMatrix::from_rows(rows).unwrap();
        jacobi_eigenvalues(&m, DEFAULT_JACOBI_TOL).unwrap().values().to_vec()
    }

    fn close(xs: &[f64], ys: &[f64], tol: f64) -> bool {
        xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn diagonal_matrix_sorts_its_diagonal() {
        let vals = eig(vec![
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ]);
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let vals = eig(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(close(&vals, &[-1.0, 1.0], 1e-12));
    }

    #[test]
    fn weighted_star_spectrum() {
        // Characteristic polynomial -x^3 + x: eigenvalues -1, 0, 1.
        let s = BlockSequence::parse("0^2 1").unwrap();
        let m = crate::matrix::assemble(&s, &matrix_weights(&s), 1.0).unwrap();
        let vals = jacobi_eigenvalues(&m, DEFAULT_JACOBI_TOL).unwrap();
        assert!(close(vals.values(), &[-1.0, 0.0, 1.0], 1e-12));
    }

    #[test]
    fn zero_and_one_by_one_matrices() {
        assert_eq!(eig(vec![vec![7.5]]), vec![7.5]);
        let zero = DenseSymmetricMatrix::zero(4);
        let vals = jacobi_eigenvalues(&zero, DEFAULT_JACOBI_TOL).unwrap();
        assert_eq!(vals.values(), &[0.0; 4]);
    }

    #[test]
    fn asymmetry_is_rejected() {
        let m = DenseSymmetricMatrix::from_rows(vec![vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap();
        assert!(matches!(
            jacobi_eigenvalues(&m, DEFAULT_JACOBI_TOL).unwrap_err(),
            Error::NonSymmetric { .. }
        ));
    }

    #[test]
    fn trace_and_frobenius_identities() {
        let s = BlockSequence::parse("0^3 1^2 0 1^2").unwrap();
        let m = crate::matrix::assemble(&s, &matrix_weights(&s), -2.0).unwrap();
        let vals = jacobi_eigenvalues(&m, DEFAULT_JACOBI_TOL).unwrap();
        let sum: f64 = vals.values().iter().sum();
        let sum_sq: f64 = vals.values().iter().map(|x| x * x).sum();
        let bound = 1e-10 * m.n() as f64 * m.frobenius_norm();
        assert!((sum - m.trace()).abs() <= bound);
        assert!((sum_sq - m.frobenius_norm().powi(2)).abs() <= bound);
    }

    #[test]
    fn match_spectrum_accepts_the_figure_graph() {
        let numeric = NumericSpectrum::from_sorted(vec![
            -1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 2.0,
        ]);
        let symbolic = SymbolicSpectrum::from_counts(1, 3, 4, 1);
        let m = match_spectrum(&numeric, &symbolic, 1.0, DEFAULT_MATCH_TOL).unwrap();
        assert!(m.ok);
        assert_eq!(m.max_residual, 0.0);
        assert_eq!(m.observed_counts, [1, 3, 4, 1]);
    }

    #[test]
    fn match_spectrum_reports_mismatches() {
        let numeric = NumericSpectrum::from_sorted(vec![-1.0, 1.0]);
        let symbolic = SymbolicSpectrum::from_counts(0, 2, 0, 0);
        let m = match_spectrum(&numeric, &symbolic, 1.0, DEFAULT_MATCH_TOL).unwrap();
        assert!(!m.ok);
        assert_eq!(m.assignments.len(), 2);
        // Both values sit exactly on the ±λ targets, so the count comparison,
        // not the residual, is what fails.
        assert_eq!(m.observed_counts, [1, 0, 1, 0]);
        assert_eq!(m.expected_counts, [0, 2, 0, 0]);

        let short = NumericSpectrum::from_sorted(vec![0.0]);
        assert_eq!(
            match_spectrum(&short, &symbolic, 1.0, DEFAULT_MATCH_TOL).unwrap_err(),
            Error::SizeMismatch { numeric: 1, symbolic: 2 }
        );
    }

    #[test]
    fn match_spectrum_with_negative_lambda() {
        // λ = -2: targets are 2, 0, -2, -4.
        let numeric = NumericSpectrum::from_sorted(vec![-2.0, 2.0]);
        let symbolic = SymbolicSpectrum::from_counts(1, 0, 1, 0);
        let m = match_spectrum(&numeric, &symbolic, -2.0, DEFAULT_MATCH_TOL).unwrap();
        assert!(m.ok, "{:?}", m);
    }

    #[test]
    fn count_distinct_clusters() {
        let spectrum = NumericSpectrum::from_sorted(vec![-1.0, 1.0]);
        assert_eq!(count_distinct(&spectrum, 1e-8), 2);
        let flat = NumericSpectrum::from_sorted(vec![0.0, 0.0, 0.0]);
        assert_eq!(count_distinct(&flat, 1e-8), 1);
        let nearly = NumericSpectrum::from_sorted(vec![0.0, 1e-12, 1.0]);
        assert_eq!(count_distinct(&nearly, 1e-8), 2);
    }

    #[test]
    fn spectrum_is_permutation_invariant() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let s = BlockSequence::parse("0^2 1^3 0^2 1^2").unwrap();
        let m = crate::matrix::assemble(&s, &matrix_weights(&s), 0.37).unwrap();
        let base = jacobi_eigenvalues(&m, DEFAULT_JACOBI_TOL).unwrap();
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..m.n()).collect();
            perm.shuffle(&mut rng);
            let rows: Vec<Vec<f64>> = (0..m.n())
                .map(|i| (0..m.n()).map(|j| m.get(perm[i], perm[j])).collect())
                .collect();
            let permuted = DenseSymmetricMatrix::from_rows(rows).unwrap();
            let vals = jacobi_eigenvalues(&permuted, DEFAULT_JACOBI_TOL).unwrap();
            for (a, b) in base.values().iter().zip(vals.values()) {
                assert!((a - b).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn jacobi_handles_large_scale() {
        // Same matrix at λ = 1e6; relative tolerances keep the result exact
        // enough to match after rescaling.
        let s = BlockSequence::parse("0^2 1^3 0^2 1^2").unwrap();
        let w = matrix_weights(&s);
        let base = crate::matrix::assemble(&s, &w, 1.0).unwrap();
        let scaled = crate::matrix::assemble(&s, &w, 1e6).unwrap();
        let base_vals = jacobi_eigenvalues(&base, DEFAULT_JACOBI_TOL).unwrap();
        let scaled_vals = jacobi_eigenvalues(&scaled, DEFAULT_JACOBI_TOL).unwrap();
        for (b, s) in base_vals.values().iter().zip(scaled_vals.values()) {
            assert!((s - 1e6 * b).abs() <= 1e-6);
        }
    }
}
