//! Library-wide error type.

use std::fmt;

use thiserror::Error;

/// Everything that can go wrong across parsing, exact arithmetic, reduction,
/// assembly and the numeric oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input: expected a binary or caret-notation sequence")]
    EmptyInput,
    #[error("sequence must start with 0 (the first vertex is always isolated)")]
    LeadingOne,
    #[error("malformed token `{token}`")]
    MalformedToken { token: String },
    #[error("block `{token}` has count 0; every block needs at least one vertex")]
    ZeroCount { token: String },
    #[error("cannot multiply two lambda-carrying scalars")]
    DimensionError,
    #[error("lambda must be nonzero")]
    LambdaZero,
    #[error("lambda must be finite, got {value}")]
    LambdaNotFinite { value: f64 },
    #[error("need at least 2 bags, got {r}")]
    TooFewBags { r: usize },
    #[error(transparent)]
    HypothesisViolation(#[from] HypothesisViolation),
    #[error("matrix is not symmetric: |m[{i}][{j}] - m[{j}][{i}]| = {delta:e}")]
    NonSymmetric { i: usize, j: usize, delta: f64 },
    #[error("Jacobi sweep limit {limit} exceeded with off-diagonal norm {off:e}")]
    NoConvergence { limit: usize, off: f64 },
    #[error("spectrum size mismatch: {numeric} numeric eigenvalues vs {symbolic} symbolic multiplicities")]
    SizeMismatch { numeric: usize, symbolic: usize },
    #[error("dimension mismatch: matrix has {matrix} rows, graph has {graph} vertices")]
    DimensionMismatch { matrix: usize, graph: usize },
    #[error("matrix entry ({i},{j}) is not finite: {value}")]
    NonFiniteEntry { i: usize, j: usize, value: f64 },
}

/// A reduction-step hypothesis that failed when checked with exact values.
///
/// The reduction calculus never trusts its own invariants: every equality the
/// derivation relies on is checked at runtime, and a failure names the
/// offending equality together with both exact sides.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct HypothesisViolation {
    /// Which equality failed, e.g. `p[3] = p[4]`.
    pub check: String,
    /// Exact left-hand side, rendered.
    pub left: String,
    /// Exact right-hand side, rendered.
    pub right: String,
}

impl fmt::Display for HypothesisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hypothesis violated: {} (left = {}, right = {})",
            self.check, self.left, self.right
        )
    }
}
