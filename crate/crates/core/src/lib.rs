//! Matrices with at most four distinct eigenvalues for threshold graphs.
//!
//! Given any threshold graph `G` (as a binary creation sequence) and any
//! nonzero real λ, this crate constructs a symmetric matrix `M` whose
//! off-diagonal nonzero pattern is exactly the adjacency of `G` and whose
//! distinct eigenvalues lie in `{-λ, 0, λ, 2λ}`. The spectrum is derived two
//! independent ways:
//!
//! * exactly, over the ring Q[√2] scaled by a symbolic λ, by collapsing each
//!   bag of the graph to a single vertex and then peeling off one bag, and
//!   with it one eigenvalue, at a time, with every identity the calculus relies on
//!   checked at runtime;
//! * numerically, by a from-scratch cyclic Jacobi eigensolver that shares no
//!   code with the exact path.
//!
//! The two must agree to a tight relative tolerance or verification fails.
//!
//! Modules follow the pipeline: [`model`] parses and lays out the graph,
//! [`scalar`] provides the exact arithmetic, [`weights`] assigns the weight
//! scheme, [`reduction`] derives the exact spectrum, [`matrix`] materializes
//! the numeric matrix, [`oracle`] checks it independently, and [`verify`]
//! bundles the whole pipeline into reports.

pub mod error;
pub mod matrix;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod scalar;
pub mod verify;
pub mod weights;

pub use error::Error;
pub use matrix::{assemble, block_diagonal, pattern_check, DenseSymmetricMatrix};
pub use model::{enumerate_threshold_graphs, BagLayout, BlockSequence};
pub use oracle::{count_distinct, jacobi_eigenvalues, match_spectrum, NumericSpectrum};
pub use reduction::{
    collapse_bags, peel_leading_bag, predicted_spectrum, run_reduction, EigenvalueKind,
    ReductionTrace, SymbolicSpectrum,
};
pub use scalar::ExactScalar;
pub use verify::{verify_sequence, verify_union, UnionReport, VerificationReport};
pub use weights::{matrix_weights, reduced_cross_weights, vertex_internal_weights, UniformWeights};
