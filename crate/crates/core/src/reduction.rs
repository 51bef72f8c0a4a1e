//! Exact spectral reduction.
//!
//! Two mechanisms drive everything:
//!
//! 1. *Bag collapse* ([`collapse_bags`]): a uniform weighted threshold graph
//!    has the same spectrum as a singleton-bag graph (each bag shrunk to one
//!    vertex, `p'_i = p_i + (a_i-1)·eps_i`, `eps'_{i,j} = √(a_i·a_j)·eps_{i,j}`)
//!    together with `a_i - 1` isolated vertices of weight `p_i - eps_i` per bag.
//! 2. *Peeling* ([`peel_leading_bag`]): when the leading singleton bag has the
//!    same vertex weight as its successor and matching outgoing cross weights,
//!    removing it splits off the single eigenvalue `p_k - eps_{k,k+1}` and
//!    scales the successor's remaining cross weights by √2.
//!
//! Neither identity is trusted: every equality the derivation needs is checked
//! with exact arithmetic while the chain runs, and each step is recorded in an
//! audit trace. Floating point never enters this path.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, HypothesisViolation};
use crate::model::BlockSequence;
use crate::scalar::{ratio, ExactScalar};
use crate::weights::{matrix_weights, UniformWeights};

/// One of the four admissible eigenvalues, as a coefficient of λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EigenvalueKind {
    MinusLambda,
    Zero,
    Lambda,
    TwoLambda,
}

impl EigenvalueKind {
    pub const ALL: [EigenvalueKind; 4] = [
        EigenvalueKind::MinusLambda,
        EigenvalueKind::Zero,
        EigenvalueKind::Lambda,
        EigenvalueKind::TwoLambda,
    ];

    /// The integer `c` with eigenvalue `c·λ`.
    pub fn coefficient(self) -> i64 {
        match self {
            EigenvalueKind::MinusLambda => -1,
            EigenvalueKind::Zero => 0,
            EigenvalueKind::Lambda => 1,
            EigenvalueKind::TwoLambda => 2,
        }
    }

    pub fn numeric(self, lambda: f64) -> f64 {
        self.coefficient() as f64 * lambda
    }

    /// Exact classification of a scalar as one of the four targets.
    pub fn of_scalar(x: &ExactScalar) -> Option<EigenvalueKind> {
        let c = x.lambda_multiple()?;
        EigenvalueKind::ALL.into_iter().find(|kind| c == ratio(kind.coefficient(), 1))
    }
}

/// A multiset over `{-λ, 0, λ, 2λ}` with exact multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SymbolicSpectrum {
    counts: [usize; 4],
}

impl SymbolicSpectrum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(minus: usize, zero: usize, lambda: usize, two: usize) -> Self {
        SymbolicSpectrum { counts: [minus, zero, lambda, two] }
    }

    pub fn count(&self, kind: EigenvalueKind) -> usize {
        self.counts[Self::slot(kind)]
    }

    pub fn add(&mut self, kind: EigenvalueKind, multiplicity: usize) {
        self.counts[Self::slot(kind)] += multiplicity;
    }

    /// Total number of eigenvalues accounted for.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Number of targets with nonzero multiplicity.
    pub fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Multiset union (spectra of disjoint unions add).
    pub fn union(&self, other: &SymbolicSpectrum) -> SymbolicSpectrum {
        let mut out = *self;
        for (slot, count) in other.counts.iter().enumerate() {
            out.counts[slot] += count;
        }
        out
    }

    fn slot(kind: EigenvalueKind) -> usize {
        match kind {
            EigenvalueKind::MinusLambda => 0,
            EigenvalueKind::Zero => 1,
            EigenvalueKind::Lambda => 2,
            EigenvalueKind::TwoLambda => 3,
        }
    }
}

impl Serialize for SymbolicSpectrum {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(4))?;
        for kind in EigenvalueKind::ALL {
            map.serialize_entry(&kind.coefficient().to_string(), &self.count(kind))?;
        }
        map.end()
    }
}

impl std::fmt::Display for SymbolicSpectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = ["-lambda", "0", "lambda", "2lambda"];
        let parts: Vec<String> = EigenvalueKind::ALL
            .into_iter()
            .zip(names)
            .filter(|(kind, _)| self.count(*kind) > 0)
            .map(|(kind, name)| format!("{}^{}", name, self.count(kind)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A weighted threshold graph whose bags `first..=last` are all singletons.
/// Cross weights exist for pairs `(i, j)` with `i < j` and `j` even; absent
/// pairs read as exact zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SingletonBagGraph {
    first: usize,
    last: usize,
    vertex: BTreeMap<usize, ExactScalar>,
    cross: BTreeMap<(usize, usize), ExactScalar>,
}

impl SingletonBagGraph {
    pub fn first(&self) -> usize {
        self.first
    }

    pub fn last(&self) -> usize {
        self.last
    }

    pub fn bag_count(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn vertex_weight(&self, bag: usize) -> &ExactScalar {
        &self.vertex[&bag]
    }

    /// Cross weight, with absent entries (union-bag columns) reading as zero.
    pub fn cross_weight(&self, i: usize, j: usize) -> ExactScalar {
        self.cross.get(&(i, j)).cloned().unwrap_or_else(ExactScalar::zero)
    }
}

/// Collapse every bag to a single vertex, splitting off `a_i - 1` isolated
/// vertices of weight `p_i - eps_i` per bag. Spectrum-preserving; the radical
/// in each cross weight cancels exactly against the stored `√(a_i·a_j)` form.
///
/// Accepts any uniform weights built for `seq`, not only the constructed ones.
pub fn collapse_bags(
    seq: &BlockSequence,
    weights: &UniformWeights,
) -> (SingletonBagGraph, Vec<ExactScalar>) {
    let r = seq.r();
    assert_eq!(weights.r(), r, "weights were built for a different sequence");
    let mut vertex = BTreeMap::new();
    let mut isolated = Vec::new();
    for bag in 1..=r {
        let count = seq.count(bag);
        let p = weights.vertex_weight(bag);
        let eps = weights.internal_weight(bag);
        let collapsed = p + &eps.scale(&ratio(count as i64 - 1, 1));
        vertex.insert(bag, collapsed);
        let leftover = p - eps;
        for _ in 1..count {
            isolated.push(leftover.clone());
        }
    }
    let mut cross = BTreeMap::new();
    for (&(i, j), w) in weights.cross_weights() {
        debug_assert_eq!(
            w.radicand,
            (seq.count(i) as u64) * (seq.count(j) as u64),
            "cross weight radical must match the bag sizes"
        );
        cross.insert((i, j), w.value.clone());
    }
    (SingletonBagGraph { first: 1, last: r, vertex, cross }, isolated)
}

/// Everything produced by one peel step.
#[derive(Debug, Clone)]
pub struct PeelOutcome {
    pub next: SingletonBagGraph,
    pub eigenvalue: ExactScalar,
    pub verified: Vec<VerifiedEquality>,
}

/// An equality the calculus relies on, checked with exact values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifiedEquality {
    pub kind: &'static str,
    pub i: usize,
    pub j: usize,
    pub left: ExactScalar,
    pub right: ExactScalar,
}

fn require_equal(
    kind: &'static str,
    check: String,
    i: usize,
    j: usize,
    left: &ExactScalar,
    right: &ExactScalar,
) -> Result<VerifiedEquality, Error> {
    if left != right {
        return Err(HypothesisViolation {
            check,
            left: left.to_string(),
            right: right.to_string(),
        }
        .into());
    }
    Ok(VerifiedEquality { kind, i, j, left: left.clone(), right: right.clone() })
}

/// Remove the leading singleton bag `k`, splitting off the eigenvalue
/// `p_k - eps_{k,k+1}` (the cross term is zero when `k+1` is odd).
///
/// The hypotheses (`p_k = p_{k+1}` and `eps_{k,j} = eps_{k+1,j}` for every
/// even `j > k+1`) are checked, not assumed; a failure reports the offending
/// equality with both exact sides. The successor keeps all weights except
/// `p_{k+1} := p_k + eps_{k,k+1}` and `eps_{k+1,j} := √2·eps_{k+1,j}`.
pub fn peel_leading_bag(graph: &SingletonBagGraph) -> Result<PeelOutcome, Error> {
    let k = graph.first;
    let r = graph.last;
    if k >= r {
        return Err(Error::TooFewBags { r: graph.bag_count() });
    }

    let mut verified = Vec::new();
    verified.push(require_equal(
        "vertex_weight_pair",
        format!("p[{}] = p[{}]", k, k + 1),
        k,
        k + 1,
        graph.vertex_weight(k),
        graph.vertex_weight(k + 1),
    )?);
    for j in (k + 2..=r).filter(|j| j % 2 == 0) {
        verified.push(require_equal(
            "cross_weight_pair",
            format!("eps[{},{}] = eps[{},{}]", k, j, k + 1, j),
            k,
            j,
            &graph.cross_weight(k, j),
            &graph.cross_weight(k + 1, j),
        )?);
    }

    let leading_cross = graph.cross_weight(k, k + 1);
    let eigenvalue = graph.vertex_weight(k) - &leading_cross;

    let mut vertex = BTreeMap::new();
    vertex.insert(k + 1, graph.vertex_weight(k) + &leading_cross);
    for bag in k + 2..=r {
        vertex.insert(bag, graph.vertex_weight(bag).clone());
    }
    let mut cross = BTreeMap::new();
    for (&(i, j), w) in &graph.cross {
        if i == k || j == k {
            continue;
        }
        let scaled = if i == k + 1 { w.mul_sqrt2() } else { w.clone() };
        cross.insert((i, j), scaled);
    }

    Ok(PeelOutcome {
        next: SingletonBagGraph { first: k + 1, last: r, vertex, cross },
        eigenvalue,
        verified,
    })
}

/// One recorded chain step: the graph as it stood before peeling bag `k`,
/// the equalities verified at that point, and the split-off eigenvalue.
#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub k: usize,
    pub vertex_weights: Vec<BagWeightEntry>,
    pub cross_weights: Vec<CrossWeightEntry>,
    pub checks: Vec<VerifiedEquality>,
    pub eigenvalue: ExactScalar,
}

#[derive(Debug, Clone, Serialize)]
pub struct BagWeightEntry {
    pub bag: usize,
    pub value: ExactScalar,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossWeightEntry {
    pub i: usize,
    pub j: usize,
    pub value: ExactScalar,
}

/// Full audit trail of a reduction run.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionTrace {
    /// Weight-0 isolated vertices split off by the bag collapse.
    pub isolated_zero_count: usize,
    /// Weight-λ isolated vertices split off by the bag collapse.
    pub isolated_lambda_count: usize,
    /// The split-off eigenvalues `x_1 .. x_{r-1}`, in order.
    pub chain: Vec<ExactScalar>,
    /// Weight of the last surviving singleton (0 or λ).
    pub final_singleton: ExactScalar,
    pub steps: Vec<StepRecord>,
}

fn snapshot(graph: &SingletonBagGraph) -> (Vec<BagWeightEntry>, Vec<CrossWeightEntry>) {
    let vertex = graph
        .vertex
        .iter()
        .map(|(&bag, value)| BagWeightEntry { bag, value: value.clone() })
        .collect();
    let cross = graph
        .cross
        .iter()
        .map(|(&(i, j), value)| CrossWeightEntry { i, j, value: value.clone() })
        .collect();
    (vertex, cross)
}

/// In the graph led by bag `k`, every outgoing weight `eps_{k,j}` to an even
/// bag `j` has the closed form `(q_j - 1)·λ/√2^(j-1-k)` with `j ≡ q_j (mod 4)`,
/// `q_j ∈ {0, 2}`. For `j = k+1` this specializes to `(q-1)·λ`.
fn check_leading_closed_forms(
    graph: &SingletonBagGraph,
) -> Result<Vec<VerifiedEquality>, Error> {
    let k = graph.first;
    let mut verified = Vec::new();
    for j in (k + 1..=graph.last).filter(|j| j % 2 == 0) {
        let sign = if j % 4 == 2 { 1 } else { -1 };
        let expected = ExactScalar::lambda()
            .scale(&ratio(sign, 1))
            .div_sqrt2((j - 1 - k) as u32);
        verified.push(require_equal(
            "leading_cross_closed_form",
            format!("eps[{},{}] = ({})*lambda/sqrt2^{}", k, j, sign, j - 1 - k),
            k,
            j,
            &graph.cross_weight(k, j),
            &expected,
        )?);
    }
    Ok(verified)
}

fn classify(x: &ExactScalar, role: &str) -> Result<EigenvalueKind, Error> {
    EigenvalueKind::of_scalar(x).ok_or_else(|| {
        HypothesisViolation {
            check: format!("{role} must lie in {{-lambda, 0, lambda, 2lambda}}"),
            left: x.to_string(),
            right: "one of -lambda, 0, lambda, 2lambda".to_string(),
        }
        .into()
    })
}

/// Build the constructed weights, collapse the bags, and peel the chain down
/// to a single vertex, producing the exact symbolic spectrum and a full
/// audit trace. Entirely exact; floating point is never consulted.
pub fn run_reduction(seq: &BlockSequence) -> Result<(ReductionTrace, SymbolicSpectrum), Error> {
    let weights = matrix_weights(seq);
    let (mut graph, isolated) = collapse_bags(seq, &weights);

    let mut spectrum = SymbolicSpectrum::new();
    let mut isolated_zero_count = 0;
    let mut isolated_lambda_count = 0;
    for weight in &isolated {
        match classify(weight, "isolated vertex weight")? {
            EigenvalueKind::Zero => isolated_zero_count += 1,
            EigenvalueKind::Lambda => isolated_lambda_count += 1,
            other => {
                return Err(HypothesisViolation {
                    check: "isolated vertex weight must be 0 or lambda".to_string(),
                    left: weight.to_string(),
                    right: format!("{}*lambda", other.coefficient()),
                }
                .into())
            }
        }
    }
    spectrum.add(EigenvalueKind::Zero, isolated_zero_count);
    spectrum.add(EigenvalueKind::Lambda, isolated_lambda_count);

    let mut chain = Vec::new();
    let mut steps = Vec::new();
    while graph.first() < graph.last() {
        let mut checks = check_leading_closed_forms(&graph)?;
        let (vertex_weights, cross_weights) = snapshot(&graph);
        let outcome = peel_leading_bag(&graph)?;
        checks.extend(outcome.verified);
        spectrum.add(classify(&outcome.eigenvalue, "chain eigenvalue")?, 1);
        chain.push(outcome.eigenvalue.clone());
        steps.push(StepRecord {
            k: graph.first(),
            vertex_weights,
            cross_weights,
            checks,
            eigenvalue: outcome.eigenvalue,
        });
        graph = outcome.next;
    }

    let final_singleton = graph.vertex_weight(graph.first()).clone();
    spectrum.add(classify(&final_singleton, "final singleton weight")?, 1);

    let trace = ReductionTrace {
        isolated_zero_count,
        isolated_lambda_count,
        chain,
        final_singleton,
        steps,
    };
    debug_assert_eq!(spectrum.total(), seq.n());
    Ok((trace, spectrum))
}

/// The closed-form multiplicities, bypassing the chain. With `r = 4k + q`,
/// `A` the surplus (`a_i - 1`) over bags with `i mod 4 ∈ {0, 1}` and `B` the
/// surplus over bags with `i mod 4 ∈ {2, 3}`:
///
/// | q | -λ  | 0     | λ     | 2λ |
/// |---|-----|-------|-------|----|
/// | 0 | k   | A+k   | B+k   | k  |
/// | 1 | k   | A+k+1 | B+k   | k  |
/// | 2 | k+1 | A+k   | B+k+1 | k  |
/// | 3 | k+1 | A+k   | B+k+2 | k  |
pub fn predicted_spectrum(seq: &BlockSequence) -> SymbolicSpectrum {
    let r = seq.r();
    let k = r / 4;
    let q = r % 4;
    let mut a_surplus = 0;
    let mut b_surplus = 0;
    for bag in 1..=r {
        let surplus = seq.count(bag) - 1;
        match bag % 4 {
            0 | 1 => a_surplus += surplus,
            _ => b_surplus += surplus,
        }
    }
    let (minus, zero, lambda, two) = match q {
        0 => (k, a_surplus + k, b_surplus + k, k),
        1 => (k, a_surplus + k + 1, b_surplus + k, k),
        2 => (k + 1, a_surplus + k, b_surplus + k + 1, k),
        _ => (k + 1, a_surplus + k, b_surplus + k + 2, k),
    };
    SymbolicSpectrum::from_counts(minus, zero, lambda, two)
}
