//! Weight assignment for the constructed matrix.
//!
//! Two layers of weights exist. The *reduced* layer lives on the collapsed
//! graph whose bags are all singletons: its cross weights have the closed
//! form `±λ/√2^(j-i)` and are exact in Q[√2]. The *matrix* layer divides each
//! reduced cross weight by `√(a_i·a_j)`; that radical is generally irrational,
//! so it is carried unevaluated next to the exact part and only reaches
//! floating point when the concrete matrix is materialized. The bag collapse
//! multiplies it straight back out, so the whole spectrum derivation stays
//! exact.

use std::collections::BTreeMap;

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::model::BlockSequence;
use crate::scalar::{ratio, ExactScalar};

/// A cross-bag edge weight `value / √radicand`, with the exact part kept
/// symbolic and the radical unevaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossWeight {
    pub value: ExactScalar,
    pub radicand: u64,
}

impl CrossWeight {
    pub fn exact(value: ExactScalar) -> Self {
        CrossWeight { value, radicand: 1 }
    }
}

/// Per-bag vertex weights `p_i`, internal edge weights `eps_i` (zero on union
/// bags), and cross-bag edge weights `eps_{i,j}` for `i < j` with `j` even.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformWeights {
    vertex: Vec<ExactScalar>,
    internal: Vec<ExactScalar>,
    cross: BTreeMap<(usize, usize), CrossWeight>,
}

impl UniformWeights {
    pub fn new(vertex: Vec<ExactScalar>, internal: Vec<ExactScalar>) -> Self {
        assert_eq!(vertex.len(), internal.len());
        UniformWeights { vertex, internal, cross: BTreeMap::new() }
    }

    pub fn r(&self) -> usize {
        self.vertex.len()
    }

    /// `p_i` (1-based bag index).
    pub fn vertex_weight(&self, bag: usize) -> &ExactScalar {
        &self.vertex[bag - 1]
    }

    /// `eps_i` (1-based bag index); zero for union bags.
    pub fn internal_weight(&self, bag: usize) -> &ExactScalar {
        &self.internal[bag - 1]
    }

    pub fn set_cross(&mut self, i: usize, j: usize, weight: CrossWeight) {
        assert!(i < j, "cross weights are stored with i < j");
        self.cross.insert((i, j), weight);
    }

    pub fn cross_weight(&self, i: usize, j: usize) -> Option<&CrossWeight> {
        self.cross.get(&(i, j))
    }

    pub fn cross_weights(&self) -> impl Iterator<Item = (&(usize, usize), &CrossWeight)> {
        self.cross.iter()
    }
}

impl Serialize for UniformWeights {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct CrossEntries<'a>(&'a BTreeMap<(usize, usize), CrossWeight>);
        impl Serialize for CrossEntries<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for (&(i, j), w) in self.0 {
                    #[derive(Serialize)]
                    struct Entry<'a> {
                        i: usize,
                        j: usize,
                        exact: &'a ExactScalar,
                        radical: u64,
                    }
                    seq.serialize_element(&Entry { i, j, exact: &w.value, radical: w.radicand })?;
                }
                seq.end()
            }
        }

        let mut s = serializer.serialize_struct("UniformWeights", 3)?;
        s.serialize_field("p", &self.vertex)?;
        s.serialize_field("eps_internal", &self.internal)?;
        s.serialize_field("eps_cross", &CrossEntries(&self.cross))?;
        s.end()
    }
}

/// Weights of the collapsed singleton-bag graph: vertex weights in `{0, λ}`
/// and the closed-form cross weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedWeights {
    vertex: Vec<ExactScalar>,
    cross: BTreeMap<(usize, usize), ExactScalar>,
}

impl ReducedWeights {
    pub fn r(&self) -> usize {
        self.vertex.len()
    }

    pub fn vertex_weight(&self, bag: usize) -> &ExactScalar {
        &self.vertex[bag - 1]
    }

    pub fn cross_weight(&self, i: usize, j: usize) -> Option<&ExactScalar> {
        self.cross.get(&(i, j))
    }

    pub fn cross_weights(&self) -> impl Iterator<Item = (&(usize, usize), &ExactScalar)> {
        self.cross.iter()
    }
}

/// Vertex and internal-edge weights from the bag index's residue mod 4:
///
/// | i mod 4 | p_i            | eps_i   |
/// |---------|----------------|---------|
/// | 1       | 0              | 0       |
/// | 2       | λ(a_i-1)/a_i   | -λ/a_i  |
/// | 3       | λ              | 0       |
/// | 0       | λ/a_i          | λ/a_i   |
pub fn vertex_internal_weights(seq: &BlockSequence) -> UniformWeights {
    let lambda = ExactScalar::lambda;
    let mut vertex = Vec::with_capacity(seq.r());
    let mut internal = Vec::with_capacity(seq.r());
    for bag in 1..=seq.r() {
        let a = seq.count(bag) as i64;
        let (p, eps) = match bag % 4 {
            1 => (ExactScalar::zero(), ExactScalar::zero()),
            2 => (lambda().scale(&ratio(a - 1, a)), lambda().scale(&ratio(-1, a))),
            3 => (lambda(), ExactScalar::zero()),
            _ => (lambda().scale(&ratio(1, a)), lambda().scale(&ratio(1, a))),
        };
        vertex.push(p);
        internal.push(eps);
    }
    UniformWeights::new(vertex, internal)
}

/// Singleton-bag vertex weights: `0` when `i mod 4 ∈ {1, 2}`, `λ` when
/// `i mod 4 ∈ {0, 3}`.
fn reduced_vertex_weights(r: usize) -> Vec<ExactScalar> {
    (1..=r)
        .map(|bag| match bag % 4 {
            1 | 2 => ExactScalar::zero(),
            _ => ExactScalar::lambda(),
        })
        .collect()
}

/// The closed-form cross weights of the collapsed singleton-bag graph:
/// for `2 ≤ i < j ≤ r` with `j` even, `±λ/√2^(j-i)` with sign `+` iff
/// `j ≡ 2 (mod 4)`; then the first row is pinned by `eps[1,2] = λ` and
/// `eps[1,j] = eps[2,j]` for even `j ≥ 4`.
pub fn reduced_cross_weights(seq: &BlockSequence) -> Result<ReducedWeights, Error> {
    let r = seq.r();
    if r < 2 {
        return Err(Error::TooFewBags { r });
    }
    let mut cross = BTreeMap::new();
    for i in 2..r {
        for j in (i + 1..=r).filter(|j| j % 2 == 0) {
            let magnitude = ExactScalar::lambda().div_sqrt2((j - i) as u32);
            let value = if j % 4 == 2 { magnitude } else { -&magnitude };
            cross.insert((i, j), value);
        }
    }
    cross.insert((1, 2), ExactScalar::lambda());
    for j in (4..=r).filter(|j| j % 2 == 0) {
        let mirrored = cross[&(2, j)].clone();
        cross.insert((1, j), mirrored);
    }
    Ok(ReducedWeights { vertex: reduced_vertex_weights(r), cross })
}

/// The full weight set used to assemble the matrix: the mod-4 vertex and
/// internal weights plus cross weights `eps_{i,j} = eps1_{i,j} / √(a_i·a_j)`.
///
/// A single-bag sequence has no cross edges; its vertices all get weight 0 and
/// the assembled matrix is the zero matrix.
pub fn matrix_weights(seq: &BlockSequence) -> UniformWeights {
    let mut weights = vertex_internal_weights(seq);
    if seq.r() >= 2 {
        let reduced = reduced_cross_weights(seq).expect("r >= 2");
        for (&(i, j), value) in reduced.cross_weights() {
            let radicand = (seq.count(i) as u64) * (seq.count(j) as u64);
            weights.set_cross(i, j, CrossWeight { value: value.clone(), radicand });
        }
    }
    weights
}
