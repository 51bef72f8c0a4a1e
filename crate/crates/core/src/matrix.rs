//! Materializing the concrete symmetric matrix.
//!
//! The numeric realization order keeps the error per entry at a few ulps:
//! each exact weight is evaluated at λ first, then cross entries are divided
//! by the double-precision `√(a_i·a_j)`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::model::{BagKind, BlockSequence};
use crate::weights::UniformWeights;

/// Row-major dense symmetric real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetricMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DenseSymmetricMatrix {
    pub fn zero(n: usize) -> Self {
        DenseSymmetricMatrix { n, entries: vec![0.0; n * n] }
    }

    /// Build from explicit rows. Requires a square shape and finite entries;
    /// the caller is responsible for symmetry (the numeric oracle re-checks it).
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, Error> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { matrix: n, graph: row.len() });
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFiniteEntry { i, j, value: x });
                }
                entries.push(x);
            }
        }
        Ok(DenseSymmetricMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    fn set_symmetric(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.n + j] = value;
        self.entries[j * self.n + i] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n).map(|i| self.row(i))
    }

    pub fn scale(&self, factor: f64) -> DenseSymmetricMatrix {
        DenseSymmetricMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// CSV rendering: one row per line, entries with 17 significant digits so
    /// values round-trip bit-exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| format!("{:.16e}", x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

impl Serialize for DenseSymmetricMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DenseSymmetricMatrix", 2)?;
        s.serialize_field("n", &self.n)?;
        let rows: Vec<&[f64]> = self.rows().collect();
        s.serialize_field("rows", &rows)?;
        s.end()
    }
}

fn validate_lambda(lambda: f64) -> Result<(), Error> {
    if lambda == 0.0 {
        return Err(Error::LambdaZero);
    }
    if !lambda.is_finite() {
        return Err(Error::LambdaNotFinite { value: lambda });
    }
    Ok(())
}

/// Assemble the matrix of the weighted graph at a concrete λ:
/// `m[k][k] = p_bag(k)`, same-join-bag off-diagonals carry the internal
/// weight, cross entries carry `eps_{i,j}` including the `1/√(a_i·a_j)`
/// radical, and everything else is zero.
pub fn assemble(
    seq: &BlockSequence,
    weights: &UniformWeights,
    lambda: f64,
) -> Result<DenseSymmetricMatrix, Error> {
    validate_lambda(lambda)?;
    let layout = seq.layout();
    let mut m = DenseSymmetricMatrix::zero(layout.n());

    for bag in 1..=seq.r() {
        let range = layout.vertex_range_of_bag(bag);
        let p = weights.vertex_weight(bag).to_float(lambda)?;
        for v in range.clone() {
            m.set_symmetric(v, v, p);
        }
        if seq.bag_kind(bag) == BagKind::Join && range.len() > 1 {
            let eps = weights.internal_weight(bag).to_float(lambda)?;
            for u in range.clone() {
                for v in u + 1..range.end {
                    m.set_symmetric(u, v, eps);
                }
            }
        }
    }
    for (&(i, j), w) in weights.cross_weights() {
        let value = w.value.to_float(lambda)? / (w.radicand as f64).sqrt();
        for u in layout.vertex_range_of_bag(i) {
            for v in layout.vertex_range_of_bag(j) {
                m.set_symmetric(u, v, value);
            }
        }
    }
    Ok(m)
}

/// Does the off-diagonal nonzero pattern of `m` equal the graph's adjacency?
///
/// The test is structural equality against zero, not a tolerance: assembled
/// entries are exactly 0.0 where no weight was assigned, and every assigned
/// weight is bounded away from zero.
pub fn pattern_check(m: &DenseSymmetricMatrix, seq: &BlockSequence) -> Result<bool, Error> {
    if m.n() != seq.n() {
        return Err(Error::DimensionMismatch { matrix: m.n(), graph: seq.n() });
    }
    let adjacency = seq.adjacency();
    for u in 0..m.n() {
        for v in 0..m.n() {
            if u != v && (m.get(u, v) != 0.0) != adjacency.is_edge(u, v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Direct sum of the given matrices; the spectrum of the result is the
/// multiset union of the part spectra.
pub fn block_diagonal(parts: &[DenseSymmetricMatrix]) -> DenseSymmetricMatrix {
    let n: usize = parts.iter().map(|p| p.n()).sum();
    let mut m = DenseSymmetricMatrix::zero(n);
    let mut offset = 0;
    for part in parts {
        for i in 0..part.n() {
            for j in 0..part.n() {
                m.entries[(offset + i) * n + (offset + j)] = part.get(i, j);
            }
        }
        offset += part.n();
    }
    m
}
