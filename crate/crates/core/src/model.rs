//! Threshold-graph representations and predicates.
//!
//! A threshold graph is grown one vertex at a time, each new vertex either
//! isolated (bit 0) or dominating (bit 1, adjacent to everything added so
//! far). Three equivalent encodings are supported:
//!
//! * a binary creation sequence `b1 b2 ... bn` with `b1 = 0`;
//! * its run-length form, the block sequence `0^a1 1^a2 0^a3 ...`;
//! * the bag layout, which assigns each vertex a contiguous global index
//!   inside its block's bag. Odd bags (1-based) are union bags with no
//!   internal edges; even bags are join bags, internally complete and joined
//!   to every earlier bag.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::Error;

/// One symbol of the creation sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn as_char(self) -> char {
        match self {
            Bit::Zero => '0',
            Bit::One => '1',
        }
    }
}

/// What a bag contributes structurally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BagKind {
    /// No internal edges (a block of isolated vertices).
    Union,
    /// Internally complete, joined to every vertex of every earlier bag.
    Join,
}

/// A raw binary creation sequence. First bit is always 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequence {
    bits: Vec<Bit>,
}

impl BinarySequence {
    pub fn new(bits: Vec<Bit>) -> Result<Self, Error> {
        match bits.first() {
            None => Err(Error::EmptyInput),
            Some(Bit::One) => Err(Error::LeadingOne),
            Some(Bit::Zero) => Ok(BinarySequence { bits }),
        }
    }

    pub fn bits(&self) -> &[Bit] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty sequences
    }
}

/// One maximal run of equal bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub bit: Bit,
    pub count: usize,
}

/// The canonical run-length encoding of a threshold graph.
///
/// Invariants: bits alternate starting at 0 (so block `i`, 1-based, has bit 0
/// iff `i` is odd) and every count is at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSequence {
    blocks: Vec<Block>,
}

impl BlockSequence {
    /// Build from the block counts `a1, a2, ..., ar`; bits are implied by position.
    pub fn from_counts(counts: &[usize]) -> Result<Self, Error> {
        if counts.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut blocks = Vec::with_capacity(counts.len());
        for (idx, &count) in counts.iter().enumerate() {
            if count == 0 {
                return Err(Error::ZeroCount { token: format!("a{}", idx + 1) });
            }
            let bit = if idx % 2 == 0 { Bit::Zero } else { Bit::One };
            blocks.push(Block { bit, count });
        }
        Ok(BlockSequence { blocks })
    }

    /// Parse either a raw binary string (`001110011`) or caret notation
    /// (`0^2 1^3 0^2 1^2`, counts defaulting to 1). Both forms of the same
    /// graph produce identical results; adjacent equal-bit tokens merge.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut runs: Vec<(Bit, usize)> = Vec::new();
        let push = |runs: &mut Vec<(Bit, usize)>, bit: Bit, count: usize| {
            match runs.last_mut() {
                Some((last, n)) if *last == bit => *n += count,
                _ => runs.push((bit, count)),
            }
        };
        let mut saw_token = false;
        for token in text.split_whitespace() {
            saw_token = true;
            if let Some((head, exponent)) = token.split_once('^') {
                let bit = match head {
                    "0" => Bit::Zero,
                    "1" => Bit::One,
                    _ => return Err(Error::MalformedToken { token: token.to_string() }),
                };
                let count: usize = exponent
                    .parse()
                    .map_err(|_| Error::MalformedToken { token: token.to_string() })?;
                if count == 0 {
                    return Err(Error::ZeroCount { token: token.to_string() });
                }
                push(&mut runs, bit, count);
            } else {
                for c in token.chars() {
                    let bit = match c {
                        '0' => Bit::Zero,
                        '1' => Bit::One,
                        _ => return Err(Error::MalformedToken { token: token.to_string() }),
                    };
                    push(&mut runs, bit, 1);
                }
            }
        }
        if !saw_token {
            return Err(Error::EmptyInput);
        }
        if runs[0].0 == Bit::One {
            return Err(Error::LeadingOne);
        }
        Ok(BlockSequence {
            blocks: runs.into_iter().map(|(bit, count)| Block { bit, count }).collect(),
        })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of blocks (bags), `r`.
    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.count).sum()
    }

    /// Size of bag `i` (1-based).
    pub fn count(&self, bag: usize) -> usize {
        self.blocks[bag - 1].count
    }

    /// Kind of bag `i` (1-based): odd bags are union bags, even bags join bags.
    pub fn bag_kind(&self, bag: usize) -> BagKind {
        if bag % 2 == 0 {
            BagKind::Join
        } else {
            BagKind::Union
        }
    }

    /// Connected iff `r` is even, or `r = 1` and `a1 = 1`.
    pub fn is_connected(&self) -> bool {
        self.r() % 2 == 0 || (self.r() == 1 && self.blocks[0].count == 1)
    }

    /// Canonical caret rendering with explicit exponents, e.g. `0^2 1^3 0^2 1^2`.
    pub fn render(&self) -> String {
        self.blocks
            .iter()
            .map(|b| format!("{}^{}", b.bit.as_char(), b.count))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Raw binary rendering, e.g. `001110011`.
    pub fn render_binary(&self) -> String {
        let mut out = String::with_capacity(self.n());
        for b in &self.blocks {
            for _ in 0..b.count {
                out.push(b.bit.as_char());
            }
        }
        out
    }

    pub fn to_binary(&self) -> BinarySequence {
        let mut bits = Vec::with_capacity(self.n());
        for b in &self.blocks {
            bits.extend(std::iter::repeat_n(b.bit, b.count));
        }
        BinarySequence { bits }
    }

    pub fn layout(&self) -> BagLayout {
        BagLayout::new(self)
    }

    /// Adjacency under the bag layout: `u < v` are adjacent iff `v`'s bag is a
    /// join bag (this covers both the same-bag clique and the join to every
    /// earlier bag).
    pub fn adjacency(&self) -> AdjacencyMatrix {
        let layout = self.layout();
        let n = layout.n();
        let mut cells = vec![false; n * n];
        for v in 0..n {
            if self.bag_kind(layout.bag_of_vertex(v)) != BagKind::Join {
                continue;
            }
            for u in 0..v {
                cells[u * n + v] = true;
                cells[v * n + u] = true;
            }
        }
        AdjacencyMatrix { n, cells }
    }
}

impl From<&BinarySequence> for BlockSequence {
    fn from(binary: &BinarySequence) -> Self {
        let mut blocks: Vec<Block> = Vec::new();
        for &bit in binary.bits() {
            match blocks.last_mut() {
                Some(block) if block.bit == bit => block.count += 1,
                _ => blocks.push(Block { bit, count: 1 }),
            }
        }
        BlockSequence { blocks }
    }
}

impl FromStr for BlockSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        BlockSequence::parse(s)
    }
}

impl fmt::Display for BlockSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Assignment of global vertex indices to bags: vertices of bag `i` occupy a
/// contiguous 0-based interval, bag by bag in block order.
#[derive(Debug, Clone)]
pub struct BagLayout {
    ranges: Vec<Range<usize>>,
    bag_of: Vec<usize>,
}

impl BagLayout {
    fn new(seq: &BlockSequence) -> Self {
        let mut ranges = Vec::with_capacity(seq.r());
        let mut bag_of = Vec::with_capacity(seq.n());
        let mut start = 0;
        for (idx, block) in seq.blocks().iter().enumerate() {
            let bag = idx + 1;
            ranges.push(start..start + block.count);
            bag_of.extend(std::iter::repeat_n(bag, block.count));
            start += block.count;
        }
        BagLayout { ranges, bag_of }
    }

    pub fn n(&self) -> usize {
        self.bag_of.len()
    }

    pub fn r(&self) -> usize {
        self.ranges.len()
    }

    /// Bag index (1-based) of a global vertex index.
    pub fn bag_of_vertex(&self, vertex: usize) -> usize {
        self.bag_of[vertex]
    }

    /// Global index interval of bag `i` (1-based).
    pub fn vertex_range_of_bag(&self, bag: usize) -> Range<usize> {
        self.ranges[bag - 1].clone()
    }
}

/// Symmetric boolean adjacency with a false diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl AdjacencyMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.cells[u * self.n + v]
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.is_edge(v, u)).count()
    }
}

/// Every block sequence on at most `n_max` vertices, in deterministic order:
/// `n` ascending, then all `2^(n-1)` compositions of `n` by ascending break
/// mask. Isomorphic graphs with distinct sequences are not deduplicated.
pub fn enumerate_threshold_graphs(n_max: usize) -> impl Iterator<Item = BlockSequence> {
    assert!(n_max < 64, "enumeration masks are 64-bit");
    (1..=n_max).flat_map(|n| {
        (0u64..(1u64 << (n - 1))).map(move |mask| {
            let mut counts = Vec::new();
            let mut current = 1;
            for bit in 0..n - 1 {
                if mask >> bit & 1 == 1 {
                    counts.push(current);
                    current = 1;
                } else {
                    current += 1;
                }
            }
            counts.push(current);
            BlockSequence::from_counts(&counts).expect("composition parts are positive")
        })
    })
}
