//! Incidence structures and their classification as symmetric designs,
//! Ryser designs, or neither.
//!
//! Points are dense indices `0..v`. A structure always carries exactly `v`
//! blocks, each a nonempty proper subset of the point set; everything else
//! (equal intersections, block sizes) is a question for [`classify`].

use std::fmt;

use thiserror::Error;

use crate::pointset::{PointSet, MAX_POINTS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("point count must be between 2 and {MAX_POINTS}, got {0}")]
    PointCount(usize),
    #[error("expected {expected} blocks (one per point), got {found}")]
    BlockCount { expected: usize, found: usize },
    #[error("block {block} contains point {point}, outside 0..{v}")]
    PointOutOfRange { block: usize, point: usize, v: usize },
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("block {0} contains every point")]
    FullBlock(usize),
}

/// `v` points and `v` blocks, in the order they were given.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IncidenceStructure {
    v: usize,
    blocks: Vec<PointSet>,
}

impl IncidenceStructure {
    /// Builds a structure from explicit point lists; no deduplication is done.
    pub fn new<B, I>(v: usize, blocks: B) -> Result<Self, DesignError>
    where
        B: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        if !(2..=MAX_POINTS).contains(&v) {
            return Err(DesignError::PointCount(v));
        }
        let mut sets = Vec::new();
        for (i, block) in blocks.into_iter().enumerate() {
            let mut set = PointSet::EMPTY;
            for p in block {
                if p >= v {
                    return Err(DesignError::PointOutOfRange { block: i, point: p, v });
                }
                set.insert(p);
            }
            sets.push(set);
        }
        Self::from_sets(v, sets)
    }

    /// Builds a structure from already-packed blocks.
    pub fn from_sets(v: usize, blocks: Vec<PointSet>) -> Result<Self, DesignError> {
        if !(2..=MAX_POINTS).contains(&v) {
            return Err(DesignError::PointCount(v));
        }
        if blocks.len() != v {
            return Err(DesignError::BlockCount { expected: v, found: blocks.len() });
        }
        let all = PointSet::full(v);
        for (i, b) in blocks.iter().enumerate() {
            if !b.is_subset(all) {
                let point = b.difference(all).iter().next().unwrap_or(v);
                return Err(DesignError::PointOutOfRange { block: i, point, v });
            }
            if b.is_empty() {
                return Err(DesignError::EmptyBlock(i));
            }
            if *b == all {
                return Err(DesignError::FullBlock(i));
            }
        }
        Ok(IncidenceStructure { v, blocks })
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.v
    }

    #[inline]
    pub fn blocks(&self) -> &[PointSet] {
        &self.blocks
    }

    #[inline]
    pub fn block(&self, i: usize) -> PointSet {
        self.blocks[i]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    /// Index of the first block equal to `set`.
    pub fn position(&self, set: PointSet) -> Option<usize> {
        self.blocks.iter().position(|b| *b == set)
    }

    /// Equality of the block multisets, ignoring block order.
    pub fn same_blocks_unordered(&self, other: &IncidenceStructure) -> bool {
        if self.v != other.v {
            return false;
        }
        let mut a = self.blocks.clone();
        let mut b = other.blocks.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// Relabels points by `perm` (point `p` becomes `perm[p]`) and reorders
    /// blocks so that new block `i` is old block `order[i]`.
    pub fn relabeled(&self, perm: &[usize], order: &[usize]) -> IncidenceStructure {
        assert_eq!(perm.len(), self.v);
        assert_eq!(order.len(), self.v);
        let blocks = order.iter().map(|&i| self.blocks[i].map_points(perm)).collect();
        IncidenceStructure { v: self.v, blocks }
    }
}

impl fmt::Debug for IncidenceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IncidenceStructure")
            .field("v", &self.v)
            .field("blocks", &self.blocks)
            .finish()
    }
}

/// Per-point replication counts of a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplicationProfile {
    /// `counts[p]` is the number of blocks containing point `p`.
    pub counts: Vec<usize>,
    /// Distinct replication values, largest first, with their multiplicities.
    pub values: Vec<(usize, usize)>,
}

impl ReplicationProfile {
    /// Points whose replication equals `r`.
    pub fn class_of(&self, r: usize) -> PointSet {
        self.counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == r)
            .map(|(p, _)| p)
            .collect()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

pub fn replication_profile(s: &IncidenceStructure) -> ReplicationProfile {
    let mut counts = vec![0usize; s.v];
    for b in &s.blocks {
        for p in b.iter() {
            counts[p] += 1;
        }
    }
    let mut values: Vec<(usize, usize)> = Vec::new();
    let mut sorted = counts.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    for c in sorted {
        match values.last_mut() {
            Some((val, n)) if *val == c => *n += 1,
            _ => values.push((c, 1)),
        }
    }
    ReplicationProfile { counts, values }
}

/// Why a structure is neither a symmetric nor a Ryser design.
///
/// Witness indices refer to blocks of the classified structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvalidReason {
    /// Blocks `pair` meet in `found` points while blocks 0 and 1 meet in `expected`.
    UnequalIntersections { pair: (usize, usize), expected: usize, found: usize },
    /// Block `block` has `size` points, not more than the common intersection `lambda`.
    /// Repeated blocks and nested blocks always land here.
    BlockNotAboveIndex { block: usize, size: usize, lambda: usize },
    /// All blocks pairwise disjoint.
    ZeroIndex,
}

impl InvalidReason {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            InvalidReason::UnequalIntersections { .. } => "unequal-intersections",
            InvalidReason::BlockNotAboveIndex { .. } => "block-not-above-index",
            InvalidReason::ZeroIndex => "zero-index",
        }
    }

    pub fn witness(&self) -> Vec<usize> {
        match *self {
            InvalidReason::UnequalIntersections { pair, .. } => vec![pair.0, pair.1],
            InvalidReason::BlockNotAboveIndex { block, .. } => vec![block],
            InvalidReason::ZeroIndex => vec![],
        }
    }
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InvalidReason::UnequalIntersections { pair, expected, found } => write!(
                f,
                "{} blocks={},{} expected={} found={}",
                self.code(),
                pair.0,
                pair.1,
                expected,
                found
            ),
            InvalidReason::BlockNotAboveIndex { block, size, lambda } => {
                write!(f, "{} block={} size={} lambda={}", self.code(), block, size, lambda)
            }
            InvalidReason::ZeroIndex => write!(f, "{}", self.code()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DesignClass {
    Symmetric { v: usize, k: usize, lambda: usize },
    Ryser { v: usize, lambda: usize },
    Invalid(InvalidReason),
}

impl DesignClass {
    pub fn is_ryser(&self) -> bool {
        matches!(self, DesignClass::Ryser { .. })
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, DesignClass::Symmetric { .. })
    }

    /// Common block intersection, for either design class.
    pub fn lambda(&self) -> Option<usize> {
        match *self {
            DesignClass::Symmetric { lambda, .. } | DesignClass::Ryser { lambda, .. } => {
                Some(lambda)
            }
            DesignClass::Invalid(_) => None,
        }
    }
}

impl fmt::Display for DesignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesignClass::Symmetric { v, k, lambda } => {
                write!(f, "Symmetric v={v} k={k} lambda={lambda}")
            }
            DesignClass::Ryser { v, lambda } => write!(f, "Ryser v={v} lambda={lambda}"),
            DesignClass::Invalid(reason) => write!(f, "Invalid {reason}"),
        }
    }
}

/// Classifies `s`, reporting the first violated condition for invalid input.
///
/// Checks run in this order: equal pairwise intersections, nonzero index,
/// every block strictly larger than the index, then one block size
/// (symmetric) versus several (Ryser).
pub fn classify(s: &IncidenceStructure) -> DesignClass {
    let blocks = &s.blocks;
    let lambda = blocks[0].intersection_len(blocks[1]);
    for i in 0..blocks.len() {
        for j in (i + 1)..blocks.len() {
            let found = blocks[i].intersection_len(blocks[j]);
            if found != lambda {
                return DesignClass::Invalid(InvalidReason::UnequalIntersections {
                    pair: (i, j),
                    expected: lambda,
                    found,
                });
            }
        }
    }
    if lambda == 0 {
        return DesignClass::Invalid(InvalidReason::ZeroIndex);
    }
    for (i, b) in blocks.iter().enumerate() {
        if b.len() <= lambda {
            return DesignClass::Invalid(InvalidReason::BlockNotAboveIndex {
                block: i,
                size: b.len(),
                lambda,
            });
        }
    }
    let k = blocks[0].len();
    if blocks.iter().all(|b| b.len() == k) {
        DesignClass::Symmetric { v: s.v, k, lambda }
    } else {
        DesignClass::Ryser { v: s.v, lambda }
    }
}

/// The replication pair `(r1, r2)`, `r1 >= r2`, under which `s` belongs to the
/// family closed under complementation: the two replication values of a Ryser
/// design, or `(k, v + 1 - k)` reordered for a symmetric design of block size `k`.
pub fn replication_pair(s: &IncidenceStructure, class: &DesignClass) -> Option<(usize, usize)> {
    match *class {
        DesignClass::Symmetric { v, k, .. } => {
            let other = v + 1 - k;
            Some((k.max(other), k.min(other)))
        }
        DesignClass::Ryser { .. } => {
            let prof = replication_profile(s);
            match prof.values.as_slice() {
                [(r1, _), (r2, _)] => Some((*r1, *r2)),
                _ => None,
            }
        }
        DesignClass::Invalid(_) => None,
    }
}

/// The near-pencil on `v >= 3` points: one block `{1, .., v-1}` and the
/// pairs `{0, i}`. Ryser with index 1 once `v >= 4`.
pub fn near_pencil(v: usize) -> IncidenceStructure {
    assert!(v >= 3);
    let mut blocks = vec![PointSet::range(1, v)];
    blocks.extend((1..v).map(|i| PointSet::singleton(0).union(PointSet::singleton(i))));
    IncidenceStructure::from_sets(v, blocks).expect("near-pencil is well formed")
}
