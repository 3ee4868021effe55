//! Fixed-capacity point sets backed by a single `u128` word.

use std::fmt;

/// Largest point count any structure in this crate may have.
pub const MAX_POINTS: usize = 128;

/// A set of points drawn from `{0, .., MAX_POINTS-1}`; bit `p` is set iff `p` is a member.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet(u128);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    #[inline]
    pub const fn from_bits(bits: u128) -> Self {
        PointSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u128 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        if n == MAX_POINTS {
            PointSet(u128::MAX)
        } else {
            PointSet((1u128 << n) - 1)
        }
    }

    /// The set `{lo, .., hi-1}`.
    #[inline]
    pub fn range(lo: usize, hi: usize) -> Self {
        if hi <= lo {
            return Self::EMPTY;
        }
        PointSet(Self::full(hi).0 & !Self::full(lo).0)
    }

    #[inline]
    pub fn singleton(p: usize) -> Self {
        PointSet(1u128 << p)
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, p: usize) -> bool {
        p < MAX_POINTS && (self.0 >> p) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, p: usize) {
        self.0 |= 1u128 << p;
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        PointSet(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        PointSet(self.0 | other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        PointSet(self.0 & !other.0)
    }

    #[inline]
    pub fn symmetric_difference(self, other: Self) -> Self {
        PointSet(self.0 ^ other.0)
    }

    #[inline]
    pub fn intersection_len(self, other: Self) -> usize {
        (self.0 & other.0).count_ones() as usize
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement relative to `{0, .., n-1}`.
    #[inline]
    pub fn complement_within(self, n: usize) -> Self {
        PointSet(!self.0 & Self::full(n).0)
    }

    /// Largest member, if any.
    #[inline]
    pub fn max(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(127 - self.0.leading_zeros() as usize)
        }
    }

    /// Image of the set under the point map `p -> perm[p]`.
    pub fn map_points(self, perm: &[usize]) -> Self {
        self.iter().map(|p| perm[p]).collect()
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

/// Ascending iterator over the members of a [`PointSet`].
#[derive(Clone)]
pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for PointSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: PointSet = [1, 2, 4].into_iter().collect();
        let b: PointSet = [2, 3, 5].into_iter().collect();
        assert_eq!(a.len(), 3);
        assert_eq!(a.intersection_len(b), 1);
        assert_eq!(a.symmetric_difference(b), [1, 3, 4, 5].into_iter().collect());
        assert_eq!(a.complement_within(7), [0, 3, 5, 6].into_iter().collect());
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(a.max(), Some(4));
        assert_eq!(PointSet::range(3, 6), [3, 4, 5].into_iter().collect());
        assert!(PointSet::range(4, 4).is_empty());
        assert_eq!(PointSet::full(128).len(), 128);
        assert_eq!(a.to_string(), "{1,2,4}");
    }

    #[test]
    fn map_points_relabels() {
        let a: PointSet = [0, 2].into_iter().collect();
        assert_eq!(a.map_points(&[2, 1, 0]), [0, 2].into_iter().collect());
        assert_eq!(a.map_points(&[1, 0, 3]), [1, 3].into_iter().collect());
    }
}
