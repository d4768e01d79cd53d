//! Small index sets backed by a single machine word.

use std::fmt;

/// Largest index count a [`MsgSet`] can hold.
pub const MAX_INDEX: usize = 64;

/// A set of 0-based indices below [`MAX_INDEX`], stored as a bitmask.
///
/// Used for message sets, side-information sets and receiver sets alike.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MsgSet(u64);

impl MsgSet {
    pub const EMPTY: MsgSet = MsgSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        MsgSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, 1, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_INDEX);
        if n == MAX_INDEX {
            MsgSet(u64::MAX)
        } else {
            MsgSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_INDEX);
        MsgSet(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_INDEX && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < MAX_INDEX);
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        if i < MAX_INDEX {
            self.0 &= !(1u64 << i);
        }
    }

    pub fn with(self, i: usize) -> Self {
        let mut s = self;
        s.insert(i);
        s
    }

    pub fn without(self, i: usize) -> Self {
        let mut s = self;
        s.remove(i);
        s
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        MsgSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        MsgSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        MsgSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Every subset of `self`, the empty set included, in increasing bit order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Re-index onto the positions of `self` within `within`: the `r`-th
    /// member of `within` becomes index `r`.
    pub fn compress(self, within: MsgSet) -> MsgSet {
        let mut out = MsgSet::EMPTY;
        for (r, i) in within.iter().enumerate() {
            if self.contains(i) {
                out.insert(r);
            }
        }
        out
    }
}

impl FromIterator<usize> for MsgSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = MsgSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for MsgSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// 1-based rendering, e.g. `{1,2,3}`.
impl fmt::Display for MsgSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = MsgSet;

    fn next(&mut self) -> Option<MsgSet> {
        let cur = self.next?;
        // Standard "next submask" walk in increasing order.
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(MsgSet(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: MsgSet = [0, 2, 5].into_iter().collect();
        assert_eq!(a.len(), 3);
        assert!(a.contains(2) && !a.contains(1));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(a.to_string(), "{1,3,6}");
        assert_eq!(a.first(), Some(0));
        assert!(MsgSet::singleton(2).is_subset(a));
        assert_eq!(MsgSet::full(64).len(), 64);
    }

    #[test]
    fn subsets_enumerates_all() {
        let a: MsgSet = [1, 3, 4].into_iter().collect();
        let subs: Vec<_> = a.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset(a)));
        assert_eq!(subs[0], MsgSet::EMPTY);
        assert_eq!(*subs.last().unwrap(), a);
        assert_eq!(MsgSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn compress_reindexes() {
        let within: MsgSet = [1, 3, 4].into_iter().collect();
        let s: MsgSet = [3, 4].into_iter().collect();
        assert_eq!(s.compress(within), [1, 2].into_iter().collect());
    }
}
