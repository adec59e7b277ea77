use std::fmt;

use fixedbitset::FixedBitSet;

/// A set of vertex positions `0..universe` inside one structure.
///
/// Positions are indices into the owning structure's sorted id list; use
/// [`FiniteStructure::set_of`](crate::FiniteStructure::set_of) and
/// [`FiniteStructure::ids_of`](crate::FiniteStructure::ids_of) to move
/// between ids and positions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_positions<I: IntoIterator<Item = usize>>(universe: usize, positions: I) -> Self {
        let mut s = Self::empty(universe);
        for p in positions {
            s.insert(p);
        }
        s
    }

    /// Positions `i` for which bit `i` of `mask` is set, mapped through `frame`.
    pub(crate) fn from_mask(universe: usize, frame: &[usize], mask: u64) -> Self {
        let mut s = Self::empty(universe);
        for (bit, &p) in frame.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                s.insert(p);
            }
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.bits.contains(p)
    }

    pub fn insert(&mut self, p: usize) {
        assert!(p < self.bits.len(), "position {p} outside universe");
        self.bits.insert(p);
    }

    pub fn remove(&mut self, p: usize) {
        self.bits.set(p, false);
    }

    pub fn with(&self, p: usize) -> Self {
        let mut s = self.clone();
        s.insert(p);
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.bits.union_with(&other.bits);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.bits.intersect_with(&other.bits);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.bits.difference_with(&other.bits);
        s
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet::full(self.universe()).difference(self)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    /// Ordering used for deterministic tie-breaks: by cardinality, then by
    /// the sorted position list.
    pub fn canonical_cmp(&self, other: &VertexSet) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_positions(6, [0, 1, 2]);
        let b = VertexSet::from_positions(6, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 1]);
        assert_eq!(b.complement().to_vec(), vec![0, 1, 4, 5]);
        assert!(VertexSet::from_positions(6, [1]).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(VertexSet::full(3).len(), 3);
        assert!(VertexSet::empty(0).is_empty());
    }

    #[test]
    fn mask_frame_mapping() {
        let s = VertexSet::from_mask(10, &[3, 5, 9], 0b101);
        assert_eq!(s.to_vec(), vec![3, 9]);
    }
}
