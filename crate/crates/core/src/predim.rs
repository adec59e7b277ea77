use std::cmp::Ordering;
use std::ops::ControlFlow;

use crate::error::{check_cap, Result};
use crate::flow;
use crate::structure::FiniteStructure;
use crate::vertex_set::VertexSet;

/// Incremental predimension over all sets `fixed ∪ W`, `W ⊆ free`.
///
/// Masks index `free`: bit `i` stands for `free[i]`.
pub(crate) struct SubsetScan<'a> {
    s: &'a FiniteStructure,
    fixed: VertexSet,
    free: Vec<usize>,
    base: i64,
    // per free vertex: (weight, mask of the other free vertices it needs)
    gains: Vec<Vec<(i64, u64)>>,
}

impl<'a> SubsetScan<'a> {
    pub fn new(s: &'a FiniteStructure, fixed: &VertexSet, free: Vec<usize>) -> Self {
        assert!(free.len() < 64, "subset scan over {} vertices", free.len());
        let mut index = vec![usize::MAX; s.len()];
        for (i, &p) in free.iter().enumerate() {
            debug_assert!(!fixed.contains(p));
            index[p] = i;
        }
        let gains = free
            .iter()
            .map(|&p| {
                s.incident(p)
                    .iter()
                    .filter_map(|&(rel, k)| {
                        let mut need = 0u64;
                        for &q in s.instance(rel, k) {
                            let q = q as usize;
                            if q == p || fixed.contains(q) {
                                continue;
                            }
                            if index[q] == usize::MAX {
                                return None;
                            }
                            need |= 1 << index[q];
                        }
                        Some((s.weight(rel as usize), need))
                    })
                    .collect()
            })
            .collect();
        SubsetScan {
            s,
            fixed: fixed.clone(),
            base: s.delta(fixed),
            free,
            gains,
        }
    }

    pub fn base_delta(&self) -> i64 {
        self.base
    }

    pub fn set(&self, mask: u64) -> VertexSet {
        self.fixed.union(&VertexSet::from_mask(self.s.len(), &self.free, mask))
    }

    fn gain(&self, bit: usize, others: u64) -> i64 {
        self.gains[bit]
            .iter()
            .filter(|(_, need)| need & others == *need)
            .map(|(w, _)| w)
            .sum()
    }

    /// Visits every mask in Gray-code order with `delta(fixed ∪ W)`.
    pub fn for_each(&self, mut visit: impl FnMut(u64, i64) -> ControlFlow<()>) {
        let n = self.s.vertex_weight();
        let mut mask = 0u64;
        let mut d = self.base;
        if visit(mask, d).is_break() {
            return;
        }
        let count = 1u64 << self.free.len();
        for k in 1..count {
            let bit = k.trailing_zeros() as usize;
            let others = mask & !(1 << bit);
            let g = self.gain(bit, others);
            if mask >> bit & 1 == 0 {
                d += n - g;
            } else {
                d -= n - g;
            }
            mask ^= 1 << bit;
            if visit(mask, d).is_break() {
                return;
            }
        }
    }

    /// `delta(fixed ∪ W)` for every mask, indexed by mask.
    pub fn table(&self) -> Vec<i32> {
        let n = self.s.vertex_weight();
        let count = 1usize << self.free.len();
        let mut out = vec![0i32; count];
        out[0] = self.base as i32;
        for mask in 1..count {
            let bit = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            out[mask] = out[rest] + (n - self.gain(bit, rest as u64)) as i32;
        }
        out
    }
}

/// Verdict of a self-sufficiency test `A ≤ B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfSufficiency {
    pub holds: bool,
    /// `delta(A)`.
    pub base_delta: i64,
    /// Least `delta(B')` over `A ⊆ B' ⊆ B`.
    pub min_delta: i64,
    /// On failure: an intermediate set of least predimension, and the
    /// smallest such.
    pub witness: Option<VertexSet>,
}

fn check_chain(s: &FiniteStructure, a: &VertexSet, b: &VertexSet) -> Result<()> {
    s.check_set(a)?;
    s.check_set(b)?;
    if !a.is_subset(b) {
        return crate::error::input("self-sufficiency needs A ⊆ B");
    }
    Ok(())
}

/// Decides `A ≤ B` exactly. The witness on failure is the unique smallest
/// set of least predimension between `A` and `B`; no subset enumeration is
/// involved, so there is no size cap.
pub fn is_self_sufficient(s: &FiniteStructure, a: &VertexSet, b: &VertexSet) -> Result<SelfSufficiency> {
    check_chain(s, a, b)?;
    let base_delta = s.delta(a);
    let m = flow::minimize(s, a, b);
    let holds = m.min_delta >= base_delta;
    Ok(SelfSufficiency {
        holds,
        base_delta,
        min_delta: m.min_delta,
        witness: (!holds).then_some(m.smallest),
    })
}

/// `A ≤ S` for the whole ambient structure.
pub fn is_strong(s: &FiniteStructure, a: &VertexSet) -> Result<bool> {
    Ok(is_self_sufficient(s, a, &s.all())?.holds)
}

/// Decides `A ≤ B` by enumerating every intermediate set; `|B \ A|` must
/// not exceed `cap`. Ties among least-predimension witnesses go to the
/// smaller set, then the lexicographically least.
pub fn is_self_sufficient_exhaustive(
    s: &FiniteStructure,
    a: &VertexSet,
    b: &VertexSet,
    cap: usize,
) -> Result<SelfSufficiency> {
    check_chain(s, a, b)?;
    let free = b.difference(a).to_vec();
    check_cap("self-sufficiency scan (|B \\ A|)", free.len(), cap.min(63))?;
    let scan = SubsetScan::new(s, a, free);
    let base_delta = scan.base_delta();
    let mut best: Option<(i64, u64)> = None;
    scan.for_each(|mask, d| {
        let better = match best {
            None => true,
            Some((bd, bm)) => match d.cmp(&bd) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => scan.set(mask).canonical_cmp(&scan.set(bm)) == Ordering::Less,
            },
        };
        if better {
            best = Some((d, mask));
        }
        ControlFlow::Continue(())
    });
    let (min_delta, mask) = best.expect("at least the empty mask");
    let holds = min_delta >= base_delta;
    Ok(SelfSufficiency {
        holds,
        base_delta,
        min_delta,
        witness: (!holds).then(|| scan.set(mask)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(order: u32) -> FiniteStructure {
        let edges: Vec<(u32, u32)> = (1..order).map(|i| (i - 1, i)).collect();
        FiniteStructure::graph(2, 1, order, &edges).unwrap()
    }

    #[test]
    fn path_endpoints_are_self_sufficient() {
        for order in [3, 4] {
            let p = path(order);
            let uv = p.set_of(&[0, order - 1]).unwrap();
            let v = is_self_sufficient(&p, &uv, &p.all()).unwrap();
            assert!(v.holds);
            assert_eq!(v.min_delta, 4);
            assert!(is_self_sufficient_exhaustive(&p, &uv, &p.all(), 24).unwrap().holds);
        }
        let p = path(3);
        assert_eq!(p.delta(&p.all()), 4);
    }

    #[test]
    fn trivial_chain() {
        let p = path(3);
        let a = p.set_of(&[1]).unwrap();
        assert!(is_self_sufficient(&p, &a, &a).unwrap().holds);
    }

    #[test]
    fn witness_is_least_delta_then_smallest() {
        // (1,1,2) triangle: delta 1 on a vertex and on an edge, 0 on the whole
        let s = FiniteStructure::graph(1, 1, 3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let a = s.set_of(&[0]).unwrap();
        let fast = is_self_sufficient(&s, &a, &s.all()).unwrap();
        let slow = is_self_sufficient_exhaustive(&s, &a, &s.all(), 24).unwrap();
        assert!(!fast.holds);
        assert_eq!(fast, slow);
        assert_eq!(s.ids_of(fast.witness.as_ref().unwrap()), vec![0, 1, 2]);
    }

    #[test]
    fn cap_is_enforced() {
        let p = path(6);
        let err = is_self_sufficient_exhaustive(&p, &p.none(), &p.all(), 4).unwrap_err();
        assert!(matches!(err, crate::Error::Capacity { cap: 4, needed: 6, .. }));
    }

    #[test]
    fn scan_table_matches_direct_delta() {
        let s = FiniteStructure::hypergraph(2, 1, 3, 6, &[vec![0, 1, 2], vec![2, 3, 4], vec![1, 4, 5]]).unwrap();
        let fixed = s.set_of(&[1]).unwrap();
        let free = s.all().difference(&fixed).to_vec();
        let scan = SubsetScan::new(&s, &fixed, free);
        let table = scan.table();
        let mut seen = 0;
        scan.for_each(|mask, d| {
            assert_eq!(d, s.delta(&scan.set(mask)));
            assert_eq!(d, table[mask as usize] as i64);
            seen += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(seen, 32);
    }
}
