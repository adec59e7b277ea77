//! Simply algebraic extensions, their msa types and multiplicities inside a
//! finite ambient structure.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_coloured, Encoding};
use crate::classes::connected_sets;
use crate::error::{check_cap, input, Error, Result};
use crate::predim::{is_self_sufficient, SubsetScan};
use crate::structure::FiniteStructure;
use crate::vertex_set::VertexSet;

const TYPE_ORDERS: u64 = 1 << 20;

fn proper_pair(s: &FiniteStructure, z: &VertexSet, y: &VertexSet) -> Result<()> {
    s.check_set(z)?;
    s.check_set(y)?;
    if !z.is_subset(y) || z == y {
        return input("need Z a proper subset of Y");
    }
    Ok(())
}

/// `delta(Y/Z) = 0` and `delta(Y/Z1) < 0` for every `Z ⊊ Z1 ⊊ Y`.
pub fn is_simply_algebraic(s: &FiniteStructure, z: &VertexSet, y: &VertexSet, cap: usize) -> Result<bool> {
    proper_pair(s, z, y)?;
    let free = y.difference(z);
    check_cap("simply algebraic test (|Y \\ Z|)", free.len(), cap.min(40))?;
    Ok(sa_scan(s, z, &free))
}

fn sa_scan(s: &FiniteStructure, z: &VertexSet, w: &VertexSet) -> bool {
    let top = s.delta(&z.union(w));
    let scan = SubsetScan::new(s, z, w.to_vec());
    if top != scan.base_delta() {
        return false;
    }
    let full = (1u64 << w.len()) - 1;
    let mut ok = true;
    scan.for_each(|mask, d| {
        if mask != 0 && mask != full && d <= top {
            ok = false;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    ok
}

/// Simply algebraic, and `Z0 ⊂ Z0 ∪ (Y \ Z)` is not for any `Z0 ⊊ Z`.
pub fn is_msa(s: &FiniteStructure, z: &VertexSet, y: &VertexSet, cap: usize) -> Result<bool> {
    proper_pair(s, z, y)?;
    check_cap("msa test (|Y|)", y.len(), cap.min(40))?;
    let w = y.difference(z);
    if !sa_scan(s, z, &w) {
        return Ok(false);
    }
    let frame = z.to_vec();
    let full = (1u64 << frame.len()) - 1;
    for mask in 0..full {
        let z0 = VertexSet::from_mask(s.len(), &frame, mask);
        if sa_scan(s, &z0, &w) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Points of `Z` sharing an instance inside `Z ∪ W` with a point of `W`.
pub fn touching(s: &FiniteStructure, z: &VertexSet, w: &VertexSet) -> VertexSet {
    let y = z.union(w);
    let mut out = s.none();
    for (_, t) in s.instances_inside(&y) {
        if t.iter().any(|&p| w.contains(p as usize)) {
            for &p in t {
                if z.contains(p as usize) {
                    out.insert(p as usize);
                }
            }
        }
    }
    out
}

/// The base `Z1` of a simply algebraic `Z ⊂ Y` and `Y1 = Z1 ∪ (Y \ Z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsaBase {
    pub base: VertexSet,
    pub extension: VertexSet,
}

pub fn msa_base(s: &FiniteStructure, z: &VertexSet, y: &VertexSet, cap: usize) -> Result<MsaBase> {
    if !is_simply_algebraic(s, z, y, cap)? {
        return Err(Error::Contract(
            "msa base of an extension that is not simply algebraic".into(),
        ));
    }
    let w = y.difference(z);
    let base = touching(s, z, &w);
    let extension = base.union(&w);
    // Y splits as the free amalgam of Z and Y1 over Z1
    let crossing = s.instances_inside(y).any(|(_, t)| {
        t.iter().any(|&p| w.contains(p as usize))
            && t.iter().any(|&p| z.contains(p as usize) && !base.contains(p as usize))
    });
    if crossing {
        return Err(Error::Internal("extension does not split over its base".into()));
    }
    Ok(MsaBase { base, extension })
}

/// An msa extension `Z1 ⊂ Y1` as a standalone structure; `base` lists the
/// ids of `Z1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsaType {
    pub structure: FiniteStructure,
    pub base: Vec<u32>,
}

impl MsaType {
    pub fn new(structure: FiniteStructure, mut base: Vec<u32>) -> Result<Self> {
        base.sort_unstable();
        let z = structure.set_of(&base)?;
        if z == structure.all() || !is_msa(&structure, &z, &structure.all(), 40)? {
            return input("not a minimally simply algebraic extension");
        }
        Ok(MsaType { structure, base })
    }

    /// The type of `Z1 ⊂ Z1 ∪ W` inside `s`.
    pub fn of(s: &FiniteStructure, base: &VertexSet, w: &VertexSet) -> Result<Self> {
        MsaType::new(s.induced(&base.union(w)), s.ids_of(base))
    }

    pub fn new_points(&self) -> usize {
        self.structure.len() - self.base.len()
    }

    /// Encoding up to isomorphism fixing the base pointwise, base points
    /// named by `label`.
    fn key(&self, label: impl Fn(u32) -> u32) -> Result<Encoding> {
        let colours: Vec<u32> = self
            .structure
            .ids()
            .iter()
            .map(|&id| {
                if self.base.binary_search(&id).is_ok() {
                    1 + label(id)
                } else {
                    0
                }
            })
            .collect();
        canonical_coloured(&self.structure, &colours, TYPE_ORDERS).map(|(e, _)| e)
    }

    /// Replaces the base by one new point per occurrence in a relation
    /// meeting the new points; relations inside the base are dropped.
    pub fn normalized(&self) -> Result<MsaType> {
        let s = &self.structure;
        let is_base = |id: u32| self.base.binary_search(&id).is_ok();
        let labelled = s.labelled_parts();
        let part_of = |id: u32| {
            labelled
                .as_ref()
                .and_then(|v| v.iter().find(|(i, _)| *i == id).map(|(_, p)| *p))
        };
        let mut next = s.next_free_id();
        let mut base = Vec::new();
        let mut instances = Vec::new();
        let mut parts: Option<Vec<_>> = labelled
            .as_ref()
            .map(|v| v.iter().filter(|(i, _)| !is_base(*i)).copied().collect());
        for (rel, t) in s.id_instances() {
            if t.iter().all(|&i| is_base(i)) {
                continue;
            }
            let t = t
                .iter()
                .map(|&i| {
                    if !is_base(i) {
                        return i;
                    }
                    base.push(next);
                    if let (Some(parts), Some(p)) = (parts.as_mut(), part_of(i)) {
                        parts.push((next, p));
                    }
                    next += 1;
                    next - 1
                })
                .collect();
            instances.push((rel, t));
        }
        let ids: Vec<u32> = s
            .ids()
            .iter()
            .copied()
            .filter(|&i| !is_base(i))
            .chain(base.iter().copied())
            .collect();
        let structure = FiniteStructure::new(s.signature().clone(), ids, instances, parts)?;
        MsaType::new(structure, base)
    }
}

/// Every `W` disjoint from `A` with `|W| <= max_new` such that `A ⊂ A ∪ W`
/// is simply algebraic, in canonical order.
pub fn sa_extensions(s: &FiniteStructure, a: &VertexSet, max_new: usize) -> Result<Vec<VertexSet>> {
    s.check_set(a)?;
    let max_new = max_new.min(s.len() - a.len());
    check_cap("sa extension search (new points)", max_new, 40)?;
    let adj: Vec<Vec<usize>> = (0..s.len())
        .map(|p| {
            if a.contains(p) {
                Vec::new()
            } else {
                s.neighbours(p).into_iter().filter(|&q| !a.contains(q)).collect()
            }
        })
        .collect();
    let base = s.delta(a);
    let mut out = Vec::new();
    for size in 1..=max_new {
        connected_sets(s, &adj, size, &mut |w, _| {
            if w.is_disjoint(a) && s.delta(&a.union(w)) == base && sa_scan(s, a, w) {
                out.push(w.clone());
            }
            ControlFlow::Continue(())
        });
    }
    out.sort_by(|x, y| x.canonical_cmp(y));
    Ok(out)
}

/// Copies over `A` of one msa type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsaCopies {
    pub count: usize,
    /// The new points of each copy.
    pub copies: Vec<VertexSet>,
}

/// Number of sa extensions `A ∪ W` of `A` inside `s` with base `t.base`
/// (read as ambient ids) and `Z1 ∪ W` isomorphic to `t` over the base.
/// Zero when the base is not contained in `A`.
pub fn count_msa_copies(s: &FiniteStructure, a: &VertexSet, t: &MsaType) -> Result<MsaCopies> {
    s.check_set(a)?;
    let none = MsaCopies {
        count: 0,
        copies: Vec::new(),
    };
    let Ok(base) = s.set_of(&t.base) else { return Ok(none) };
    if !base.is_subset(a) {
        return Ok(none);
    }
    let rank = |id: u32| t.base.binary_search(&id).unwrap() as u32;
    let want = t.key(rank)?;
    let mut copies = Vec::new();
    for w in sa_extensions(s, a, t.new_points())? {
        if w.len() != t.new_points() || touching(s, a, &w) != base {
            continue;
        }
        let found = MsaType {
            structure: s.induced(&base.union(&w)),
            base: t.base.clone(),
        };
        if found.key(rank)? == want {
            copies.push(w);
        }
    }
    if is_self_sufficient(s, a, &s.all())?.holds {
        for (i, x) in copies.iter().enumerate() {
            if copies[i + 1..].iter().any(|y| !x.is_disjoint(y)) {
                return Err(Error::Internal(
                    "two sa extensions over a self-sufficient set overlap".into(),
                ));
            }
        }
    }
    Ok(MsaCopies {
        count: copies.len(),
        copies,
    })
}

/// Copies of `Z ∪ W` over `Z` for each msa extension of `Z` in `s`, grouped
/// by type; `max_new` bounds `|W|`.
pub fn msa_copies_over(s: &FiniteStructure, z: &VertexSet, max_new: usize) -> Result<Vec<(Encoding, Vec<VertexSet>)>> {
    let ids = s.ids_of(z);
    let mut groups: BTreeMap<Encoding, Vec<VertexSet>> = BTreeMap::new();
    for w in sa_extensions(s, z, max_new)? {
        if touching(s, z, &w) != *z {
            continue;
        }
        let t = MsaType {
            structure: s.induced(&z.union(&w)),
            base: ids.clone(),
        };
        let key = t.key(|id| ids.binary_search(&id).unwrap() as u32)?;
        groups.entry(key).or_default().push(w);
    }
    Ok(groups.into_iter().collect())
}

/// A bijection between two vertex sets of the ambient structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialMap {
    pub domain: Vec<u32>,
    pub image: Vec<u32>,
}

impl PartialMap {
    pub fn new(domain: Vec<u32>, image: Vec<u32>) -> Result<Self> {
        if domain.len() != image.len() {
            return input("partial map needs domain and image of equal size");
        }
        let distinct = |v: &[u32]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        if distinct(&domain) != domain.len() || distinct(&image) != image.len() {
            return input("partial map is not injective");
        }
        Ok(PartialMap { domain, image })
    }

    pub fn identity(ids: &[u32]) -> Self {
        PartialMap {
            domain: ids.to_vec(),
            image: ids.to_vec(),
        }
    }

    /// Whether the map is an isomorphism of the induced substructures.
    pub fn is_isomorphism(&self, s: &FiniteStructure) -> Result<bool> {
        let d = s.induced(&s.set_of(&self.domain)?);
        let i = s.induced(&s.set_of(&self.image)?);
        let map: BTreeMap<u32, u32> = self.domain.iter().copied().zip(self.image.iter().copied()).collect();
        Ok(d.relabelled(&map)? == i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MultiplicityVerdict {
    Equal,
    /// Both counts reach the saturation threshold.
    Saturated,
    Differs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeComparison {
    pub key: Encoding,
    /// Base of the type inside the domain (ambient ids).
    pub base: Vec<u32>,
    /// New points of one copy, over the domain or else the image.
    pub example: Vec<u32>,
    pub domain_count: usize,
    pub image_count: usize,
    pub verdict: MultiplicityVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extendability {
    pub is_isomorphism: bool,
    pub saturation: usize,
    pub types: Vec<TypeComparison>,
}

impl Extendability {
    pub fn holds(&self) -> bool {
        self.is_isomorphism && self.types.iter().all(|t| t.verdict != MultiplicityVerdict::Differs)
    }

    pub fn first_difference(&self) -> Option<&TypeComparison> {
        self.types.iter().find(|t| t.verdict == MultiplicityVerdict::Differs)
    }
}

/// Compares, for every msa type with at most `cap` new points over the
/// domain or the image of `k`, the multiplicities on both sides. Counts of
/// at least `saturation` compare as equal.
pub fn check_potential_extendability(
    s: &FiniteStructure,
    k: &PartialMap,
    cap: usize,
    saturation: usize,
) -> Result<Extendability> {
    let a1 = s.set_of(&k.domain)?;
    let a2 = s.set_of(&k.image)?;
    for (name, a) in [("domain", &a1), ("image", &a2)] {
        if !is_self_sufficient(s, a, &s.all())?.holds {
            return Err(Error::Contract(format!("the {name} of the map is not self-sufficient")));
        }
    }
    let is_isomorphism = k.is_isomorphism(s)?;
    let index_d: BTreeMap<u32, u32> = k.domain.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
    let index_i: BTreeMap<u32, u32> = k.image.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
    let to_domain: BTreeMap<u32, u32> = k.image.iter().copied().zip(k.domain.iter().copied()).collect();
    let mut table: BTreeMap<Encoding, (Vec<u32>, Vec<u32>, usize, usize)> = BTreeMap::new();
    for (side, a, index) in [(0, &a1, &index_d), (1, &a2, &index_i)] {
        for w in sa_extensions(s, a, cap)? {
            let base = touching(s, a, &w);
            let t = MsaType {
                structure: s.induced(&base.union(&w)),
                base: s.ids_of(&base),
            };
            let key = t.key(|id| index[&id])?;
            let mut dom_base: Vec<u32> = if side == 0 {
                t.base.clone()
            } else {
                t.base.iter().map(|i| to_domain[i]).collect()
            };
            dom_base.sort_unstable();
            let entry = table.entry(key).or_insert_with(|| (dom_base, s.ids_of(&w), 0, 0));
            if side == 0 {
                entry.2 += 1;
            } else {
                entry.3 += 1;
            }
        }
    }
    let types = table
        .into_iter()
        .map(|(key, (base, example, dc, ic))| {
            let verdict = if dc >= saturation && ic >= saturation {
                MultiplicityVerdict::Saturated
            } else if dc == ic {
                MultiplicityVerdict::Equal
            } else {
                MultiplicityVerdict::Differs
            };
            TypeComparison {
                key,
                base,
                example,
                domain_count: dc,
                image_count: ic,
                verdict,
            }
        })
        .collect();
    Ok(Extendability {
        is_isomorphism,
        saturation,
        types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::free_amalgam;
    use crate::classes::{in_c0, Verdict};
    use proptest::prelude::*;

    fn cherry() -> FiniteStructure {
        // z1 = 0, z2 = 1, y = 2
        FiniteStructure::graph(2, 1, 3, &[(0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn two_edge_extension() {
        let s = cherry();
        let z = s.set_of(&[0, 1]).unwrap();
        assert!(is_simply_algebraic(&s, &z, &s.all(), 24).unwrap());
        assert!(is_msa(&s, &z, &s.all(), 24).unwrap());
        let b = msa_base(&s, &z, &s.all(), 24).unwrap();
        assert_eq!((b.base, b.extension), (z, s.all()));
    }

    #[test]
    fn not_simply_algebraic() {
        let s = FiniteStructure::graph(2, 1, 3, &[(0, 1)]).unwrap();
        assert!(!is_simply_algebraic(&s, &s.set_of(&[0, 1]).unwrap(), &s.all(), 24).unwrap());
        let e = FiniteStructure::graph(2, 1, 2, &[(0, 1)]).unwrap();
        assert!(!is_simply_algebraic(&e, &e.set_of(&[0]).unwrap(), &e.all(), 24).unwrap());
        assert!(is_simply_algebraic(&e, &e.all(), &e.all(), 24).is_err());
    }

    #[test]
    fn extra_base_point_is_stripped() {
        let s = FiniteStructure::graph(2, 1, 4, &[(0, 2), (1, 2)]).unwrap();
        let z = s.set_of(&[0, 1, 3]).unwrap();
        assert!(is_simply_algebraic(&s, &z, &s.all(), 24).unwrap());
        assert!(!is_msa(&s, &z, &s.all(), 24).unwrap());
        let b = msa_base(&s, &z, &s.all(), 24).unwrap();
        assert_eq!(s.ids_of(&b.base), vec![0, 1]);
        assert!(is_msa(&s, &b.base, &b.extension, 24).unwrap());
        let bad = s.set_of(&[0, 1, 2]).unwrap();
        assert!(matches!(msa_base(&s, &bad, &s.all(), 24), Err(Error::Contract(_))));
    }

    #[test]
    fn count_two_copies() {
        let s = FiniteStructure::graph(2, 1, 4, &[(0, 2), (1, 2), (0, 3), (1, 3)]).unwrap();
        let t = MsaType::new(cherry(), vec![0, 1]).unwrap();
        let a = s.set_of(&[0, 1]).unwrap();
        let c = count_msa_copies(&s, &a, &t).unwrap();
        assert_eq!(c.count, 2);
        assert_eq!(c.copies, vec![s.set_of(&[2]).unwrap(), s.set_of(&[3]).unwrap()]);
        let a = s.set_of(&[0]).unwrap();
        assert_eq!(count_msa_copies(&s, &a, &t).unwrap().count, 0);
    }

    #[test]
    fn normalization_splits_shared_base_points() {
        // (1,1,3): three triples through v on y1, y2, y3
        let s = FiniteStructure::hypergraph(1, 1, 3, 4, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 1, 3]]).unwrap();
        let t = MsaType::new(s, vec![0]).unwrap();
        let u = t.normalized().unwrap();
        assert_eq!(u.base.len(), 3);
        let z = u.structure.set_of(&u.base).unwrap();
        for p in z.iter() {
            assert_eq!(u.structure.incident(p).len(), 1);
        }
    }

    fn two_pairs(extra: bool) -> FiniteStructure {
        // a, b = 0, 1 with common neighbours 4, 5; c, d = 2, 3 with 6 (and 7)
        let mut e = vec![(0, 4), (1, 4), (0, 5), (1, 5), (2, 6), (3, 6)];
        if extra {
            e.extend([(2, 7), (3, 7)]);
        }
        FiniteStructure::graph(2, 1, 8, &e).unwrap()
    }

    #[test]
    fn potential_extendability() {
        let s = two_pairs(false);
        let id = check_potential_extendability(&s, &PartialMap::identity(&[0, 1]), 3, 3).unwrap();
        assert!(id.holds());
        let k = PartialMap::new(vec![0, 1], vec![2, 3]).unwrap();
        let r = check_potential_extendability(&s, &k, 3, 3).unwrap();
        assert!(!r.holds());
        let d = r.first_difference().unwrap();
        assert_eq!((d.domain_count, d.image_count), (2, 1));
        assert_eq!(d.base, vec![0, 1]);
        let s = two_pairs(true);
        assert!(check_potential_extendability(&s, &k, 3, 3).unwrap().holds());
        let sat = check_potential_extendability(&s, &k, 3, 2).unwrap();
        assert!(sat.types.iter().any(|t| t.verdict == MultiplicityVerdict::Saturated));
    }

    #[test]
    fn symmetric_isolated_points() {
        let s = FiniteStructure::graph(2, 1, 2, &[]).unwrap();
        let k = PartialMap::new(vec![0], vec![1]).unwrap();
        assert!(check_potential_extendability(&s, &k, 3, 3).unwrap().holds());
    }

    fn arb_c0() -> impl Strategy<Value = FiniteStructure> {
        (1u32..=8).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..14).prop_map(move |e| {
                let mut s = FiniteStructure::graph(2, 1, n, &[]).unwrap();
                for (a, b) in e.into_iter().filter(|(a, b)| a != b) {
                    let mut all = s.id_instances();
                    all.push((0, vec![a.min(b), a.max(b)]));
                    let next = FiniteStructure::new(s.signature().clone(), s.ids().to_vec(), all, None).unwrap();
                    if in_c0(&next).verdict == Verdict::Pass {
                        s = next;
                    }
                }
                s
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sa_pairs_split_through_their_base(s in arb_c0(), zmask in any::<u16>(), wmask in any::<u16>()) {
            let n = s.len();
            let z = VertexSet::from_positions(n, (0..n).filter(|i| zmask >> i & 1 == 1));
            let w = VertexSet::from_positions(n, (0..n).filter(|i| wmask >> i & 1 == 1 && zmask >> i & 1 == 0));
            prop_assume!(!w.is_empty());
            let y = z.union(&w);
            if is_simply_algebraic(&s, &z, &y, 24).unwrap() {
                let b = msa_base(&s, &z, &y, 24).unwrap();
                prop_assert!(is_msa(&s, &b.base, &b.extension, 24).unwrap());
                let glue: Vec<(u32, u32)> = s.ids_of(&b.base).iter().map(|&i| (i, i)).collect();
                let am = free_amalgam(&s.induced(&z), &s.induced(&b.extension), &glue).unwrap();
                let mut back: BTreeMap<u32, u32> = am.left.clone();
                back.extend(am.right.iter().map(|(&orig, &new)| (new, orig)));
                prop_assert_eq!(am.structure.relabelled(&back).unwrap(), s.induced(&y));
                let u = MsaType::of(&s, &b.base, &w).unwrap().normalized().unwrap();
                let zb = u.structure.set_of(&u.base).unwrap();
                for p in zb.iter() {
                    prop_assert_eq!(u.structure.incident(p).len(), 1);
                }
            }
        }

        #[test]
        fn sa_extensions_match_brute_force(s in arb_c0(), amask in any::<u16>()) {
            let n = s.len();
            let a = VertexSet::from_positions(n, (0..n).filter(|i| amask >> i & 1 == 1));
            let found = sa_extensions(&s, &a, n).unwrap();
            let rest: Vec<usize> = a.complement().to_vec();
            let mut expected = Vec::new();
            for mask in 1u64..1 << rest.len() {
                let w = VertexSet::from_mask(n, &rest, mask);
                if is_simply_algebraic(&s, &a, &a.union(&w), 24).unwrap() {
                    expected.push(w);
                }
            }
            expected.sort_by(|x, y| x.canonical_cmp(y));
            prop_assert_eq!(found, expected);
        }
    }
}
