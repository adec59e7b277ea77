use std::collections::BTreeMap;

use crate::error::{input, Error, Result};
use crate::structure::FiniteStructure;

/// Result of gluing two structures: the amalgam and where each input
/// vertex went.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amalgam {
    pub structure: FiniteStructure,
    pub left: BTreeMap<u32, u32>,
    pub right: BTreeMap<u32, u32>,
}

/// Free amalgam of `left` and `right` over the vertices identified by
/// `glue` (pairs of left id, right id). The glued parts must induce the
/// same structure. Left vertices keep their ids; the other right vertices
/// get fresh ids in increasing order.
pub fn free_amalgam(left: &FiniteStructure, right: &FiniteStructure, glue: &[(u32, u32)]) -> Result<Amalgam> {
    if left.signature() != right.signature() {
        return input("free amalgam needs a common signature");
    }
    let mut right_map: BTreeMap<u32, u32> = BTreeMap::new();
    let mut used_left = std::collections::BTreeSet::new();
    for &(l, r) in glue {
        left.pos(l)
            .ok_or_else(|| Error::Input(format!("glue vertex {l} not in left factor")))?;
        right
            .pos(r)
            .ok_or_else(|| Error::Input(format!("glue vertex {r} not in right factor")))?;
        if right_map.insert(r, l).is_some() || !used_left.insert(l) {
            return input("glue is not a bijection");
        }
    }
    for (&r, &l) in &right_map {
        let (pl, pr) = (left.pos(l).unwrap(), right.pos(r).unwrap());
        if left.part(pl) != right.part(pr) {
            return input(format!("glued vertices {l} and {r} carry different part labels"));
        }
    }
    let glued_left = left.set_of(&right_map.values().copied().collect::<Vec<_>>())?;
    let glued_right = right.set_of(&right_map.keys().copied().collect::<Vec<_>>())?;
    let mut a: Vec<(usize, Vec<u32>)> = left.induced(&glued_left).id_instances();
    let mut b: Vec<(usize, Vec<u32>)> = right
        .induced(&glued_right)
        .id_instances()
        .into_iter()
        .map(|(rel, t)| {
            let mut t: Vec<u32> = t.iter().map(|id| right_map[id]).collect();
            t.sort_unstable();
            (rel, t)
        })
        .collect();
    a.sort();
    b.sort();
    if a != b {
        return input("glued parts induce different structures");
    }
    let mut next = left.next_free_id();
    for &id in right.ids() {
        right_map.entry(id).or_insert_with(|| {
            next += 1;
            next - 1
        });
    }
    let left_map: BTreeMap<u32, u32> = left.ids().iter().map(|&i| (i, i)).collect();
    let mut instances = left.id_instances();
    for (rel, t) in right.id_instances() {
        instances.push((rel, t.iter().map(|id| right_map[id]).collect()));
    }
    let parts = left.labelled_parts().map(|mut v| {
        let r = right.labelled_parts().expect("same mode");
        v.extend(r.into_iter().map(|(id, p)| (right_map[&id], p)));
        v
    });
    let ids: Vec<u32> = left.ids().iter().copied().chain(right_map.values().copied()).collect();
    let structure = FiniteStructure::new(left.signature().clone(), ids, instances, parts)?;
    Ok(Amalgam {
        structure,
        left: left_map,
        right: right_map,
    })
}

/// Free amalgam of `copies` copies of `factor` over the vertices `base`.
/// Returns the amalgam and, per copy, the map from factor ids.
pub fn free_power(
    factor: &FiniteStructure,
    base: &[u32],
    copies: usize,
) -> Result<(FiniteStructure, Vec<BTreeMap<u32, u32>>)> {
    if copies == 0 {
        let set = factor.set_of(base)?;
        let s = factor.induced(&set);
        let map = base.iter().map(|&i| (i, i)).collect();
        return Ok((s, vec![map]));
    }
    let mut acc = factor.clone();
    let mut maps = vec![factor.ids().iter().map(|&i| (i, i)).collect::<BTreeMap<u32, u32>>()];
    for _ in 1..copies {
        let glue: Vec<(u32, u32)> = base.iter().map(|&i| (i, i)).collect();
        let am = free_amalgam(&acc, factor, &glue)?;
        acc = am.structure;
        maps.push(am.right);
    }
    Ok((acc, maps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{in_c0, Verdict};
    use crate::predim::is_self_sufficient;
    use proptest::prelude::*;

    #[test]
    fn glue_two_edges_at_a_vertex() {
        let e = FiniteStructure::graph(2, 1, 2, &[(0, 1)]).unwrap();
        let am = free_amalgam(&e, &e, &[(1, 0)]).unwrap();
        assert_eq!(am.structure.ids(), &[0, 1, 2]);
        assert_eq!(am.right[&1], 2);
        assert_eq!(
            am.structure.instance_ids(0).collect::<Vec<_>>(),
            vec![vec![0, 1], vec![1, 2]]
        );
    }

    #[test]
    fn mismatched_glue_is_rejected() {
        let e = FiniteStructure::graph(2, 1, 2, &[(0, 1)]).unwrap();
        let ee = FiniteStructure::graph(2, 1, 2, &[]).unwrap();
        assert!(free_amalgam(&e, &ee, &[(0, 0), (1, 1)]).is_err());
        assert!(free_amalgam(&e, &ee, &[(0, 0), (0, 1)]).is_err());
    }

    #[test]
    fn powers_over_a_vertex() {
        let e = FiniteStructure::graph(2, 1, 2, &[(0, 1)]).unwrap();
        let (star, maps) = free_power(&e, &[0], 3).unwrap();
        assert_eq!(star.len(), 4);
        assert_eq!(star.instance_count(), 3);
        assert_eq!(maps.len(), 3);
        assert_eq!(maps[2][&1], 3);
    }

    fn arb_factor() -> impl Strategy<Value = FiniteStructure> {
        (2u32..7).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..8).prop_map(move |e| {
                let e: Vec<(u32, u32)> = e.into_iter().filter(|(a, b)| a != b).collect();
                FiniteStructure::graph(2, 1, n, &e).unwrap()
            })
        })
    }

    proptest! {
        // A ≤ B and C in C0 give a free amalgam in C0 with C ≤ F.
        #[test]
        fn free_amalgams_stay_in_c0(b in arb_factor(), c in arb_factor(), k in 0usize..3) {
            prop_assume!(in_c0(&b).verdict == Verdict::Pass && in_c0(&c).verdict == Verdict::Pass);
            let base: Vec<u32> = (0..k as u32).collect();
            let sb = b.set_of(&base).unwrap();
            prop_assume!(is_self_sufficient(&b, &sb, &b.all()).unwrap().holds);
            // use B's base structure inside C by overwriting C's first k vertices
            let mut inst: Vec<(usize, Vec<u32>)> = c
                .id_instances()
                .into_iter()
                .filter(|(_, t)| t.iter().any(|&v| v >= k as u32))
                .collect();
            inst.extend(b.induced(&sb).id_instances());
            let c = FiniteStructure::new(c.signature().clone(), c.ids().to_vec(), inst, None).unwrap();
            prop_assume!(in_c0(&c).verdict == Verdict::Pass);
            let glue: Vec<(u32, u32)> = base.iter().map(|&i| (i, i)).collect();
            let am = free_amalgam(&c, &b, &glue).unwrap();
            let f = &am.structure;
            prop_assert_eq!(in_c0(f).verdict, Verdict::Pass);
            let c_in_f = f.set_of(c.ids()).unwrap();
            prop_assert!(is_self_sufficient(f, &c_in_f, &f.all()).unwrap().holds);
        }
    }
}
