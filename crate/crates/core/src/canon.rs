//! Canonical encodings of small structures.
//!
//! Vertices are first split into colour classes by iterated refinement
//! (part label, caller colour, and the colours met in each relation). The
//! encoding is then the least one over all orderings that list the classes
//! in colour order, so only permutations inside each class are tried.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Result};
use crate::structure::{FiniteStructure, Part};

/// Isomorphism-invariant encoding: equal encodings mean isomorphic
/// structures (over the same signature).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Encoding(pub Vec<u32>);

/// Canonical encoding of `s`; `cap` bounds the number of vertices.
pub fn canonical_form(s: &FiniteStructure, cap: usize) -> Result<Encoding> {
    check_cap("canonical form (vertices)", s.len(), cap)?;
    canonical_coloured(s, &vec![0; s.len()], u64::MAX).map(|(e, _)| e)
}

/// Refined colour of every vertex position.
pub(crate) fn refine(s: &FiniteStructure, colours: &[u32]) -> Vec<u32> {
    let part_code = |p: usize| match s.part(p) {
        None => 0,
        Some(Part::Point) => 1,
        Some(Part::Line) => 2,
    };
    let mut colour: Vec<u32> = rank(&(0..s.len()).map(|p| (part_code(p), colours[p])).collect::<Vec<_>>());
    loop {
        let sigs: Vec<(u32, Vec<(u32, Vec<u32>)>)> = (0..s.len())
            .map(|p| {
                let mut around: Vec<(u32, Vec<u32>)> = s
                    .incident(p)
                    .iter()
                    .map(|&(rel, k)| {
                        let mut others: Vec<u32> = s
                            .instance(rel, k)
                            .iter()
                            .filter(|&&q| q as usize != p)
                            .map(|&q| colour[q as usize])
                            .collect();
                        others.sort_unstable();
                        (rel, others)
                    })
                    .collect();
                around.sort_unstable();
                (colour[p], around)
            })
            .collect();
        let next = rank(&sigs);
        let classes = |c: &[u32]| c.iter().max().map_or(0, |m| m + 1);
        if classes(&next) == classes(&colour) {
            return next;
        }
        colour = next;
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("present") as u32)
        .collect()
}

/// Hash of the refined colour histogram; a cheap isomorphism invariant
/// usable for structures of any size.
pub fn invariant_hash(s: &FiniteStructure) -> u64 {
    let colours = refine(s, &vec![0; s.len()]);
    let mut counts = vec![0u32; colours.iter().max().map_or(0, |m| *m as usize + 1)];
    for c in colours {
        counts[c as usize] += 1;
    }
    let mut h = DefaultHasher::new();
    s.len().hash(&mut h);
    s.instance_count().hash(&mut h);
    counts.hash(&mut h);
    h.finish()
}

/// Least encoding over class-respecting orderings; also returns the chosen
/// order (new label `i` is position `order[i]`). `max_orders` bounds the
/// number of orderings tried.
pub(crate) fn canonical_coloured(
    s: &FiniteStructure,
    colours: &[u32],
    max_orders: u64,
) -> Result<(Encoding, Vec<usize>)> {
    let colour = refine(s, colours);
    let classes = colour.iter().max().map_or(0, |m| *m as usize + 1);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (p, &c) in colour.iter().enumerate() {
        cells[c as usize].push(p);
    }
    let mut orders: u64 = 1;
    for cell in &cells {
        for k in 2..=cell.len() as u64 {
            orders = orders.saturating_mul(k);
        }
    }
    if orders > max_orders {
        return Err(crate::Error::Capacity {
            what: "canonical form (orderings)",
            needed: orders.min(usize::MAX as u64) as usize,
            cap: max_orders.min(usize::MAX as u64) as usize,
        });
    }
    let header = vec![s.len() as u32];
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    let mut order: Vec<usize> = Vec::with_capacity(s.len());
    search(s, colours, &cells, 0, &mut order, &header, &mut best);
    let (code, order) = best.unwrap_or((header, Vec::new()));
    Ok((Encoding(code), order))
}

fn search(
    s: &FiniteStructure,
    colours: &[u32],
    cells: &[Vec<usize>],
    cell: usize,
    order: &mut Vec<usize>,
    header: &[u32],
    best: &mut Option<(Vec<u32>, Vec<usize>)>,
) {
    if cell == cells.len() {
        let code = encode(s, colours, order, header);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, order.clone()));
        }
        return;
    }
    let members = &cells[cell];
    let start = order.len();
    permute(members.clone(), 0, &mut |perm| {
        order.truncate(start);
        order.extend_from_slice(perm);
        search(s, colours, cells, cell + 1, order, header, best);
    });
    order.truncate(start);
}

fn permute(mut items: Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k + 1 >= items.len() {
        visit(&items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items.clone(), k + 1, visit);
        items.swap(k, i);
    }
}

fn encode(s: &FiniteStructure, colours: &[u32], order: &[usize], header: &[u32]) -> Vec<u32> {
    let mut label = vec![0u32; s.len()];
    for (i, &p) in order.iter().enumerate() {
        label[p] = i as u32;
    }
    let mut code = header.to_vec();
    for &p in order {
        code.push(match s.part(p) {
            None => 0,
            Some(Part::Point) => 1,
            Some(Part::Line) => 2,
        });
        code.push(colours[p]);
    }
    for rel in 0..s.signature().relations().len() {
        let mut list: Vec<Vec<u32>> = s
            .instances(rel)
            .iter()
            .map(|inst| {
                let mut t: Vec<u32> = inst.iter().map(|&p| label[p as usize]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        list.sort_unstable();
        code.push(list.len() as u32);
        code.extend(list.into_iter().flatten());
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(order: u32, edges: &[(u32, u32)]) -> FiniteStructure {
        FiniteStructure::graph(2, 1, order, edges).unwrap()
    }

    #[test]
    fn relabelled_triangles_agree() {
        let a = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let b = FiniteStructure::graph(2, 1, 3, &[(2, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(canonical_form(&a, 8).unwrap(), canonical_form(&b, 8).unwrap());
    }

    #[test]
    fn distinguishes_small_graphs() {
        let tri = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        assert_ne!(canonical_form(&tri, 8).unwrap(), canonical_form(&p3, 8).unwrap());
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let p4 = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_ne!(canonical_form(&c4, 8).unwrap(), canonical_form(&p4, 8).unwrap());
    }

    #[test]
    fn regular_graphs_need_the_permutation_search() {
        // two triangles vs a 6-cycle: both 2-regular on 6 vertices
        let two = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let hex = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert_eq!(invariant_hash(&two), invariant_hash(&hex));
        assert_ne!(canonical_form(&two, 8).unwrap(), canonical_form(&hex, 8).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let big = graph(9, &[]);
        assert!(matches!(canonical_form(&big, 8), Err(crate::Error::Capacity { .. })));
    }

    fn permuted(s: &FiniteStructure, perm: &[u32]) -> FiniteStructure {
        let map = s.ids().iter().map(|&i| (i, perm[i as usize])).collect();
        s.relabelled(&map).unwrap()
    }

    fn brute_iso(a: &FiniteStructure, b: &FiniteStructure) -> bool {
        let n = a.len();
        if n != b.len() {
            return false;
        }
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let target: Vec<Vec<u32>> = b.instance_ids(0).collect();
        loop {
            let mut mine: Vec<Vec<u32>> = permuted(a, &perm).instance_ids(0).collect();
            mine.sort();
            if mine == target {
                return true;
            }
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                return false;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
    }

    fn arb_graph() -> impl Strategy<Value = FiniteStructure> {
        (1u32..7).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..10).prop_map(move |e| {
                let e: Vec<(u32, u32)> = e.into_iter().filter(|(a, b)| a != b).collect();
                graph(n, &e)
            })
        })
    }

    proptest! {
        #[test]
        fn invariant_under_relabelling(s in arb_graph(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut perm: Vec<u32> = (0..s.len() as u32).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let t = permuted(&s, &perm);
            prop_assert_eq!(canonical_form(&s, 8).unwrap(), canonical_form(&t, 8).unwrap());
            let all = s.all();
            prop_assert_eq!(s.delta(&all), t.delta(&t.all()));
        }

        #[test]
        fn equal_codes_iff_isomorphic(a in arb_graph(), b in arb_graph()) {
            let same = canonical_form(&a, 8).unwrap() == canonical_form(&b, 8).unwrap();
            prop_assert_eq!(same, brute_iso(&a, &b));
        }
    }
}
