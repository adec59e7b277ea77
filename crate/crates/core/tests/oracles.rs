//! The library against from-scratch subset enumeration, on random small
//! structures.

use std::collections::BTreeMap;

use predimlab::file::{parse, write_structure};
use predimlab::{
    canonical_form, cl0, cld, dim, free_amalgam, in_c0, is_self_sufficient, is_self_sufficient_exhaustive, random_c0,
    FiniteStructure, Signature, Verdict, VertexSet,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Weights `(n, m)` and arity `r` with a structure of `order` vertices.
fn structure(max_order: u32) -> impl Strategy<Value = FiniteStructure> {
    let sigs = prop_oneof![
        Just((2u32, 1u32, 2usize)),
        Just((3, 2, 2)),
        Just((1, 1, 3)),
        Just((1, 1, 2))
    ];
    (sigs, 0..=max_order, any::<u64>()).prop_map(|((n, m, r), order, bits)| {
        let mut tuples = Vec::new();
        let mut k = 0;
        for a in 0..order {
            for b in a + 1..order {
                if r == 2 {
                    if bits >> (k % 64) & 1 == 1 {
                        tuples.push(vec![a, b]);
                    }
                    k += 1;
                } else {
                    for c in b + 1..order {
                        if bits >> (k % 64) & 1 == 1 && (bits >> ((k + 7) % 64)) & 1 == 1 {
                            tuples.push(vec![a, b, c]);
                        }
                        k += 1;
                    }
                }
            }
        }
        FiniteStructure::hypergraph(n, m, r, order, &tuples).unwrap()
    })
}

/// Structures in `C_0`, from the seeded generator.
fn c0_structure(max_order: u32) -> impl Strategy<Value = FiniteStructure> {
    let sigs = prop_oneof![
        Just((2u32, 1u32, 2usize)),
        Just((3, 2, 2)),
        Just((1, 1, 3)),
        Just((1, 1, 2))
    ];
    (sigs, 0..=max_order, 0.05f64..0.7, any::<u64>()).prop_map(|((n, m, r), order, density, seed)| {
        let sig = Signature::single(n, m, r).unwrap();
        random_c0(&sig, order, density, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    })
}

struct Brute {
    n: usize,
    delta: Vec<i64>,
}

impl Brute {
    fn new(s: &FiniteStructure) -> Self {
        let n = s.len();
        let sig = s.signature();
        let w = sig.relations()[0].weight as i64;
        let masks: Vec<u32> = s
            .instances(0)
            .iter()
            .map(|t| t.iter().fold(0, |acc, id| acc | 1 << s.pos(*id).unwrap()))
            .collect();
        let delta = (0u32..1 << n)
            .map(|x| {
                sig.vertex_weight() as i64 * x.count_ones() as i64
                    - w * masks.iter().filter(|&&t| t & x == t).count() as i64
            })
            .collect();
        Brute { n, delta }
    }

    fn supersets(&self, x: u32) -> impl Iterator<Item = u32> + '_ {
        (0u32..1 << self.n).filter(move |y| y & x == x)
    }

    fn dim(&self, x: u32) -> i64 {
        self.supersets(x).map(|y| self.delta[y as usize]).min().unwrap()
    }

    fn cl0(&self, x: u32) -> u32 {
        let d = self.dim(x);
        self.supersets(x)
            .filter(|&y| self.delta[y as usize] == d)
            .min_by_key(|y| y.count_ones())
            .unwrap()
    }

    fn cld(&self, x: u32) -> u32 {
        (0..self.n)
            .filter(|&p| self.dim(x | 1 << p) == self.dim(x))
            .fold(0, |m, p| m | 1 << p)
    }

    fn le(&self, a: u32, b: u32) -> bool {
        (0u32..1 << self.n)
            .filter(|y| y & a == a && y & b == *y)
            .all(|y| self.delta[y as usize] >= self.delta[a as usize])
    }
}

fn set(s: &FiniteStructure, mask: u32) -> VertexSet {
    VertexSet::from_positions(s.len(), (0..s.len()).filter(|p| mask >> p & 1 == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closures_match_enumeration(s in c0_structure(14), q in any::<u32>()) {
        let b = Brute::new(&s);
        let x = q & ((1u32 << s.len()) - 1);
        let xs = set(&s, x);
        prop_assert_eq!(dim(&s, &xs).unwrap(), b.dim(x));
        let c = cl0(&s, &xs).unwrap();
        prop_assert_eq!(c.closure, set(&s, b.cl0(x)));
        prop_assert_eq!(c.dimension, b.dim(x));
        prop_assert_eq!(cld(&s, &xs).unwrap(), set(&s, b.cld(x)));
    }

    #[test]
    fn closure_laws(s in c0_structure(14), q in any::<u32>(), extra in 0usize..14) {
        let x = set(&s, q & ((1u32 << s.len()) - 1));
        let c = cld(&s, &x).unwrap();
        prop_assert_eq!(cld(&s, &c).unwrap(), c.clone());
        prop_assert!(cl0(&s, &x).unwrap().closure.is_subset(&c));
        prop_assert_eq!(s.delta(&c), dim(&s, &x).unwrap());
        if extra < s.len() {
            let y = x.with(extra);
            prop_assert!(c.is_subset(&cld(&s, &y).unwrap()));
            let (dx, dy) = (dim(&s, &x).unwrap(), dim(&s, &y).unwrap());
            prop_assert!(dx <= dy && dy <= dx + s.vertex_weight());
        }
    }

    #[test]
    fn self_sufficiency_three_ways(s in structure(14), qa in any::<u32>(), qb in any::<u32>()) {
        let full = (1u32 << s.len()) - 1;
        let (a, bm) = (qa & qb & full, qb & full);
        let brute = Brute::new(&s).le(a, bm);
        let (sa, sb) = (set(&s, a), set(&s, bm));
        prop_assert_eq!(is_self_sufficient(&s, &sa, &sb).unwrap().holds, brute);
        prop_assert_eq!(is_self_sufficient_exhaustive(&s, &sa, &sb, 24).unwrap().holds, brute);
    }

    #[test]
    fn c0_membership(s in structure(14)) {
        let b = Brute::new(&s);
        let inside = b.delta.iter().all(|&d| d >= 0);
        prop_assert_eq!(in_c0(&s).verdict == Verdict::Pass, inside);
    }

    #[test]
    fn text_format_round_trip(s in structure(8)) {
        let back = parse(&write_structure(&s)).unwrap().structure;
        prop_assert_eq!(back, s);
    }

    #[test]
    fn canonical_form_ignores_labels(s in structure(7), shift in 1u32..50) {
        let map: BTreeMap<u32, u32> = s.ids().iter().rev().enumerate().map(|(i, &id)| (id, i as u32 * 3 + shift)).collect();
        let t = s.relabelled(&map).unwrap();
        prop_assert_eq!(canonical_form(&s, 8).unwrap(), canonical_form(&t, 8).unwrap());
    }

    #[test]
    fn free_amalgam_predimension(a in structure(5), c in structure(5)) {
        prop_assume!(a.signature() == c.signature());
        let glue: Vec<(u32, u32)> = a.ids().iter().zip(c.ids()).take(1).map(|(&x, &y)| (x, y)).collect();
        let b_left: Vec<u32> = glue.iter().map(|g| g.0).collect();
        let b_right: Vec<u32> = glue.iter().map(|g| g.1).collect();
        // the glued sets must induce the same structure
        let lb = a.induced(&a.set_of(&b_left).unwrap());
        let rb = c.induced(&c.set_of(&b_right).unwrap());
        prop_assume!(lb.instance_count() == rb.instance_count());
        let am = free_amalgam(&a, &c, &glue).unwrap();
        let f = &am.structure;
        prop_assert_eq!(f.len(), a.len() + c.len() - glue.len());
        prop_assert_eq!(
            f.delta(&f.all()),
            a.delta(&a.all()) + c.delta(&c.all()) - lb.delta(&lb.all())
        );
        // B ≤ C gives A ≤ F
        let c_strong = is_self_sufficient(&c, &c.set_of(&b_right).unwrap(), &c.all()).unwrap().holds;
        if c_strong {
            let left: Vec<u32> = a.ids().to_vec();
            prop_assert!(is_self_sufficient(f, &f.set_of(&left).unwrap(), &f.all()).unwrap().holds);
        }
    }
}
