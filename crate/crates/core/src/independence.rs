//! d-independence and the relation `⊥` inside a finite ambient structure.

use std::collections::BTreeMap;

use crate::closure::{cld, dim, DimTable};
use crate::error::{input, Result};
use crate::predim::is_self_sufficient;
use crate::structure::FiniteStructure;
use crate::vertex_set::VertexSet;

/// `d(A / B ∪ C) = d(A / B)`.
pub fn d_independent(s: &FiniteStructure, a: &VertexSet, b: &VertexSet, c: &VertexSet) -> Result<bool> {
    let ab = a.union(b);
    let bc = b.union(c);
    Ok(dim(s, &ab.union(c))? - dim(s, &bc)? == dim(s, &ab)? - dim(s, b)?)
}

/// The three structural conditions on `X = cl^d(AB)` and `Y = cl^d(BC)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Characterization {
    pub x: VertexSet,
    pub y: VertexSet,
    /// `X ∩ Y = B`.
    pub meet: bool,
    /// No instance inside `X ∪ Y` meets both `X \ B` and `Y \ B`.
    pub free: bool,
    /// `X ∪ Y ≤ S`.
    pub strong: bool,
}

impl Characterization {
    pub fn holds(&self) -> bool {
        self.meet && self.free && self.strong
    }
}

/// Evaluates the structural description of `A ⫫_B C`; `B` must be
/// d-closed.
pub fn check_characterization(
    s: &FiniteStructure,
    a: &VertexSet,
    b: &VertexSet,
    c: &VertexSet,
) -> Result<Characterization> {
    if cld(s, b)? != *b {
        return input("the base of an independence query must be d-closed");
    }
    let x = cld(s, &a.union(b))?;
    let y = cld(s, &b.union(c))?;
    let meet = x.intersection(&y) == *b;
    let xo = x.difference(b);
    let yo = y.difference(b);
    let u = x.union(&y);
    let free = !s
        .instances_inside(&u)
        .any(|(_, t)| t.iter().any(|&p| xo.contains(p as usize)) && t.iter().any(|&p| yo.contains(p as usize)));
    let strong = is_self_sufficient(s, &u, &s.all())?.holds;
    let out = Characterization {
        x,
        y,
        meet,
        free,
        strong,
    };
    debug_assert_eq!(
        out.holds(),
        d_independent(s, a, b, c)?,
        "independence and its characterization disagree"
    );
    Ok(out)
}

/// `b ⊥_A C`: `b ⫫_A C` and `cl^d(bC) = cl^d(bA) ∪ C`, for d-closed
/// `A ⊆ C`.
pub fn perp(s: &FiniteStructure, b: &VertexSet, a: &VertexSet, c: &VertexSet) -> Result<bool> {
    if !a.is_subset(c) || cld(s, a)? != *a || cld(s, c)? != *c {
        return input("perp needs d-closed A ⊆ C");
    }
    if !d_independent(s, b, a, c)? {
        return Ok(false);
    }
    Ok(cld(s, &b.union(c))? == cld(s, &b.union(a))?.union(c))
}

/// A violated axiom with the sets involved (as ids).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub sets: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    /// Instances checked per axiom.
    pub checked: BTreeMap<&'static str, u64>,
    pub violations: Vec<Violation>,
    pub closed_sets: usize,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const AXIOMS: [&str; 7] = [
    "compatibility",
    "monotonicity",
    "transitivity",
    "symmetry",
    "characterization",
    "perp-free-amalgam",
    "closure-operator",
];

struct Tables<'a> {
    s: &'a FiniteStructure,
    t: DimTable,
    instances: Vec<u32>,
}

impl Tables<'_> {
    fn ind(&self, a: u32, b: u32, c: u32) -> bool {
        let t = &self.t;
        t.dim(a | b | c) - t.dim(b | c) == t.dim(a | b) - t.dim(b)
    }

    fn characterized(&self, a: u32, b: u32, c: u32) -> bool {
        let t = &self.t;
        let x = t.cld(a | b);
        let y = t.cld(b | c);
        let u = x | y;
        let (xo, yo) = (x & !b, y & !b);
        x & y == b
            && !self.instances.iter().any(|&i| i & u == i && i & xo != 0 && i & yo != 0)
            && t.delta(u) == t.dim(u)
    }

    fn ids(&self, mask: u32) -> Vec<u32> {
        self.s.ids_of(&self.t.set_of(mask))
    }
}

/// Checks compatibility, monotonicity, transitivity and symmetry of
/// d-independence, the structural characterization, and that `⊥` splits
/// as a free amalgam, over all d-closed sets with at most `size_cap` points
/// (arbitrary sets of that size for the non-closed arguments of
/// compatibility). Also checks that `cl^d` is a closure operator on those
/// sets. Stops recording after 20 violations.
pub fn axiom_suite(s: &FiniteStructure, size_cap: usize) -> Result<AxiomReport> {
    let t = DimTable::new(s, 20)?;
    let instances: Vec<u32> = s
        .id_instances()
        .iter()
        .map(|(_, ids)| ids.iter().fold(0u32, |m, &id| m | 1 << s.pos(id).unwrap()))
        .collect();
    let tb = Tables { s, t, instances };
    let full = tb.t.full_mask();
    let small: Vec<u32> = (0..=full).filter(|m| m.count_ones() as usize <= size_cap).collect();
    let closed: Vec<u32> = small.iter().copied().filter(|&m| tb.t.is_d_closed(m)).collect();
    let mut rep = AxiomReport {
        closed_sets: closed.len(),
        ..Default::default()
    };
    let fail = |rep: &mut AxiomReport, axiom: &'static str, sets: Vec<Vec<u32>>| {
        if rep.violations.len() < 20 {
            rep.violations.push(Violation { axiom, sets });
        }
    };
    let cl = |m: u32| tb.t.cld(m);

    // closure operator: extensive, monotone, idempotent
    for &x in &small {
        let cx = cl(x);
        *rep.checked.entry("closure-operator").or_default() += 1;
        if cx & x != x || cl(cx) != cx {
            fail(&mut rep, "closure-operator", vec![tb.ids(x)]);
        }
        for &y in &small {
            if x & y == x && cl(y) & cx != cx {
                fail(&mut rep, "closure-operator", vec![tb.ids(x), tb.ids(y)]);
            }
        }
    }

    for &b in &closed {
        for &c in &closed {
            for &a in &closed {
                let ind = tb.ind(a, b, c);
                *rep.checked.entry("symmetry").or_default() += 1;
                if ind != tb.ind(c, b, a) {
                    fail(&mut rep, "symmetry", vec![tb.ids(a), tb.ids(b), tb.ids(c)]);
                }
                *rep.checked.entry("characterization").or_default() += 1;
                if ind != tb.characterized(a, b, c) {
                    fail(&mut rep, "characterization", vec![tb.ids(a), tb.ids(b), tb.ids(c)]);
                }
                // compatibility: a ⫫_B C iff cl(aB) ⫫_B C iff every tuple from cl(aB) is
                let cab = cl(a | b);
                let mut every = true;
                let mut e = cab;
                loop {
                    every &= tb.ind(e, b, c);
                    if e == 0 || !every {
                        break;
                    }
                    e = (e - 1) & cab;
                }
                *rep.checked.entry("compatibility").or_default() += 1;
                if ind != tb.ind(cab, b, c) || ind != every {
                    fail(&mut rep, "compatibility", vec![tb.ids(a), tb.ids(b), tb.ids(c)]);
                }
                if b & c == b && ind && cl(a | c) == cab | c {
                    // then cl(aC) is the free amalgam of cl(aB) and C over B
                    let (xo, co) = (cab & !b, c & !b);
                    let crossing = tb
                        .instances
                        .iter()
                        .any(|&i| i & (cab | c) == i && i & xo != 0 && i & co != 0);
                    *rep.checked.entry("perp-free-amalgam").or_default() += 1;
                    if cab & c != b || crossing {
                        fail(&mut rep, "perp-free-amalgam", vec![tb.ids(a), tb.ids(b), tb.ids(c)]);
                    }
                }
                for &d in &closed {
                    let cd = cl(c | d);
                    let bc = cl(b | c);
                    let whole = tb.ind(a, b, cd);
                    let left = ind;
                    let right = tb.ind(a, bc, d);
                    *rep.checked.entry("monotonicity").or_default() += 1;
                    if whole && !(left && right) {
                        fail(
                            &mut rep,
                            "monotonicity",
                            vec![tb.ids(a), tb.ids(b), tb.ids(c), tb.ids(d)],
                        );
                    }
                    *rep.checked.entry("transitivity").or_default() += 1;
                    if left && right && !whole {
                        fail(
                            &mut rep,
                            "transitivity",
                            vec![tb.ids(a), tb.ids(b), tb.ids(c), tb.ids(d)],
                        );
                    }
                }
            }
        }
    }
    // compatibility for a tuple base: a ⫫_b C iff a ⫫_{cl(b)} C
    for &b in &small {
        let cb = cl(b);
        for &a in &small {
            for &c in &closed {
                *rep.checked.entry("compatibility").or_default() += 1;
                if tb.ind(a, b, c) != tb.ind(a, cb, c) {
                    fail(&mut rep, "compatibility", vec![tb.ids(a), tb.ids(b), tb.ids(c)]);
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &FiniteStructure, ids: &[u32]) -> VertexSet {
        s.set_of(ids).unwrap()
    }

    #[test]
    fn path_and_triangle() {
        // x = 0, a = 1, y = 2
        let p = FiniteStructure::graph(2, 1, 3, &[(0, 1), (1, 2)]).unwrap();
        let (x, a, y) = (set(&p, &[0]), set(&p, &[1]), set(&p, &[2]));
        assert!(d_independent(&p, &x, &a, &y).unwrap());
        let ch = check_characterization(&p, &x, &a, &y).unwrap();
        assert!(ch.meet && ch.free && ch.strong);

        let t = FiniteStructure::graph(2, 1, 3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let (x, a, y) = (set(&t, &[0]), set(&t, &[1]), set(&t, &[2]));
        assert!(!d_independent(&t, &x, &a, &y).unwrap());
        let ch = check_characterization(&t, &x, &a, &y).unwrap();
        assert!(!ch.free);
        assert!(!ch.holds());
    }

    #[test]
    fn trivial_cases() {
        let p = FiniteStructure::graph(2, 1, 3, &[(0, 1), (1, 2)]).unwrap();
        let a = set(&p, &[0, 1]);
        assert!(d_independent(&p, &set(&p, &[2]), &a, &set(&p, &[1])).unwrap());
        assert!(check_characterization(&p, &a, &a, &a).unwrap().holds());
        assert!(perp(&p, &set(&p, &[2]), &a, &a).unwrap());
    }

    #[test]
    fn perp_cases() {
        // (2,1,2): A = {0}, C = {0, 1} with edge 0-1; b = 2
        let free = FiniteStructure::graph(2, 1, 3, &[(0, 1)]).unwrap();
        let (a, c, b) = (set(&free, &[0]), set(&free, &[0, 1]), set(&free, &[2]));
        assert!(perp(&free, &b, &a, &c).unwrap());
        // b joined to C \ A
        let tied = FiniteStructure::graph(2, 1, 3, &[(1, 2)]).unwrap();
        let (a, c, b) = (set(&tied, &[0]), set(&tied, &[0, 1]), set(&tied, &[2]));
        assert!(!perp(&tied, &b, &a, &c).unwrap());
        assert!(perp(&tied, &b, &c, &a).is_err());
    }

    #[test]
    fn axioms_on_small_graphs() {
        let c6 = FiniteStructure::graph(2, 1, 6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        let r = axiom_suite(&c6, 3).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        assert!(r.checked["monotonicity"] > 0);
        let empty = FiniteStructure::graph(2, 1, 0, &[]).unwrap();
        assert!(axiom_suite(&empty, 3).unwrap().holds());
    }
}
