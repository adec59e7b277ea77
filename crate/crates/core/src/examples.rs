//! Worked constructions for `m = n = 1` hypergraphs and for graphs with
//! `(n, m) = (2, 1)`: the structure `E = F ∪ {c}` over copies of
//! `B = cl^d(A, b)`, the companion structure `F` joining `cl^d(A, a)` to a
//! single relation, the circulant graph `CD`, the structure `E = B ∪ C ∪ D`,
//! and the endpoints of a path.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amalgam::{free_amalgam, free_power};
use crate::caps::Caps;
use crate::classes::{in_cf, random_connected, Membership};
use crate::closure::{cld, DimTable};
use crate::control::ControlFunction;
use crate::error::{input, Error, Result};
use crate::independence::perp;
use crate::predim::SubsetScan;
use crate::structure::{FiniteStructure, Signature};
use crate::vertex_set::VertexSet;

fn single_relation(s: &FiniteStructure) -> Result<usize> {
    let rels = s.signature().relations();
    if rels.len() != 1 {
        return input("expected a single relation");
    }
    Ok(rels[0].arity)
}

/// Checks that `b` is a point outside `A` with `A` d-closed in `B` and
/// `B = cl^d(A, b)`.
fn check_base(b: &FiniteStructure, a: &[u32], point: u32) -> Result<(VertexSet, usize)> {
    let aset = b.set_of(a)?;
    let p = b
        .pos(point)
        .ok_or_else(|| Error::Input(format!("point {point} not in the structure")))?;
    if aset.contains(p) {
        return input("the distinguished point lies in A");
    }
    if cld(b, &aset)? != aset {
        return input("A is not d-closed in B");
    }
    if cld(b, &aset.with(p))? != b.all() {
        return input("B is not the d-closure of A and the point");
    }
    Ok((aset, p))
}

/// `E = F ∪ {c}`: `F` is the free amalgam of `r - 1` copies of `B` over `A`
/// and `c` lies in the single relation `R(b_1, ..., b_{r-1}, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example511 {
    pub structure: FiniteStructure,
    pub r: usize,
    pub a: Vec<u32>,
    /// Ids of each copy `B_i`.
    pub copies: Vec<Vec<u32>>,
    pub b_points: Vec<u32>,
    pub c: u32,
}

pub fn build_example_511(b: &FiniteStructure, a: &[u32], b_point: u32) -> Result<Example511> {
    let sig = b.signature();
    let r = single_relation(b)?;
    if r < 3 || sig.vertex_weight() != 1 || b.weight(0) != 1 {
        return input("this construction needs n = m = 1 and r >= 3");
    }
    check_base(b, a, b_point)?;
    let (f, maps) = free_power(b, a, r - 1)?;
    let copies: Vec<Vec<u32>> = maps.iter().map(|m| b.ids().iter().map(|i| m[i]).collect()).collect();
    let b_points: Vec<u32> = maps.iter().map(|m| m[&b_point]).collect();
    let c = f.next_free_id();
    let mut tuple = b_points.clone();
    tuple.push(c);
    let structure = f.extended(&[c], &[], &[(0, tuple)])?;
    Ok(Example511 {
        structure,
        r,
        a: a.to_vec(),
        copies,
        b_points,
        c,
    })
}

/// Claims (i)-(iii) about an [`Example511`], plus `c ⊥ A` and a numeric
/// evaluation of `r - 2 >= log((|Y_B1| + (r-2)|Y_B1 \ A|) / (|Y_B1| - 1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Example511Check {
    /// (i) `E ∈ C_f`.
    pub membership: Membership,
    /// (ii) `B_i ≤_d E`, per copy.
    pub copies_closed: Vec<bool>,
    /// (iii) `Ac ≤_d E`.
    pub ac_closed: bool,
    pub c_perp_a: bool,
    /// Sets `Y` where the logarithmic inequality was evaluated.
    pub log_evaluated: usize,
    /// The first `Y` where it failed.
    pub log_failure: Option<VertexSet>,
}

impl Example511Check {
    pub fn holds(&self) -> bool {
        self.membership.accepted()
            && self.copies_closed.iter().all(|&x| x)
            && self.ac_closed
            && self.c_perp_a
            && self.log_failure.is_none()
    }
}

pub fn check_example_511(ex: &Example511, f: &ControlFunction, caps: &Caps) -> Result<Example511Check> {
    let e = &ex.structure;
    let membership = in_cf(e, f, caps, 0);
    if membership.verdict == crate::classes::Verdict::Partial {
        return Err(Error::Capacity {
            what: "example structure (vertices)",
            needed: e.len(),
            cap: caps.subset,
        });
    }
    let copies_closed = ex
        .copies
        .iter()
        .map(|ids| {
            let set = e.set_of(ids)?;
            Ok(cld(e, &set)? == set)
        })
        .collect::<Result<Vec<bool>>>()?;
    let aset = e.set_of(&ex.a)?;
    let cset = e.set_of(&[ex.c])?;
    let ac = aset.union(&cset);
    let ac_closed = cld(e, &ac)? == ac;
    let c_perp_a = perp(e, &cset, &e.none(), &aset)?;

    // Y ⊇ {c, b_1, ..., b_{r-1}} meeting A, with some |Y_{B_i} \ A| >= 2
    let outside: Vec<VertexSet> = ex
        .copies
        .iter()
        .map(|ids| Ok(e.set_of(ids)?.difference(&aset)))
        .collect::<Result<_>>()?;
    let fixed = e.set_of(&ex.b_points)?.union(&cset);
    let free: Vec<usize> = (0..e.len()).filter(|&p| !fixed.contains(p)).collect();
    let scan = SubsetScan::new(e, &fixed, free);
    let mut log_evaluated = 0;
    let mut log_failure = None;
    let slack = (ex.r - 2) as f64;
    scan.for_each(|mask, _| {
        let y = scan.set(mask);
        let ya = y.intersection(&aset);
        let Some(k) = outside.iter().map(|o| y.intersection(o).len()).max() else {
            return ControlFlow::Continue(());
        };
        if ya.is_empty() || k < 2 {
            return ControlFlow::Continue(());
        }
        let yb1 = (ya.len() + k) as f64;
        let bound = ((yb1 + slack * k as f64) / (yb1 - 1.0)).ln();
        log_evaluated += 1;
        if slack < bound {
            log_failure = Some(y);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    Ok(Example511Check {
        membership,
        copies_closed,
        ac_closed,
        c_perp_a,
        log_evaluated,
        log_failure,
    })
}

/// The free amalgam `F` of `C = cl^d(A, a)` over `a` with points
/// `a, e_1, ..., e_{r-1}` carrying the single relation `R(a, e_1, ..., e_{r-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example511Step2 {
    pub structure: FiniteStructure,
    pub a: Vec<u32>,
    pub a_point: u32,
    pub e: Vec<u32>,
}

pub fn build_example_511_step2(c: &FiniteStructure, a: &[u32], a_point: u32) -> Result<Example511Step2> {
    let r = single_relation(c)?;
    if r < 3 || c.signature().vertex_weight() != 1 || c.weight(0) != 1 {
        return input("this construction needs n = m = 1 and r >= 3");
    }
    check_base(c, a, a_point)?;
    let star = FiniteStructure::new(c.signature().clone(), 0..r as u32, [(0, (0..r as u32).collect())], None)?;
    let am = free_amalgam(c, &star, &[(a_point, 0)])?;
    let e = (1..r as u32).map(|i| am.right[&i]).collect();
    Ok(Example511Step2 {
        structure: am.structure,
        a: a.to_vec(),
        a_point,
        e,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example511Step2Check {
    pub membership: Membership,
    /// `A ≤_d F`.
    pub a_closed: bool,
    /// `Ae_i ≤_d F`, per `e_i`.
    pub ae_closed: Vec<bool>,
    /// `e_i ⊥ A`, per `e_i`.
    pub e_perp_a: Vec<bool>,
    /// `a ∈ cl^d(e_1, ..., e_{r-1})`.
    pub a_in_closure_of_e: bool,
    /// `a ∈ cl^d(A, e_1, ..., e_{r-1})`.
    pub a_in_closure_of_ae: bool,
}

impl Example511Step2Check {
    pub fn holds(&self) -> bool {
        self.membership.accepted()
            && self.a_closed
            && self.ae_closed.iter().all(|&x| x)
            && self.e_perp_a.iter().all(|&x| x)
            && self.a_in_closure_of_e
            && self.a_in_closure_of_ae
    }
}

pub fn check_example_511_step2(ex: &Example511Step2, f: &ControlFunction, caps: &Caps) -> Result<Example511Step2Check> {
    let s = &ex.structure;
    let membership = in_cf(s, f, caps, 0);
    let aset = s.set_of(&ex.a)?;
    let a_closed = cld(s, &aset)? == aset;
    let mut ae_closed = Vec::new();
    let mut e_perp_a = Vec::new();
    for &e in &ex.e {
        let es = s.set_of(&[e])?;
        let ae = aset.union(&es);
        ae_closed.push(cld(s, &ae)? == ae);
        e_perp_a.push(a_closed && perp(s, &es, &s.none(), &aset)?);
    }
    let eset = s.set_of(&ex.e)?;
    let p = s.pos(ex.a_point).expect("a lies in F");
    Ok(Example511Step2Check {
        membership,
        a_closed,
        ae_closed,
        e_perp_a,
        a_in_closure_of_e: cld(s, &eset)?.contains(p),
        a_in_closure_of_ae: cld(s, &eset.union(&aset))?.contains(p),
    })
}

/// A base `A` and `B = cl^d(A, b)` for the `m = n = 1` constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example511Base {
    pub label: String,
    pub b: FiniteStructure,
    pub a: Vec<u32>,
    pub point: u32,
}

/// The bases used by the verifier for arity `r`: `A` relation-free with up
/// to three points (or a single relation when `r = 3` and `|A| = 3`), and
/// `B` either `A` plus an unrelated point, or `A` plus two points `b, b'`
/// sharing one relation with `r - 2` points of `A`. Bases outside `C_f` are
/// skipped.
pub fn example_511_bases(r: usize, f: &ControlFunction, caps: &Caps) -> Result<Vec<Example511Base>> {
    let sig = Signature::single(1, 1, r)?;
    let mut out = Vec::new();
    for k in 0..=3u32 {
        let mut a_shapes: Vec<(String, Vec<Vec<u32>>)> = vec![(format!("a{k}"), vec![])];
        if r == 3 && k == 3 {
            a_shapes.push(("a3-related".into(), vec![vec![0, 1, 2]]));
        }
        for (a_label, a_rel) in a_shapes {
            let a: Vec<u32> = (0..k).collect();
            let mut shapes = vec![("free", k + 1, a_rel.clone())];
            if k as usize >= r - 2 {
                let mut t = vec![k, k + 1];
                t.extend(0..(r - 2) as u32);
                let mut rel = a_rel.clone();
                rel.push(t);
                shapes.push(("tied", k + 2, rel));
            }
            for (b_label, order, rel) in shapes {
                let b = FiniteStructure::new(sig.clone(), 0..order, rel.into_iter().map(|t| (0, t)), None)?;
                if !in_cf(&b, f, caps, 0).accepted() {
                    continue;
                }
                out.push(Example511Base {
                    label: format!("r{r}/{a_label}/{b_label}"),
                    b,
                    a: a.clone(),
                    point: k,
                });
            }
        }
    }
    Ok(out)
}

/// The control function used for the `m = n = 1` constructions:
/// `f(k) = 1 + H_{k-1} / 2`.
pub fn example_511_control() -> ControlFunction {
    ControlFunction::scaled_harmonic(1, 1, 2).expect("valid scale")
}

/// The graph on `c_0, d_0, ..., c_{s-1}, d_{s-1}`: the `2s`-cycle in that
/// order plus `d_i ~ d_{i+ell}`. Ids are `c_i = 2i`, `d_i = 2i + 1`.
pub fn cd_graph(s: u32, ell: u32) -> Result<FiniteStructure> {
    if ell < 6 || 12 * ell >= s || s.gcd(&ell) != 1 {
        return input(format!(
            "need gcd(ell, s) = 1 and 6 <= ell < s/12, got s = {s}, ell = {ell}"
        ));
    }
    cd_graph_unchecked(s, ell)
}

fn cd_graph_unchecked(s: u32, ell: u32) -> Result<FiniteStructure> {
    let mut edges = Vec::new();
    for i in 0..s {
        edges.push((2 * i, 2 * i + 1));
        edges.push((2 * i + 1, 2 * ((i + 1) % s)));
        edges.push((2 * i + 1, 2 * ((i + ell) % s) + 1));
    }
    FiniteStructure::graph(2, 1, 2 * s, &edges)
}

/// The control function for graphs: `f(1) = 2`, `f(2) = 3`, increments
/// `1/(k-1)`.
pub fn example_512_control() -> ControlFunction {
    ControlFunction::harmonic(2)
}

/// Sampled bound `2 delta(X) >= |X| + 3` over d-closed sets of `CD`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSample {
    pub samples: usize,
    pub attempts: usize,
    /// Least `2 delta(X) - |X| - 3`, or least `4|X_C| - 3 - |X|`.
    pub least_margin: Option<i64>,
    pub failure: Option<VertexSet>,
}

impl BoundSample {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// `samples` sets `X = cl^d(S_0)` for random connected `S_0`, kept when
/// `|X| <= max_size`; each must satisfy `2 delta(X) >= |X| + 3`.
pub fn sample_half_bound(cd: &FiniteStructure, samples: usize, max_size: usize, seed: u64) -> Result<BoundSample> {
    let adj = cd.adjacency();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BoundSample {
        samples: 0,
        attempts: 0,
        least_margin: None,
        failure: None,
    };
    while out.samples < samples && out.attempts < 20 * samples {
        out.attempts += 1;
        let size = rng.gen_range(1..=max_size);
        let s0 = random_connected(cd, &adj, size, &mut rng);
        let x = cld(cd, &s0)?;
        if x.len() > max_size || x == cd.all() {
            continue;
        }
        out.samples += 1;
        let margin = 2 * cd.delta(&x) - x.len() as i64 - 3;
        out.least_margin = Some(out.least_margin.map_or(margin, |m| m.min(margin)));
        if margin < 0 && out.failure.is_none() {
            out.failure = Some(x);
        }
    }
    Ok(out)
}

/// `samples` closures `X = cl^d(T)` of random sets `T ⊆ C` drawn from a
/// window of consecutive `c_i`; each must satisfy `|X| <= 4|X_C| - 3`.
pub fn sample_closure_bound(cd: &FiniteStructure, samples: usize, seed: u64) -> Result<BoundSample> {
    let s = cd.len() / 2;
    let cset = VertexSet::from_positions(cd.len(), (0..cd.len()).filter(|p| cd.id(*p) % 2 == 0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BoundSample {
        samples: 0,
        attempts: 0,
        least_margin: None,
        failure: None,
    };
    while out.samples < samples {
        out.attempts += 1;
        let start = rng.gen_range(0..s);
        let width = rng.gen_range(1..=12.min(s));
        let mut ids: Vec<u32> = (0..width)
            .filter(|_| rng.gen_bool(0.6))
            .map(|j| 2 * ((start + j) % s) as u32)
            .collect();
        if ids.is_empty() {
            ids.push(2 * start as u32);
        }
        let t = cd.set_of(&ids)?;
        let x = cld(cd, &t)?;
        out.samples += 1;
        let xc = x.intersection(&cset).len() as i64;
        let margin = 4 * xc - 3 - x.len() as i64;
        out.least_margin = Some(out.least_margin.map_or(margin, |m| m.min(margin)));
        if margin < 0 && out.failure.is_none() {
            out.failure = Some(x);
        }
    }
    Ok(out)
}

/// `E = B ∪ C ∪ D`: `B` is the free amalgam of `s` copies of
/// `B' = cl^d(A, b)` over `A`, `CD` is [`cd_graph`], plus `b_i ~ c_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example512 {
    pub structure: FiniteStructure,
    pub s: u32,
    pub ell: u32,
    pub a: Vec<u32>,
    pub copies: Vec<Vec<u32>>,
    pub b_points: Vec<u32>,
    pub c: Vec<u32>,
    pub d: Vec<u32>,
}

pub fn build_example_512(s: u32, ell: u32, b_prime: &FiniteStructure, a: &[u32], b_point: u32) -> Result<Example512> {
    build_512(cd_graph(s, ell)?, s, ell, b_prime, a, b_point)
}

fn build_512(
    cd: FiniteStructure,
    s: u32,
    ell: u32,
    b_prime: &FiniteStructure,
    a: &[u32],
    b_point: u32,
) -> Result<Example512> {
    if b_prime.signature() != cd.signature() {
        return input("B' must be a graph for (n, m) = (2, 1)");
    }
    check_base(b_prime, a, b_point)?;
    let (b, maps) = free_power(b_prime, a, s as usize)?;
    let off = b.next_free_id();
    let shift: BTreeMap<u32, u32> = cd.ids().iter().map(|&i| (i, i + off)).collect();
    let cd = cd.relabelled(&shift)?;
    let copies: Vec<Vec<u32>> = maps
        .iter()
        .map(|m| b_prime.ids().iter().map(|i| m[i]).collect())
        .collect();
    let b_points: Vec<u32> = maps.iter().map(|m| m[&b_point]).collect();
    let c: Vec<u32> = (0..s).map(|i| off + 2 * i).collect();
    let d: Vec<u32> = (0..s).map(|i| off + 2 * i + 1).collect();
    let links: Vec<(usize, Vec<u32>)> = b_points.iter().zip(&c).map(|(&x, &y)| (0, vec![x, y])).collect();
    let mut instances = cd.id_instances();
    instances.extend(links);
    let structure = b.extended(cd.ids(), &[], &instances)?;
    Ok(Example512 {
        structure,
        s,
        ell,
        a: a.to_vec(),
        copies,
        b_points,
        c,
        d,
    })
}

/// Least `s >= 1` (up to `limit`) with
/// `delta(A) + s delta(B'/A) >= f(|A| + s(|B' \ A| + 2))`.
pub fn smallest_large_s(b_prime: &FiniteStructure, a: &[u32], f: &ControlFunction, limit: u32) -> Result<Option<u32>> {
    let aset = b_prime.set_of(a)?;
    let da = b_prime.delta(&aset);
    let rel = b_prime.delta_rel(&b_prime.all(), &aset);
    let new = (b_prime.len() - aset.len()) as i64;
    let sizes: Vec<usize> = (1..=limit as i64)
        .map(|s| (a.len() as i64 + s * (new + 2)) as usize)
        .collect();
    let ceil = f.ceilings(*sizes.last().unwrap_or(&0));
    Ok((1..=limit).find(|&s| da + s as i64 * rel >= ceil[sizes[s as usize - 1]]))
}

/// The self-sufficiency claims about an [`Example512`], decided exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example512Check {
    pub delta_e: i64,
    pub delta_b: i64,
    /// `A ≤_d E`.
    pub a_closed: bool,
    /// `cl^d(B) = E`.
    pub e_is_closure_of_b: bool,
    /// The `e ∈ D` with `Ae` not d-closed.
    pub ae_open: Vec<u32>,
    /// The `e ∈ D` with `e ⊥ A` failing.
    pub not_perp: Vec<u32>,
    /// Indices `i` with `B_i` not d-closed.
    pub copies_open: Vec<usize>,
}

impl Example512Check {
    pub fn holds(&self) -> bool {
        self.delta_e == self.delta_b
            && self.a_closed
            && self.e_is_closure_of_b
            && self.ae_open.is_empty()
            && self.not_perp.is_empty()
            && self.copies_open.is_empty()
    }
}

pub fn check_example_512(ex: &Example512) -> Result<Example512Check> {
    let e = &ex.structure;
    let aset = e.set_of(&ex.a)?;
    let bset = ex
        .copies
        .iter()
        .try_fold(aset.clone(), |acc, ids| Ok::<_, Error>(acc.union(&e.set_of(ids)?)))?;
    let a_closed = cld(e, &aset)? == aset;
    let mut ae_open = Vec::new();
    let mut not_perp = Vec::new();
    for &d in &ex.d {
        let ds = e.set_of(&[d])?;
        let ad = aset.union(&ds);
        if cld(e, &ad)? != ad {
            ae_open.push(d);
        }
        if !(a_closed && perp(e, &ds, &e.none(), &aset)?) {
            not_perp.push(d);
        }
    }
    let mut copies_open = Vec::new();
    for (i, ids) in ex.copies.iter().enumerate() {
        let set = e.set_of(ids)?;
        if cld(e, &set)? != set {
            copies_open.push(i);
        }
    }
    Ok(Example512Check {
        delta_e: e.delta(&e.all()),
        delta_b: e.delta(&bset),
        a_closed,
        e_is_closure_of_b: cld(e, &bset)? == e.all(),
        ae_open,
        not_perp,
        copies_open,
    })
}

/// On a small instance of the `E = B ∪ C ∪ D` shape (any `s`, `ell`),
/// compares the closures used by [`check_example_512`] against the
/// exhaustive dimension table. Returns the first set where they differ.
pub fn example_512_oracle_mismatch(
    s: u32,
    ell: u32,
    b_prime: &FiniteStructure,
    a: &[u32],
    b_point: u32,
) -> Result<Option<Vec<u32>>> {
    let ex = build_512(cd_graph_unchecked(s, ell)?, s, ell, b_prime, a, b_point)?;
    let e = &ex.structure;
    let table = DimTable::new(e, 24)?;
    let aset = e.set_of(&ex.a)?;
    let mut sets = vec![aset.clone()];
    sets.extend(ex.d.iter().map(|&d| aset.with(e.pos(d).unwrap())));
    for ids in &ex.copies {
        sets.push(e.set_of(ids)?);
    }
    for set in sets {
        let exact = cld(e, &set)?;
        if DimTable::mask_of(&exact) != table.cld(DimTable::mask_of(&set)) {
            return Ok(Some(e.ids_of(&set)));
        }
    }
    Ok(None)
}

/// Whether the endpoints of the path with `ell` edges are d-closed in it,
/// for `(n, m) = (2, 1)`, by minimum cut and by the exhaustive table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathFact {
    pub ell: u32,
    pub closed: bool,
    pub closed_exhaustive: bool,
}

pub fn path_fact(ell: u32) -> Result<PathFact> {
    if ell == 0 || ell > 20 {
        return input("path length must lie in 1..=20");
    }
    let edges: Vec<(u32, u32)> = (0..ell).map(|i| (i, i + 1)).collect();
    let p = FiniteStructure::graph(2, 1, ell + 1, &edges)?;
    let uv = p.set_of(&[0, ell])?;
    let table = DimTable::new(&p, 21)?;
    let mask = DimTable::mask_of(&uv);
    Ok(PathFact {
        ell,
        closed: cld(&p, &uv)? == uv,
        closed_exhaustive: table.is_d_closed(mask),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::Verdict;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn path_endpoints() {
        for ell in 1..=8 {
            let p = path_fact(ell).unwrap();
            assert_eq!(p.closed, p.closed_exhaustive);
            if ell >= 2 {
                assert_eq!(p.closed, ell >= 3, "ell = {ell}");
            }
        }
    }

    #[test]
    fn step_one_single_point_base() {
        let f = example_511_control();
        for r in [3usize, 4] {
            let b = FiniteStructure::hypergraph(1, 1, r, 2, &[]).unwrap();
            let ex = build_example_511(&b, &[0], 1).unwrap();
            assert_eq!(ex.structure.len(), 1 + (r - 1) + 1);
            let ch = check_example_511(&ex, &f, &caps()).unwrap();
            assert!(ch.holds(), "r = {r}: {ch:?}");
            assert_eq!(ch.membership.verdict, Verdict::Pass);
        }
    }

    #[test]
    fn default_harmonic_rejects_the_relation() {
        // {b_1, b_2, c} carries one relation: delta 2 < 5/2 = f(3)
        let b = FiniteStructure::hypergraph(1, 1, 3, 2, &[]).unwrap();
        let ex = build_example_511(&b, &[0], 1).unwrap();
        let ch = check_example_511(&ex, &ControlFunction::harmonic(1), &caps()).unwrap();
        assert_eq!(ch.membership.verdict, Verdict::Fail);
        let w = ch.membership.witness.unwrap();
        assert_eq!(ex.structure.ids_of(&w).len(), 3);
    }

    #[test]
    fn all_bases_pass() {
        let f = example_511_control();
        for r in [3usize, 4] {
            let bases = example_511_bases(r, &f, &caps()).unwrap();
            assert!(bases.iter().any(|b| b.label.ends_with("tied")));
            for base in bases {
                let ex = build_example_511(&base.b, &base.a, base.point).unwrap();
                let ch = check_example_511(&ex, &f, &caps()).unwrap();
                assert!(ch.holds(), "{}: {ch:?}", base.label);
                let st = build_example_511_step2(&base.b, &base.a, base.point).unwrap();
                let ch2 = check_example_511_step2(&st, &f, &caps()).unwrap();
                assert!(ch2.holds(), "{}: {ch2:?}", base.label);
            }
        }
    }

    #[test]
    fn tied_base_exercises_the_log_bound() {
        let f = example_511_control();
        let b = FiniteStructure::hypergraph(1, 1, 3, 3, &[vec![0, 1, 2]]).unwrap();
        let ex = build_example_511(&b, &[0], 1).unwrap();
        let ch = check_example_511(&ex, &f, &caps()).unwrap();
        assert!(ch.log_evaluated > 0);
        assert!(ch.holds());
    }

    #[test]
    fn bad_bases_are_rejected() {
        // the second point is not in cl^d(A, b)
        let b = FiniteStructure::hypergraph(1, 1, 3, 3, &[]).unwrap();
        assert!(build_example_511(&b, &[0], 1).is_err());
        let b = FiniteStructure::hypergraph(1, 1, 3, 2, &[]).unwrap();
        assert!(build_example_511(&b, &[0], 0).is_err());
        let g = FiniteStructure::graph(2, 1, 2, &[]).unwrap();
        assert!(build_example_511(&g, &[0], 1).is_err());
    }

    #[test]
    fn circulant_graph() {
        let cd = cd_graph(73, 6).unwrap();
        assert_eq!(cd.len(), 146);
        assert_eq!(cd.delta(&cd.all()), 73);
        assert!(crate::girth(&cd).unwrap() >= 6);
        assert!(cd_graph(73, 5).is_err());
        assert!(cd_graph(72, 6).is_err());
        assert!(cd_graph(70, 6).is_err());
    }

    #[test]
    fn sampled_bounds() {
        let cd = cd_graph(73, 6).unwrap();
        let half = sample_half_bound(&cd, 100, 18, 1).unwrap();
        assert_eq!(half.samples, 100);
        assert!(half.holds(), "{half:?}");
        let four = sample_closure_bound(&cd, 100, 1).unwrap();
        assert!(four.holds(), "{four:?}");
        // some sampled closures grow beyond the C-points
        assert!(four.least_margin.unwrap() < 4 * 12);
    }

    #[test]
    fn full_structure_claims() {
        let edge = FiniteStructure::graph(2, 1, 2, &[(0, 1)]).unwrap();
        let ex = build_example_512(73, 6, &edge, &[0], 1).unwrap();
        assert_eq!(ex.structure.len(), 1 + 73 * 3);
        let ch = check_example_512(&ex).unwrap();
        assert!(ch.holds(), "{ch:?}");
        assert_eq!(ch.delta_e, 2 + 73);
        assert_eq!(
            smallest_large_s(&edge, &[0], &example_512_control(), 100).unwrap(),
            Some(3)
        );
    }

    #[test]
    fn reduced_instance_oracle() {
        let edge = FiniteStructure::graph(2, 1, 2, &[(0, 1)]).unwrap();
        assert_eq!(example_512_oracle_mismatch(7, 2, &edge, &[0], 1).unwrap(), None);
    }
}
