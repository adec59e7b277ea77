//! Beatty sequences, the gadget `X ⊆ Y` with `delta(Y/X) = -1`, and the
//! amalgam `E = Z ∐_X Y` that glues a gadget onto copies of a structure.

use serde::{Deserialize, Serialize};

use crate::amalgam::free_amalgam;
use crate::classes::{in_c0, Verdict};
use crate::closure;
use crate::error::{check_cap, input, Error, Result};
use crate::predim::{is_self_sufficient, SubsetScan};
use crate::structure::FiniteStructure;
use crate::vertex_set::VertexSet;

/// One period `a_1, ..., a_b` of `a_i = floor(i l / b) - floor((i-1) l / b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeattySequence {
    pub ell: u32,
    pub b: u32,
    pub period: Vec<u8>,
}

impl BeattySequence {
    /// `a_i` for any integer `i`.
    pub fn at(&self, i: i64) -> u8 {
        let b = self.b as i64;
        // period[j] holds a_{j+1}
        self.period[((i - 1).rem_euclid(b)) as usize]
    }

    /// `a_{i+1} + ... + a_{i+s}`.
    pub fn window(&self, i: i64, s: i64) -> i64 {
        (i + 1..=i + s).map(|j| self.at(j) as i64).sum()
    }

    /// `{ i in 0..b : a_i = 1 }`.
    pub fn positions(&self) -> Vec<u32> {
        (0..self.b).filter(|&i| self.at(i as i64) == 1).collect()
    }
}

pub fn beatty(ell: u32, b: u32) -> Result<BeattySequence> {
    if !(0 < ell && ell < b) {
        return input(format!("Beatty sequence needs 0 < l < b, got l = {ell}, b = {b}"));
    }
    let floor = |i: i64| (i * ell as i64).div_euclid(b as i64);
    let period = (1..=b as i64).map(|i| (floor(i) - floor(i - 1)) as u8).collect();
    Ok(BeattySequence { ell, b, period })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GadgetCase {
    MEquals1,
    BEquals1,
    BGe2,
}

impl GadgetCase {
    pub fn as_str(self) -> &'static str {
        match self {
            GadgetCase::MEquals1 => "M_EQUALS_1",
            GadgetCase::BEquals1 => "B_EQUALS_1",
            GadgetCase::BGe2 => "B_GE_2",
        }
    }
}

/// Arithmetic data of the gadget: `n = m a + c` and `l m - c b = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetParams {
    pub n: u32,
    pub m: u32,
    pub r: usize,
    pub a: u32,
    pub c: u32,
    pub ell: u32,
    pub b: u32,
    pub case: GadgetCase,
}

pub fn gadget_params(n: u32, m: u32, r: usize) -> Result<GadgetParams> {
    if m == 0 || n == 0 {
        return input("gadget needs n, m >= 1");
    }
    if num_integer::gcd(n, m) != 1 {
        return input(format!("gadget needs gcd(n, m) = 1, got ({n}, {m})"));
    }
    if r < 2 {
        return input("gadget needs r >= 2");
    }
    if r == 2 && n <= m {
        return input(format!("r = 2 needs n > m, got ({n}, {m})"));
    }
    if n < m {
        return input(format!("gadget needs n >= m, got ({n}, {m})"));
    }
    if m == 1 {
        return Ok(GadgetParams {
            n,
            m,
            r,
            a: n,
            c: 0,
            ell: 0,
            b: 0,
            case: GadgetCase::MEquals1,
        });
    }
    let (a, c) = (n / m, n % m);
    let b = (1..m)
        .find(|&b| (b * c) % m == m - 1)
        .ok_or_else(|| Error::Internal(format!("no inverse of -{c} mod {m}")))?;
    let ell = (1 + c * b) / m;
    debug_assert_eq!(ell * m, 1 + c * b);
    Ok(GadgetParams {
        n,
        m,
        r,
        a,
        c,
        ell,
        b,
        case: if b == 1 { GadgetCase::BEquals1 } else { GadgetCase::BGe2 },
    })
}

/// The gadget: `structure` is `Y`, `x` lists the ids of `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetPair {
    pub structure: FiniteStructure,
    pub x: Vec<u32>,
    pub params: GadgetParams,
    pub degenerate: bool,
}

impl GadgetPair {
    pub fn x_set(&self) -> VertexSet {
        self.structure.set_of(&self.x).expect("X lies in Y")
    }
}

/// Builds the gadget for signature `(n, m, r)`. Vertex ids: the points of
/// `X` first (then the padding tuple when `r >= 3`), then `Y \ X`.
/// Parameters where the `y`-cycle has length 2 or `|X| < 2` give a pair
/// marked degenerate.
pub fn build_gadget(n: u32, m: u32, r: usize) -> Result<GadgetPair> {
    let p = gadget_params(n, m, r)?;
    // binary skeleton: x points, y points, edges
    let (x_count, y_count, mut edges): (u32, u32, Vec<(u32, u32)>) = match p.case {
        GadgetCase::MEquals1 => {
            let xs = n + 1;
            (xs, 1, (0..xs).map(|i| (i, xs)).collect())
        }
        GadgetCase::BEquals1 => {
            let xs = p.a + p.ell;
            (xs, 1, (0..xs).map(|i| (i, xs)).collect())
        }
        GadgetCase::BGe2 => {
            let xs = (p.a - 1) * p.b + p.ell;
            let y = |i: u32| xs + i;
            let mut e = Vec::new();
            for i in 0..p.b {
                e.push((y(i), y((i + 1) % p.b)));
            }
            let mut next = 0;
            for i in 0..p.b {
                for _ in 0..p.a - 1 {
                    e.push((next, y(i)));
                    next += 1;
                }
            }
            for i in beatty(p.ell, p.b)?.positions() {
                e.push((next, y(i)));
                next += 1;
            }
            debug_assert_eq!(next, xs);
            (xs, p.b, e)
        }
    };
    let pad = (r - 2) as u32;
    let total = x_count + pad + y_count;
    let shift = |v: u32| if v >= x_count { v + pad } else { v };
    let z: Vec<u32> = (x_count..x_count + pad).collect();
    let instances: Vec<Vec<u32>> = edges
        .drain(..)
        .map(|(u, v)| {
            let mut t = vec![shift(u), shift(v)];
            t.extend(&z);
            t
        })
        .collect();
    let structure = FiniteStructure::hypergraph(n, m, r, total, &instances)?;
    let x: Vec<u32> = (0..x_count + pad).collect();
    let degenerate = p.case == GadgetCase::BGe2 && p.b == 2 || x.len() < 2;
    let pair = GadgetPair {
        structure,
        x,
        params: p,
        degenerate,
    };
    if in_c0(&pair.structure).verdict != Verdict::Pass {
        return Err(Error::Internal(format!("gadget for ({n},{m},{r}) is not in C0")));
    }
    Ok(pair)
}

/// Outcome of checking the three gadget clauses exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetCheck {
    /// `delta(Y/X)`.
    pub delta_rel: i64,
    pub x_size: usize,
    /// `delta(Y/X) = -1` and `|X| >= 2`.
    pub clause1: bool,
    /// A set `U` with `X ⊄ U` and `U ∩ X` not `≤ U`.
    pub clause2: Option<VertexSet>,
    /// A set `Z` with `X ⊆ Z ⊊ Y` and `delta(Z) < delta(X)`.
    pub clause3: Option<VertexSet>,
    pub degenerate: bool,
}

impl GadgetCheck {
    pub fn holds(&self) -> bool {
        self.clause1 && self.clause2.is_none() && self.clause3.is_none()
    }
}

/// Checks the clauses over every subset of `Y`; `|Y|` must not exceed
/// `cap`.
pub fn verify_gadget(g: &GadgetPair, cap: usize) -> Result<GadgetCheck> {
    verify_pair(&g.structure, &g.x_set(), g.degenerate, cap)
}

pub(crate) fn verify_pair(y: &FiniteStructure, x: &VertexSet, degenerate: bool, cap: usize) -> Result<GadgetCheck> {
    check_cap("gadget verification (|Y|)", y.len(), cap.min(26))?;
    let table = SubsetScan::new(y, &y.none(), (0..y.len()).collect()).table();
    let xm: usize = x.iter().fold(0, |m, p| m | 1 << p);
    let full = (1usize << y.len()) - 1;
    let delta_rel = (table[full] - table[xm]) as i64;
    let better = |cand: usize, best: Option<usize>| match best {
        None => true,
        Some(b) => {
            let (ca, cb) = (cand.count_ones(), b.count_ones());
            ca < cb || ca == cb && (cand ^ b) & (cand ^ b).wrapping_neg() & cand != 0
        }
    };
    let mut w2 = None;
    let mut w3 = None;
    for mask in 0..=full {
        let d = table[mask];
        let p = mask & xm;
        if p != xm {
            if d < table[p] && better(mask, w2) {
                w2 = Some(mask);
            }
        } else if mask != full && d < table[xm] && better(mask, w3) {
            w3 = Some(mask);
        }
    }
    let set = |m: usize| VertexSet::from_positions(y.len(), (0..y.len()).filter(|b| m >> b & 1 == 1));
    Ok(GadgetCheck {
        delta_rel,
        x_size: x.len(),
        clause1: delta_rel == -1 && x.len() >= 2,
        clause2: w2.map(set),
        clause3: w3.map(set),
        degenerate,
    })
}

/// The structure `E = Z ∐_X Y` with its distinguished parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma49Amalgam {
    pub structure: FiniteStructure,
    pub z: FiniteStructure,
    pub a0: Vec<u32>,
    pub c: Vec<u32>,
    pub c_point: u32,
    /// Ids of the copies `B_2, ..., B_k` of `B`.
    pub b_copies: Vec<Vec<u32>>,
    /// Ids in `E` of `x_1, ..., x_k`.
    pub x: Vec<u32>,
}

/// Glues the gadget `g` onto the free amalgam `Z` of `C` and `k - 1`
/// copies of `B` over `A0` (`k = |X|`), identifying `x_1` with `c_point`
/// and `x_i` with the copy of `u0` in the `i`-th copy of `B`. When `B = A0`
/// there is no `u0` and the other points of `X` stay new.
pub fn build_lemma49_amalgam(
    c: &FiniteStructure,
    c_point: u32,
    b: &FiniteStructure,
    u0: Option<u32>,
    a0: &[u32],
    g: &GadgetPair,
) -> Result<Lemma49Amalgam> {
    let y = &g.structure;
    let k = g.x.len();
    let xs = g.x_set();
    if y.instances_inside(&xs).next().is_some() {
        return input("the gadget's X must carry no relations");
    }
    let a0_c = c.set_of(a0)?;
    let a0_b = b.set_of(a0)?;
    if c.pos(c_point).is_none() || a0.contains(&c_point) {
        return input("c must be a vertex of C outside A0");
    }
    match u0 {
        Some(u) if b.pos(u).is_none() || a0.contains(&u) => return input("u0 must be a vertex of B outside A0"),
        None if b.len() != a0.len() => return input("u0 may only be omitted when B = A0"),
        _ => {}
    }
    if !is_self_sufficient(c, &a0_c, &c.all())?.holds || !is_self_sufficient(b, &a0_b, &b.all())?.holds {
        return Err(Error::Contract("A0 must be self-sufficient in B and in C".into()));
    }
    let glue: Vec<(u32, u32)> = a0.iter().map(|&i| (i, i)).collect();
    let mut z = c.clone();
    let mut b_copies = Vec::new();
    let mut x_in_z = vec![c_point];
    for _ in 1..k {
        let am = free_amalgam(&z, b, &glue)?;
        z = am.structure;
        b_copies.push(b.ids().iter().map(|i| am.right[i]).collect::<Vec<u32>>());
        if let Some(u) = u0 {
            x_in_z.push(am.right[&u]);
        }
    }
    // glue Y over the identified points; remaining X points stay new
    let pairs: Vec<(u32, u32)> = x_in_z.iter().zip(&g.x).map(|(&zi, &yi)| (zi, yi)).collect();
    let am = free_amalgam(&z, y, &pairs)?;
    let x: Vec<u32> = g.x.iter().map(|i| am.right[i]).collect();
    Ok(Lemma49Amalgam {
        structure: am.structure,
        z,
        a0: a0.to_vec(),
        c: c.ids().to_vec(),
        c_point,
        b_copies,
        x,
    })
}

/// Numerical checks on a glued amalgam: self-sufficiency of `C` and the
/// copies of `B`, the predimension chain, and the drop of `d(c / A0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma49Check {
    pub c_strong: bool,
    pub b_strong: Vec<bool>,
    pub in_c0: bool,
    pub delta_e: i64,
    pub dim_z_xc: i64,
    pub dim_z_c: i64,
    pub delta_c: i64,
    pub k: usize,
    pub dim_c_over_a0: i64,
    pub dim_c_over_a0_x: i64,
}

impl Lemma49Check {
    /// `delta(E) >= d_Z(XC) - 1`, `d_Z(C) + d_Z(X/C) - 1 >= delta(C) + k - 2`
    /// and `delta(C) + k - 2 >= delta(C)`.
    pub fn chain_holds(&self) -> bool {
        let k = self.k as i64;
        self.delta_e >= self.dim_z_xc - 1 && self.dim_z_xc - 1 >= self.delta_c + k - 2 && k >= 2
    }

    pub fn drop_holds(&self) -> bool {
        self.dim_c_over_a0_x == self.dim_c_over_a0 - 1
    }

    pub fn holds(&self) -> bool {
        self.c_strong && self.b_strong.iter().all(|&b| b) && self.in_c0 && self.chain_holds() && self.drop_holds()
    }
}

pub fn check_lemma49(am: &Lemma49Amalgam) -> Result<Lemma49Check> {
    let e = &am.structure;
    let z = &am.z;
    let all = e.all();
    let c_set = e.set_of(&am.c)?;
    let c_strong = is_self_sufficient(e, &c_set, &all)?.holds;
    let b_strong = am
        .b_copies
        .iter()
        .map(|ids| Ok(is_self_sufficient(e, &e.set_of(ids)?, &all)?.holds))
        .collect::<Result<Vec<_>>>()?;
    let in_c0 = in_c0(e).verdict == Verdict::Pass;
    let x_in_z: Vec<u32> = am.x.iter().copied().filter(|i| z.pos(*i).is_some()).collect();
    let mut xc: Vec<u32> = am.c.clone();
    xc.extend(&x_in_z);
    let dim_z_xc = closure::dim(z, &z.set_of(&xc)?)?;
    let dim_z_c = closure::dim(z, &z.set_of(&am.c)?)?;
    // points of X not in Z are new over Z: each adds the vertex weight
    let fresh = (am.x.len() - x_in_z.len()) as i64 * e.vertex_weight();
    let dim_z_xc = dim_z_xc + fresh;
    let delta_c = z.delta(&z.set_of(&am.c)?);
    let a0 = e.set_of(&am.a0)?;
    let cp = e.set_of(&[am.c_point])?;
    let rest = e.set_of(&am.x[1..])?;
    let dim_c_over_a0 = closure::dim_rel(e, &cp, &a0)?;
    let dim_c_over_a0_x = closure::dim_rel(e, &cp, &a0.union(&rest))?;
    Ok(Lemma49Check {
        c_strong,
        b_strong,
        in_c0,
        delta_e: e.delta(&all),
        dim_z_xc,
        dim_z_c,
        delta_c,
        k: am.x.len(),
        dim_c_over_a0,
        dim_c_over_a0_x,
    })
}
