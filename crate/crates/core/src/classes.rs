//! Membership in the classes `C_0`, `C_f` and `K_n`.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::closure::c0_violation;
use crate::control::ControlFunction;
use crate::error::{input, Result};
use crate::flow;
use crate::predim::SubsetScan;
use crate::structure::{FiniteStructure, Mode, Signature};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    /// No violation found, but the search was not exhaustive.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub verdict: Verdict,
    /// A violating set when the verdict is `Fail`.
    pub witness: Option<VertexSet>,
    /// Least `delta(X) - f(|X|)` over the sets examined.
    pub margin: Option<BigRational>,
    pub note: String,
}

impl Membership {
    pub fn accepted(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    fn fail(witness: VertexSet, margin: Option<BigRational>, note: String) -> Self {
        Membership {
            verdict: Verdict::Fail,
            witness: Some(witness),
            margin,
            note,
        }
    }
}

/// `∅ ≤ S`, decided exactly at any size.
pub fn in_c0(s: &FiniteStructure) -> Membership {
    let m = flow::minimize(s, &s.none(), &s.all());
    let margin = Some(BigRational::from_integer(m.min_delta.into()));
    match c0_violation(s) {
        Some(w) => Membership::fail(w, margin, "negative predimension".into()),
        None => Membership {
            verdict: Verdict::Pass,
            witness: None,
            margin,
            note: "exact".into(),
        },
    }
}

/// `delta(X) >= f(|X|)` for every `X ⊆ S`.
///
/// Exhaustive when `|S| <= caps.subset`; otherwise every connected set up to
/// `caps.connected` vertices (within `caps.connected_budget`) and
/// `caps.samples` random connected sets drawn from `seed` are examined, and
/// a clean result is `Partial`. Connected sets suffice when `f` is
/// subadditive, which every good control function is.
pub fn in_cf(s: &FiniteStructure, f: &ControlFunction, caps: &Caps, seed: u64) -> Membership {
    let c0 = in_c0(s);
    if c0.verdict == Verdict::Fail {
        return c0;
    }
    if s.len() <= caps.subset {
        cf_exhaustive(s, f)
    } else {
        cf_partial(s, f, caps, seed)
    }
}

fn cf_exhaustive(s: &FiniteStructure, f: &ControlFunction) -> Membership {
    let ceil = f.ceilings(s.len());
    let scan = SubsetScan::new(s, &s.none(), (0..s.len()).collect());
    let mut least = vec![i64::MAX; s.len() + 1];
    let mut best: Option<u64> = None;
    scan.for_each(|mask, d| {
        let k = mask.count_ones() as usize;
        least[k] = least[k].min(d);
        if d < ceil[k] {
            let better = match best {
                None => true,
                Some(b) => {
                    let bk = b.count_ones() as usize;
                    k < bk || (k == bk && lex_less(mask, b))
                }
            };
            if better {
                best = Some(mask);
            }
        }
        ControlFlow::Continue(())
    });
    let values = f.values(s.len());
    let margin = (0..=s.len())
        .map(|k| BigRational::from_integer(least[k].into()) - &values[k])
        .min();
    match best {
        Some(mask) => Membership::fail(scan.set(mask), margin, format!("delta below {f}")),
        None => Membership {
            verdict: Verdict::Pass,
            witness: None,
            margin,
            note: format!("exhaustive over {} subsets", 1u64 << s.len()),
        },
    }
}

/// Same-size masks: the one whose sorted positions come first.
fn lex_less(a: u64, b: u64) -> bool {
    let x = a ^ b;
    x != 0 && a & (x & x.wrapping_neg()) != 0
}

struct Tracker<'a> {
    ceil: &'a [i64],
    values: &'a [BigRational],
    least: Vec<i64>,
    best: Option<VertexSet>,
}

impl Tracker<'_> {
    fn see(&mut self, set: &VertexSet, d: i64) {
        let k = set.len();
        self.least[k] = self.least[k].min(d);
        if d < self.ceil[k] {
            let better = self.best.as_ref().is_none_or(|b| set.canonical_cmp(b).is_lt());
            if better {
                self.best = Some(set.clone());
            }
        }
    }

    fn margin(&self) -> Option<BigRational> {
        self.least
            .iter()
            .zip(self.values)
            .filter(|(l, _)| **l != i64::MAX)
            .map(|(l, v)| BigRational::from_integer((*l).into()) - v)
            .min()
    }
}

fn cf_partial(s: &FiniteStructure, f: &ControlFunction, caps: &Caps, seed: u64) -> Membership {
    let k_max = caps.connected.min(s.len());
    let ceil = f.ceilings(k_max);
    let values = f.values(k_max);
    let mut t = Tracker {
        ceil: &ceil,
        values: &values,
        least: vec![i64::MAX; k_max + 1],
        best: None,
    };
    let adj: Vec<Vec<usize>> = (0..s.len()).map(|p| s.neighbours(p)).collect();
    let mut complete = 0;
    let mut visited = 0usize;
    for size in 1..=k_max {
        let mut out_of_budget = false;
        connected_sets(s, &adj, size, &mut |set, d| {
            visited += 1;
            t.see(set, d);
            if visited >= caps.connected_budget {
                out_of_budget = true;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if out_of_budget {
            break;
        }
        complete = size;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..caps.samples {
        let size = rng.gen_range(1..=k_max.max(1));
        let set = random_connected(s, &adj, size, &mut rng);
        let d = s.delta(&set);
        t.see(&set, d);
    }
    let margin = t.margin();
    let note = format!(
        "connected sets complete up to size {complete}, {visited} visited, {} random connected samples (seed {seed})",
        caps.samples
    );
    match t.best {
        Some(w) => Membership::fail(w, margin, note),
        None => Membership {
            verdict: Verdict::Partial,
            witness: None,
            margin,
            note,
        },
    }
}

/// Visits each connected set of exactly `size` vertices once, with its
/// predimension. Adjacency is sharing a relation instance.
pub(crate) fn connected_sets(
    s: &FiniteStructure,
    adj: &[Vec<usize>],
    size: usize,
    visit: &mut dyn FnMut(&VertexSet, i64) -> ControlFlow<()>,
) {
    let mut current = s.none();
    for root in 0..s.len() {
        current.insert(root);
        let ext: Vec<usize> = adj[root].iter().copied().filter(|&w| w > root).collect();
        let flow = extend(s, adj, root, size, &mut current, s.vertex_weight(), ext, visit);
        current.remove(root);
        if flow.is_break() {
            return;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    s: &FiniteStructure,
    adj: &[Vec<usize>],
    root: usize,
    size: usize,
    current: &mut VertexSet,
    d: i64,
    mut ext: Vec<usize>,
    visit: &mut dyn FnMut(&VertexSet, i64) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if current.len() == size {
        return visit(current, d);
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &u in &adj[w] {
            if u > root
                && !current.contains(u)
                && u != w
                && !next.contains(&u)
                && !adj[u].iter().any(|&z| current.contains(z))
            {
                next.push(u);
            }
        }
        let gain = added_weight(s, current, w);
        current.insert(w);
        let flow = extend(s, adj, root, size, current, d + s.vertex_weight() - gain, next, visit);
        current.remove(w);
        flow?;
    }
    ControlFlow::Continue(())
}

/// Total weight of instances through `w` whose other vertices lie in `set`.
pub(crate) fn added_weight(s: &FiniteStructure, set: &VertexSet, w: usize) -> i64 {
    s.incident(w)
        .iter()
        .filter(|&&(rel, k)| {
            s.instance(rel, k)
                .iter()
                .all(|&q| q as usize == w || set.contains(q as usize))
        })
        .map(|&(rel, _)| s.weight(rel as usize))
        .sum()
}

/// A connected set grown from a random vertex by adding random neighbours;
/// smaller than `size` when the component is.
pub(crate) fn random_connected(
    s: &FiniteStructure,
    adj: &[Vec<usize>],
    size: usize,
    rng: &mut ChaCha8Rng,
) -> VertexSet {
    let mut set = s.none();
    if s.is_empty() {
        return set;
    }
    let start = rng.gen_range(0..s.len());
    set.insert(start);
    let mut frontier: Vec<usize> = adj[start].clone();
    while set.len() < size {
        frontier.retain(|&w| !set.contains(w));
        frontier.sort_unstable();
        frontier.dedup();
        let Some(&w) = frontier.choose(rng) else { break };
        set.insert(w);
        frontier.extend(adj[w].iter().copied());
    }
    set
}

/// Length of a shortest cycle in the graph of binary relations, `None` for
/// a forest.
pub fn girth(s: &FiniteStructure) -> Option<usize> {
    shortest_cycle(s).map(|c| c.len())
}

/// Vertex positions of a shortest cycle, in cyclic order.
pub fn shortest_cycle(s: &FiniteStructure) -> Option<Vec<usize>> {
    let adj = s.adjacency();
    let mut best: Option<(usize, usize, usize, usize)> = None;
    for root in 0..s.len() {
        let (dist, parent) = bfs(&adj, root);
        for u in 0..s.len() {
            if dist[u] == usize::MAX {
                continue;
            }
            for &w in &adj[u] {
                if w < u || parent[w] == u || parent[u] == w {
                    continue;
                }
                let len = dist[u] + dist[w] + 1;
                if best.is_none_or(|b| len < b.0) {
                    best = Some((len, root, u, w));
                }
            }
        }
    }
    let (len, root, u, w) = best?;
    let (_, parent) = bfs(&adj, root);
    let up = |mut v: usize| {
        let mut path = vec![v];
        while v != root {
            v = parent[v];
            path.push(v);
        }
        path
    };
    let mut cycle = up(u);
    cycle.reverse();
    let back = up(w);
    cycle.extend(&back[..back.len() - 1]);
    debug_assert_eq!(cycle.len(), len);
    Some(cycle)
}

fn bfs(adj: &[Vec<usize>], root: usize) -> (Vec<usize>, Vec<usize>) {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut parent = vec![usize::MAX; adj.len()];
    dist[root] = 0;
    let mut q = VecDeque::from([root]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                q.push_back(w);
            }
        }
    }
    (dist, parent)
}

/// Membership in `K_n` for generalized `ngon`-gons, reading `s` with the
/// polygon weights `(ngon - 1, ngon - 2)`: no cycle shorter than `2 ngon`,
/// `∅ ≤ S`, and every set containing a cycle longer than `2 ngon` has
/// predimension at least `2 ngon + 2`.
pub fn in_kn(s: &FiniteStructure, ngon: u32, caps: &Caps) -> Result<Membership> {
    let sig = Signature::polygon(ngon)?;
    if s.signature().relations().len() != 1 || s.signature().relations()[0].arity != 2 {
        return input("polygon classes need a single binary relation");
    }
    let t = if s.signature() == &sig {
        s.clone()
    } else {
        s.with_signature(sig)?
    };
    debug_assert_eq!(t.signature().mode(), Mode::Bipartite);
    let two_n = 2 * ngon as usize;
    if let Some(cycle) = shortest_cycle(&t) {
        if cycle.len() < two_n {
            let len = cycle.len();
            return Ok(Membership::fail(
                VertexSet::from_positions(t.len(), cycle),
                None,
                format!("cycle of length {len} < {two_n}"),
            ));
        }
    }
    let c0 = in_c0(&t);
    if c0.verdict == Verdict::Fail {
        return Ok(c0);
    }
    let bound = two_n as i64 + 2;
    let mut failure = None;
    let mut least: Option<i64> = None;
    let mut count = 0usize;
    let complete = simple_cycles(&t, caps.connected_budget, &mut |cycle| {
        count += 1;
        if cycle.len() <= two_n {
            return ControlFlow::Continue(());
        }
        let c = VertexSet::from_positions(t.len(), cycle.iter().copied());
        let m = flow::minimize(&t, &c, &t.all());
        least = Some(least.map_or(m.min_delta, |l: i64| l.min(m.min_delta)));
        if m.min_delta < bound {
            failure = Some((m.smallest, cycle.len(), m.min_delta));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let margin = least.map(|l| BigRational::from_integer((l - bound).into()));
    if let Some((w, len, d)) = failure {
        return Ok(Membership::fail(
            w,
            margin,
            format!("set containing a {len}-cycle has delta {d} < {bound}"),
        ));
    }
    Ok(Membership {
        verdict: if complete { Verdict::Pass } else { Verdict::Partial },
        witness: None,
        margin,
        note: if complete {
            format!("{count} cycles examined")
        } else {
            format!("cycle enumeration stopped after {count} cycles")
        },
    })
}

/// Visits every simple cycle (as positions in cyclic order) of the graph of
/// binary relations once. Returns false if `budget` cycles were reached.
pub(crate) fn simple_cycles(
    s: &FiniteStructure,
    budget: usize,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> bool {
    let adj = s.adjacency();
    let mut seen = 0usize;
    let mut on_path = vec![false; s.len()];
    let mut path = Vec::new();
    fn walk(
        adj: &[Vec<usize>],
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        seen: &mut usize,
        budget: usize,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<bool> {
        let u = *path.last().expect("non-empty path");
        for &w in &adj[u] {
            if w == start && path.len() >= 3 && path[1] < u {
                *seen += 1;
                if visit(path).is_break() {
                    return ControlFlow::Break(true);
                }
                if *seen >= budget {
                    return ControlFlow::Break(false);
                }
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                let r = walk(adj, start, path, on_path, seen, budget, visit);
                path.pop();
                on_path[w] = false;
                r?;
            }
        }
        ControlFlow::Continue(())
    }
    for start in 0..s.len() {
        path.clear();
        path.push(start);
        on_path[start] = true;
        let r = walk(&adj, start, &mut path, &mut on_path, &mut seen, budget, visit);
        on_path[start] = false;
        if let ControlFlow::Break(done) = r {
            return done;
        }
    }
    true
}
