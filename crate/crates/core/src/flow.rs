//! Exact predimension minimization by minimum cut.
//!
//! Minimizing `delta(Y)` over `required ⊆ Y ⊆ allowed` is a maximum-weight
//! closure problem: each relation instance inside `allowed` pays its weight
//! when all of its vertices are chosen, each optional vertex costs the vertex
//! weight. The minimizers form a lattice; the residual graph of a maximum
//! flow yields both its bottom and its top element.

use std::collections::VecDeque;

use crate::structure::FiniteStructure;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Minimizers {
    pub min_delta: i64,
    /// Smallest minimizing set.
    pub smallest: VertexSet,
    /// Largest minimizing set.
    pub largest: VertexSet,
}

struct Edge {
    to: usize,
    cap: i64,
}

struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

const INF: i64 = i64::MAX / 4;

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: i64) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge { to: from, cap: 0 });
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<u32>> {
        let mut level = vec![u32::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let Edge { to, cap } = self.edges[e];
                if cap > 0 && level[to] == u32::MAX {
                    level[to] = level[u] + 1;
                    queue.push_back(to);
                }
            }
        }
        (level[t] != u32::MAX).then_some(level)
    }

    fn push(&mut self, u: usize, t: usize, limit: i64, level: &[u32], next: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let e = self.adj[u][next[u]];
            let Edge { to, cap } = self.edges[e];
            if cap > 0 && level[to] == level[u] + 1 {
                let got = self.push(to, t, limit.min(cap), level, next);
                if got > 0 {
                    self.edges[e].cap -= got;
                    self.edges[e ^ 1].cap += got;
                    return got;
                }
            }
            next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while let Some(level) = self.levels(s, t) {
            let mut next = vec![0; self.adj.len()];
            loop {
                let f = self.push(s, t, INF, &level, &mut next);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }

    fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let Edge { to, cap } = self.edges[e];
                if cap > 0 && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        seen
    }

    fn reaching(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[t] = true;
        let mut stack = vec![t];
        while let Some(v) = stack.pop() {
            // residual edge u -> v is the twin of an edge v -> u
            for &e in &self.adj[v] {
                let u = self.edges[e].to;
                if self.edges[e ^ 1].cap > 0 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}

/// Minimizes `delta(Y)` over `required ⊆ Y ⊆ allowed`.
pub(crate) fn minimize(s: &FiniteStructure, required: &VertexSet, allowed: &VertexSet) -> Minimizers {
    debug_assert!(required.is_subset(allowed));
    let n = s.vertex_weight();
    let free: Vec<usize> = allowed.difference(required).to_vec();
    let mut node_of = vec![usize::MAX; s.len()];
    for (k, &p) in free.iter().enumerate() {
        node_of[p] = 2 + k;
    }
    let mut fixed_weight = 0i64;
    let mut optional: Vec<(i64, Vec<usize>)> = Vec::new();
    for (rel, inst) in s.instances_inside(allowed) {
        let w = s.weight(rel);
        if w == 0 {
            continue;
        }
        let outside: Vec<usize> = inst
            .iter()
            .map(|&p| p as usize)
            .filter(|&p| !required.contains(p))
            .collect();
        if outside.is_empty() {
            fixed_weight += w;
        } else {
            optional.push((w, outside));
        }
    }
    let base = 2 + free.len();
    let mut net = Network::new(base + optional.len());
    let mut total = 0;
    for (k, (w, verts)) in optional.iter().enumerate() {
        net.add(0, base + k, *w);
        total += w;
        for &p in verts {
            net.add(base + k, node_of[p], INF);
        }
    }
    for k in 0..free.len() {
        net.add(2 + k, 1, n);
    }
    let cut = net.max_flow(0, 1);
    let min_delta = n * required.len() as i64 - fixed_weight - (total - cut);

    let from_s = net.reachable_from(0);
    let to_t = net.reaching(1);
    let mut smallest = required.clone();
    let mut largest = required.clone();
    for (k, &p) in free.iter().enumerate() {
        if from_s[2 + k] {
            smallest.insert(p);
        }
        if !to_t[2 + k] {
            largest.insert(p);
        }
    }
    debug_assert_eq!(s.delta(&smallest), min_delta);
    debug_assert_eq!(s.delta(&largest), min_delta);
    Minimizers {
        min_delta,
        smallest,
        largest,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(s: &FiniteStructure, required: &VertexSet, allowed: &VertexSet) -> (i64, Vec<VertexSet>) {
        let free = allowed.difference(required).to_vec();
        let mut best = i64::MAX;
        let mut sets = Vec::new();
        for mask in 0u64..1 << free.len() {
            let y = required.union(&VertexSet::from_mask(s.len(), &free, mask));
            let d = s.delta(&y);
            if d < best {
                best = d;
                sets.clear();
            }
            if d == best {
                sets.push(y);
            }
        }
        (best, sets)
    }

    fn arb_structure() -> impl Strategy<Value = (FiniteStructure, u64, u64)> {
        (1u32..4, 1u32..4, 2usize..4, 1u32..9).prop_flat_map(|(n, m, r, order)| {
            let edge = proptest::collection::vec(0..order, r);
            (
                Just((n, m, r, order)),
                proptest::collection::vec(edge, 0..14),
                any::<u64>(),
                any::<u64>(),
            )
                .prop_map(|((n, m, r, order), edges, a, b)| {
                    let edges: Vec<Vec<u32>> = edges
                        .into_iter()
                        .filter(|e| {
                            let mut s = e.clone();
                            s.sort();
                            s.dedup();
                            s.len() == e.len()
                        })
                        .collect();
                    (FiniteStructure::hypergraph(n, m, r, order, &edges).unwrap(), a, b)
                })
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force((s, a, b) in arb_structure()) {
            let frame: Vec<usize> = (0..s.len()).collect();
            let allowed = VertexSet::from_mask(s.len(), &frame, a | b);
            let required = VertexSet::from_mask(s.len(), &frame, a);
            let got = minimize(&s, &required, &allowed);
            let (best, sets) = brute(&s, &required, &allowed);
            prop_assert_eq!(got.min_delta, best);
            for y in &sets {
                prop_assert!(got.smallest.is_subset(y));
                prop_assert!(y.is_subset(&got.largest));
            }
            prop_assert!(sets.contains(&got.smallest));
            prop_assert!(sets.contains(&got.largest));
        }
    }
}
