//! Embeddings of a small pattern into an ambient structure.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::closure::cld;
use crate::error::{check_cap, input, Result};
use crate::predim::is_self_sufficient;
use crate::structure::FiniteStructure;
use crate::vertex_set::VertexSet;

/// Which images an embedding search keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EmbedMode {
    /// Every embedding.
    Any,
    /// Images self-sufficient in the ambient.
    Le,
    /// Images d-closed in the ambient.
    LeD,
}

/// An embedding as the ambient position of each pattern position.
pub type Embedding = Vec<usize>;

struct Search<'a> {
    s: &'a FiniteStructure,
    p: &'a FiniteStructure,
    s_tuples: HashSet<(u32, Vec<u32>)>,
    p_tuples: HashSet<(u32, Vec<u32>)>,
    order: Vec<usize>,
    map: Vec<usize>,
    inverse: Vec<usize>,
    limit: usize,
    out: Vec<Embedding>,
}

fn tuples(s: &FiniteStructure) -> HashSet<(u32, Vec<u32>)> {
    (0..s.signature().relations().len())
        .flat_map(|rel| s.instances(rel).iter().map(move |t| (rel as u32, t.clone())))
        .collect()
}

const FREE: usize = usize::MAX;

impl Search<'_> {
    fn fits(&self, q: usize, v: usize) -> bool {
        if self.inverse[v] != FREE
            || self.s.part(v) != self.p.part(q)
            || self.s.incident(v).len() < self.p.incident(q).len()
        {
            return false;
        }
        // pattern instances through q with every vertex placed
        for &(rel, k) in self.p.incident(q) {
            let t = self.p.instance(rel, k);
            if t.iter().all(|&x| x as usize == q || self.map[x as usize] != FREE) {
                let mut img: Vec<u32> = t
                    .iter()
                    .map(|&x| {
                        if x as usize == q {
                            v as u32
                        } else {
                            self.map[x as usize] as u32
                        }
                    })
                    .collect();
                img.sort_unstable();
                if !self.s_tuples.contains(&(rel, img)) {
                    return false;
                }
            }
        }
        // ambient instances through v inside the image must come from the pattern
        for &(rel, k) in self.s.incident(v) {
            let t = self.s.instance(rel, k);
            if t.iter().all(|&y| y as usize == v || self.inverse[y as usize] != FREE) {
                let mut pre: Vec<u32> = t
                    .iter()
                    .map(|&y| {
                        if y as usize == v {
                            q as u32
                        } else {
                            self.inverse[y as usize] as u32
                        }
                    })
                    .collect();
                pre.sort_unstable();
                if !self.p_tuples.contains(&(rel, pre)) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            self.out.push(self.map.clone());
            return self.out.len() < self.limit;
        }
        let q = self.order[depth];
        if self.map[q] != FREE {
            return self.run(depth + 1);
        }
        // candidates: neighbours of an already placed neighbour, else all
        let anchor = self.p.neighbours(q).into_iter().find(|&x| self.map[x] != FREE);
        let candidates: Vec<usize> = match anchor {
            Some(x) => self.s.neighbours(self.map[x]),
            None => (0..self.s.len()).collect(),
        };
        for v in candidates {
            if self.fits(q, v) {
                self.map[q] = v;
                self.inverse[v] = q;
                let go = self.run(depth + 1);
                self.map[q] = FREE;
                self.inverse[v] = FREE;
                if !go {
                    return false;
                }
            }
        }
        true
    }
}

/// Induced embeddings of `pattern` into `s` extending `fixed` (pairs of
/// pattern position, ambient position), at most `limit` of them, in
/// lexicographic order of the image sequence.
pub fn embeddings(
    s: &FiniteStructure,
    pattern: &FiniteStructure,
    fixed: &[(usize, usize)],
    limit: usize,
) -> Result<Vec<Embedding>> {
    if s.signature() != pattern.signature() {
        return input("pattern and ambient need the same signature");
    }
    let mut map = vec![FREE; pattern.len()];
    let mut inverse = vec![FREE; s.len()];
    for &(q, v) in fixed {
        if q >= pattern.len() || v >= s.len() || map[q] != FREE || inverse[v] != FREE {
            return input("fixed pairs are not an injective partial map");
        }
        map[q] = v;
        inverse[v] = q;
    }
    // breadth-first order from each unfixed component root keeps anchors available
    let mut order: Vec<usize> = Vec::new();
    let mut seen = vec![false; pattern.len()];
    let mut starts: Vec<usize> = (0..pattern.len()).filter(|&q| map[q] != FREE).collect();
    starts.extend((0..pattern.len()).filter(|&q| map[q] == FREE));
    for start in starts {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for x in pattern.neighbours(q) {
                if !seen[x] {
                    seen[x] = true;
                    queue.push_back(x);
                }
            }
        }
    }
    let mut search = Search {
        s,
        p: pattern,
        s_tuples: tuples(s),
        p_tuples: tuples(pattern),
        order,
        map: map.clone(),
        inverse,
        limit: limit.max(1),
        out: Vec::new(),
    };
    // fixed pairs must already be consistent
    for &(q, v) in fixed {
        search.map[q] = FREE;
        search.inverse[v] = FREE;
        if !search.fits(q, v) {
            return Ok(Vec::new());
        }
        search.map[q] = v;
        search.inverse[v] = q;
    }
    if limit > 0 {
        search.run(0);
    }
    let mut out = search.out;
    out.sort();
    Ok(out)
}

/// The image of an embedding as a vertex set.
pub fn image(s: &FiniteStructure, e: &Embedding) -> VertexSet {
    VertexSet::from_positions(s.len(), e.iter().copied())
}

/// Whether the image of `e` is kept under `mode`.
pub fn image_accepted(s: &FiniteStructure, e: &Embedding, mode: EmbedMode) -> Result<bool> {
    let img = image(s, e);
    Ok(match mode {
        EmbedMode::Any => true,
        EmbedMode::Le => is_self_sufficient(s, &img, &s.all())?.holds,
        EmbedMode::LeD => cld(s, &img)? == img,
    })
}

/// All embeddings of `pattern` into `s` whose image is kept under `mode`,
/// in lexicographic order; `cap` bounds the pattern size.
pub fn find_sese_embeddings(
    s: &FiniteStructure,
    pattern: &FiniteStructure,
    mode: EmbedMode,
    cap: usize,
) -> Result<Vec<Embedding>> {
    check_cap("embedding search (pattern vertices)", pattern.len(), cap)?;
    if pattern.len() > s.len() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for e in embeddings(s, pattern, &[], usize::MAX)? {
        if image_accepted(s, &e, mode)? {
            out.push(e);
        }
    }
    Ok(out)
}
