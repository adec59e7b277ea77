use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::vertex_set::VertexSet;

/// Whether vertices carry a point/line label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    Hypergraph,
    Bipartite,
}

/// Part label of a vertex in bipartite mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Part {
    Point,
    Line,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationSpec {
    pub name: String,
    pub arity: usize,
    pub weight: u32,
}

/// Relation symbols with arities and weights, plus the vertex weight.
///
/// The predimension of a finite set `X` is
/// `vertex_weight * |X| - sum_i weight_i * |R_i[X]|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    vertex_weight: u32,
    relations: Vec<RelationSpec>,
    mode: Mode,
}

impl Signature {
    pub fn new(vertex_weight: u32, relations: Vec<RelationSpec>, mode: Mode) -> Result<Self> {
        if vertex_weight == 0 {
            return input("vertex weight must be positive");
        }
        if relations.is_empty() {
            return input("signature needs at least one relation");
        }
        let mut names = BTreeSet::new();
        for r in &relations {
            if r.arity < 2 {
                return input(format!("relation {} has arity {} < 2", r.name, r.arity));
            }
            if !names.insert(r.name.as_str()) {
                return input(format!("duplicate relation name {}", r.name));
            }
            if r.name.is_empty() || !r.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return input(format!("bad relation name {:?}", r.name));
            }
        }
        if mode == Mode::Bipartite && (relations.len() != 1 || relations[0].arity != 2) {
            return input("bipartite mode needs exactly one binary relation");
        }
        Ok(Signature {
            vertex_weight,
            relations,
            mode,
        })
    }

    /// One symmetric `r`-ary relation `R` with weight `m` and vertex weight `n`.
    pub fn single(n: u32, m: u32, r: usize) -> Result<Self> {
        Signature::new(
            n,
            vec![RelationSpec {
                name: "R".into(),
                arity: r,
                weight: m,
            }],
            Mode::Hypergraph,
        )
    }

    /// Incidence graphs for generalized `ngon`-gons: weights `(ngon-1, ngon-2)`.
    pub fn polygon(ngon: u32) -> Result<Self> {
        if ngon < 3 {
            return input(format!("polygon class needs n >= 3, got {ngon}"));
        }
        Signature::new(
            ngon - 1,
            vec![RelationSpec {
                name: "R".into(),
                arity: 2,
                weight: ngon - 2,
            }],
            Mode::Bipartite,
        )
    }

    pub fn vertex_weight(&self) -> u32 {
        self.vertex_weight
    }

    pub fn relations(&self) -> &[RelationSpec] {
        &self.relations
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    /// `gcd(n, m_i) == 1` for every non-zero weight. Metadata only.
    pub fn is_coprime(&self) -> bool {
        self.relations
            .iter()
            .all(|r| r.weight == 0 || num_integer::gcd(self.vertex_weight, r.weight) == 1)
    }
}

/// A finite structure: sorted vertex ids, and per relation a sorted set of
/// instances, each a sorted tuple of distinct vertex positions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteStructure {
    signature: Signature,
    ids: Vec<u32>,
    instances: Vec<Vec<Vec<u32>>>,
    parts: Option<Vec<Part>>,
    incidence: Vec<Vec<(u32, u32)>>,
}

impl FiniteStructure {
    /// Builds a structure from ids. Instance tuples are sorted and duplicate
    /// instances are merged.
    pub fn new(
        signature: Signature,
        ids: impl IntoIterator<Item = u32>,
        instances: impl IntoIterator<Item = (usize, Vec<u32>)>,
        parts: Option<Vec<(u32, Part)>>,
    ) -> Result<Self> {
        Self::build(signature, ids, instances, parts, false)
    }

    /// As [`FiniteStructure::new`] but duplicate instances and repeated ids
    /// are errors.
    pub fn new_strict(
        signature: Signature,
        ids: impl IntoIterator<Item = u32>,
        instances: impl IntoIterator<Item = (usize, Vec<u32>)>,
        parts: Option<Vec<(u32, Part)>>,
    ) -> Result<Self> {
        Self::build(signature, ids, instances, parts, true)
    }

    fn build(
        signature: Signature,
        ids: impl IntoIterator<Item = u32>,
        instances: impl IntoIterator<Item = (usize, Vec<u32>)>,
        parts: Option<Vec<(u32, Part)>>,
        strict: bool,
    ) -> Result<Self> {
        let mut ids: Vec<u32> = ids.into_iter().collect();
        let before = ids.len();
        ids.sort_unstable();
        ids.dedup();
        if strict && ids.len() != before {
            return input("repeated vertex id");
        }
        let pos_of = |id: u32| ids.binary_search(&id).ok();

        let parts = match (signature.mode(), parts) {
            (Mode::Hypergraph, None) => None,
            (Mode::Hypergraph, Some(_)) => return input("part labels need bipartite mode"),
            (Mode::Bipartite, None) => return input("bipartite mode needs part labels"),
            (Mode::Bipartite, Some(list)) => {
                let mut labels: Vec<Option<Part>> = vec![None; ids.len()];
                for (id, part) in list {
                    let p = pos_of(id).ok_or_else(|| Error::Input(format!("label for unknown vertex {id}")))?;
                    if labels[p].is_some_and(|old| old != part) || (strict && labels[p].is_some()) {
                        return input(format!("vertex {id} labelled twice"));
                    }
                    labels[p] = Some(part);
                }
                let mut out = Vec::with_capacity(ids.len());
                for (p, l) in labels.into_iter().enumerate() {
                    out.push(l.ok_or_else(|| Error::Input(format!("vertex {} has no part label", ids[p])))?);
                }
                Some(out)
            }
        };

        let mut sets: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); signature.relations().len()];
        for (rel, tuple) in instances {
            let spec = signature
                .relations()
                .get(rel)
                .ok_or_else(|| Error::Input(format!("relation index {rel} out of range")))?;
            if tuple.len() != spec.arity {
                return input(format!(
                    "instance {:?} of {} has {} entries, arity is {}",
                    tuple,
                    spec.name,
                    tuple.len(),
                    spec.arity
                ));
            }
            let mut positions = Vec::with_capacity(tuple.len());
            for &id in &tuple {
                positions.push(
                    pos_of(id).ok_or_else(|| Error::Input(format!("instance {tuple:?} uses unknown vertex {id}")))?
                        as u32,
                );
            }
            positions.sort_unstable();
            if positions.windows(2).any(|w| w[0] == w[1]) {
                return input(format!("instance {tuple:?} repeats a vertex"));
            }
            if let Some(labels) = &parts {
                if labels[positions[0] as usize] == labels[positions[1] as usize] {
                    return input(format!("instance {tuple:?} joins two vertices of the same part"));
                }
            }
            if !sets[rel].insert(positions) && strict {
                return input(format!("duplicate instance {tuple:?} of {}", spec.name));
            }
        }
        let instances: Vec<Vec<Vec<u32>>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let mut incidence = vec![Vec::new(); ids.len()];
        for (rel, list) in instances.iter().enumerate() {
            for (k, inst) in list.iter().enumerate() {
                for &p in inst {
                    incidence[p as usize].push((rel as u32, k as u32));
                }
            }
        }
        Ok(FiniteStructure {
            signature,
            ids,
            instances,
            parts,
            incidence,
        })
    }

    /// Graph on ids `0..order` for the single-relation signature `(n, m, 2)`.
    pub fn graph(n: u32, m: u32, order: u32, edges: &[(u32, u32)]) -> Result<Self> {
        Self::new(
            Signature::single(n, m, 2)?,
            0..order,
            edges.iter().map(|&(a, b)| (0, vec![a, b])),
            None,
        )
    }

    /// `r`-uniform hypergraph on ids `0..order` for signature `(n, m, r)`.
    pub fn hypergraph(n: u32, m: u32, r: usize, order: u32, edges: &[Vec<u32>]) -> Result<Self> {
        Self::new(
            Signature::single(n, m, r)?,
            0..order,
            edges.iter().map(|e| (0, e.clone())),
            None,
        )
    }

    pub fn empty(signature: Signature) -> Self {
        let parts = (signature.mode() == Mode::Bipartite).then(Vec::new);
        Self::new(signature, [], [], parts).expect("empty structure is valid")
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn id(&self, pos: usize) -> u32 {
        self.ids[pos]
    }

    pub fn pos(&self, id: u32) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn next_free_id(&self) -> u32 {
        self.ids.last().map_or(0, |&m| m + 1)
    }

    pub fn part(&self, pos: usize) -> Option<Part> {
        self.parts.as_ref().map(|p| p[pos])
    }

    pub fn parts(&self) -> Option<&[Part]> {
        self.parts.as_deref()
    }

    /// Instances of relation `rel`, as sorted position tuples.
    pub fn instances(&self, rel: usize) -> &[Vec<u32>] {
        &self.instances[rel]
    }

    pub fn instance_count(&self) -> usize {
        self.instances.iter().map(Vec::len).sum()
    }

    /// `(relation, instance index)` pairs containing `pos`.
    pub fn incident(&self, pos: usize) -> &[(u32, u32)] {
        &self.incidence[pos]
    }

    pub fn instance(&self, rel: u32, k: u32) -> &[u32] {
        &self.instances[rel as usize][k as usize]
    }

    pub fn weight(&self, rel: usize) -> i64 {
        self.signature.relations()[rel].weight as i64
    }

    pub fn vertex_weight(&self) -> i64 {
        self.signature.vertex_weight() as i64
    }

    /// Instances of relation `rel` translated to ids.
    pub fn instance_ids(&self, rel: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.instances[rel]
            .iter()
            .map(move |inst| inst.iter().map(|&p| self.ids[p as usize]).collect())
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn none(&self) -> VertexSet {
        VertexSet::empty(self.len())
    }

    pub fn set_of(&self, ids: &[u32]) -> Result<VertexSet> {
        let mut s = self.none();
        for &id in ids {
            let p = self
                .pos(id)
                .ok_or_else(|| Error::Input(format!("vertex id {id} is not in the structure")))?;
            s.insert(p);
        }
        Ok(s)
    }

    pub fn ids_of(&self, set: &VertexSet) -> Vec<u32> {
        set.iter().map(|p| self.ids[p]).collect()
    }

    pub(crate) fn check_set(&self, set: &VertexSet) -> Result<()> {
        if set.universe() != self.len() {
            return input(format!(
                "vertex set over {} positions used with a structure of {} vertices",
                set.universe(),
                self.len()
            ));
        }
        Ok(())
    }

    /// Iterates over `(relation, instance)` pairs lying entirely inside `set`.
    pub fn instances_inside<'a>(&'a self, set: &'a VertexSet) -> impl Iterator<Item = (usize, &'a [u32])> + 'a {
        set.iter().flat_map(move |p| {
            self.incidence[p].iter().filter_map(move |&(rel, k)| {
                let inst = &self.instances[rel as usize][k as usize];
                (inst[0] as usize == p && inst.iter().all(|&q| set.contains(q as usize)))
                    .then_some((rel as usize, inst.as_slice()))
            })
        })
    }

    /// Predimension of `set`.
    pub fn delta(&self, set: &VertexSet) -> i64 {
        debug_assert_eq!(set.universe(), self.len());
        let mut d = self.vertex_weight() * set.len() as i64;
        for (rel, _) in self.instances_inside(set) {
            d -= self.weight(rel);
        }
        d
    }

    /// Relative predimension `delta(A ∪ B) - delta(B)`.
    pub fn delta_rel(&self, a: &VertexSet, b: &VertexSet) -> i64 {
        self.delta(&a.union(b)) - self.delta(b)
    }

    /// Substructure induced on `set`, keeping vertex ids.
    pub fn induced(&self, set: &VertexSet) -> FiniteStructure {
        let ids: Vec<u32> = self.ids_of(set);
        let instances: Vec<(usize, Vec<u32>)> = self
            .instances_inside(set)
            .map(|(rel, inst)| (rel, inst.iter().map(|&p| self.ids[p as usize]).collect()))
            .collect();
        let parts = self
            .parts
            .as_ref()
            .map(|labels| set.iter().map(|p| (self.ids[p], labels[p])).collect());
        FiniteStructure::new(self.signature.clone(), ids, instances, parts).expect("induced substructure is valid")
    }

    /// The same vertices and instances read under another signature with
    /// the same relation arities.
    pub fn with_signature(&self, signature: Signature) -> Result<FiniteStructure> {
        if signature.relations().len() != self.signature.relations().len()
            || signature
                .relations()
                .iter()
                .zip(self.signature.relations())
                .any(|(a, b)| a.arity != b.arity)
        {
            return input("signatures differ in relation arities");
        }
        let parts = match signature.mode() {
            Mode::Hypergraph => None,
            Mode::Bipartite => Some(match &self.parts {
                Some(p) => self.ids.iter().copied().zip(p.iter().copied()).collect(),
                None => self.two_colouring()?.into_iter().collect(),
            }),
        };
        FiniteStructure::new(signature, self.ids.clone(), self.id_instances(), parts)
    }

    /// Every instance as `(relation, ids)`.
    pub fn id_instances(&self) -> Vec<(usize, Vec<u32>)> {
        (0..self.instances.len())
            .flat_map(|rel| self.instance_ids(rel).map(move |t| (rel, t)))
            .collect()
    }

    /// Point/line labelling of a graph, if one exists (first vertex of each
    /// component is a point).
    pub fn two_colouring(&self) -> Result<Vec<(u32, Part)>> {
        let adj = self.adjacency();
        let mut colour: Vec<Option<Part>> = vec![None; self.len()];
        for start in 0..self.len() {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(Part::Point);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let other = match colour[v] {
                    Some(Part::Point) => Part::Line,
                    _ => Part::Point,
                };
                for &w in &adj[v] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(other);
                            stack.push(w);
                        }
                        Some(c) if c != other => return input("graph is not bipartite"),
                        _ => {}
                    }
                }
            }
        }
        Ok(self
            .ids
            .iter()
            .zip(colour)
            .map(|(&id, c)| (id, c.expect("coloured")))
            .collect())
    }

    /// Neighbour lists (positions) over all binary relations.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (rel, spec) in self.signature.relations().iter().enumerate() {
            if spec.arity != 2 {
                continue;
            }
            for inst in &self.instances[rel] {
                let (a, b) = (inst[0] as usize, inst[1] as usize);
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Vertices sharing an instance with `pos` (any relation).
    pub fn neighbours(&self, pos: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.incidence[pos]
            .iter()
            .flat_map(|&(rel, k)| self.instances[rel as usize][k as usize].iter().map(|&q| q as usize))
            .filter(|&q| q != pos)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Adds fresh vertices and instances, returning the extended structure.
    pub fn extended(
        &self,
        new_ids: &[u32],
        new_parts: &[(u32, Part)],
        new_instances: &[(usize, Vec<u32>)],
    ) -> Result<FiniteStructure> {
        for id in new_ids {
            if self.pos(*id).is_some() {
                return input(format!("vertex {id} already present"));
            }
        }
        let mut instances = self.id_instances();
        instances.extend(new_instances.iter().cloned());
        let parts = self.parts.as_ref().map(|labels| {
            let mut v: Vec<(u32, Part)> = self.ids.iter().copied().zip(labels.iter().copied()).collect();
            v.extend_from_slice(new_parts);
            v
        });
        FiniteStructure::new(
            self.signature.clone(),
            self.ids.iter().copied().chain(new_ids.iter().copied()),
            instances,
            parts,
        )
    }

    /// Removes one instance (given by ids); used for fault injection.
    pub fn without_instance(&self, rel: usize, tuple: &[u32]) -> Result<FiniteStructure> {
        let mut key = tuple.to_vec();
        key.sort_unstable();
        let mut found = false;
        let instances: Vec<(usize, Vec<u32>)> = self
            .id_instances()
            .into_iter()
            .filter(|(r, t)| {
                let hit = *r == rel && *t == key;
                found |= hit;
                !hit
            })
            .collect();
        if !found {
            return input(format!("no instance {tuple:?} to remove"));
        }
        let parts = self.labelled_parts();
        FiniteStructure::new(self.signature.clone(), self.ids.clone(), instances, parts)
    }

    pub(crate) fn labelled_parts(&self) -> Option<Vec<(u32, Part)>> {
        self.parts
            .as_ref()
            .map(|labels| self.ids.iter().copied().zip(labels.iter().copied()).collect())
    }

    /// Renames vertices through `map` (must be injective on the vertex ids).
    pub fn relabelled(&self, map: &BTreeMap<u32, u32>) -> Result<FiniteStructure> {
        let get = |id: u32| {
            map.get(&id)
                .copied()
                .ok_or_else(|| Error::Input(format!("no image for {id}")))
        };
        let ids: Vec<u32> = self.ids.iter().map(|&i| get(i)).collect::<Result<_>>()?;
        let distinct: BTreeSet<u32> = ids.iter().copied().collect();
        if distinct.len() != ids.len() {
            return input("relabelling is not injective");
        }
        let instances = self
            .id_instances()
            .into_iter()
            .map(|(r, t)| Ok((r, t.into_iter().map(get).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<Vec<_>>>()?;
        let parts = self
            .labelled_parts()
            .map(|v| v.into_iter().map(|(i, p)| Ok((get(i)?, p))).collect::<Result<Vec<_>>>())
            .transpose()?;
        FiniteStructure::new(self.signature.clone(), ids, instances, parts)
    }
}

impl fmt::Debug for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("FiniteStructure");
        d.field("ids", &self.ids);
        for (rel, spec) in self.signature.relations().iter().enumerate() {
            let list: Vec<Vec<u32>> = self.instance_ids(rel).collect();
            d.field(&spec.name, &list);
        }
        d.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(order: u32) -> FiniteStructure {
        let edges: Vec<(u32, u32)> = (1..order).map(|i| (i - 1, i)).collect();
        FiniteStructure::graph(2, 1, order, &edges).unwrap()
    }

    #[test]
    fn delta_examples() {
        let single = FiniteStructure::graph(2, 1, 1, &[]).unwrap();
        assert_eq!(single.delta(&single.all()), 2);
        assert_eq!(single.delta(&single.none()), 0);
        let p4 = path(4);
        assert_eq!(p4.delta(&p4.all()), 5);
    }

    #[test]
    fn delta_rel_examples() {
        // y = 0, z1 = 1, z2 = 2
        let s = FiniteStructure::graph(2, 1, 3, &[(0, 1), (0, 2)]).unwrap();
        let y = s.set_of(&[0]).unwrap();
        let z = s.set_of(&[1, 2]).unwrap();
        assert_eq!(s.delta_rel(&y, &z), 0);
        assert_eq!(s.delta_rel(&z, &z), 0);
        let t = FiniteStructure::graph(2, 1, 2, &[(0, 1)]).unwrap();
        assert_eq!(t.delta_rel(&t.set_of(&[0]).unwrap(), &t.set_of(&[1]).unwrap()), 1);
    }

    #[test]
    fn multi_relation_predimension() {
        let sig = Signature::new(
            3,
            vec![
                RelationSpec {
                    name: "E".into(),
                    arity: 2,
                    weight: 1,
                },
                RelationSpec {
                    name: "T".into(),
                    arity: 3,
                    weight: 2,
                },
            ],
            Mode::Hypergraph,
        )
        .unwrap();
        let s = FiniteStructure::new(sig, 0..3, [(0, vec![0, 1]), (1, vec![2, 1, 0])], None).unwrap();
        assert_eq!(s.delta(&s.all()), 9 - 1 - 2);
        assert_eq!(s.delta(&s.set_of(&[0, 1]).unwrap()), 5);
    }

    #[test]
    fn unknown_vertex_is_input_error() {
        let s = path(3);
        assert!(matches!(s.set_of(&[7]), Err(Error::Input(_))));
        assert!(FiniteStructure::graph(2, 1, 2, &[(0, 5)]).is_err());
    }

    #[test]
    fn loader_rules() {
        let sig = Signature::single(2, 1, 2).unwrap();
        assert!(FiniteStructure::new(sig.clone(), 0..2, [(0, vec![1, 1])], None).is_err());
        let dup = [(0, vec![0, 1]), (0, vec![1, 0])];
        assert_eq!(
            FiniteStructure::new(sig.clone(), 0..2, dup.clone(), None)
                .unwrap()
                .instance_count(),
            1
        );
        assert!(FiniteStructure::new_strict(sig, 0..2, dup, None).is_err());
        let bip = Signature::polygon(3).unwrap();
        let parts = vec![(0, Part::Point), (1, Part::Point)];
        assert!(FiniteStructure::new(bip, 0..2, [(0, vec![0, 1])], Some(parts)).is_err());
    }

    #[test]
    fn signature_invariants() {
        assert!(Signature::single(0, 1, 2).is_err());
        assert!(Signature::single(2, 1, 1).is_err());
        assert!(Signature::new(1, vec![], Mode::Hypergraph).is_err());
        let dup = vec![
            RelationSpec {
                name: "R".into(),
                arity: 2,
                weight: 1,
            },
            RelationSpec {
                name: "R".into(),
                arity: 3,
                weight: 1,
            },
        ];
        assert!(Signature::new(1, dup, Mode::Hypergraph).is_err());
        assert!(Signature::single(4, 2, 2).is_ok_and(|s| !s.is_coprime()));
    }

    #[test]
    fn two_colouring_detects_odd_cycle() {
        let tri = FiniteStructure::graph(2, 1, 3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(tri.two_colouring().is_err());
        let p = path(4);
        let lab = p.with_signature(Signature::polygon(3).unwrap()).unwrap();
        assert_eq!(lab.part(0), Some(Part::Point));
        assert_eq!(lab.part(1), Some(Part::Line));
    }
}
