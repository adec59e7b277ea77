//! Intrinsic closure, dimension and d-closure inside a finite ambient
//! structure. All values are ambient-relative.

use crate::error::{check_cap, Error, Result};
use crate::flow;
use crate::predim::SubsetScan;
use crate::structure::FiniteStructure;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub closure: VertexSet,
    /// `delta(closure)`, which is the dimension of the input set.
    pub dimension: i64,
    /// Vertices absorbed at each step.
    pub trace: Vec<VertexSet>,
}

/// Checks `∅ ≤ S`, returning the least-predimension violator otherwise.
pub(crate) fn c0_violation(s: &FiniteStructure) -> Option<VertexSet> {
    let m = flow::minimize(s, &s.none(), &s.all());
    (m.min_delta < 0).then_some(m.smallest)
}

fn require_c0(s: &FiniteStructure, x: &VertexSet) -> Result<()> {
    s.check_set(x)?;
    if let Some(w) = c0_violation(s) {
        return Err(Error::Contract(format!(
            "ambient structure is not in C0: delta{:?} < 0",
            s.ids_of(&w)
        )));
    }
    Ok(())
}

/// Smallest `Y ⊇ X` with `Y ≤ S`, by absorbing a violating superset of
/// least predimension (ties: fewest vertices) until none is left.
pub fn cl0(s: &FiniteStructure, x: &VertexSet) -> Result<ClosureResult> {
    require_c0(s, x)?;
    let all = s.all();
    let mut y = x.clone();
    let mut trace = Vec::new();
    loop {
        let m = flow::minimize(s, &y, &all);
        if m.min_delta >= s.delta(&y) {
            break;
        }
        trace.push(m.smallest.difference(&y));
        y = m.smallest;
    }
    Ok(ClosureResult {
        dimension: s.delta(&y),
        closure: y,
        trace,
    })
}

/// `d(X) = min { delta(Y) : X ⊆ Y ⊆ S }`.
pub fn dim(s: &FiniteStructure, x: &VertexSet) -> Result<i64> {
    require_c0(s, x)?;
    Ok(flow::minimize(s, x, &s.all()).min_delta)
}

/// `d(A / B) = d(A ∪ B) - d(B)`.
pub fn dim_rel(s: &FiniteStructure, a: &VertexSet, b: &VertexSet) -> Result<i64> {
    Ok(dim(s, &a.union(b))? - dim(s, b)?)
}

/// `{ a : d(X ∪ {a}) = d(X) }`. This is the largest set of predimension
/// `d(X)` containing `X`.
pub fn cld(s: &FiniteStructure, x: &VertexSet) -> Result<VertexSet> {
    require_c0(s, x)?;
    Ok(flow::minimize(s, x, &s.all()).largest)
}

/// `cld(X) = X`.
pub fn is_d_closed(s: &FiniteStructure, x: &VertexSet) -> Result<bool> {
    Ok(cld(s, x)? == *x)
}

/// Dimensions of every subset of a small ambient structure, indexed by
/// position mask.
pub struct DimTable {
    universe: usize,
    delta: Vec<i32>,
    dim: Vec<i32>,
}

impl DimTable {
    pub fn new(s: &FiniteStructure, cap: usize) -> Result<Self> {
        check_cap("dimension table (vertices)", s.len(), cap.min(26))?;
        let scan = SubsetScan::new(s, &s.none(), (0..s.len()).collect());
        let delta = scan.table();
        let mut dim = delta.clone();
        for bit in 0..s.len() {
            let b = 1usize << bit;
            for mask in (0..dim.len()).rev() {
                if mask & b == 0 {
                    dim[mask] = dim[mask].min(dim[mask | b]);
                }
            }
        }
        if dim[0] < 0 {
            return Err(Error::Contract("ambient structure is not in C0".into()));
        }
        Ok(DimTable {
            universe: s.len(),
            delta,
            dim,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.universe) - 1) as u32
    }

    pub fn delta(&self, mask: u32) -> i64 {
        self.delta[mask as usize] as i64
    }

    pub fn dim(&self, mask: u32) -> i64 {
        self.dim[mask as usize] as i64
    }

    pub fn cld(&self, mask: u32) -> u32 {
        let d = self.dim[mask as usize];
        let mut out = mask;
        for a in 0..self.universe {
            if self.dim[(mask | 1 << a) as usize] == d {
                out |= 1 << a;
            }
        }
        out
    }

    pub fn is_d_closed(&self, mask: u32) -> bool {
        self.cld(mask) == mask
    }

    pub fn mask_of(set: &VertexSet) -> u32 {
        set.iter().fold(0, |m, p| m | 1 << p)
    }

    pub fn set_of(&self, mask: u32) -> VertexSet {
        VertexSet::from_positions(self.universe, (0..self.universe).filter(|p| mask >> p & 1 == 1))
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
    fn closure_examples() {
        let p3 = path(3);
        let uv = p3.set_of(&[0, 2]).unwrap();
        let r = cl0(&p3, &uv).unwrap();
        assert_eq!(r.closure, uv);
        assert!(r.trace.is_empty());
        assert_eq!(cld(&p3, &uv).unwrap(), p3.all());
        assert!(!is_d_closed(&p3, &uv).unwrap());

        let tri = FiniteStructure::graph(2, 1, 3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let x = tri.set_of(&[0]).unwrap();
        assert_eq!(cl0(&tri, &x).unwrap().closure, x);
        assert_eq!(dim(&tri, &tri.all()).unwrap(), 3);

        let p4 = path(4);
        let uv = p4.set_of(&[0, 3]).unwrap();
        assert_eq!(dim(&p4, &uv).unwrap(), 4);
        assert_eq!(cld(&p4, &uv).unwrap(), uv);
        assert_eq!(dim(&p4, &p4.none()).unwrap(), 0);
        assert_eq!(cld(&p4, &p4.all()).unwrap(), p4.all());
    }

    #[test]
    fn absorption_records_trace() {
        // (2,1,2): y adjacent to three isolated x's: delta(xxx y) = 8 - 3 = 5 < 6
        let s = FiniteStructure::graph(2, 1, 4, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        let x = s.set_of(&[0, 1, 2]).unwrap();
        let r = cl0(&s, &x).unwrap();
        assert_eq!(r.closure, s.all());
        assert_eq!(r.dimension, 5);
        assert_eq!(r.trace, vec![s.set_of(&[3]).unwrap()]);
    }

    #[test]
    fn rejects_ambient_outside_c0() {
        let s = FiniteStructure::graph(1, 3, 2, &[(0, 1)]).unwrap();
        assert!(matches!(cl0(&s, &s.none()), Err(Error::Contract(_))));
        assert!(DimTable::new(&s, 20).is_err());
    }

    #[test]
    fn table_agrees_with_flow() {
        let s = FiniteStructure::graph(2, 1, 6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap();
        let t = DimTable::new(&s, 20).unwrap();
        for mask in 0..=t.full_mask() {
            let set = t.set_of(mask);
            assert_eq!(t.dim(mask), dim(&s, &set).unwrap());
            assert_eq!(t.set_of(t.cld(mask)), cld(&s, &set).unwrap());
        }
    }
}
