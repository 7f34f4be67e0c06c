//! Partial and full transversals, and the primitive set operations on them.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::instance::Instance;

/// At most one vertex per block, stored by block index.
///
/// Independence is not part of the type: intermediate states in the engines
/// are allowed to hold non-independent selections and are checked explicitly.
/// Ordering is lexicographic over blocks, which is the canonical order used
/// for enumeration output.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transversal {
    slots: Vec<Option<usize>>,
}

impl Transversal {
    pub fn empty(num_blocks: usize) -> Self {
        Transversal {
            slots: vec![None; num_blocks],
        }
    }

    pub fn from_vertices(inst: &Instance, vertices: &[usize]) -> Result<Self> {
        let mut t = Transversal::empty(inst.num_blocks());
        for &v in vertices {
            if v >= inst.n() {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: inst.n(),
                });
            }
            let b = inst.block_of(v);
            match t.slots[b] {
                Some(w) if w != v => {
                    return Err(Error::SameBlock {
                        first: w,
                        second: v,
                        block: b,
                    })
                }
                _ => t.slots[b] = Some(v),
            }
        }
        Ok(t)
    }

    pub fn from_slots(slots: Vec<Option<usize>>) -> Self {
        Transversal { slots }
    }

    pub fn slots(&self) -> &[Option<usize>] {
        &self.slots
    }

    pub fn get(&self, block: usize) -> Option<usize> {
        self.slots[block]
    }

    pub fn set(&mut self, block: usize, v: Option<usize>) {
        self.slots[block] = v;
    }

    pub fn num_blocks(&self) -> usize {
        self.slots.len()
    }

    /// Number of chosen vertices `|S|`.
    pub fn len(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.iter().all(Option::is_none)
    }

    pub fn is_full(&self) -> bool {
        self.slots.iter().all(Option::is_some)
    }

    pub fn contains(&self, inst: &Instance, v: usize) -> bool {
        self.slots[inst.block_of(v)] == Some(v)
    }

    /// Sorted vertex list.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.slots.iter().flatten().copied().collect();
        out.sort_unstable();
        out
    }

    /// Blocks hit, `𝒰_S`.
    pub fn covered_blocks(&self) -> Vec<usize> {
        (0..self.slots.len())
            .filter(|&b| self.slots[b].is_some())
            .collect()
    }

    /// Blocks on which `self` and `other` select the same vertex.
    pub fn agreement(&self, other: &Transversal) -> Vec<usize> {
        (0..self.slots.len())
            .filter(|&b| self.slots[b].is_some() && self.slots[b] == other.slots[b])
            .collect()
    }

    /// Blocks on which the two selections differ.
    pub fn disagreement(&self, other: &Transversal) -> Vec<usize> {
        (0..self.slots.len())
            .filter(|&b| self.slots[b] != other.slots[b])
            .collect()
    }

    /// `S ∩ T` as a partial transversal.
    pub fn intersection(&self, other: &Transversal) -> Transversal {
        Transversal {
            slots: self
                .slots
                .iter()
                .zip(&other.slots)
                .map(|(a, b)| if a == b { *a } else { None })
                .collect(),
        }
    }

    /// `S △ T`, sorted.
    pub fn symmetric_difference(&self, other: &Transversal) -> Vec<usize> {
        let mut out = Vec::new();
        for (a, b) in self.slots.iter().zip(&other.slots) {
            if a != b {
                out.extend(a.iter().chain(b.iter()).copied());
            }
        }
        out.sort_unstable();
        out
    }
}

impl Serialize for Transversal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices().serialize(serializer)
    }
}

pub fn is_independent(inst: &Instance, set: &[usize]) -> bool {
    inst.graph().is_independent(set)
}

pub fn is_full_it(inst: &Instance, s: &Transversal) -> bool {
    s.num_blocks() == inst.num_blocks() && s.is_full() && is_independent(inst, &s.vertices())
}

/// `N_S(v) = N_G(v) ∩ S`; the closed variant `N_S[v]` adds `v` itself.
pub fn neighbourhood_in(inst: &Instance, v: usize, s: &Transversal, closed: bool) -> Vec<usize> {
    let mut out: Vec<usize> = inst
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&w| s.contains(inst, w))
        .collect();
    if closed {
        out.push(v);
        out.sort_unstable();
        out.dedup();
    }
    out
}

/// `S ⊕ v`: replace the vertex of `v`'s block by `v`. Requires `S ∪ {v}` to be
/// independent (the replaced vertex included).
pub fn oplus(inst: &Instance, s: &Transversal, v: usize) -> Result<Transversal> {
    if let Some(&w) = inst.neighbors(v).iter().find(|&&w| s.contains(inst, w)) {
        return Err(Error::NotIndependent {
            vertex: v,
            neighbor: w,
        });
    }
    let mut out = s.clone();
    out.set(inst.block_of(v), Some(v));
    Ok(out)
}

/// Closure of `X`: the blocks meeting `X` and the union of their vertices.
pub fn closure(inst: &Instance, x: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut blocks: Vec<usize> = x.iter().map(|&v| inst.block_of(v)).collect();
    blocks.sort_unstable();
    blocks.dedup();
    let mut verts: Vec<usize> = blocks
        .iter()
        .flat_map(|&b| inst.block(b).iter().copied())
        .collect();
    verts.sort_unstable();
    (blocks, verts)
}

/// Adjacency in the reconfigurability graph: `S ∪ T` independent of size
/// `|𝒰| + 1`.
pub fn it_adjacent(inst: &Instance, s: &Transversal, t: &Transversal) -> Result<bool> {
    if !is_full_it(inst, s) {
        return Err(Error::NotAnIt("left".into()));
    }
    if !is_full_it(inst, t) {
        return Err(Error::NotAnIt("right".into()));
    }
    let diff = s.disagreement(t);
    if diff.len() != 1 {
        return Ok(false);
    }
    let b = diff[0];
    Ok(!inst.has_edge(s.get(b).unwrap(), t.get(b).unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{edge12, single_edge};

    fn tr(inst: &Instance, v: &[usize]) -> Transversal {
        Transversal::from_vertices(inst, v).unwrap()
    }

    #[test]
    fn independence_examples() {
        let e = single_edge();
        assert!(!is_independent(&e, &[0, 1]));
        assert!(is_independent(&e, &[]));
        assert!(is_independent(&edge12(), &[0, 3]));
    }

    #[test]
    fn full_it_examples() {
        let g = edge12();
        assert!(is_full_it(&g, &tr(&g, &[0, 2])));
        assert!(!is_full_it(&g, &tr(&g, &[1, 2])));
        assert!(!is_full_it(&g, &tr(&g, &[0])));
    }

    #[test]
    fn same_block_rejected() {
        let g = edge12();
        assert!(matches!(
            Transversal::from_vertices(&g, &[0, 1]),
            Err(Error::SameBlock { block: 0, .. })
        ));
    }

    #[test]
    fn oplus_examples() {
        let g = edge12();
        assert_eq!(oplus(&g, &tr(&g, &[0, 2]), 3).unwrap(), tr(&g, &[0, 3]));
        assert_eq!(oplus(&g, &tr(&g, &[0, 2]), 2).unwrap(), tr(&g, &[0, 2]));
        assert!(!g.has_edge(1, 3));
        assert_eq!(oplus(&g, &tr(&g, &[0, 3]), 1).unwrap(), tr(&g, &[1, 3]));
        assert!(matches!(
            oplus(&g, &tr(&g, &[0, 2]), 1),
            Err(Error::NotIndependent {
                vertex: 1,
                neighbor: 2
            })
        ));
    }

    #[test]
    fn closure_examples() {
        let g = edge12();
        assert_eq!(closure(&g, &[]).1, Vec::<usize>::new());
        assert_eq!(closure(&g, &[2]), (vec![1], vec![2, 3]));
        assert_eq!(closure(&g, &[0, 2]).1, vec![0, 1, 2, 3]);
    }

    #[test]
    fn adjacency_examples() {
        let g = edge12();
        assert!(it_adjacent(&g, &tr(&g, &[0, 2]), &tr(&g, &[0, 3])).unwrap());
        assert!(!it_adjacent(&g, &tr(&g, &[0, 2]), &tr(&g, &[0, 2])).unwrap());
        let e = crate::testutil::inst(2, &[], &[&[0, 1]]);
        assert!(it_adjacent(&e, &tr(&e, &[0]), &tr(&e, &[1])).unwrap());
        let s = single_edge();
        // {0} and {1} are not ITs sharing a non-edge: 0–1 is an edge
        assert!(!it_adjacent(&s, &tr(&s, &[0]), &tr(&s, &[1])).unwrap());
        assert!(matches!(
            it_adjacent(&g, &tr(&g, &[1, 2]), &tr(&g, &[0, 2])),
            Err(Error::NotAnIt(_))
        ));
    }

    #[test]
    fn neighbourhood_examples() {
        let g = crate::testutil::inst(3, &[(1, 2)], &[&[0], &[1], &[2]]);
        let s = tr(&g, &[0, 1, 2]);
        assert!(neighbourhood_in(&g, 0, &s, false).is_empty());
        assert_eq!(neighbourhood_in(&g, 0, &s, true), vec![0]);
        let e = edge12();
        assert_eq!(neighbourhood_in(&e, 1, &tr(&e, &[0, 2]), false), vec![2]);
        // K_{2,2} with sides {0,1},{2,3}: lookup against the adjacency directly
        let k = crate::testutil::k22_one_block();
        let s = Transversal::from_slots(vec![Some(3)]);
        let expect: Vec<usize> = [3].into_iter().filter(|&w| k.has_edge(0, w)).collect();
        assert_eq!(neighbourhood_in(&k, 0, &s, false), expect);
    }

    #[test]
    fn set_helpers() {
        let g = edge12();
        let s = tr(&g, &[0, 2]);
        let t = tr(&g, &[0, 3]);
        assert_eq!(s.agreement(&t), vec![0]);
        assert_eq!(s.disagreement(&t), vec![1]);
        assert_eq!(s.symmetric_difference(&t), vec![2, 3]);
        assert_eq!(s.intersection(&t).vertices(), vec![0]);
        assert_eq!(serde_json::to_string(&t).unwrap(), "[0,3]");
    }
}
