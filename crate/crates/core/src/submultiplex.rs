//! Submultiplexes of a host, their enumeration, completion and lattice
//! operations.
//!
//! Enumerated submultiplexes carry no isolated vertices: their vertex set is
//! the set of endpoints of their edges. Intersections may carry isolated
//! vertices because `V(Q ∩ R) = V(Q) ∩ V(R)`.

use serde::{Deserialize, Serialize};

use crate::error::{MuxError, Result};
use crate::multiplex::{sorted_intersection, sorted_union, Edge, Multiplex, Signature};

/// Default cap on `|E(H¹)| + |E(H²)|` for exhaustive enumeration.
pub const DEFAULT_EDGE_CAP: usize = 24;

/// Hard ceiling on the edge cap (the enumeration mask is a `u64`).
pub const MAX_EDGE_CAP: usize = 40;

/// A submultiplex `F ⊆ H` expressed in the host's vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Submultiplex {
    pub vertices: Vec<u32>,
    pub layer1: Vec<Edge>,
    pub layer2: Vec<Edge>,
}

impl Submultiplex {
    /// Builds a submultiplex whose vertex set is exactly its covered endpoints.
    pub fn from_edges(mut layer1: Vec<Edge>, mut layer2: Vec<Edge>) -> Self {
        layer1.sort_unstable();
        layer1.dedup();
        layer2.sort_unstable();
        layer2.dedup();
        let vertices = covered(&layer1, &layer2);
        Submultiplex { vertices, layer1, layer2 }
    }

    /// The full host as a submultiplex (vertex set `0..n`).
    pub fn whole(h: &Multiplex) -> Self {
        Submultiplex {
            vertices: (0..h.n_vertices()).collect(),
            layer1: h.layer1().to_vec(),
            layer2: h.layer2().to_vec(),
        }
    }

    /// Views a multiplex given in host labels as a submultiplex on its covered vertices.
    pub fn from_multiplex(m: &Multiplex) -> Self {
        Self::from_edges(m.layer1().to_vec(), m.layer2().to_vec())
    }

    pub fn signature(&self) -> Signature {
        let c = sorted_intersection(&self.layer1, &self.layer2).len() as u32;
        Signature {
            v: self.vertices.len() as u32,
            a: self.layer1.len() as u32 - c,
            b: self.layer2.len() as u32 - c,
            c,
        }
    }

    pub fn edge_count(&self) -> usize {
        sorted_union(&self.layer1, &self.layer2).len()
    }

    /// Layer-wise containment, including vertex sets.
    pub fn is_subset_of(&self, other: &Submultiplex) -> bool {
        is_sorted_subset(&self.layer1, &other.layer1)
            && is_sorted_subset(&self.layer2, &other.layer2)
            && is_sorted_subset(&self.vertices, &other.vertices)
    }

    pub fn is_contained_in(&self, h: &Multiplex) -> bool {
        self.layer1.iter().all(|&e| h.has1(e))
            && self.layer2.iter().all(|&e| h.has2(e))
            && self.vertices.iter().all(|&v| v < h.n_vertices())
    }

    /// Same edge sets (vertex sets ignored).
    pub fn same_edges(&self, other: &Submultiplex) -> bool {
        self.layer1 == other.layer1 && self.layer2 == other.layer2
    }

    pub fn union(&self, other: &Submultiplex) -> Submultiplex {
        Submultiplex {
            vertices: sorted_union_u32(&self.vertices, &other.vertices),
            layer1: sorted_union(&self.layer1, &other.layer1),
            layer2: sorted_union(&self.layer2, &other.layer2),
        }
    }

    pub fn intersection(&self, other: &Submultiplex) -> Submultiplex {
        Submultiplex {
            vertices: sorted_intersection_u32(&self.vertices, &other.vertices),
            layer1: sorted_intersection(&self.layer1, &other.layer1),
            layer2: sorted_intersection(&self.layer2, &other.layer2),
        }
    }

    /// The edges as a multiplex on the host's vertex universe of size `n`.
    pub fn to_multiplex(&self, n: u32) -> Multiplex {
        Multiplex::from_sorted_unchecked(n, self.layer1.clone(), self.layer2.clone())
    }

    /// Relabels `vertices` to `0..|vertices|` in sorted order and returns the
    /// standalone motif together with the label map (`map[i]` is the host label).
    pub fn to_compact(&self) -> (Multiplex, Vec<u32>) {
        let map = self.vertices.clone();
        let pos = |x: u32| map.binary_search(&x).expect("edge endpoint in vertex set") as u32;
        let tr = |es: &[Edge]| -> Vec<Edge> { es.iter().map(|&(u, v)| (pos(u), pos(v))).collect() };
        let m = Multiplex::new(map.len() as u32, &tr(&self.layer1), &tr(&self.layer2))
            .expect("relabelled submultiplex is valid");
        (m, map)
    }
}

fn covered(l1: &[Edge], l2: &[Edge]) -> Vec<u32> {
    let mut vs: Vec<u32> = l1.iter().chain(l2).flat_map(|&(u, v)| [u, v]).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

fn is_sorted_subset<T: Ord>(a: &[T], b: &[T]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

fn sorted_union_u32(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut v: Vec<u32> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn sorted_intersection_u32(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// Incremental signature tracker over the host's canonical edge order:
/// bit `i < e1` is layer-1 edge `i`, bit `e1 + j` is layer-2 edge `j`.
#[derive(Debug, Clone)]
pub(crate) struct MaskLayout {
    pub e1: usize,
    pub edges1: Vec<Edge>,
    pub edges2: Vec<Edge>,
    /// For each combined bit, the bit of the same pair in the other layer.
    pub twin: Vec<Option<usize>>,
    /// Endpoints of each combined bit, as compact vertex indices.
    pub ends: Vec<(usize, usize)>,
    pub n_compact: usize,
}

impl MaskLayout {
    pub fn new(h: &Multiplex) -> Self {
        let edges1 = h.layer1().to_vec();
        let edges2 = h.layer2().to_vec();
        let e1 = edges1.len();
        let mut twin = vec![None; e1 + edges2.len()];
        for (i, e) in edges1.iter().enumerate() {
            if let Ok(j) = edges2.binary_search(e) {
                twin[i] = Some(e1 + j);
                twin[e1 + j] = Some(i);
            }
        }
        let verts = h.covered_vertices();
        let idx = |x: u32| verts.binary_search(&x).unwrap();
        let ends = edges1.iter().chain(&edges2).map(|&(u, v)| (idx(u), idx(v))).collect();
        MaskLayout { e1, edges1, edges2, twin, ends, n_compact: verts.len() }
    }

    pub fn total(&self) -> usize {
        self.twin.len()
    }

    pub fn materialize(&self, mask: u64) -> Submultiplex {
        let l1 = (0..self.e1).filter(|&i| mask >> i & 1 == 1).map(|i| self.edges1[i]).collect();
        let l2 = (0..self.edges2.len())
            .filter(|&j| mask >> (self.e1 + j) & 1 == 1)
            .map(|j| self.edges2[j])
            .collect();
        Submultiplex::from_edges(l1, l2)
    }
}

/// Running `(v, a, b, c)` for the current mask, updated one bit at a time.
#[derive(Debug, Clone)]
pub(crate) struct SignatureState {
    mask: u64,
    cover: Vec<u32>,
    v: u32,
    a: u32,
    b: u32,
    c: u32,
    pairs: u32,
}

impl SignatureState {
    pub fn new(layout: &MaskLayout) -> Self {
        SignatureState { mask: 0, cover: vec![0; layout.n_compact], v: 0, a: 0, b: 0, c: 0, pairs: 0 }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn signature(&self) -> Signature {
        Signature { v: self.v, a: self.a, b: self.b, c: self.c }
    }

    /// Distinct vertex pairs carrying an edge.
    pub fn pairs(&self) -> u32 {
        self.pairs
    }

    pub fn toggle(&mut self, layout: &MaskLayout, bit: usize) {
        let adding = self.mask >> bit & 1 == 0;
        self.mask ^= 1 << bit;
        let twin_on = layout.twin[bit].map(|t| self.mask >> t & 1 == 1).unwrap_or(false);
        let is_l1 = bit < layout.e1;
        if adding {
            if twin_on {
                if is_l1 {
                    self.b -= 1;
                } else {
                    self.a -= 1;
                }
                self.c += 1;
            } else {
                self.pairs += 1;
                if is_l1 {
                    self.a += 1;
                } else {
                    self.b += 1;
                }
            }
        } else if twin_on {
            self.c -= 1;
            if is_l1 {
                self.b += 1;
            } else {
                self.a += 1;
            }
        } else {
            self.pairs -= 1;
            if is_l1 {
                self.a -= 1;
            } else {
                self.b -= 1;
            }
        }
        let (x, y) = layout.ends[bit];
        for w in [x, y] {
            if adding {
                self.cover[w] += 1;
                if self.cover[w] == 1 {
                    self.v += 1;
                }
            } else {
                self.cover[w] -= 1;
                if self.cover[w] == 0 {
                    self.v -= 1;
                }
            }
        }
    }
}

fn check_cap(h: &Multiplex, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_EDGE_CAP);
    if h.total_edges() > cap {
        return Err(MuxError::CapExceeded { what: "motif edge count", actual: h.total_edges(), cap });
    }
    Ok(())
}

/// Visits every `(s1, s2)` edge-subset pair in reflected Gray-code order,
/// skipping the empty one, with its signature and distinct pair count.
pub(crate) fn walk_signatures(
    h: &Multiplex,
    cap: usize,
    mut visit: impl FnMut(&MaskLayout, u64, Signature, u32),
) -> Result<()> {
    check_cap(h, cap)?;
    let layout = MaskLayout::new(h);
    let total = layout.total();
    let mut state = SignatureState::new(&layout);
    for k in 1u64..(1u64 << total) {
        state.toggle(&layout, k.trailing_zeros() as usize);
        visit(&layout, state.mask(), state.signature(), state.pairs());
    }
    Ok(())
}

/// Stream of submultiplexes in Gray-code order over the host's canonical
/// edge order (layer-1 edges first, then layer-2 edges).
pub struct SubmultiplexIter {
    layout: MaskLayout,
    state: SignatureState,
    k: u64,
    end: u64,
    min_edges: u32,
    // the Gray walk starts after the empty set
    pending_empty: bool,
}

impl Iterator for SubmultiplexIter {
    type Item = Submultiplex;

    fn next(&mut self) -> Option<Submultiplex> {
        if self.pending_empty {
            self.pending_empty = false;
            return Some(self.layout.materialize(0));
        }
        while self.k < self.end {
            self.state.toggle(&self.layout, self.k.trailing_zeros() as usize);
            self.k += 1;
            if self.state.pairs() >= self.min_edges {
                return Some(self.layout.materialize(self.state.mask()));
            }
        }
        None
    }
}

/// Every `(s1 ⊆ E(H¹), s2 ⊆ E(H²))` with at least `min_edges` distinct
/// edge pairs, with the default edge cap.
pub fn enumerate_submultiplexes(h: &Multiplex, min_edges: usize) -> Result<SubmultiplexIter> {
    enumerate_submultiplexes_capped(h, min_edges, DEFAULT_EDGE_CAP)
}

pub fn enumerate_submultiplexes_capped(
    h: &Multiplex,
    min_edges: usize,
    cap: usize,
) -> Result<SubmultiplexIter> {
    check_cap(h, cap)?;
    let layout = MaskLayout::new(h);
    let state = SignatureState::new(&layout);
    let end = 1u64 << layout.total();
    Ok(SubmultiplexIter { layout, state, k: 1, end, min_edges: min_edges as u32, pending_empty: min_edges == 0 })
}

/// `F̂ = (V(F), E(F¹) ∪ D, E(F²) ∪ D)` with `D` the both-layer edges of `H`
/// whose endpoints lie in `V(F)`.
pub fn completion(f: &Submultiplex, h: &Multiplex) -> Submultiplex {
    let inside = |x: u32| f.vertices.binary_search(&x).is_ok();
    let d: Vec<Edge> = h.both_layers().into_iter().filter(|&(u, v)| inside(u) && inside(v)).collect();
    Submultiplex {
        vertices: f.vertices.clone(),
        layer1: sorted_union(&f.layer1, &d),
        layer2: sorted_union(&f.layer2, &d),
    }
}

/// The completion formula read literally: both layers become
/// `E(F¹) ∪ (E(H¹) ∩ E(H²))`, without restricting to `V(F)`. Kept for
/// comparison with [`completion`]; the result need not be a submultiplex of `H`.
pub fn completion_literal(f: &Submultiplex, h: &Multiplex) -> Multiplex {
    let layer = sorted_union(&f.layer1, &h.both_layers());
    Multiplex::from_sorted_unchecked(h.n_vertices(), layer.clone(), layer)
}

pub fn is_complete(f: &Submultiplex, h: &Multiplex) -> bool {
    completion(f, h) == *f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplex::fixtures::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_submultiplexes(&double_edge(), 1).unwrap().count(), 3);
        assert_eq!(enumerate_submultiplexes(&edge_triangle(), 1).unwrap().count(), 15);
        assert_eq!(enumerate_submultiplexes(&Multiplex::empty(4), 1).unwrap().count(), 0);
        // pairs below min_edges are removed: the double edge has one pair
        assert_eq!(enumerate_submultiplexes(&double_edge(), 2).unwrap().count(), 0);
        assert_eq!(enumerate_submultiplexes(&double_edge(), 0).unwrap().count(), 4);
    }

    #[test]
    fn double_edge_submultiplexes() {
        let subs: Vec<_> = enumerate_submultiplexes(&double_edge(), 1).unwrap().collect();
        let mut sigs: Vec<_> = subs.iter().map(|s| s.signature()).collect();
        sigs.sort();
        assert_eq!(
            sigs,
            [Signature::new(2, 0, 0, 1), Signature::new(2, 0, 1, 0), Signature::new(2, 1, 0, 0)]
        );
    }

    #[test]
    fn enumeration_unique_and_deterministic() {
        let p = five_vertex();
        let a: Vec<_> = enumerate_submultiplexes(&p, 1).unwrap().collect();
        let b: Vec<_> = enumerate_submultiplexes(&p, 1).unwrap().collect();
        assert_eq!(a, b);
        let set: std::collections::HashSet<_> = a.iter().map(|s| (s.layer1.clone(), s.layer2.clone())).collect();
        assert_eq!(set.len(), a.len());
        assert_eq!(a.len(), (1 << 7) - 1);
        for s in &a {
            assert_eq!(s.vertices, covered(&s.layer1, &s.layer2));
        }
    }

    #[test]
    fn gray_signatures_match_materialised() {
        let p = five_vertex();
        walk_signatures(&p, DEFAULT_EDGE_CAP, |layout, mask, sig, pairs| {
            let s = layout.materialize(mask);
            assert_eq!(s.signature(), sig);
            assert_eq!(s.edge_count() as u32, pairs);
        })
        .unwrap();
    }

    #[test]
    fn edge_cap() {
        let k = Multiplex::complete(6);
        assert!(matches!(
            enumerate_submultiplexes(&k, 1),
            Err(MuxError::CapExceeded { actual: 30, cap: 24, .. })
        ));
        assert!(enumerate_submultiplexes_capped(&Multiplex::complete(4), 1, 12).is_ok());
    }

    #[test]
    fn completion_examples() {
        let r = edge_triangle();
        let f = Submultiplex::from_edges(vec![(1, 2)], vec![]);
        let fhat = completion(&f, &r);
        assert_eq!(fhat, Submultiplex::from_edges(vec![(1, 2)], vec![(1, 2)]));
        let whole = Submultiplex::from_multiplex(&r);
        assert_eq!(completion(&whole, &r), whole);
        let g = Submultiplex::from_edges(vec![(0, 1)], vec![]);
        assert_eq!(completion(&g, &r), g);
        assert_eq!(completion(&fhat, &r), fhat);
    }

    #[test]
    fn literal_completion_differs_outside_vertex_set() {
        let r = edge_triangle();
        let g = Submultiplex::from_edges(vec![(0, 1)], vec![]);
        let lit = completion_literal(&g, &r);
        assert_eq!(lit.layer1(), &[(0, 1), (1, 2)]);
        assert_eq!(lit.layer2(), &[(0, 1), (1, 2)]);
        assert!(!lit.is_subset_of(&r));
    }

    #[test]
    fn compact_relabelling() {
        let f = Submultiplex::from_edges(vec![(1, 2)], vec![(1, 2)]);
        let (m, map) = f.to_compact();
        assert_eq!(m, double_edge());
        assert_eq!(map, vec![1, 2]);
    }
}
