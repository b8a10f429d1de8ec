//! Two-layer multiplexes over a shared vertex set `0..n`.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{MuxError, Result};

/// Unordered vertex pair, stored with `.0 < .1`.
pub type Edge = (u32, u32);

/// Largest vertex count accepted by [`automorphism_count`].
pub const AUTOMORPHISM_MAX_VERTICES: usize = 12;

/// Edge-class signature `(v, a, b, c)`: vertex count, layer-1-only edges,
/// layer-2-only edges and edges present in both layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub v: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl Signature {
    pub fn new(v: u32, a: u32, b: u32, c: u32) -> Self {
        Signature { v, a, b, c }
    }

    /// Number of distinct vertex pairs carrying at least one edge.
    pub fn edge_pairs(&self) -> u32 {
        self.a + self.b + self.c
    }

    /// Tie-break key: smaller `v` first, then lexicographic `(a, b, c)`.
    pub fn tie_key(&self) -> (u32, u32, u32, u32) {
        (self.v, self.a, self.b, self.c)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.v, self.a, self.b, self.c)
    }
}

/// On-disk multiplex format: `{"n": 3, "layer1": [[0,1]], "layer2": []}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMultiplex {
    pub n: u32,
    #[serde(default)]
    pub layer1: Vec<[u32; 2]>,
    #[serde(default)]
    pub layer2: Vec<[u32; 2]>,
}

/// A validated two-layer multiplex. Edge lists are sorted and duplicate
/// free; the same pair may appear in both layers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multiplex {
    n: u32,
    layer1: Vec<Edge>,
    layer2: Vec<Edge>,
}

fn check_layer(n: u32, raw: &[[u32; 2]], layer: u8) -> Result<Vec<Edge>> {
    let mut out = Vec::with_capacity(raw.len());
    for &[u, v] in raw {
        if u == v {
            return Err(MuxError::SelfLoop(u));
        }
        for x in [u, v] {
            if x >= n {
                return Err(MuxError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u > v {
            return Err(MuxError::UnorderedEdge(u, v));
        }
        out.push((u, v));
    }
    out.sort_unstable();
    if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
        return Err(MuxError::DuplicateEdge(w[0].0, w[0].1, layer));
    }
    Ok(out)
}

impl Multiplex {
    /// Validates a raw multiplex: no self-loops, endpoints below `n`, `u < v`,
    /// no duplicates within a layer.
    pub fn validate(raw: &RawMultiplex) -> Result<Self> {
        Ok(Multiplex {
            n: raw.n,
            layer1: check_layer(raw.n, &raw.layer1, 1)?,
            layer2: check_layer(raw.n, &raw.layer2, 2)?,
        })
    }

    /// Builds a multiplex from edge lists in either orientation.
    pub fn new(n: u32, layer1: &[Edge], layer2: &[Edge]) -> Result<Self> {
        let norm = |es: &[Edge]| -> Vec<[u32; 2]> {
            es.iter().map(|&(u, v)| [u.min(v), u.max(v)]).collect()
        };
        Self::validate(&RawMultiplex { n, layer1: norm(layer1), layer2: norm(layer2) })
    }

    /// Trusted constructor for edge lists that are already canonical.
    pub(crate) fn from_sorted_unchecked(n: u32, layer1: Vec<Edge>, layer2: Vec<Edge>) -> Self {
        debug_assert!(layer1.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(layer2.windows(2).all(|w| w[0] < w[1]));
        Multiplex { n, layer1, layer2 }
    }

    pub fn empty(n: u32) -> Self {
        Multiplex { n, layer1: Vec::new(), layer2: Vec::new() }
    }

    /// The complete multiplex `K_n`: every pair present in both layers.
    pub fn complete(n: u32) -> Self {
        let all: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Multiplex { n, layer1: all.clone(), layer2: all }
    }

    pub fn n_vertices(&self) -> u32 {
        self.n
    }

    pub fn layer1(&self) -> &[Edge] {
        &self.layer1
    }

    pub fn layer2(&self) -> &[Edge] {
        &self.layer2
    }

    pub fn layer(&self, which: u8) -> &[Edge] {
        if which == 1 {
            &self.layer1
        } else {
            &self.layer2
        }
    }

    /// Total edge count `|E(H¹)| + |E(H²)|`.
    pub fn total_edges(&self) -> usize {
        self.layer1.len() + self.layer2.len()
    }

    pub fn has_edges(&self) -> bool {
        self.total_edges() > 0
    }

    pub fn has1(&self, e: Edge) -> bool {
        self.layer1.binary_search(&e).is_ok()
    }

    pub fn has2(&self, e: Edge) -> bool {
        self.layer2.binary_search(&e).is_ok()
    }

    /// Pairs present in both layers.
    pub fn both_layers(&self) -> Vec<Edge> {
        sorted_intersection(&self.layer1, &self.layer2)
    }

    /// Vertices touched by at least one edge, sorted.
    pub fn covered_vertices(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self
            .layer1
            .iter()
            .chain(&self.layer2)
            .flat_map(|&(u, v)| [u, v])
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// `(n, a, b, c)` with `n` the full vertex count of the multiplex.
    pub fn edge_class_counts(&self) -> Signature {
        let c = self.both_layers().len() as u32;
        Signature {
            v: self.n,
            a: self.layer1.len() as u32 - c,
            b: self.layer2.len() as u32 - c,
            c,
        }
    }

    /// Per-vertex degrees in layer 1, layer 2 and the both-layer graph.
    pub fn degrees(&self) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
        let n = self.n as usize;
        let mut d1 = vec![0; n];
        let mut d2 = vec![0; n];
        let mut d12 = vec![0; n];
        for &(u, v) in &self.layer1 {
            d1[u as usize] += 1;
            d1[v as usize] += 1;
        }
        for &(u, v) in &self.layer2 {
            d2[u as usize] += 1;
            d2[v as usize] += 1;
        }
        for (u, v) in self.both_layers() {
            d12[u as usize] += 1;
            d12[v as usize] += 1;
        }
        (d1, d2, d12)
    }

    /// Layer-wise union; the vertex universe is the larger of the two.
    pub fn union(&self, other: &Multiplex) -> Multiplex {
        Multiplex {
            n: self.n.max(other.n),
            layer1: sorted_union(&self.layer1, &other.layer1),
            layer2: sorted_union(&self.layer2, &other.layer2),
        }
    }

    /// Layer-wise intersection; the vertex universe is the smaller of the two.
    pub fn intersection(&self, other: &Multiplex) -> Multiplex {
        Multiplex {
            n: self.n.min(other.n),
            layer1: sorted_intersection(&self.layer1, &other.layer1),
            layer2: sorted_intersection(&self.layer2, &other.layer2),
        }
    }

    /// Layer-wise containment `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Multiplex) -> bool {
        self.layer1.iter().all(|&e| other.has1(e)) && self.layer2.iter().all(|&e| other.has2(e))
    }

    /// Same vertex set with the two layers exchanged.
    pub fn swap_layers(&self) -> Multiplex {
        Multiplex { n: self.n, layer1: self.layer2.clone(), layer2: self.layer1.clone() }
    }

    /// Relabels vertices through `map[old] = new` into a multiplex on `n` vertices.
    pub fn relabel(&self, n: u32, map: &[u32]) -> Result<Multiplex> {
        let tr = |es: &[Edge]| -> Vec<Edge> {
            es.iter().map(|&(u, v)| (map[u as usize], map[v as usize])).collect()
        };
        Multiplex::new(n, &tr(&self.layer1), &tr(&self.layer2))
    }

    pub fn to_raw(&self) -> RawMultiplex {
        RawMultiplex {
            n: self.n,
            layer1: self.layer1.iter().map(|&(u, v)| [u, v]).collect(),
            layer2: self.layer2.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawMultiplex = serde_json::from_str(text)?;
        Self::validate(&raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("multiplex serialises")
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| MuxError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            MuxError::Parse(m) => MuxError::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

impl Serialize for Multiplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multiplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMultiplex::deserialize(d)?;
        Multiplex::validate(&raw).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn sorted_union(a: &[Edge], b: &[Edge]) -> Vec<Edge> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn sorted_intersection(a: &[Edge], b: &[Edge]) -> Vec<Edge> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Number of vertex permutations preserving both edge sets exactly.
///
/// Pruned permutation search: a partial map is extended only while every
/// mapped pair keeps its two-bit layer status.
pub fn automorphism_count(h: &Multiplex) -> Result<u64> {
    let n = h.n as usize;
    if n > AUTOMORPHISM_MAX_VERTICES {
        return Err(MuxError::CapExceeded {
            what: "automorphism vertex count",
            actual: n,
            cap: AUTOMORPHISM_MAX_VERTICES,
        });
    }
    let mut status = vec![0u8; n * n];
    for &(u, v) in &h.layer1 {
        status[u as usize * n + v as usize] |= 1;
        status[v as usize * n + u as usize] |= 1;
    }
    for &(u, v) in &h.layer2 {
        status[u as usize * n + v as usize] |= 2;
        status[v as usize * n + u as usize] |= 2;
    }
    let (d1, d2, d12) = h.degrees();
    let profile: Vec<(u32, u32, u32)> = (0..n).map(|i| (d1[i], d2[i], d12[i])).collect();

    fn go(
        k: usize,
        n: usize,
        status: &[u8],
        profile: &[(u32, u32, u32)],
        image: &mut Vec<usize>,
        used: &mut [bool],
    ) -> u64 {
        if k == n {
            return 1;
        }
        let mut total = 0;
        for x in 0..n {
            if used[x] || profile[x] != profile[k] {
                continue;
            }
            if (0..k).all(|w| status[k * n + w] == status[x * n + image[w]]) {
                used[x] = true;
                image.push(x);
                total += go(k + 1, n, status, profile, image, used);
                image.pop();
                used[x] = false;
            }
        }
        total
    }

    Ok(go(0, n, &status, &profile, &mut Vec::with_capacity(n), &mut vec![false; n]))
}

/// Edge set lookup used by oracles.
pub(crate) fn edge_set(es: &[Edge]) -> HashSet<Edge> {
    es.iter().copied().collect()
}

/// Named multiplexes used throughout tests and documentation. Vertex labels
/// are 0-based.
pub mod fixtures {
    use super::*;

    /// Edge-triangle: layer-1 triangle on `{0,1,2}`, layer-2 edge `(1,2)`.
    pub fn edge_triangle() -> Multiplex {
        Multiplex::new(3, &[(0, 1), (1, 2), (0, 2)], &[(1, 2)]).unwrap()
    }

    /// Double edge on two vertices.
    pub fn double_edge() -> Multiplex {
        Multiplex::new(2, &[(0, 1)], &[(0, 1)]).unwrap()
    }

    /// Double edge `(1,2)` placed inside the edge-triangle's vertex universe.
    pub fn double_edge_in_triangle() -> Multiplex {
        Multiplex::new(3, &[(1, 2)], &[(1, 2)]).unwrap()
    }

    /// Five-vertex multiplex with layer 1 `{01,12,14,23,34}` and layer 2 `{02,12}`.
    pub fn five_vertex() -> Multiplex {
        Multiplex::new(5, &[(0, 1), (1, 2), (1, 4), (2, 3), (3, 4)], &[(0, 2), (1, 2)]).unwrap()
    }

    /// Five-vertex variant keeping all of layer 1 and only `(0,2)` in layer 2.
    pub fn five_vertex_tilde() -> Multiplex {
        Multiplex::new(5, &[(0, 1), (1, 2), (1, 4), (2, 3), (3, 4)], &[(0, 2)]).unwrap()
    }

    /// Five-vertex variant dropping `(1,2)` from layer 1.
    pub fn five_vertex_hat() -> Multiplex {
        Multiplex::new(5, &[(0, 1), (1, 4), (2, 3), (3, 4)], &[(0, 2), (1, 2)]).unwrap()
    }

    pub fn single_edge_layer1() -> Multiplex {
        Multiplex::new(2, &[(0, 1)], &[]).unwrap()
    }

    pub fn triangle_layer1() -> Multiplex {
        Multiplex::new(3, &[(0, 1), (1, 2), (0, 2)], &[]).unwrap()
    }

    /// Three-vertex motif with layer 1 `{02,12}` and layer 2 `{01,12}`.
    pub fn illustration_motif() -> Multiplex {
        Multiplex::new(3, &[(0, 2), (1, 2)], &[(0, 1), (1, 2)]).unwrap()
    }

    /// Fifteen-vertex illustration sample (`n=15`, `p1=p2=0.15`, `p12=0.05`),
    /// relabelled to `0..15`.
    pub fn illustration_sample() -> Multiplex {
        let l2: [(u32, u32); 16] = [
            (15, 4), (4, 13), (13, 12), (1, 10), (10, 11), (11, 8), (8, 5), (1, 2),
            (1, 15), (1, 13), (4, 9), (2, 9), (9, 6), (9, 3), (6, 7), (9, 14),
        ];
        let l1: [(u32, u32); 15] = [
            (9, 7), (9, 3), (15, 4), (4, 13), (1, 10), (1, 11), (11, 8), (2, 9),
            (9, 6), (9, 12), (12, 3), (11, 6), (14, 5), (14, 2), (14, 10),
        ];
        let shift = |es: &[(u32, u32)]| -> Vec<Edge> { es.iter().map(|&(u, v)| (u - 1, v - 1)).collect() };
        Multiplex::new(15, &shift(&l1), &shift(&l2)).unwrap()
    }
}
