//! Injective multiplex homomorphism counts.
//!
//! A map `φ: V(H) → V(G)` counts when it is injective and sends every
//! layer-1 edge of `H` to a layer-1 edge of `G` and every layer-2 edge to a
//! layer-2 edge. Presence only: non-edges of `H` impose nothing.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{MuxError, Result};
use crate::multiplex::{automorphism_count, edge_set, Edge, Multiplex};
use crate::submultiplex::Submultiplex;

/// Motif vertex cap for the backtracking counter.
pub const MOTIF_MAX_VERTICES: usize = 12;

/// Host vertex cap for the brute-force oracle.
pub const BRUTEFORCE_MAX_VERTICES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub injections: u128,
    pub aut_size: u64,
    pub copies: u128,
}

/// Compressed adjacency of a host multiplex: sorted neighbour lists for
/// layer 1, layer 2 and the both-layer graph.
#[derive(Debug, Clone)]
pub struct GraphIndex {
    n: usize,
    off: [Vec<u32>; 3],
    nbr: [Vec<u32>; 3],
}

fn csr(n: usize, edges: &[Edge]) -> (Vec<u32>, Vec<u32>) {
    let mut off = vec![0u32; n + 1];
    for &(u, v) in edges {
        off[u as usize + 1] += 1;
        off[v as usize + 1] += 1;
    }
    for i in 0..n {
        off[i + 1] += off[i];
    }
    let mut fill = off.clone();
    let mut nbr = vec![0u32; 2 * edges.len()];
    // edges are sorted by (u, v) with u < v, so every list comes out sorted
    for &(u, v) in edges {
        nbr[fill[u as usize] as usize] = v;
        fill[u as usize] += 1;
        nbr[fill[v as usize] as usize] = u;
        fill[v as usize] += 1;
    }
    (off, nbr)
}

impl GraphIndex {
    pub fn new(g: &Multiplex) -> Self {
        let n = g.n_vertices() as usize;
        let (o1, n1) = csr(n, g.layer1());
        let (o2, n2) = csr(n, g.layer2());
        let (o3, n3) = csr(n, &g.both_layers());
        GraphIndex { n, off: [o1, o2, o3], nbr: [n1, n2, n3] }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// Neighbours of `u` under requirement `need` (1: layer 1, 2: layer 2, 3: both).
    #[inline]
    fn neighbours(&self, need: u8, u: u32) -> &[u32] {
        let l = (need - 1) as usize;
        let (a, b) = (self.off[l][u as usize] as usize, self.off[l][u as usize + 1] as usize);
        &self.nbr[l][a..b]
    }

    #[inline]
    fn degree(&self, need: u8, u: u32) -> u32 {
        let l = (need - 1) as usize;
        self.off[l][u as usize + 1] - self.off[l][u as usize]
    }

    #[inline]
    fn satisfies(&self, need: u8, u: u32, v: u32) -> bool {
        self.neighbours(need, u).binary_search(&v).is_ok()
    }
}

/// Search plan for one motif: vertex order, back-edge checks and degree
/// lower bounds per position.
#[derive(Debug, Clone)]
struct Plan {
    order: Vec<u32>,
    checks: Vec<Vec<(usize, u8)>>,
    min_deg: Vec<[u32; 3]>,
    /// Motif vertices left out of `order` (isolated, count mode only).
    free: u32,
    h_vertices: usize,
}

fn pair_status(h: &Multiplex) -> Vec<u8> {
    let n = h.n_vertices() as usize;
    let mut st = vec![0u8; n * n];
    for &(u, v) in h.layer1() {
        st[u as usize * n + v as usize] |= 1;
        st[v as usize * n + u as usize] |= 1;
    }
    for &(u, v) in h.layer2() {
        st[u as usize * n + v as usize] |= 2;
        st[v as usize * n + u as usize] |= 2;
    }
    st
}

impl Plan {
    /// Orders `prefix` first, then greedily the vertex with the most edges
    /// into the ordered set; ties by combined degree (descending), then id.
    fn new(h: &Multiplex, prefix: &[u32], include_isolated: bool) -> Plan {
        let n = h.n_vertices() as usize;
        let st = pair_status(h);
        let (d1, d2, d12) = h.degrees();
        let combined: Vec<u32> = (0..n).map(|i| d1[i] + d2[i]).collect();
        let mut placed = vec![false; n];
        let mut order: Vec<u32> = Vec::with_capacity(n);
        for &p in prefix {
            placed[p as usize] = true;
            order.push(p);
        }
        loop {
            let links = |u: usize, order: &[u32]| order.iter().filter(|&&w| st[u * n + w as usize] != 0).count();
            let best = (0..n)
                .filter(|&u| !placed[u] && (include_isolated || combined[u] > 0))
                .max_by(|&x, &y| {
                    (links(x, &order), combined[x], std::cmp::Reverse(x))
                        .cmp(&(links(y, &order), combined[y], std::cmp::Reverse(y)))
                });
            match best {
                Some(u) => {
                    placed[u] = true;
                    order.push(u as u32);
                }
                None => break,
            }
        }
        let checks = order
            .iter()
            .enumerate()
            .map(|(k, &u)| {
                (0..k)
                    .filter_map(|j| {
                        let s = st[u as usize * n + order[j] as usize];
                        (s != 0).then_some((j, s))
                    })
                    .collect()
            })
            .collect();
        let min_deg = order.iter().map(|&u| [d1[u as usize], d2[u as usize], d12[u as usize]]).collect();
        Plan { free: (n - order.len()) as u32, order, checks, min_deg, h_vertices: n }
    }
}

struct Search<'a> {
    plan: &'a Plan,
    g: &'a GraphIndex,
    image: Vec<u32>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(plan: &'a Plan, g: &'a GraphIndex) -> Self {
        Search { plan, g, image: vec![0; plan.order.len()], used: vec![false; g.n] }
    }

    #[inline]
    fn admissible(&self, k: usize, x: u32, skip: Option<usize>) -> bool {
        if self.used[x as usize] {
            return false;
        }
        let md = &self.plan.min_deg[k];
        if self.g.degree(1, x) < md[0] || self.g.degree(2, x) < md[1] || self.g.degree(3, x) < md[2] {
            return false;
        }
        self.plan.checks[k]
            .iter()
            .enumerate()
            .all(|(i, &(j, need))| Some(i) == skip || self.g.satisfies(need, self.image[j], x))
    }

    /// Candidate source for position `k`: the shortest back-edge neighbour
    /// list, or every host vertex when `k` starts a new component.
    fn for_each_candidate(&self, k: usize, mut f: impl FnMut(u32)) {
        let checks = &self.plan.checks[k];
        if checks.is_empty() {
            for x in 0..self.g.n as u32 {
                if self.admissible(k, x, None) {
                    f(x);
                }
            }
            return;
        }
        let (best, &(j, need)) = checks
            .iter()
            .enumerate()
            .min_by_key(|(_, &(j, need))| self.g.degree(need, self.image[j]))
            .unwrap();
        for &x in self.g.neighbours(need, self.image[j]) {
            if self.admissible(k, x, Some(best)) {
                f(x);
            }
        }
    }

    fn count(&mut self, k: usize) -> u128 {
        let last = self.plan.order.len() - 1;
        if k == last {
            let mut c = 0u128;
            self.for_each_candidate(k, |_| c += 1);
            return c;
        }
        let mut cands = Vec::new();
        self.for_each_candidate(k, |x| cands.push(x));
        let mut total = 0;
        for x in cands {
            self.image[k] = x;
            self.used[x as usize] = true;
            total += self.count(k + 1);
            self.used[x as usize] = false;
        }
        total
    }

    fn visit(&mut self, k: usize, phi: &mut [u32], f: &mut dyn FnMut(&[u32])) {
        if k == self.plan.order.len() {
            for (pos, &u) in self.plan.order.iter().enumerate() {
                phi[u as usize] = self.image[pos];
            }
            f(phi);
            return;
        }
        let mut cands = Vec::new();
        self.for_each_candidate(k, |x| cands.push(x));
        for x in cands {
            self.image[k] = x;
            self.used[x as usize] = true;
            self.visit(k + 1, phi, f);
            self.used[x as usize] = false;
        }
    }
}

fn falling(n: u128, k: u32) -> u128 {
    (0..k as u128).map(|i| n.saturating_sub(i)).product()
}

fn check_motif(h: &Multiplex) -> Result<()> {
    let v = h.n_vertices() as usize;
    if v > MOTIF_MAX_VERTICES {
        return Err(MuxError::CapExceeded { what: "motif vertex count", actual: v, cap: MOTIF_MAX_VERTICES });
    }
    Ok(())
}

/// A motif prepared for repeated counting against many hosts.
#[derive(Debug, Clone)]
pub struct MotifCounter {
    plan: Plan,
    aut: u64,
}

impl MotifCounter {
    pub fn new(h: &Multiplex) -> Result<Self> {
        check_motif(h)?;
        Ok(MotifCounter { plan: Plan::new(h, &[], false), aut: automorphism_count(h)? })
    }

    pub fn aut_size(&self) -> u64 {
        self.aut
    }

    pub fn injections(&self, g: &GraphIndex) -> u128 {
        let placed = self.plan.order.len();
        if placed > g.n {
            return 0;
        }
        let base = if placed == 0 { 1 } else { Search::new(&self.plan, g).count(0) };
        base * falling((g.n - placed) as u128, self.plan.free)
    }

    pub fn count(&self, g: &GraphIndex) -> CountResult {
        let injections = self.injections(g);
        debug_assert_eq!(injections % self.aut as u128, 0);
        CountResult { injections, aut_size: self.aut, copies: injections / self.aut as u128 }
    }
}

/// Backtracking count of injective multiplex homomorphisms `H → G`.
pub fn count_injections(h: &Multiplex, g: &Multiplex) -> Result<u128> {
    check_motif(h)?;
    let plan = Plan::new(h, &[], false);
    let gi = GraphIndex::new(g);
    let placed = plan.order.len();
    if placed > gi.n {
        return Ok(0);
    }
    let base = if placed == 0 { 1 } else { Search::new(&plan, &gi).count(0) };
    Ok(base * falling((gi.n - placed) as u128, plan.free))
}

/// Exhaustive oracle over every injective map, for `|V(G)| ≤ 10`.
pub fn count_injections_bruteforce(h: &Multiplex, g: &Multiplex) -> Result<u128> {
    count_injections_bruteforce_capped(h, g, BRUTEFORCE_MAX_VERTICES)
}

pub fn count_injections_bruteforce_capped(h: &Multiplex, g: &Multiplex, max_host: usize) -> Result<u128> {
    let (hv, gv) = (h.n_vertices() as usize, g.n_vertices() as usize);
    if gv > max_host {
        return Err(MuxError::CapExceeded { what: "oracle host vertex count", actual: gv, cap: max_host });
    }
    if hv > gv {
        return Ok(0);
    }
    let g1 = edge_set(g.layer1());
    let g2 = edge_set(g.layer2());
    let key = |a: u32, b: u32| (a.min(b), a.max(b));
    let is_hom = |phi: &[u32]| {
        h.layer1().iter().all(|&(u, v)| g1.contains(&key(phi[u as usize], phi[v as usize])))
            && h.layer2().iter().all(|&(u, v)| g2.contains(&key(phi[u as usize], phi[v as usize])))
    };

    fn rec(k: usize, hv: usize, gv: usize, phi: &mut Vec<u32>, used: &mut [bool], ok: &dyn Fn(&[u32]) -> bool) -> u128 {
        if k == hv {
            return ok(phi) as u128;
        }
        let mut t = 0;
        for x in 0..gv {
            if !used[x] {
                used[x] = true;
                phi.push(x as u32);
                t += rec(k + 1, hv, gv, phi, used, ok);
                phi.pop();
                used[x] = false;
            }
        }
        t
    }
    Ok(rec(0, hv, gv, &mut Vec::with_capacity(hv), &mut vec![false; gv], &is_hom))
}

/// Injections, automorphism count and copies (`injections / |Aut(H)|`).
pub fn count_copies(h: &Multiplex, g: &Multiplex) -> Result<CountResult> {
    Ok(MotifCounter::new(h)?.count(&GraphIndex::new(g)))
}

/// Calls `f(φ)` for every injective homomorphism extending the partial map
/// `prefix` (pairs of motif vertex, host vertex). `φ` is indexed by motif vertex.
pub fn for_each_embedding(
    h: &Multiplex,
    g: &GraphIndex,
    prefix: &[(u32, u32)],
    f: &mut dyn FnMut(&[u32]),
) -> Result<()> {
    check_motif(h)?;
    let pre: Vec<u32> = prefix.iter().map(|&(u, _)| u).collect();
    let plan = Plan::new(h, &pre, true);
    if plan.order.len() > g.n {
        return Ok(());
    }
    let mut search = Search::new(&plan, g);
    for (k, &(_, x)) in prefix.iter().enumerate() {
        if x as usize >= g.n || !search.admissible(k, x, None) {
            return Ok(());
        }
        search.image[k] = x;
        search.used[x as usize] = true;
    }
    let mut phi = vec![0u32; plan.h_vertices];
    search.visit(prefix.len(), &mut phi, f);
    Ok(())
}

/// Labelled image of `H`: sorted layer-1 edges, layer-2 edges, vertices.
pub type ImageKey = (Vec<Edge>, Vec<Edge>, Vec<u32>);

/// Distinct images `φ(H)` in `G` whose restriction to `core_pattern` is
/// `core_copy`. `core_pattern` is given in `H`'s labels and `core_copy` in
/// `G`'s labels; `G` must already contain the copy (plant it first).
pub fn extension_images(
    core_copy: &Multiplex,
    h: &Multiplex,
    core_pattern: &Submultiplex,
    g: &Multiplex,
) -> Result<HashSet<ImageKey>> {
    if !core_pattern.is_contained_in(h) {
        return Err(MuxError::NotASubmultiplex);
    }
    if !core_copy.is_subset_of(g) || core_copy.n_vertices() > g.n_vertices() {
        return Err(MuxError::CoreNotPresent);
    }
    let copy = Submultiplex::from_multiplex(core_copy);
    let (pc, pmap) = core_pattern.to_compact();
    let (cc, cmap) = copy.to_compact();
    if pc.n_vertices() != cc.n_vertices()
        || pc.layer1().len() != cc.layer1().len()
        || pc.layer2().len() != cc.layer2().len()
    {
        return Err(MuxError::CoreMismatch);
    }
    // edge counts agree, so an injective homomorphism onto the copy is an edge bijection
    let mut placements: Vec<Vec<(u32, u32)>> = Vec::new();
    for_each_embedding(&pc, &GraphIndex::new(&cc), &[], &mut |phi: &[u32]| {
        placements.push(phi.iter().enumerate().map(|(i, &x)| (pmap[i], cmap[x as usize])).collect());
    })?;
    if placements.is_empty() {
        return Err(MuxError::CoreMismatch);
    }
    let gi = GraphIndex::new(g);
    let mut images: HashSet<ImageKey> = HashSet::new();
    for prefix in &placements {
        for_each_embedding(h, &gi, prefix, &mut |phi: &[u32]| {
            images.insert(image_key(h, phi));
        })?;
    }
    Ok(images)
}

/// Number of copies of `H` in `G` that contain `core_copy` as the image of
/// `core_pattern`; see [`extension_images`].
pub fn count_extensions(
    core_copy: &Multiplex,
    h: &Multiplex,
    core_pattern: &Submultiplex,
    g: &Multiplex,
) -> Result<u64> {
    Ok(extension_images(core_copy, h, core_pattern, g)?.len() as u64)
}

/// Labelled image `φ(H)` as sorted edge lists and vertex set.
pub(crate) fn image_key(h: &Multiplex, phi: &[u32]) -> ImageKey {
    let map = |es: &[Edge]| -> Vec<Edge> {
        let mut v: Vec<Edge> = es
            .iter()
            .map(|&(u, w)| {
                let (a, b) = (phi[u as usize], phi[w as usize]);
                (a.min(b), a.max(b))
            })
            .collect();
        v.sort_unstable();
        v
    };
    let mut vs = phi.to_vec();
    vs.sort_unstable();
    (map(h.layer1()), map(h.layer2()), vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplex::fixtures::*;

    #[test]
    fn simple_counts() {
        let k3 = Multiplex::complete(3);
        assert_eq!(count_injections_bruteforce(&single_edge_layer1(), &k3).unwrap(), 6);
        assert_eq!(count_injections(&single_edge_layer1(), &k3).unwrap(), 6);
        let g = double_edge();
        assert_eq!(count_injections_bruteforce(&double_edge(), &g).unwrap(), 2);
        assert_eq!(count_injections(&double_edge(), &g).unwrap(), 2);
    }

    #[test]
    fn closed_forms() {
        let g = Multiplex::new(6, &[(0, 1), (1, 2), (2, 3), (4, 5)], &[(1, 2), (4, 5), (0, 5)]).unwrap();
        assert_eq!(count_injections(&single_edge_layer1(), &g).unwrap(), 8);
        assert_eq!(count_injections(&double_edge(), &g).unwrap(), 4);
    }

    #[test]
    fn copies() {
        let r = edge_triangle();
        let c = count_copies(&r, &r).unwrap();
        assert_eq!((c.injections, c.aut_size, c.copies), (2, 2, 1));
        let k4 = Multiplex::new(4, Multiplex::complete(4).layer1(), &[]).unwrap();
        assert_eq!(count_copies(&triangle_layer1(), &k4).unwrap().copies, 4);
        assert_eq!(count_copies(&five_vertex(), &k4).unwrap().copies, 0);
    }

    #[test]
    fn isolated_motif_vertices() {
        let h = Multiplex::new(4, &[(0, 1)], &[]).unwrap();
        let g = Multiplex::new(5, &[(0, 1), (2, 3)], &[]).unwrap();
        assert_eq!(count_injections(&h, &g).unwrap(), count_injections_bruteforce(&h, &g).unwrap());
        assert_eq!(count_injections(&Multiplex::empty(3), &g).unwrap(), 60);
    }

    #[test]
    fn illustration_map_is_a_homomorphism() {
        let h = illustration_motif();
        let g = illustration_sample();
        // φ(1)=7, φ(2)=6, φ(3)=9 in 1-based labels
        let phi = [6u32, 5, 8];
        let key = |a: u32, b: u32| (a.min(b), a.max(b));
        assert!(h.layer1().iter().all(|&(u, v)| g.has1(key(phi[u as usize], phi[v as usize]))));
        assert!(h.layer2().iter().all(|&(u, v)| g.has2(key(phi[u as usize], phi[v as usize]))));
        let fast = count_injections(&h, &g).unwrap();
        assert_eq!(fast, count_injections_bruteforce_capped(&h, &g, 15).unwrap());
        assert!(fast >= 1);
    }

    #[test]
    fn extensions_of_planted_double_edge() {
        let r = edge_triangle();
        let core = Submultiplex::from_edges(vec![(1, 2)], vec![(1, 2)]);
        let planted = Multiplex::new(3, &[(0, 1)], &[(0, 1)]).unwrap();
        let g = Multiplex::new(3, &[(0, 1), (0, 2), (1, 2)], &[(0, 1)]).unwrap();
        assert_eq!(count_extensions(&planted, &r, &core, &g).unwrap(), 1);
        let g0 = Multiplex::new(3, &[(0, 1), (0, 2)], &[(0, 1)]).unwrap();
        assert_eq!(count_extensions(&planted, &r, &core, &g0).unwrap(), 0);
        let missing = Multiplex::new(3, &[(0, 2)], &[]).unwrap();
        assert_eq!(count_extensions(&planted, &r, &core, &missing), Err(MuxError::CoreNotPresent));
    }

    #[test]
    fn extensions_of_whole_motif_is_one() {
        let p = five_vertex();
        let whole = Submultiplex::from_multiplex(&p);
        assert_eq!(count_extensions(&p, &p, &whole, &p).unwrap(), 1);
        let g = p.union(&Multiplex::complete(5).swap_layers().intersection(&Multiplex::new(5, &[(0, 3)], &[]).unwrap()));
        assert_eq!(count_extensions(&p, &p, &whole, &g).unwrap(), 1);
    }
}
