//! Closed-form moments under `G(n, p1, p2, p12)`.

use std::collections::HashMap;

use crate::counting::extension_images;
use crate::error::{MuxError, Result};
use crate::multiplex::{automorphism_count, Edge, Multiplex};
use crate::sampler::ProbTriple;
use crate::submultiplex::Submultiplex;

/// Largest motif accepted by [`exact_variance_injections`].
pub const VARIANCE_MAX_VERTICES: usize = 6;

const L1: u8 = 1;
const L2: u8 = 2;

/// `n (n − 1) ⋯ (n − k + 1)` in floating point; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (n - i) as f64).product()
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

/// Probability that a pair carries every layer in `need`.
fn prob(p: &ProbTriple, need: u8) -> f64 {
    match need {
        0 => 1.0,
        L1 => p.p1,
        L2 => p.p2,
        _ => p.p12,
    }
}

/// Per-pair layer requirements of `h`, as bitmasks over `{L1, L2}`.
fn requirements(h: &Multiplex) -> Vec<(u32, u32, u8)> {
    let mut req: HashMap<Edge, u8> = HashMap::new();
    for &e in h.layer1() {
        *req.entry(e).or_default() |= L1;
    }
    for &e in h.layer2() {
        *req.entry(e).or_default() |= L2;
    }
    let mut out: Vec<(u32, u32, u8)> = req.into_iter().map(|((u, v), r)| (u, v, r)).collect();
    out.sort_unstable();
    out
}

fn check_n(h: &Multiplex, n: u64) -> Result<()> {
    if n < h.n_vertices() as u64 {
        return Err(MuxError::TooFewVertices { n, v: h.n_vertices() as usize });
    }
    Ok(())
}

/// `E[X] = (n)_v · p1^a · p2^b · p12^c` for the injection count `X`.
pub fn exact_mean_injections(h: &Multiplex, n: u64, p: &ProbTriple) -> Result<f64> {
    check_n(h, n)?;
    let s = h.edge_class_counts();
    let log_p = s.a as f64 * p.p1.ln() + s.b as f64 * p.p2.ln() + s.c as f64 * p.p12.ln();
    Ok(falling_factorial(n, s.v as u64) * log_p.exp())
}

/// Expected copy count, `E[X] / |Aut(H)|`.
pub fn exact_mean_copies(h: &Multiplex, n: u64, p: &ProbTriple) -> Result<f64> {
    Ok(exact_mean_injections(h, n, p)? / automorphism_count(h)? as f64)
}

/// `Var[X]` as a sum over ordered pairs of injections `(φ, ψ)`.
///
/// `φ` is fixed to the identity on slots `0..v`; `ψ` runs over relative
/// patterns into those slots plus canonically numbered fresh slots. A
/// pattern with `k` fresh slots stands for `(n − v)_k` concrete maps, and
/// only patterns sharing at least one constrained pair contribute.
pub fn exact_variance_injections(h: &Multiplex, n: u64, p: &ProbTriple) -> Result<f64> {
    let v = h.n_vertices() as usize;
    if v > VARIANCE_MAX_VERTICES {
        return Err(MuxError::CapExceeded { what: "variance motif vertex count", actual: v, cap: VARIANCE_MAX_VERTICES });
    }
    check_n(h, n)?;
    let pairs = requirements(h);
    let ph: f64 = pairs.iter().map(|&(_, _, r)| prob(p, r)).product();
    let mut old = vec![0u8; v * v];
    for &(a, b, r) in &pairs {
        old[a as usize * v + b as usize] = r;
        old[b as usize * v + a as usize] = r;
    }

    struct Walk<'a> {
        v: usize,
        n: u64,
        pairs: &'a [(u32, u32, u8)],
        old: &'a [u8],
        p: &'a ProbTriple,
        psi: Vec<usize>,
        used: Vec<bool>,
        total: f64,
    }

    impl Walk<'_> {
        fn rec(&mut self, k: usize, fresh: usize) {
            if k == self.v {
                let mut ratio = 1.0;
                let mut shared = false;
                for &(a, b, r) in self.pairs {
                    let (x, y) = (self.psi[a as usize], self.psi[b as usize]);
                    if x < self.v && y < self.v {
                        let q = self.old[x * self.v + y];
                        if q != 0 {
                            shared = true;
                            ratio *= prob(self.p, q | r) / (prob(self.p, q) * prob(self.p, r));
                        }
                    }
                }
                if shared {
                    self.total += falling_factorial(self.n - self.v as u64, fresh as u64) * (ratio - 1.0);
                }
                return;
            }
            for slot in 0..self.v {
                if !self.used[slot] {
                    self.used[slot] = true;
                    self.psi[k] = slot;
                    self.rec(k + 1, fresh);
                    self.used[slot] = false;
                }
            }
            self.psi[k] = self.v + fresh;
            self.rec(k + 1, fresh + 1);
        }
    }

    let mut walk = Walk { v, n, pairs: &pairs, old: &old, p, psi: vec![0; v], used: vec![false; v], total: 0.0 };
    walk.rec(0, 0);
    Ok(falling_factorial(n, v as u64) * ph * ph * walk.total)
}

/// Expected number of extensions of one planted copy of `core_pattern` to a
/// copy of `H` in `G(n, p) ∪ copy`.
///
/// The extensions inside a fixed vertex set of size `|V(H)|` are enumerated
/// in the complete multiplex; each contributes the probability of the pair
/// states it needs beyond the planted copy.
pub fn exact_mean_extensions(core_pattern: &Submultiplex, h: &Multiplex, n: u64, p: &ProbTriple) -> Result<f64> {
    if !core_pattern.is_contained_in(h) {
        return Err(MuxError::NotASubmultiplex);
    }
    check_n(h, n)?;
    let v = h.n_vertices();
    let vc = core_pattern.vertices.len() as u64;
    let copy = core_pattern.to_multiplex(v);
    let host = Multiplex::complete(v);
    let images = extension_images(&copy, h, core_pattern, &host)?;
    let planted: HashMap<Edge, u8> = requirements(&copy).into_iter().map(|(a, b, r)| ((a, b), r)).collect();
    let mut sum = 0.0;
    for (l1, l2, _) in &images {
        let img = Multiplex::from_sorted_unchecked(v, l1.clone(), l2.clone());
        let mut w = 1.0;
        for (a, b, r) in requirements(&img) {
            let have = planted.get(&(a, b)).copied().unwrap_or(0);
            w *= prob(p, r & !have);
        }
        sum += w;
    }
    Ok(binomial(n - vc, v as u64 - vc) * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplex::fixtures::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    #[test]
    fn means() {
        let p = ProbTriple::new(0.1, 0.1, 0.01).unwrap();
        assert!(close(exact_mean_injections(&edge_triangle(), 100, &p).unwrap(), 100.0 * 99.0 * 98.0 * 1e-4));
        assert!(close(exact_mean_injections(&double_edge(), 50, &p).unwrap(), 50.0 * 49.0 * 0.01));
        assert!(close(exact_mean_injections(&Multiplex::empty(3), 10, &p).unwrap(), 720.0));
        assert!(close(exact_mean_copies(&edge_triangle(), 100, &p).unwrap(), 100.0 * 99.0 * 98.0 * 1e-4 / 2.0));
        assert!(exact_mean_injections(&edge_triangle(), 2, &p).is_err());
    }

    #[test]
    fn single_edge_variance() {
        let p = ProbTriple::new(0.3, 0.2, 0.1).unwrap();
        let n = 40u64;
        let got = exact_variance_injections(&single_edge_layer1(), n, &p).unwrap();
        let want = 4.0 * (n * (n - 1) / 2) as f64 * 0.3 * 0.7;
        assert!(close(got, want));
        assert_eq!(exact_variance_injections(&Multiplex::empty(3), n, &p).unwrap(), 0.0);
        assert!(exact_variance_injections(&Multiplex::complete(7), n, &p).is_err());
    }

    #[test]
    fn extension_means() {
        let p = ProbTriple::new(0.1, 0.2, 0.05).unwrap();
        let r = edge_triangle();
        let o = Submultiplex::from_edges(vec![(1, 2)], vec![(1, 2)]);
        assert!(close(exact_mean_extensions(&o, &r, 200, &p).unwrap(), 198.0 * 0.01));
        let whole = Submultiplex::from_multiplex(&r);
        assert!(close(exact_mean_extensions(&whole, &r, 200, &p).unwrap(), 1.0));
        let foreign = Submultiplex::from_edges(vec![], vec![(0, 1)]);
        assert!(exact_mean_extensions(&foreign, &r, 200, &p).is_err());
    }
}
