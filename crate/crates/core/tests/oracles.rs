//! Library results checked against independent oracles written here, plus
//! randomized invariants.

use proptest::prelude::*;

use mux_core::counting::{count_copies, count_injections};
use mux_core::multiplex::automorphism_count;
use mux_core::multiplex::fixtures::*;
use mux_core::rational::{int, rat};
use mux_core::region::{self, Membership};
use mux_core::sampler::ProbTriple;
use mux_core::stats::{exact_mean_injections, exact_variance_injections, falling_factorial};
use mux_core::submultiplex::{completion, enumerate_submultiplexes, is_complete};
use mux_core::threshold::{self, ell, ThetaPoint};
use mux_core::{Multiplex, Submultiplex};

/// Pair state bits: 1 = layer 1, 2 = layer 2.
fn state(m: &Multiplex, u: u32, v: u32) -> u8 {
    let e = (u.min(v), u.max(v));
    (m.has1(e) as u8) | ((m.has2(e) as u8) << 1)
}

/// Every injection `V(H) → V(G)` as a vector of images.
fn injections(v: u32, n: u32) -> Vec<Vec<u32>> {
    fn go(v: u32, n: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == v as usize {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !cur.contains(&x) {
                cur.push(x);
                go(v, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(v, n, &mut Vec::new(), &mut out);
    out
}

fn edges_with_state(h: &Multiplex) -> Vec<(u32, u32, u8)> {
    let v = h.n_vertices();
    let mut out = Vec::new();
    for a in 0..v {
        for b in (a + 1)..v {
            let s = state(h, a, b);
            if s != 0 {
                out.push((a, b, s));
            }
        }
    }
    out
}

fn naive_injections(h: &Multiplex, g: &Multiplex) -> u128 {
    let req = edges_with_state(h);
    injections(h.n_vertices(), g.n_vertices())
        .iter()
        .filter(|phi| req.iter().all(|&(a, b, s)| state(g, phi[a as usize], phi[b as usize]) & s == s))
        .count() as u128
}

fn requirement_prob(s: u8, p: &ProbTriple) -> f64 {
    match s {
        0 => 1.0,
        1 => p.p1,
        2 => p.p2,
        _ => p.p12,
    }
}

/// `Σ_{φ,ψ} Cov(X_φ, X_ψ)` by direct double summation over injections.
fn naive_variance(h: &Multiplex, n: u32, p: &ProbTriple) -> f64 {
    let req = edges_with_state(h);
    let maps = injections(h.n_vertices(), n);
    let reqs: Vec<Vec<((u32, u32), u8)>> = maps
        .iter()
        .map(|phi| {
            req.iter()
                .map(|&(a, b, s)| {
                    let (x, y) = (phi[a as usize], phi[b as usize]);
                    ((x.min(y), x.max(y)), s)
                })
                .collect()
        })
        .collect();
    let single: f64 = req.iter().map(|&(_, _, s)| requirement_prob(s, p)).product();
    let mut total = 0.0;
    for r1 in &reqs {
        for r2 in &reqs {
            let mut joint = 1.0;
            for &(e, s) in r1 {
                let s2 = r2.iter().find(|(f, _)| *f == e).map_or(0, |x| x.1);
                joint *= requirement_prob(s | s2, p);
            }
            for &(e, s) in r2 {
                if !r1.iter().any(|(f, _)| *f == e) {
                    joint *= requirement_prob(s, p);
                }
            }
            total += joint - single * single;
        }
    }
    total
}

fn arb_multiplex(max_v: u32, density: f64) -> impl Strategy<Value = Multiplex> {
    (1..=max_v).prop_flat_map(move |v| {
        let pairs = (v * (v.saturating_sub(1)) / 2) as usize;
        proptest::collection::vec((proptest::bool::weighted(density), proptest::bool::weighted(density)), pairs)
            .prop_map(move |bits| {
                let mut l1 = Vec::new();
                let mut l2 = Vec::new();
                let mut k = 0;
                for a in 0..v {
                    for b in (a + 1)..v {
                        if bits[k].0 {
                            l1.push((a, b));
                        }
                        if bits[k].1 {
                            l2.push((a, b));
                        }
                        k += 1;
                    }
                }
                Multiplex::new(v, &l1, &l2).unwrap()
            })
    })
}

fn arb_motif() -> impl Strategy<Value = Multiplex> {
    arb_multiplex(4, 0.45).prop_filter("needs an edge", |m| m.has_edges() && m.total_edges() <= 7)
}

fn arb_theta() -> impl Strategy<Value = ThetaPoint> {
    (1..30i128, 1..30i128, 0..30i128, 1..8i128).prop_map(|(a, b, c, d)| {
        let (t1, t2) = (rat(a, d), rat(b, d));
        ThetaPoint::new(t1, t2, t1.max(t2) + rat(c, d))
    })
}

#[test]
fn variance_matches_double_sum() {
    let p = ProbTriple::new(0.3, 0.4, 0.2).unwrap();
    for (h, n) in [
        (edge_triangle(), 6),
        (double_edge(), 5),
        (illustration_motif(), 6),
        (triangle_layer1(), 6),
        (Multiplex::new(4, &[(0, 1), (1, 2), (2, 3)], &[(0, 3)]).unwrap(), 6),
    ] {
        let exact = exact_variance_injections(&h, n as u64, &p).unwrap();
        let naive = naive_variance(&h, n, &p);
        assert!((exact - naive).abs() <= 1e-9 * naive.abs().max(1.0), "{h:?}: {exact} vs {naive}");
    }
}

#[test]
fn mean_matches_enumeration() {
    let p = ProbTriple::new(0.3, 0.4, 0.2).unwrap();
    let h = illustration_motif();
    let single: f64 = edges_with_state(&h).iter().map(|&(_, _, s)| requirement_prob(s, &p)).product();
    let naive = injections(3, 7).len() as f64 * single;
    assert!((exact_mean_injections(&h, 7, &p).unwrap() - naive).abs() < 1e-9);
}

#[test]
fn delta_of_examples() {
    let r = edge_triangle();
    assert_eq!(threshold::delta(&r, &ThetaPoint::from_ratios((1, 1), (1, 1), (1, 1))).unwrap().value, int(0));
    let p = five_vertex();
    assert_eq!(threshold::delta(&p, &ThetaPoint::from_ratios((5, 6), (5, 6), (5, 6))).unwrap().value, int(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn counter_matches_naive_oracle(h in arb_motif(), g in arb_multiplex(6, 0.6)) {
        prop_assume!(h.n_vertices() <= g.n_vertices());
        prop_assert_eq!(count_injections(&h, &g).unwrap(), naive_injections(&h, &g));
    }

    #[test]
    fn counts_monotone_under_supergraph(h in arb_motif(), g in arb_multiplex(6, 0.5), extra in arb_multiplex(6, 0.3)) {
        prop_assume!(h.n_vertices() <= g.n_vertices() && extra.n_vertices() <= g.n_vertices());
        let bigger = g.union(&extra.relabel(g.n_vertices(), &(0..extra.n_vertices()).collect::<Vec<_>>()).unwrap());
        prop_assert!(g.is_subset_of(&bigger));
        prop_assert!(count_injections(&h, &g).unwrap() <= count_injections(&h, &bigger).unwrap());
    }

    #[test]
    fn layer_swap_symmetry(h in arb_motif(), g in arb_multiplex(6, 0.6)) {
        prop_assume!(h.n_vertices() <= g.n_vertices());
        prop_assert_eq!(count_injections(&h, &g).unwrap(), count_injections(&h.swap_layers(), &g.swap_layers()).unwrap());
    }

    #[test]
    fn complete_host_gives_falling_factorial(h in arb_motif(), n in 4u32..9) {
        let got = count_injections(&h, &Multiplex::complete(n)).unwrap();
        prop_assert_eq!(got as f64, falling_factorial(n as u64, h.n_vertices() as u64));
    }

    #[test]
    fn automorphisms_divide_factorial_and_injections(h in arb_motif(), g in arb_multiplex(6, 0.7)) {
        let aut = automorphism_count(&h).unwrap();
        let fact: u64 = (1..=h.n_vertices() as u64).product();
        prop_assert_eq!(fact % aut, 0);
        prop_assume!(h.n_vertices() <= g.n_vertices());
        let c = count_copies(&h, &g).unwrap();
        prop_assert_eq!(c.copies * c.aut_size as u128, c.injections);
    }

    #[test]
    fn delta_is_minimum_over_enumeration(h in arb_motif(), t in arb_theta()) {
        let brute = enumerate_submultiplexes(&h, 1).unwrap().map(|f| ell(&f.signature(), &t)).min().unwrap();
        prop_assert_eq!(threshold::delta(&h, &t).unwrap().value, brute);
    }

    #[test]
    fn completion_properties(h in arb_motif(), t in arb_theta()) {
        for f in enumerate_submultiplexes(&h, 1).unwrap() {
            let c = completion(&f, &h);
            prop_assert!(f.is_subset_of(&c));
            prop_assert!(is_complete(&c, &h));
            prop_assert_eq!(completion(&c, &h), c.clone());
            prop_assert!(ell(&c.signature(), &t) <= ell(&f.signature(), &t));
        }
    }

    #[test]
    fn lattice_identities(h in arb_motif()) {
        let subs: Vec<Submultiplex> = enumerate_submultiplexes(&h, 0).unwrap().take(40).collect();
        for a in &subs {
            for b in &subs {
                prop_assert_eq!(a.union(b), b.union(a));
                prop_assert_eq!(a.intersection(b), b.intersection(a));
                prop_assert_eq!(a.union(&a.intersection(b)), a.clone());
                prop_assert!(a.intersection(b).is_subset_of(a) && a.is_subset_of(&a.union(b)));
            }
        }
    }

    #[test]
    fn extremal_set_is_closed_on_the_boundary(h in arb_motif(), t in arb_theta()) {
        let sigs = threshold::signatures(&h).unwrap();
        let s = sigs
            .iter()
            .map(|s| int(s.v as i128) / (t.theta1 * int(s.a as i128) + t.theta2 * int(s.b as i128) + t.theta12 * int(s.c as i128)))
            .min()
            .unwrap();
        let b = t.scale(s);
        prop_assert_eq!(region::membership(&h, &b).unwrap(), Membership::Boundary);
        let ext = threshold::extremal_set(&h, &b).unwrap();
        for q in &ext {
            prop_assert_eq!(ell(&completion(q, &h).signature(), &b), int(0));
            for r in &ext {
                prop_assert_eq!(ell(&completion(q, &h).union(&completion(r, &h)).signature(), &b), int(0));
            }
        }
        let core = threshold::core(&h, &b).unwrap();
        prop_assert!(core.is_contained_in(&h));
        prop_assert!(ext.iter().all(|q| completion(q, &h).is_subset_of(&core)));
    }

    #[test]
    fn membership_matches_region_and_delta(h in arb_motif(), t in arb_theta()) {
        let d = threshold::delta(&h, &t).unwrap().value;
        let m = region::membership(&h, &t).unwrap();
        prop_assert_eq!(m == Membership::Satisfiable, d > int(0));
        prop_assert_eq!(m == Membership::Boundary, d == int(0));
        prop_assert_eq!(region::polyhedron(&h).unwrap().contains(&t), d > int(0));
    }

    #[test]
    fn log_phi_is_delta_times_log_n(h in arb_motif(), t in arb_theta(), n in 20u64..5000) {
        let p = mux_core::sampler::from_theta(n, &t);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let phi = threshold::phi(&h, n, &p).unwrap();
        let d = mux_core::rational::to_f64(&threshold::delta(&h, &t).unwrap().value);
        let want = d * (n as f64).ln();
        prop_assert!((phi.log_value - want).abs() <= 1e-9 * want.abs().max(1.0));
        prop_assert_eq!(phi.log_value > 1e-9, d > 0.0);
    }

    #[test]
    fn slice_vertices_lie_on_the_closure(h in arb_motif()) {
        let s = region::slice2d(&h).unwrap();
        let cons = region::constraints(&h).unwrap();
        for v in &s.vertices {
            let x = [v.theta, v.theta, v.theta12];
            prop_assert!(cons.iter().all(|c| c.holds_closed(&x)));
            prop_assert!(cons.iter().filter(|c| c.active(&x)).count() >= 1);
        }
    }
}
