//! Seeded sampling from the correlated Erdős–Rényi multiplex model and
//! planting of fixed copies.
//!
//! Each replication owns an independent ChaCha8 stream selected by
//! `(base_seed, replication_index)`, so a sample never depends on which
//! worker draws it or in what order replications run.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MuxError, Result};
use crate::multiplex::{Edge, Multiplex};
use crate::rational;
use crate::threshold::ThetaPoint;

/// Per-pair probabilities `(p1, p2, p12)` in `(0, 1)` with
/// `max(0, p1 + p2 − 1) ≤ p12 ≤ min(p1, p2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbTriple {
    pub p1: f64,
    pub p2: f64,
    pub p12: f64,
}

impl ProbTriple {
    pub fn new(p1: f64, p2: f64, p12: f64) -> Result<Self> {
        let open = |p: f64| p.is_finite() && p > 0.0 && p < 1.0;
        let ok = open(p1) && open(p2) && open(p12) && p12 <= p1.min(p2) && p12 >= (p1 + p2 - 1.0).max(0.0);
        if ok {
            Ok(ProbTriple { p1, p2, p12 })
        } else {
            Err(MuxError::InfeasibleProbabilities { p1, p2, p12 })
        }
    }

    /// Probabilities of the four pair states `(both, only1, only2, neither)`.
    pub fn state_probabilities(&self) -> [f64; 4] {
        [self.p12, self.p1 - self.p12, self.p2 - self.p12, 1.0 - self.p1 - self.p2 + self.p12]
    }
}

/// `(n^{−θ1}, n^{−θ2}, n^{−θ12})`, rejected when the result leaves the
/// feasible band.
pub fn from_theta(n: u64, theta: &ThetaPoint) -> Result<ProbTriple> {
    if n < 2 {
        return Err(MuxError::TooFewVertices { n, v: 2 });
    }
    theta.require_domain()?;
    let ln_n = (n as f64).ln();
    let pw = |t: &rational::Rational| (-rational::to_f64(t) * ln_n).exp();
    ProbTriple::new(pw(&theta.theta1), pw(&theta.theta2), pw(&theta.theta12))
}

/// Identifies one replication's random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub base_seed: u64,
    pub replication_index: u64,
}

impl SeedSpec {
    pub fn new(base_seed: u64, replication_index: u64) -> Self {
        SeedSpec { base_seed, replication_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base_seed);
        rng.set_stream(self.replication_index);
        rng
    }
}

#[inline]
fn unit_interval(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One draw of `G(n, p1, p2, p12)`. Pairs are visited in lexicographic
/// order and each consumes exactly one 64-bit output.
pub fn sample(n: u32, p: &ProbTriple, seed: SeedSpec) -> Multiplex {
    let mut rng = seed.rng();
    let t_both = p.p12;
    let t_only1 = p.p1;
    let t_only2 = p.p1 + p.p2 - p.p12;
    let mut layer1: Vec<Edge> = Vec::new();
    let mut layer2: Vec<Edge> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let u = unit_interval(rng.next_u64());
            if u < t_both {
                layer1.push((i, j));
                layer2.push((i, j));
            } else if u < t_only1 {
                layer1.push((i, j));
            } else if u < t_only2 {
                layer2.push((i, j));
            }
        }
    }
    Multiplex::from_sorted_unchecked(n, layer1, layer2)
}

/// Layer-wise union `G ∪ copy` on `G`'s vertex set.
pub fn plant(g: &Multiplex, copy: &Multiplex) -> Result<Multiplex> {
    let n = g.n_vertices();
    if let Some(&v) = copy.covered_vertices().iter().find(|&&v| v >= n) {
        return Err(MuxError::VertexOutOfRange { vertex: v, n });
    }
    let lifted = Multiplex::from_sorted_unchecked(n, copy.layer1().to_vec(), copy.layer2().to_vec());
    Ok(g.union(&lifted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplex::fixtures::double_edge;

    #[test]
    fn feasibility_band() {
        assert!(ProbTriple::new(0.5, 0.5, 0.25).is_ok());
        assert!(ProbTriple::new(0.3, 0.5, 0.3).is_ok());
        assert!(ProbTriple::new(0.3, 0.5, 0.31).is_err());
        assert!(ProbTriple::new(0.9, 0.9, 0.7).is_err());
        assert!(ProbTriple::new(0.0, 0.5, 0.0).is_err());
        assert!(ProbTriple::new(f64::NAN, 0.5, 0.1).is_err());
    }

    #[test]
    fn theta_powers() {
        let p = from_theta(100, &ThetaPoint::from_ratios((1, 1), (1, 1), (1, 1))).unwrap();
        assert!((p.p1 - 0.01).abs() < 1e-15 && p.p12 == p.p1);
        let p = from_theta(100, &ThetaPoint::from_ratios((1, 2), (1, 2), (2, 1))).unwrap();
        assert!((p.p1 - 0.1).abs() < 1e-15 && (p.p12 - 1e-4).abs() < 1e-18);
        assert!(from_theta(2, &ThetaPoint::from_ratios((1, 10), (1, 10), (1, 10))).is_ok());
        assert!(from_theta(2, &ThetaPoint::from_ratios((1, 20), (1, 20), (2, 1))).is_err());
        assert!(from_theta(1, &ThetaPoint::from_ratios((1, 1), (1, 1), (1, 1))).is_err());
    }

    #[test]
    fn deterministic_and_nested() {
        let p = ProbTriple::new(0.3, 0.5, 0.3).unwrap();
        let a = sample(40, &p, SeedSpec::new(7, 3));
        assert_eq!(a, sample(40, &p, SeedSpec::new(7, 3)));
        assert_ne!(a, sample(40, &p, SeedSpec::new(7, 4)));
        assert!(a.layer1().iter().all(|&e| a.has2(e)));
    }

    #[test]
    fn plant_is_union() {
        let g = plant(&Multiplex::empty(5), &double_edge()).unwrap();
        assert_eq!(g.layer1(), &[(0, 1)]);
        assert_eq!(g.layer2(), &[(0, 1)]);
        assert_eq!(g.n_vertices(), 5);
        let far = Multiplex::new(10, &[(8, 9)], &[]).unwrap();
        assert!(plant(&Multiplex::empty(5), &far).is_err());
    }
}
