//! Exponent forms `ℓ_F(θ) = v − aθ1 − bθ2 − cθ12`, their minimum `Δ_H`,
//! the threshold function `Φ_H`, extremal sets, balance labels and cores.
//!
//! Everything on the θ side is exact: a point lies on the threshold surface
//! iff `Δ_H(θ) == 0` as a rational.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{MuxError, Result};
use crate::multiplex::{Multiplex, Signature};
use crate::rational::{self, format_rational, int, Rational};
use crate::sampler::ProbTriple;
use crate::submultiplex::{completion, walk_signatures, Submultiplex, DEFAULT_EDGE_CAP};

/// Tie tolerance, in natural-log units, for the float minimisation in [`phi`].
pub const PHI_LOG_TIE_TOLERANCE: f64 = 1e-12;

/// Exponent triple with `p1 = n^{-θ1}`, `p2 = n^{-θ2}`, `p12 = n^{-θ12}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaPoint {
    #[serde(with = "rational::serde_rational")]
    pub theta1: Rational,
    #[serde(with = "rational::serde_rational")]
    pub theta2: Rational,
    #[serde(with = "rational::serde_rational")]
    pub theta12: Rational,
}

impl ThetaPoint {
    /// Unvalidated triple; see [`ThetaPoint::in_domain`].
    pub fn new(theta1: Rational, theta2: Rational, theta12: Rational) -> Self {
        ThetaPoint { theta1, theta2, theta12 }
    }

    /// Triple checked against `θ1, θ2 > 0` and `θ12 ≥ max(θ1, θ2)`.
    pub fn feasible(theta1: Rational, theta2: Rational, theta12: Rational) -> Result<Self> {
        let t = Self::new(theta1, theta2, theta12);
        t.require_domain()?;
        Ok(t)
    }

    pub fn from_ratios(t1: (i128, i128), t2: (i128, i128), t12: (i128, i128)) -> Self {
        Self::new(Rational::new(t1.0, t1.1), Rational::new(t2.0, t2.1), Rational::new(t12.0, t12.1))
    }

    pub fn in_domain(&self) -> bool {
        let zero = int(0);
        self.theta1 > zero && self.theta2 > zero && self.theta12 >= self.theta1.max(self.theta2)
    }

    pub fn require_domain(&self) -> Result<()> {
        if self.in_domain() {
            Ok(())
        } else {
            Err(MuxError::ThetaOutsideDomain(self.to_string()))
        }
    }

    pub fn as_f64(&self) -> [f64; 3] {
        [rational::to_f64(&self.theta1), rational::to_f64(&self.theta2), rational::to_f64(&self.theta12)]
    }

    pub fn scale(&self, s: Rational) -> Self {
        Self::new(self.theta1 * s, self.theta2 * s, self.theta12 * s)
    }
}

impl std::fmt::Display for ThetaPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            format_rational(&self.theta1),
            format_rational(&self.theta2),
            format_rational(&self.theta12)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BalanceLabel {
    InteriorSatisfiable,
    ExteriorUnsatisfiable,
    StrictlyBalanced,
    BalancedNotStrict,
    Unbalanced,
}

impl BalanceLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            BalanceLabel::InteriorSatisfiable => "INTERIOR_SATISFIABLE",
            BalanceLabel::ExteriorUnsatisfiable => "EXTERIOR_UNSATISFIABLE",
            BalanceLabel::StrictlyBalanced => "STRICTLY_BALANCED",
            BalanceLabel::BalancedNotStrict => "BALANCED_NOT_STRICT",
            BalanceLabel::Unbalanced => "UNBALANCED",
        }
    }

    pub fn on_surface(&self) -> bool {
        matches!(self, BalanceLabel::StrictlyBalanced | BalanceLabel::BalancedNotStrict | BalanceLabel::Unbalanced)
    }
}

impl std::fmt::Display for BalanceLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `v − a·θ1 − b·θ2 − c·θ12`.
pub fn ell(sig: &Signature, theta: &ThetaPoint) -> Rational {
    int(sig.v as i128)
        - theta.theta1 * int(sig.a as i128)
        - theta.theta2 * int(sig.b as i128)
        - theta.theta12 * int(sig.c as i128)
}

/// Distinct signatures of the edge-bearing submultiplexes of `h`.
pub fn signatures(h: &Multiplex) -> Result<BTreeSet<Signature>> {
    if !h.has_edges() {
        return Err(MuxError::NoEdges);
    }
    let mut out = BTreeSet::new();
    walk_signatures(h, DEFAULT_EDGE_CAP, |_, _, sig, _| {
        out.insert(sig);
    })?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaResult {
    pub value: Rational,
    /// Every minimising submultiplex, in enumeration order.
    pub argmin: Vec<Submultiplex>,
}

/// Minimum of `ℓ_F(θ)` over edge-bearing `F ⊆ H`, with all minimisers.
pub fn delta(h: &Multiplex, theta: &ThetaPoint) -> Result<DeltaResult> {
    if !h.has_edges() {
        return Err(MuxError::NoEdges);
    }
    let mut cache: HashMap<Signature, Rational> = HashMap::new();
    let mut best: Option<Rational> = None;
    let mut masks: Vec<u64> = Vec::new();
    let mut layout = None;
    walk_signatures(h, DEFAULT_EDGE_CAP, |lay, mask, sig, _| {
        let val = *cache.entry(sig).or_insert_with(|| ell(&sig, theta));
        match best {
            Some(b) if val > b => {}
            Some(b) if val == b => masks.push(mask),
            _ => {
                best = Some(val);
                masks.clear();
                masks.push(mask);
            }
        }
        if layout.is_none() {
            layout = Some(lay.clone());
        }
    })?;
    let layout = layout.expect("at least one edge");
    Ok(DeltaResult { value: best.unwrap(), argmin: masks.iter().map(|&m| layout.materialize(m)).collect() })
}

/// All `F ⊆ H` with `ℓ_F(θ) = 0`; `θ` must lie on the threshold surface.
pub fn extremal_set(h: &Multiplex, theta: &ThetaPoint) -> Result<Vec<Submultiplex>> {
    let d = delta(h, theta)?;
    if d.value != int(0) {
        return Err(MuxError::NotOnThresholdSurface(theta.to_string(), format_rational(&d.value)));
    }
    Ok(d.argmin)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub label: BalanceLabel,
    pub delta: Rational,
    pub ell_whole: Rational,
    /// Minimum of `ℓ_F` over proper edge-bearing submultiplexes, if any exist.
    pub min_proper: Option<Rational>,
}

/// Balance classification of `h` at `θ ∈ Θ`.
pub fn classify(h: &Multiplex, theta: &ThetaPoint) -> Result<Classification> {
    theta.require_domain()?;
    if !h.has_edges() {
        return Err(MuxError::NoEdges);
    }
    let whole = Submultiplex::whole(h);
    let ell_whole = ell(&whole.signature(), theta);
    let full_mask = if h.total_edges() == 64 { u64::MAX } else { (1u64 << h.total_edges()) - 1 };
    let covers_all = h.covered_vertices().len() == h.n_vertices() as usize;
    let mut cache: HashMap<Signature, Rational> = HashMap::new();
    let mut min_proper: Option<Rational> = None;
    walk_signatures(h, DEFAULT_EDGE_CAP, |_, mask, sig, _| {
        if mask == full_mask && covers_all {
            return;
        }
        let val = *cache.entry(sig).or_insert_with(|| ell(&sig, theta));
        if min_proper.is_none_or(|m| val < m) {
            min_proper = Some(val);
        }
    })?;
    let delta = min_proper.map_or(ell_whole, |m| m.min(ell_whole));
    let zero = int(0);
    let label = if delta > zero {
        BalanceLabel::InteriorSatisfiable
    } else if delta < zero {
        BalanceLabel::ExteriorUnsatisfiable
    } else if ell_whole == zero {
        if min_proper.is_none_or(|m| m > zero) {
            BalanceLabel::StrictlyBalanced
        } else {
            BalanceLabel::BalancedNotStrict
        }
    } else {
        BalanceLabel::Unbalanced
    };
    Ok(Classification { label, delta, ell_whole, min_proper })
}

pub fn classify_balance(h: &Multiplex, theta: &ThetaPoint) -> Result<BalanceLabel> {
    Ok(classify(h, theta)?.label)
}

/// The maximal θ-extremal submultiplex, built as the union of the
/// completions of all extremal submultiplexes.
pub fn core(h: &Multiplex, theta: &ThetaPoint) -> Result<Submultiplex> {
    let extremal = extremal_set(h, theta)?;
    let completed: Vec<Submultiplex> = extremal.iter().map(|f| completion(f, h)).collect();
    let mut acc = completed[0].clone();
    for f in &completed[1..] {
        acc = acc.union(f);
    }
    let value = ell(&acc.signature(), theta);
    if value != int(0) {
        return Err(MuxError::CorePostcondition(format!(
            "union of completed extremal submultiplexes has ell = {}",
            format_rational(&value)
        )));
    }
    if let Some(bad) = completed.iter().find(|f| !f.is_subset_of(&acc)) {
        return Err(MuxError::CorePostcondition(format!("completion {bad:?} not inside the core")));
    }
    if !acc.is_contained_in(h) {
        return Err(MuxError::CorePostcondition("core escapes the host".into()));
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiResult {
    pub value: f64,
    pub log_value: f64,
    pub argmin: Signature,
}

/// `Φ_H(n, p) = min_F n^v p1^a p2^b p12^c`, minimised in log space. Ties
/// within [`PHI_LOG_TIE_TOLERANCE`] go to the smaller `(v, a, b, c)`.
pub fn phi(h: &Multiplex, n: u64, p: &ProbTriple) -> Result<PhiResult> {
    if (n as usize) < h.n_vertices() as usize {
        return Err(MuxError::TooFewVertices { n, v: h.n_vertices() as usize });
    }
    let sigs = signatures(h)?;
    Ok(phi_over(&sigs, n, p))
}

pub(crate) fn log_weight(sig: &Signature, n: u64, p: &ProbTriple) -> f64 {
    sig.v as f64 * (n as f64).ln()
        + sig.a as f64 * p.p1.ln()
        + sig.b as f64 * p.p2.ln()
        + sig.c as f64 * p.p12.ln()
}

pub(crate) fn phi_over(sigs: &BTreeSet<Signature>, n: u64, p: &ProbTriple) -> PhiResult {
    let mut best: Option<(f64, Signature)> = None;
    // ascending tie_key order: later entries replace only when strictly smaller
    for sig in sigs {
        let lw = log_weight(sig, n, p);
        if best.is_none_or(|(b, _)| lw < b - PHI_LOG_TIE_TOLERANCE) {
            best = Some((lw, *sig));
        }
    }
    let (log_value, argmin) = best.expect("non-empty signature set");
    PhiResult { value: log_value.exp(), log_value, argmin }
}

/// Exact `ℓ` values per signature at `θ`, for reporting.
pub fn ell_table(h: &Multiplex, theta: &ThetaPoint) -> Result<BTreeMap<Signature, Rational>> {
    Ok(signatures(h)?.into_iter().map(|s| (s, ell(&s, theta))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplex::fixtures::*;
    use crate::rational::rat;

    fn th(a: (i128, i128), b: (i128, i128), c: (i128, i128)) -> ThetaPoint {
        ThetaPoint::from_ratios(a, b, c)
    }

    #[test]
    fn ell_examples() {
        assert_eq!(ell(&Signature::new(3, 2, 0, 1), &th((3, 4), (3, 4), (3, 2))), int(0));
        assert_eq!(ell(&Signature::new(2, 0, 0, 1), &th((1, 2), (1, 2), (2, 1))), int(0));
        assert_eq!(ell(&Signature::new(7, 0, 0, 0), &th((9, 4), (1, 3), (5, 1))), int(7));
    }

    #[test]
    fn delta_on_edge_triangle() {
        let r = edge_triangle();
        let d = delta(&r, &th((3, 4), (3, 4), (3, 2))).unwrap();
        assert_eq!(d.value, int(0));
        assert_eq!(d.argmin, vec![Submultiplex::from_multiplex(&r)]);

        let d = delta(&r, &th((1, 4), (1, 4), (2, 1))).unwrap();
        assert_eq!(d.value, int(0));
        assert_eq!(d.argmin, vec![Submultiplex::from_edges(vec![(1, 2)], vec![(1, 2)])]);

        let d = delta(&r, &th((1, 10), (1, 10), (1, 10))).unwrap();
        // smallest is the single edge: 2 − 1/10
        assert_eq!(d.value, rat(19, 10));
        assert!(delta(&Multiplex::empty(3), &th((1, 1), (1, 1), (1, 1))).is_err());
    }

    #[test]
    fn extremal_sets() {
        let r = edge_triangle();
        let at_q2 = extremal_set(&r, &th((1, 2), (1, 2), (2, 1))).unwrap();
        assert_eq!(at_q2.len(), 2);
        assert!(at_q2.contains(&Submultiplex::from_multiplex(&r)));
        assert!(at_q2.contains(&Submultiplex::from_multiplex(&double_edge_in_triangle())));

        let at_q1 = extremal_set(&r, &th((1, 1), (1, 1), (1, 1))).unwrap();
        let mut want = vec![
            Submultiplex::from_multiplex(&r),
            Submultiplex::from_multiplex(&triangle_layer1()),
            Submultiplex::from_edges(vec![(0, 1), (0, 2)], vec![(1, 2)]),
        ];
        want.sort();
        let mut got = at_q1;
        got.sort();
        assert_eq!(got, want);

        let p_q1 = extremal_set(&five_vertex(), &th((5, 6), (5, 6), (5, 6))).unwrap();
        assert_eq!(p_q1.len(), 3);
        for m in [five_vertex(), five_vertex_tilde(), five_vertex_hat()] {
            assert!(p_q1.contains(&Submultiplex::from_multiplex(&m)));
        }
        assert!(matches!(
            extremal_set(&r, &th((1, 2), (1, 2), (1, 1))),
            Err(MuxError::NotOnThresholdSurface(..))
        ));
    }

    #[test]
    fn balance_labels() {
        let r = edge_triangle();
        assert_eq!(classify_balance(&r, &th((3, 4), (3, 4), (3, 2))).unwrap(), BalanceLabel::StrictlyBalanced);
        assert_eq!(classify_balance(&r, &th((1, 4), (1, 4), (2, 1))).unwrap(), BalanceLabel::Unbalanced);
        assert_eq!(classify_balance(&r, &th((1, 2), (1, 2), (2, 1))).unwrap(), BalanceLabel::BalancedNotStrict);
        assert_eq!(classify_balance(&r, &th((1, 2), (1, 2), (1, 1))).unwrap(), BalanceLabel::InteriorSatisfiable);
        assert_eq!(classify_balance(&r, &th((6, 5), (6, 5), (13, 10))).unwrap(), BalanceLabel::ExteriorUnsatisfiable);
        assert!(classify_balance(&r, &th((1, 1), (1, 1), (1, 2))).is_err());
    }

    #[test]
    fn cores() {
        let r = edge_triangle();
        let whole = Submultiplex::from_multiplex(&r);
        assert_eq!(
            core(&r, &th((1, 4), (1, 4), (2, 1))).unwrap(),
            Submultiplex::from_edges(vec![(1, 2)], vec![(1, 2)])
        );
        assert_eq!(core(&r, &th((1, 2), (1, 2), (2, 1))).unwrap(), whole);
        assert_eq!(core(&r, &th((3, 4), (3, 4), (3, 2))).unwrap(), whole);
        assert_eq!(core(&r, &th((1, 1), (1, 1), (1, 1))).unwrap(), whole);
    }

    #[test]
    fn phi_examples() {
        let e = single_edge_layer1();
        let p = ProbTriple::new(0.3, 0.2, 0.1).unwrap();
        let got = phi(&e, 50, &p).unwrap();
        assert!((got.value - 2500.0 * 0.3).abs() < 1e-9);

        let o = double_edge();
        assert!((phi(&o, 50, &p).unwrap().value - 2500.0 * 0.1).abs() < 1e-9);

        let r = edge_triangle();
        let got = phi(&r, 100, &ProbTriple::new(0.1, 0.1, 0.01).unwrap()).unwrap();
        assert!((got.value - 100.0).abs() < 1e-9);
        assert_eq!(got.argmin, Signature::new(2, 0, 0, 1));
        assert!(phi(&r, 2, &p).is_err());
    }
}
