//! The satisfiability region `{θ : Δ_H(θ) > 0}` as an exact polyhedron in
//! `(θ1, θ2, θ12)` space, and its slice along `θ1 = θ2`.
//!
//! Every main constraint is an open halfspace `a·θ1 + b·θ2 + c·θ12 < v`,
//! one per distinct signature. Redundant main constraints are removed by an
//! exact LP over the closure of the remaining system; domain constraints
//! (positivity and `θ12 ≥ θ1, θ2`) are always kept.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::multiplex::{Multiplex, Signature};
use crate::rational::{format_rational, int, Rational};
use crate::threshold::{self, ThetaPoint};

type V3 = [Rational; 3];
type V2 = [Rational; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Relation {
    StrictLess,
    LessEq,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Origin {
    Main { signature: Signature },
    Positivity { tag: &'static str },
    Feasibility { tag: &'static str },
}

impl Origin {
    pub fn is_main(&self) -> bool {
        matches!(self, Origin::Main { .. })
    }
}

/// `coeffs · θ  (< | ≤)  rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: V3,
    pub rhs: Rational,
    pub relation: Relation,
    pub origin: Origin,
}

impl Constraint {
    pub fn main(sig: Signature) -> Self {
        Constraint {
            coeffs: [int(sig.a as i128), int(sig.b as i128), int(sig.c as i128)],
            rhs: int(sig.v as i128),
            relation: Relation::StrictLess,
            origin: Origin::Main { signature: sig },
        }
    }

    /// `θ1, θ2, θ12 > 0` followed by `θ1 ≤ θ12`, `θ2 ≤ θ12`.
    pub fn domain() -> Vec<Constraint> {
        let (z, o, m) = (int(0), int(1), int(-1));
        let c = |coeffs: V3, relation, origin| Constraint { coeffs, rhs: int(0), relation, origin };
        vec![
            c([m, z, z], Relation::StrictLess, Origin::Positivity { tag: "theta1>0" }),
            c([z, m, z], Relation::StrictLess, Origin::Positivity { tag: "theta2>0" }),
            c([z, z, m], Relation::StrictLess, Origin::Positivity { tag: "theta12>0" }),
            c([o, z, m], Relation::LessEq, Origin::Feasibility { tag: "theta12>=theta1" }),
            c([z, o, m], Relation::LessEq, Origin::Feasibility { tag: "theta12>=theta2" }),
        ]
    }

    fn lhs(&self, x: &V3) -> Rational {
        dot3(&self.coeffs, x)
    }

    /// Closed-form satisfaction `coeffs·x ≤ rhs`.
    pub fn holds_closed(&self, x: &V3) -> bool {
        self.lhs(x) <= self.rhs
    }

    pub fn holds(&self, x: &V3) -> bool {
        match self.relation {
            Relation::StrictLess => self.lhs(x) < self.rhs,
            Relation::LessEq => self.lhs(x) <= self.rhs,
        }
    }

    pub fn active(&self, x: &V3) -> bool {
        self.lhs(x) == self.rhs
    }

    pub fn describe(&self) -> String {
        let names = ["theta1", "theta2", "theta12"];
        let mut terms = Vec::new();
        for (k, q) in self.coeffs.iter().enumerate() {
            if *q == int(0) {
                continue;
            }
            let coef = if *q == int(1) {
                String::new()
            } else if *q == int(-1) {
                "-".to_string()
            } else {
                format!("{}*", format_rational(q))
            };
            terms.push(format!("{coef}{}", names[k]));
        }
        let op = match self.relation {
            Relation::StrictLess => "<",
            Relation::LessEq => "<=",
        };
        format!("{} {op} {}", terms.join(" + "), format_rational(&self.rhs))
    }
}

impl Serialize for Constraint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Constraint", 5)?;
        st.serialize_field("coeffs", &self.coeffs.iter().map(format_rational).collect::<Vec<_>>())?;
        st.serialize_field("rhs", &format_rational(&self.rhs))?;
        st.serialize_field("relation", &self.relation)?;
        st.serialize_field("origin", &self.origin)?;
        st.serialize_field("text", &self.describe())?;
        st.end()
    }
}

fn dot3(a: &V3, b: &V3) -> Rational {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn is_zero3(a: &V3) -> bool {
    a.iter().all(|q| *q == int(0))
}

/// Positive rescaling with max-abs component 1.
fn normalize_ray(d: V3) -> V3 {
    let m = d.iter().map(|q| if *q < int(0) { -*q } else { *q }).max().expect("three components");
    [d[0] / m, d[1] / m, d[2] / m]
}

/// Unique intersection point of three planes, if any.
fn solve3(c: [&Constraint; 3]) -> Option<V3> {
    let (r0, r1, r2) = (&c[0].coeffs, &c[1].coeffs, &c[2].coeffs);
    let det = dot3(r0, &cross(r1, r2));
    if det == int(0) {
        return None;
    }
    // Cramer via cofactors: x = (b0 (r1×r2) + b1 (r2×r0) + b2 (r0×r1)) / det
    let (a, b, cc) = (cross(r1, r2), cross(r2, r0), cross(r0, r1));
    let (b0, b1, b2) = (c[0].rhs, c[1].rhs, c[2].rhs);
    Some([
        (a[0] * b0 + b[0] * b1 + cc[0] * b2) / det,
        (a[1] * b0 + b[1] * b1 + cc[1] * b2) / det,
        (a[2] * b0 + b[2] * b1 + cc[2] * b2) / det,
    ])
}

/// Vertices and extreme rays of the closure `{x : coeffs·x ≤ rhs}`.
/// The system must contain the nonnegativity of every coordinate, so the
/// closure is pointed.
fn closure_geometry(cons: &[&Constraint]) -> (Vec<V3>, Vec<V3>) {
    let m = cons.len();
    let mut verts: BTreeSet<V3> = BTreeSet::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                if let Some(x) = solve3([cons[i], cons[j], cons[k]]) {
                    if cons.iter().all(|c| c.holds_closed(&x)) {
                        verts.insert(x);
                    }
                }
            }
        }
    }
    let mut rays: BTreeSet<V3> = BTreeSet::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let d = cross(&cons[i].coeffs, &cons[j].coeffs);
            if is_zero3(&d) {
                continue;
            }
            for cand in [d, [-d[0], -d[1], -d[2]]] {
                if cons.iter().all(|c| dot3(&c.coeffs, &cand) <= int(0)) {
                    rays.insert(normalize_ray(cand));
                }
            }
        }
    }
    (verts.into_iter().collect(), rays.into_iter().collect())
}

/// Whether `target` cuts away any point of the region described by `rest`.
fn is_redundant(target: &Constraint, rest: &[&Constraint]) -> bool {
    let (verts, rays) = closure_geometry(rest);
    if rays.iter().any(|r| dot3(&target.coeffs, r) > int(0)) {
        return false;
    }
    let best = match verts.iter().map(|x| target.lhs(x)).max() {
        Some(b) => b,
        None => return true,
    };
    match best.cmp(&target.rhs) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => {
            if target.relation == Relation::LessEq {
                return true;
            }
            // the optimal face touches the hyperplane; redundant iff the face
            // misses the region, i.e. its relative interior violates a strict
            // constraint of `rest`
            let face: Vec<&V3> = verts.iter().filter(|x| target.lhs(x) == best).collect();
            let k = int(face.len() as i128);
            let mut p: V3 = [int(0), int(0), int(0)];
            for x in &face {
                for t in 0..3 {
                    p[t] += x[t] / k;
                }
            }
            for r in rays.iter().filter(|r| dot3(&target.coeffs, r) == int(0)) {
                for t in 0..3 {
                    p[t] += r[t];
                }
            }
            !rest.iter().all(|c| c.holds(&p))
        }
    }
}

/// One main constraint per distinct signature, unpruned, followed by the
/// domain constraints.
pub fn all_constraints(h: &Multiplex) -> Result<Vec<Constraint>> {
    let sigs = threshold::signatures(h)?;
    let mut out: Vec<Constraint> = sigs.into_iter().map(Constraint::main).collect();
    out.extend(Constraint::domain());
    Ok(out)
}

/// Irredundant main constraints followed by the domain constraints.
pub fn constraints(h: &Multiplex) -> Result<Vec<Constraint>> {
    let sigs: Vec<Signature> = threshold::signatures(h)?.into_iter().collect();
    // s is implied by t when t has no more vertices and at least as many
    // edges of every class
    let dominated = |s: &Signature| {
        sigs.iter().any(|t| t != s && t.v <= s.v && t.a >= s.a && t.b >= s.b && t.c >= s.c)
    };
    let mut main: Vec<Constraint> = sigs.iter().filter(|s| !dominated(s)).map(|&s| Constraint::main(s)).collect();
    let domain = Constraint::domain();
    // largest v first, so the tightest forms tend to be tested last
    main.sort_by(|x, y| y.rhs.cmp(&x.rhs).then_with(|| x.origin_sig().cmp(&y.origin_sig())));
    let mut k = 0;
    while k < main.len() {
        let rest: Vec<&Constraint> =
            main.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, c)| c).chain(domain.iter()).collect();
        if is_redundant(&main[k], &rest) {
            main.remove(k);
        } else {
            k += 1;
        }
    }
    main.sort_by_key(|c| c.origin_sig());
    main.extend(domain);
    Ok(main)
}

impl Constraint {
    fn origin_sig(&self) -> Option<Signature> {
        match self.origin {
            Origin::Main { signature } => Some(signature),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Facet {
    pub constraint: usize,
    pub vertices: Vec<usize>,
    pub open: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionDescription {
    pub constraints: Vec<Constraint>,
    pub vertices: Vec<V3>,
    pub rays: Vec<V3>,
    pub facets: Vec<Facet>,
    pub bounded: bool,
}

impl RegionDescription {
    /// Strict membership in the (partly open) region.
    pub fn contains(&self, theta: &ThetaPoint) -> bool {
        let x = [theta.theta1, theta.theta2, theta.theta12];
        self.constraints.iter().all(|c| c.holds(&x))
    }

    pub fn main_constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.origin.is_main())
    }
}

impl Serialize for RegionDescription {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let pts = |v: &[V3]| -> Vec<Vec<String>> { v.iter().map(|x| x.iter().map(format_rational).collect()).collect() };
        let mut st = s.serialize_struct("RegionDescription", 5)?;
        st.serialize_field("constraints", &self.constraints)?;
        st.serialize_field("vertices", &pts(&self.vertices))?;
        st.serialize_field("rays", &pts(&self.rays))?;
        st.serialize_field("facets", &self.facets)?;
        st.serialize_field("bounded", &self.bounded)?;
        st.end()
    }
}

/// Vertices, rays and facets of the closure of the region.
pub fn polyhedron(h: &Multiplex) -> Result<RegionDescription> {
    let constraints = constraints(h)?;
    Ok(describe(constraints))
}

/// Geometry of an arbitrary constraint system containing the domain.
pub fn describe(constraints: Vec<Constraint>) -> RegionDescription {
    let refs: Vec<&Constraint> = constraints.iter().collect();
    let (vertices, rays) = closure_geometry(&refs);
    let facets = constraints
        .iter()
        .enumerate()
        .map(|(i, c)| Facet {
            constraint: i,
            vertices: vertices.iter().enumerate().filter(|(_, x)| c.active(x)).map(|(j, _)| j).collect(),
            open: c.relation == Relation::StrictLess,
        })
        .collect();
    let bounded = rays.is_empty();
    RegionDescription { constraints, vertices, rays, facets, bounded }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Membership {
    Satisfiable,
    Boundary,
    Unsatisfiable,
    Infeasible,
}

impl Membership {
    pub fn as_str(&self) -> &'static str {
        match self {
            Membership::Satisfiable => "SATISFIABLE",
            Membership::Boundary => "BOUNDARY",
            Membership::Unsatisfiable => "UNSATISFIABLE",
            Membership::Infeasible => "INFEASIBLE",
        }
    }
}

pub fn membership(h: &Multiplex, theta: &ThetaPoint) -> Result<Membership> {
    if !theta.in_domain() {
        return Ok(Membership::Infeasible);
    }
    let d = threshold::delta(h, theta)?.value;
    Ok(match d.cmp(&int(0)) {
        Ordering::Greater => Membership::Satisfiable,
        Ordering::Equal => Membership::Boundary,
        Ordering::Less => Membership::Unsatisfiable,
    })
}

/// A 2D line `k1·θ + k12·θ12 (< | ≤) rhs` with the 3D constraints that
/// restrict onto it.
#[derive(Debug, Clone, PartialEq)]
struct Line {
    coeffs: V2,
    rhs: Rational,
    strict: bool,
    origins: Vec<Origin>,
}

impl Line {
    fn lhs(&self, x: &V2) -> Rational {
        self.coeffs[0] * x[0] + self.coeffs[1] * x[1]
    }

    fn active(&self, x: &V2) -> bool {
        self.lhs(x) == self.rhs
    }

    fn holds_closed(&self, x: &V2) -> bool {
        self.lhs(x) <= self.rhs
    }

    /// Scale-free key for merging identical halfplanes.
    fn key(&self) -> (V2, Rational) {
        let s = [self.coeffs[0], self.coeffs[1], self.rhs]
            .into_iter()
            .find(|q| *q != int(0))
            .map(|q| if q < int(0) { -q } else { q })
            .unwrap_or(int(1));
        ([self.coeffs[0] / s, self.coeffs[1] / s], self.rhs / s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceVertex {
    #[serde(with = "crate::rational::serde_rational")]
    pub theta: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub theta12: Rational,
    /// Some main constraint is tight here.
    pub on_threshold: bool,
    /// `θ > 0`, so the point belongs to the parameter domain.
    pub in_domain: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceSegment {
    pub from: usize,
    /// `None` for the final unbounded edge in direction `(0, 1)`.
    pub to: Option<usize>,
    pub open: bool,
    pub origins: Vec<Origin>,
}

/// Outer boundary of the `θ1 = θ2 = θ` slice in the `(θ, θ12)` plane,
/// walked from the feasibility line `θ12 = θ` towards the axis `θ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlicePolyline {
    pub vertices: Vec<SliceVertex>,
    pub segments: Vec<SliceSegment>,
    pub unbounded: bool,
}

impl SlicePolyline {
    pub fn points(&self) -> Vec<(Rational, Rational)> {
        self.vertices.iter().map(|v| (v.theta, v.theta12)).collect()
    }

    /// CSV with header `kind,theta,theta12,on_threshold,in_domain,next_open,next_constraint`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,theta,theta12,on_threshold,in_domain,next_open,next_constraint\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let seg = self.segments.iter().find(|s| s.from == i);
            let (open, label) = match seg {
                Some(s) => (s.open.to_string(), origins_label(&s.origins)),
                None => (String::new(), String::new()),
            };
            out.push_str(&format!(
                "vertex,{},{},{},{},{open},{label}\n",
                format_rational(&v.theta),
                format_rational(&v.theta12),
                v.on_threshold,
                v.in_domain
            ));
        }
        if self.unbounded {
            out.push_str("ray,0,1,,,,\n");
        }
        out
    }
}

fn origins_label(origins: &[Origin]) -> String {
    origins
        .iter()
        .map(|o| match o {
            Origin::Main { signature } => format!("main{signature}"),
            Origin::Positivity { tag } | Origin::Feasibility { tag } => tag.to_string(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn slice_lines(cons: &[Constraint]) -> Vec<Line> {
    let mut lines: Vec<Line> = Vec::new();
    for c in cons {
        let l = Line {
            coeffs: [c.coeffs[0] + c.coeffs[1], c.coeffs[2]],
            rhs: c.rhs,
            strict: c.relation == Relation::StrictLess,
            origins: vec![c.origin.clone()],
        };
        if l.coeffs == [int(0), int(0)] {
            continue;
        }
        match lines.iter_mut().find(|m| m.key() == l.key()) {
            Some(m) => {
                m.strict |= l.strict;
                m.origins.extend(l.origins);
            }
            None => lines.push(l),
        }
    }
    lines
}

/// The `θ1 = θ2` slice of the region's boundary.
pub fn slice2d(h: &Multiplex) -> Result<SlicePolyline> {
    let cons = constraints(h)?;
    let lines = slice_lines(&cons);
    let origin: V2 = [int(0), int(0)];
    let mut pts: Vec<V2> = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (a, b) = (&lines[i], &lines[j]);
            let det = a.coeffs[0] * b.coeffs[1] - a.coeffs[1] * b.coeffs[0];
            if det == int(0) {
                continue;
            }
            let x = [
                (a.rhs * b.coeffs[1] - a.coeffs[1] * b.rhs) / det,
                (a.coeffs[0] * b.rhs - a.rhs * b.coeffs[0]) / det,
            ];
            if x != origin && lines.iter().all(|l| l.holds_closed(&x)) && !pts.contains(&x) {
                pts.push(x);
            }
        }
    }
    // polar order about the origin, which is itself a vertex of the slice
    pts.sort_by(|p, q| {
        let cr = p[0] * q[1] - p[1] * q[0];
        int(0).cmp(&cr)
    });
    let vertices: Vec<SliceVertex> = pts
        .iter()
        .map(|x| SliceVertex {
            theta: x[0],
            theta12: x[1],
            on_threshold: lines.iter().any(|l| l.active(x) && l.origins.iter().any(Origin::is_main)),
            in_domain: x[0] > int(0),
        })
        .collect();
    let mut segments = Vec::new();
    for i in 0..pts.len().saturating_sub(1) {
        if let Some(l) = lines.iter().find(|l| l.active(&pts[i]) && l.active(&pts[i + 1])) {
            segments.push(SliceSegment { from: i, to: Some(i + 1), open: l.strict, origins: l.origins.clone() });
        }
    }
    let unbounded = pts.last().is_some_and(|x| x[0] > int(0));
    if unbounded {
        let last = pts.len() - 1;
        if let Some(l) = lines.iter().find(|l| l.active(&pts[last]) && l.coeffs[1] == int(0)) {
            segments.push(SliceSegment { from: last, to: None, open: l.strict, origins: l.origins.clone() });
        }
    }
    Ok(SlicePolyline { vertices, segments, unbounded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplex::fixtures::*;
    use crate::rational::rat;

    fn main_sigs(h: &Multiplex) -> Vec<Signature> {
        constraints(h).unwrap().iter().filter_map(|c| c.origin_sig()).collect()
    }

    #[test]
    fn irredundant_main_sets() {
        assert_eq!(main_sigs(&edge_triangle()), vec![Signature::new(2, 0, 0, 1), Signature::new(3, 2, 0, 1)]);
        assert_eq!(main_sigs(&double_edge()), vec![Signature::new(2, 0, 0, 1)]);
        assert_eq!(main_sigs(&single_edge_layer1()), vec![Signature::new(2, 1, 0, 0)]);
    }

    #[test]
    fn pruned_constraints_do_not_move_vertices() {
        for h in [edge_triangle(), double_edge(), five_vertex(), single_edge_layer1()] {
            let pruned = describe(constraints(&h).unwrap());
            let full = describe(all_constraints(&h).unwrap());
            assert_eq!(pruned.vertices, full.vertices);
            assert_eq!(pruned.rays, full.rays);
        }
    }

    #[test]
    fn boundedness() {
        let o = polyhedron(&double_edge()).unwrap();
        assert!(o.bounded);
        let two = int(2);
        assert!(o.vertices.contains(&[two, two, two]));
        assert!(o.vertices.contains(&[int(0), int(0), int(0)]));
        assert!(o.vertices.iter().all(|x| x[2] <= two));

        let r = polyhedron(&edge_triangle()).unwrap();
        assert!(r.bounded);
        assert!(r.contains(&ThetaPoint::from_ratios((1, 2), (1, 2), (1, 1))));
        assert!(!r.contains(&ThetaPoint::from_ratios((3, 4), (3, 4), (3, 2))));

        let e = polyhedron(&single_edge_layer1()).unwrap();
        assert!(!e.bounded);
        assert!(e.rays.contains(&[int(0), int(1), int(1)]));
        assert!(e.rays.contains(&[int(0), int(0), int(1)]));
    }

    #[test]
    fn slices() {
        let r = slice2d(&edge_triangle()).unwrap();
        assert_eq!(r.points(), vec![(int(1), int(1)), (rat(1, 2), int(2)), (int(0), int(2))]);
        assert!(!r.unbounded);
        assert_eq!(r.segments.len(), 2);
        assert!(r.segments.iter().all(|s| s.open && s.origins.iter().any(Origin::is_main)));
        assert!(r.vertices[0].in_domain && !r.vertices[2].in_domain);

        let p = slice2d(&five_vertex()).unwrap();
        assert_eq!(
            p.points(),
            vec![(rat(5, 6), rat(5, 6)), (rat(2, 3), rat(5, 3)), (rat(1, 2), int(2)), (int(0), int(2))]
        );

        let o = slice2d(&double_edge()).unwrap();
        assert_eq!(o.points(), vec![(int(2), int(2)), (int(0), int(2))]);

        let e = slice2d(&single_edge_layer1()).unwrap();
        assert_eq!(e.points(), vec![(int(2), int(2))]);
        assert!(e.unbounded);
        assert!(e.to_csv().ends_with("ray,0,1,,,,\n"));
    }

    #[test]
    fn membership_labels() {
        let r = edge_triangle();
        let m = |a, b, c| membership(&r, &ThetaPoint::from_ratios(a, b, c)).unwrap();
        assert_eq!(m((1, 2), (1, 2), (1, 1)), Membership::Satisfiable);
        assert_eq!(m((1, 1), (1, 1), (1, 1)), Membership::Boundary);
        assert_eq!(m((1, 1), (1, 1), (1, 2)), Membership::Infeasible);
        assert_eq!(m((6, 5), (6, 5), (13, 10)), Membership::Unsatisfiable);
    }
}
