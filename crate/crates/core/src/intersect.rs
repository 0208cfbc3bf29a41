//! Exhaustive face/edge self-intersection test.
//!
//! Every (face, edge) pair is classified from the signs of oriented volumes.
//! Pairs whose determinants vanish are not resolved here: they are reported
//! as needing further study, and a surface is accepted as embedded only when
//! no pair intersects and none needs study.

use rayon::prelude::*;
use serde::Serialize;

use crate::exactnum::ConstructibleReal as Real;
use crate::geometry::{oriented_volume6, Point3};
use crate::mesh::Mesh;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StudyReason {
    /// An endpoint of the segment lies in the plane of the triangle.
    ZeroPlaneDet,
    /// The segment meets the plane on a line through a triangle side.
    ZeroLinkDet,
    /// A segment sharing one triangle vertex lies in the triangle's plane.
    CoplanarIncident,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Outcome {
    Disjoint,
    Intersects,
    NeedsStudy(StudyReason),
    SkippedIncidentSide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairVerdict {
    pub face: usize,
    pub edge: usize,
    pub outcome: Outcome,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OutcomeCounts {
    pub disjoint: usize,
    pub intersects: usize,
    pub needs_study: usize,
    pub skipped_incident_side: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionReport {
    /// Every pair whose outcome is not `Disjoint`, in enumeration order.
    pub findings: Vec<PairVerdict>,
    pub counts: OutcomeCounts,
    pub total_pairs: usize,
}

impl IntersectionReport {
    /// No pair intersects and no pair needs further study.
    pub fn is_free(&self) -> bool {
        self.counts.intersects == 0 && self.counts.needs_study == 0
    }

    pub fn to_json(&self, m: &Mesh) -> serde_json::Value {
        let findings: Vec<serde_json::Value> = self
            .findings
            .iter()
            .map(|v| {
                let (outcome, reason) = match v.outcome {
                    Outcome::Disjoint => ("Disjoint", None),
                    Outcome::Intersects => ("Intersects", None),
                    Outcome::NeedsStudy(r) => ("NeedsStudy", Some(format!("{r:?}"))),
                    Outcome::SkippedIncidentSide => ("SkippedIncidentSide", None),
                };
                serde_json::json!({
                    "face": m.face_names(&m.faces()[v.face]),
                    "edge": m.edge_names(&m.edges()[v.edge]),
                    "outcome": outcome,
                    "reason": reason,
                })
            })
            .collect();
        serde_json::json!({
            "total_pairs": self.total_pairs,
            "counts": self.counts,
            "self_intersection_free": self.is_free(),
            "findings": findings,
        })
    }
}

/// Classify a closed segment against a closed triangle. `shared_vertices`
/// is the number of mesh vertices the two have in common.
pub fn segment_triangle_verdict(triangle: [&Point3; 3], segment: [&Point3; 2], shared_vertices: usize) -> Outcome {
    let [y1, y2, y3] = triangle;
    let [z1, z2] = segment;
    if shared_vertices >= 2 {
        return Outcome::SkippedIncidentSide;
    }
    let s1 = oriented_volume6(y1, y2, y3, z1).sign();
    let s2 = oriented_volume6(y1, y2, y3, z2).sign();
    if shared_vertices == 1 {
        return if s1 == 0 && s2 == 0 { Outcome::NeedsStudy(StudyReason::CoplanarIncident) } else { Outcome::Disjoint };
    }
    if s1 == 0 || s2 == 0 {
        return Outcome::NeedsStudy(StudyReason::ZeroPlaneDet);
    }
    if s1 == s2 {
        return Outcome::Disjoint;
    }
    let links = [
        oriented_volume6(z1, z2, y1, y2).sign(),
        oriented_volume6(z1, z2, y2, y3).sign(),
        oriented_volume6(z1, z2, y3, y1).sign(),
    ];
    if links.contains(&0) {
        Outcome::NeedsStudy(StudyReason::ZeroLinkDet)
    } else if links[0] == links[1] && links[1] == links[2] {
        Outcome::Intersects
    } else {
        Outcome::Disjoint
    }
}

fn pair_outcome(m: &Mesh, face: usize, edge: usize) -> Outcome {
    let f = m.faces()[face];
    let e = m.edges()[edge];
    let shared = e.iter().filter(|v| f.contains(v)).count();
    segment_triangle_verdict(
        [m.position(f[0]), m.position(f[1]), m.position(f[2])],
        [m.position(e[0]), m.position(e[1])],
        shared,
    )
}

/// Examine every (face, edge) pair in lexicographic (face, edge) order.
pub fn self_intersection_report(m: &Mesh) -> IntersectionReport {
    let ne = m.edges().len();
    let rows: Vec<Vec<Outcome>> =
        (0..m.faces().len()).into_par_iter().map(|fi| (0..ne).map(|ei| pair_outcome(m, fi, ei)).collect()).collect();
    let mut counts = OutcomeCounts::default();
    let mut findings = Vec::new();
    for (fi, row) in rows.into_iter().enumerate() {
        for (ei, outcome) in row.into_iter().enumerate() {
            match outcome {
                Outcome::Disjoint => counts.disjoint += 1,
                Outcome::Intersects => counts.intersects += 1,
                Outcome::NeedsStudy(_) => counts.needs_study += 1,
                Outcome::SkippedIncidentSide => counts.skipped_incident_side += 1,
            }
            if outcome != Outcome::Disjoint {
                findings.push(PairVerdict { face: fi, edge: ei, outcome });
            }
        }
    }
    IntersectionReport { findings, counts, total_pairs: m.faces().len() * ne }
}

/// Direct geometric description of how a segment meets a triangle's closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Contact {
    /// The segment does not meet the closed triangle.
    Separate,
    /// The segment meets the triangle only on its boundary.
    Boundary,
    /// The segment passes through the relative interior of the triangle.
    Interior,
    /// The segment lies in the triangle's plane; not resolved further.
    Coplanar,
}

/// Exact plane crossing plus barycentric containment, used to explain
/// pairs that need study.
pub fn brute_force_contact(triangle: [&Point3; 3], segment: [&Point3; 2]) -> Contact {
    let [y1, y2, y3] = triangle;
    let [z1, z2] = segment;
    let d1 = oriented_volume6(y1, y2, y3, z1);
    let d2 = oriented_volume6(y1, y2, y3, z2);
    let (s1, s2) = (d1.sign(), d2.sign());
    if s1 == 0 && s2 == 0 {
        return Contact::Coplanar;
    }
    if s1 == s2 {
        return Contact::Separate;
    }
    let t = d1.div_nonzero(&(&d1 - &d2));
    let p = z1.add(&z2.sub(z1).scale(&t));
    let normal = y2.sub(y1).cross(&y3.sub(y1));
    let sides: Vec<i32> =
        [(y1, y2), (y2, y3), (y3, y1)].iter().map(|(a, b)| b.sub(a).cross(&p.sub(a)).dot(&normal).sign()).collect();
    if sides.iter().any(|&s| s < 0) {
        Contact::Separate
    } else if sides.contains(&0) {
        Contact::Boundary
    } else {
        Contact::Interior
    }
}

/// Signs of the five determinants behind a verdict, for diagnostics.
pub fn determinant_signs(triangle: [&Point3; 3], segment: [&Point3; 2]) -> [i32; 5] {
    let [y1, y2, y3] = triangle;
    let [z1, z2] = segment;
    let d: [Real; 5] = [
        oriented_volume6(y1, y2, y3, z1),
        oriented_volume6(y1, y2, y3, z2),
        oriented_volume6(z1, z2, y1, y2),
        oriented_volume6(z1, z2, y2, y3),
        oriented_volume6(z1, z2, y3, y1),
    ];
    d.map(|x| x.sign())
}
