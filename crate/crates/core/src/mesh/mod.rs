//! Triangulated polyhedral surfaces with explicit edge and face lists.
//!
//! Edges are stored rather than derived from faces: gluing can delete a
//! segment that still bounds faces in the inputs.

mod io;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::exactnum::{ConstructibleReal as Real, ExactError};
use crate::geometry::{oriented_volume6, squared_distance, Matrix3, Point3, Vec3};

pub use self::io::{from_json, to_json, to_obj, DEFAULT_OBJ_DIGITS};

pub type Edge = [usize; 2];
pub type Face = [usize; 3];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeshError {
    #[error("vertex id {0} out of range")]
    InvalidVertexId(usize),
    #[error("repeated vertex in an edge or face")]
    RepeatedVertex,
    #[error("side {0}-{1} of a face is not an edge")]
    MissingFaceSide(String, String),
    #[error("duplicate vertex name {0}")]
    DuplicateName(String),
    #[error("edge {0}-{1} has zero length")]
    ZeroLengthEdge(String, String),
    #[error("rotation matrix is not orthogonal")]
    NonOrthogonalMatrix,
    #[error("identified vertices {a} and {b} are at different positions")]
    PositionMismatch { a: String, b: String },
    #[error("the identification does not match any face of both meshes")]
    NoSharedFace,
    #[error("unknown vertex name {0}")]
    UnknownVertex(String),
    #[error("bad coordinate for vertex {name}: {source}")]
    Coordinate { name: String, source: ExactError },
    #[error("malformed mesh file: {0}")]
    Format(String),
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub name: String,
    pub position: Point3,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    /// Edges not lying in exactly two faces, with their face count.
    pub flagged_edges: Vec<(String, String, usize)>,
    /// Vertices whose incident faces do not form a single cycle.
    pub bad_links: Vec<String>,
    pub closed: bool,
    pub orientable: bool,
}

fn sorted2(e: Edge) -> Edge {
    if e[0] <= e[1] {
        e
    } else {
        [e[1], e[0]]
    }
}

fn sorted3(mut f: Face) -> Face {
    f.sort_unstable();
    f
}

fn face_sides(f: &Face) -> [Edge; 3] {
    [sorted2([f[0], f[1]]), sorted2([f[1], f[2]]), sorted2([f[0], f[2]])]
}

impl Mesh {
    /// Checks ids, repeated vertices, face sides, unique names and nonzero edge lengths.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>, faces: Vec<Face>) -> Result<Mesh, MeshError> {
        let m = Mesh::assemble(vertices, edges, faces)?;
        for e in &m.edges {
            let d = squared_distance(&m.vertices[e[0]].position, &m.vertices[e[1]].position);
            if d.sign() == 0 {
                return Err(MeshError::ZeroLengthEdge(m.name(e[0]).into(), m.name(e[1]).into()));
            }
        }
        Ok(m)
    }

    /// Same checks as [`Mesh::new`] except the edge-length test, for meshes
    /// derived from an already validated one by an exact isometry.
    fn assemble(vertices: Vec<Vertex>, edges: Vec<Edge>, faces: Vec<Face>) -> Result<Mesh, MeshError> {
        let n = vertices.len();
        let mut names = HashSet::new();
        for v in &vertices {
            if !names.insert(v.name.as_str()) {
                return Err(MeshError::DuplicateName(v.name.clone()));
            }
        }
        let check = |ids: &[usize]| -> Result<(), MeshError> {
            for (i, &a) in ids.iter().enumerate() {
                if a >= n {
                    return Err(MeshError::InvalidVertexId(a));
                }
                if ids[..i].contains(&a) {
                    return Err(MeshError::RepeatedVertex);
                }
            }
            Ok(())
        };
        for e in &edges {
            check(e)?;
        }
        for f in &faces {
            check(f)?;
        }
        let edges: Vec<Edge> = edges.into_iter().map(sorted2).collect::<BTreeSet<_>>().into_iter().collect();
        let faces: Vec<Face> = faces.into_iter().map(sorted3).collect::<BTreeSet<_>>().into_iter().collect();
        let edge_set: HashSet<Edge> = edges.iter().copied().collect();
        for f in &faces {
            for s in face_sides(f) {
                if !edge_set.contains(&s) {
                    return Err(MeshError::MissingFaceSide(vertices[s[0]].name.clone(), vertices[s[1]].name.clone()));
                }
            }
        }
        Ok(Mesh { vertices, edges, faces })
    }

    /// Build from vertex names; edges and faces refer to names.
    pub fn from_named(
        vertices: Vec<(&str, Point3)>,
        edges: &[[&str; 2]],
        faces: &[[&str; 3]],
    ) -> Result<Mesh, MeshError> {
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, (n, _))| (*n, i)).collect();
        let id = |s: &str| index.get(s).copied().ok_or_else(|| MeshError::UnknownVertex(s.to_string()));
        let edges = edges.iter().map(|e| Ok([id(e[0])?, id(e[1])?])).collect::<Result<Vec<_>, MeshError>>()?;
        let faces =
            faces.iter().map(|f| Ok([id(f[0])?, id(f[1])?, id(f[2])?])).collect::<Result<Vec<_>, MeshError>>()?;
        let vertices = vertices.into_iter().map(|(n, p)| Vertex { name: n.to_string(), position: p }).collect();
        Mesh::new(vertices, edges, faces)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn name(&self, id: usize) -> &str {
        &self.vertices[id].name
    }

    pub fn position(&self, id: usize) -> &Point3 {
        &self.vertices[id].position
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn position_of(&self, name: &str) -> Option<&Point3> {
        self.vertex_id(name).map(|i| self.position(i))
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&sorted2([a, b])).ok()
    }

    pub fn edge_names(&self, e: &Edge) -> [&str; 2] {
        [self.name(e[0]), self.name(e[1])]
    }

    pub fn face_names(&self, f: &Face) -> [&str; 3] {
        [self.name(f[0]), self.name(f[1]), self.name(f[2])]
    }

    /// Edges as sorted name pairs, for set comparisons.
    pub fn edge_name_set(&self) -> BTreeSet<[String; 2]> {
        self.edges
            .iter()
            .map(|e| {
                let mut n = [self.name(e[0]).to_string(), self.name(e[1]).to_string()];
                n.sort();
                n
            })
            .collect()
    }

    pub fn face_name_set(&self) -> BTreeSet<[String; 3]> {
        self.faces
            .iter()
            .map(|f| {
                let mut n = [f[0], f[1], f[2]].map(|i| self.name(i).to_string());
                n.sort();
                n
            })
            .collect()
    }

    /// Faces incident to each edge, indexed by edge id.
    pub fn edge_faces(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.edges.len()];
        for (fi, f) in self.faces.iter().enumerate() {
            for s in face_sides(f) {
                if let Some(ei) = self.edge_id(s[0], s[1]) {
                    out[ei].push(fi);
                }
            }
        }
        out
    }

    /// The vertex of face `f` not on edge `e`.
    pub fn opposite_vertex(&self, f: usize, e: &Edge) -> usize {
        *self.faces[f].iter().find(|v| !e.contains(v)).expect("edge is a side of the face")
    }

    /// Exact squared lengths in edge order.
    pub fn edge_lengths(&self) -> Vec<(Edge, Real)> {
        self.edges.iter().map(|e| (*e, squared_distance(self.position(e[0]), self.position(e[1])))).collect()
    }

    /// Squared length of the edge between two named vertices.
    pub fn squared_length(&self, a: &str, b: &str) -> Option<Real> {
        let (i, j) = (self.vertex_id(a)?, self.vertex_id(b)?);
        self.edge_id(i, j)?;
        Some(squared_distance(self.position(i), self.position(j)))
    }

    /// Positions `rot * p + translation`; names and combinatorics unchanged.
    pub fn apply_isometry(&self, rot: &Matrix3, translation: &Vec3) -> Result<Mesh, MeshError> {
        if !rot.is_orthogonal() {
            return Err(MeshError::NonOrthogonalMatrix);
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex { name: v.name.clone(), position: rot.mul_point(&v.position).add(translation) })
            .collect();
        Ok(Mesh { vertices, edges: self.edges.clone(), faces: self.faces.clone() })
    }

    pub fn rename(&self, f: impl Fn(&str) -> String) -> Result<Mesh, MeshError> {
        let vertices =
            self.vertices.iter().map(|v| Vertex { name: f(&v.name), position: v.position.clone() }).collect();
        Mesh::assemble(vertices, self.edges.clone(), self.faces.clone())
    }

    pub fn with_positions(&self, positions: Vec<Point3>) -> Mesh {
        assert_eq!(positions.len(), self.vertices.len());
        let vertices =
            self.vertices.iter().zip(positions).map(|(v, p)| Vertex { name: v.name.clone(), position: p }).collect();
        Mesh { vertices, edges: self.edges.clone(), faces: self.faces.clone() }
    }

    /// Reorder vertices to follow `names`; every vertex must be listed once.
    pub fn reorder(&self, names: &[&str]) -> Result<Mesh, MeshError> {
        if names.len() != self.vertices.len() {
            return Err(MeshError::Format(format!(
                "reorder lists {} names for {} vertices",
                names.len(),
                self.vertices.len()
            )));
        }
        let mut new_id = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let old = self.vertex_id(n).ok_or_else(|| MeshError::UnknownVertex(n.to_string()))?;
            new_id[old] = i;
            vertices.push(self.vertices[old].clone());
        }
        let edges = self.edges.iter().map(|e| e.map(|v| new_id[v])).collect();
        let faces = self.faces.iter().map(|f| f.map(|v| new_id[v])).collect();
        Mesh::assemble(vertices, edges, faces)
    }

    /// Disjoint union of `a` and `b` followed by merging each `b` vertex in
    /// `identify` (b-id to a-id) into its partner.
    pub fn glue(a: &Mesh, b: &Mesh, identify: &[(usize, usize)]) -> Result<Mesh, MeshError> {
        let offset = a.vertices.len();
        let mut vertices = a.vertices.clone();
        vertices.extend(b.vertices.iter().cloned());
        let edges = a.edges.iter().copied().chain(b.edges.iter().map(|e| e.map(|v| v + offset))).collect::<Vec<_>>();
        let faces = a.faces.iter().copied().chain(b.faces.iter().map(|f| f.map(|v| v + offset))).collect::<Vec<_>>();
        let pairs: Vec<(usize, usize)> = identify.iter().map(|&(bv, av)| (bv + offset, av)).collect();
        merge(vertices, edges, faces, &pairs)
    }

    /// Glue using vertex names: `(name in b, name in a)`.
    pub fn glue_named(a: &Mesh, b: &Mesh, identify: &[(&str, &str)]) -> Result<Mesh, MeshError> {
        let pairs = identify
            .iter()
            .map(|(bn, an)| {
                let bv = b.vertex_id(bn).ok_or_else(|| MeshError::UnknownVertex(bn.to_string()))?;
                let av = a.vertex_id(an).ok_or_else(|| MeshError::UnknownVertex(an.to_string()))?;
                Ok((bv, av))
            })
            .collect::<Result<Vec<_>, MeshError>>()?;
        Mesh::glue(a, b, &pairs)
    }

    /// Glue a mesh to itself, merging vertex `from` into vertex `to`.
    pub fn self_glue_named(&self, identify: &[(&str, &str)]) -> Result<Mesh, MeshError> {
        let pairs = identify
            .iter()
            .map(|(f, t)| {
                let fv = self.vertex_id(f).ok_or_else(|| MeshError::UnknownVertex(f.to_string()))?;
                let tv = self.vertex_id(t).ok_or_else(|| MeshError::UnknownVertex(t.to_string()))?;
                Ok((fv, tv))
            })
            .collect::<Result<Vec<_>, MeshError>>()?;
        merge(self.vertices.clone(), self.edges.clone(), self.faces.clone(), &pairs)
    }

    pub fn validate(&self) -> ValidationReport {
        let edge_faces = self.edge_faces();
        let flagged_edges: Vec<(String, String, usize)> = self
            .edges
            .iter()
            .zip(&edge_faces)
            .filter(|(_, fs)| fs.len() != 2)
            .map(|(e, fs)| (self.name(e[0]).to_string(), self.name(e[1]).to_string(), fs.len()))
            .collect();
        let bad_links: Vec<String> =
            (0..self.vertices.len()).filter(|&v| !self.link_is_cycle(v)).map(|v| self.name(v).to_string()).collect();
        let closed = flagged_edges.is_empty() && bad_links.is_empty();
        ValidationReport {
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            faces: self.faces.len(),
            euler_characteristic: self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64,
            flagged_edges,
            bad_links,
            closed,
            orientable: closed && self.coherent_orientation().is_some(),
        }
    }

    fn link_is_cycle(&self, v: usize) -> bool {
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for f in self.faces.iter().filter(|f| f.contains(&v)) {
            let others: Vec<usize> = f.iter().copied().filter(|&w| w != v).collect();
            adj.entry(others[0]).or_default().push(others[1]);
            adj.entry(others[1]).or_default().push(others[0]);
        }
        if adj.len() < 3 || adj.values().any(|n| n.len() != 2) {
            return false;
        }
        let start = *adj.keys().next().unwrap();
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[&x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() == adj.len()
    }

    /// Faces with windings that agree across every shared edge, if possible.
    pub fn coherent_orientation(&self) -> Option<Vec<Face>> {
        let edge_faces = self.edge_faces();
        let mut oriented: Vec<Option<Face>> = vec![None; self.faces.len()];
        let directed = |f: &Face| [[f[0], f[1]], [f[1], f[2]], [f[2], f[0]]];
        for root in 0..self.faces.len() {
            if oriented[root].is_some() {
                continue;
            }
            oriented[root] = Some(self.faces[root]);
            let mut queue = VecDeque::from([root]);
            while let Some(fi) = queue.pop_front() {
                let f = oriented[fi].unwrap();
                for [a, b] in directed(&f) {
                    let ei = self.edge_id(a, b)?;
                    for &gi in &edge_faces[ei] {
                        if gi == fi {
                            continue;
                        }
                        let g = self.faces[gi];
                        let c = *g.iter().find(|&&x| x != a && x != b).unwrap();
                        // the neighbour must traverse the shared edge as b -> a
                        let want = [b, a, c];
                        match oriented[gi] {
                            None => {
                                oriented[gi] = Some(want);
                                queue.push_back(gi);
                            }
                            Some(h) => {
                                if directed(&h).contains(&[a, b]) {
                                    return None;
                                }
                            }
                        }
                    }
                }
            }
        }
        oriented.into_iter().collect()
    }

    /// Coherent windings with positive total signed volume, or the stored
    /// faces when no coherent orientation exists.
    pub fn outward_faces(&self) -> Vec<Face> {
        let Some(faces) = self.coherent_orientation() else {
            return self.faces.clone();
        };
        let origin = Point3::origin();
        let mut total = Real::zero();
        for f in &faces {
            total = total + oriented_volume6(&origin, self.position(f[0]), self.position(f[1]), self.position(f[2]));
        }
        if total.sign() < 0 {
            faces.into_iter().map(|f| [f[0], f[2], f[1]]).collect()
        } else {
            faces
        }
    }
}

/// Merge vertex pairs `(from, to)`, drop faces that become duplicates (both
/// copies) and edges left without faces.
fn merge(
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    pairs: &[(usize, usize)],
) -> Result<Mesh, MeshError> {
    let n = vertices.len();
    for &(from, to) in pairs {
        if from >= n {
            return Err(MeshError::InvalidVertexId(from));
        }
        if to >= n {
            return Err(MeshError::InvalidVertexId(to));
        }
        if !vertices[from].position.exactly_equals(&vertices[to].position) {
            return Err(MeshError::PositionMismatch { a: vertices[to].name.clone(), b: vertices[from].name.clone() });
        }
    }
    let mut target: Vec<usize> = (0..n).collect();
    for &(from, to) in pairs {
        target[from] = to;
    }
    let mut new_id = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for (i, v) in vertices.into_iter().enumerate() {
        if target[i] == i {
            new_id[i] = kept.len();
            kept.push(v);
        }
    }
    let remap = |v: usize| new_id[target[v]];

    let mut face_count: BTreeMap<Face, usize> = BTreeMap::new();
    for f in &faces {
        *face_count.entry(sorted3(f.map(remap))).or_default() += 1;
    }
    if !pairs.is_empty() && face_count.values().all(|&c| c < 2) {
        return Err(MeshError::NoSharedFace);
    }
    let new_faces: Vec<Face> = face_count.iter().filter(|(_, &c)| c == 1).map(|(f, _)| *f).collect();

    let mut had_face: HashSet<Edge> = HashSet::new();
    for f in face_count.keys() {
        had_face.extend(face_sides(f));
    }
    let mut still: HashSet<Edge> = HashSet::new();
    for f in &new_faces {
        still.extend(face_sides(f));
    }
    let new_edges: Vec<Edge> =
        edges.iter().map(|e| sorted2(e.map(remap))).filter(|e| still.contains(e) || !had_face.contains(e)).collect();
    Mesh::assemble(kept, new_edges, new_faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra(names: [&str; 4], pts: [[i64; 3]; 4]) -> Mesh {
        let v = names.iter().zip(pts).map(|(n, p)| (*n, Point3::from_ints(p[0], p[1], p[2]))).collect();
        let [a, b, c, d] = names;
        Mesh::from_named(
            v,
            &[[a, b], [a, c], [a, d], [b, c], [b, d], [c, d]],
            &[[a, b, c], [a, b, d], [a, c, d], [b, c, d]],
        )
        .unwrap()
    }

    #[test]
    fn single_triangle_is_open() {
        let m = Mesh::from_named(
            vec![
                ("a", Point3::from_ints(0, 0, 0)),
                ("b", Point3::from_ints(1, 0, 0)),
                ("c", Point3::from_ints(0, 1, 0)),
            ],
            &[["a", "b"], ["b", "c"], ["a", "c"]],
            &[["a", "b", "c"]],
        )
        .unwrap();
        let r = m.validate();
        assert_eq!(r.euler_characteristic, 1);
        assert!(!r.closed);
        assert_eq!(r.flagged_edges.len(), 3);
    }

    #[test]
    fn tetrahedron_is_a_sphere() {
        let m = tetra(["a", "b", "c", "d"], [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let r = m.validate();
        assert_eq!((r.vertices, r.edges, r.faces, r.euler_characteristic), (4, 6, 4, 2));
        assert!(r.closed && r.orientable);
    }

    #[test]
    fn construction_errors() {
        let p = |x| Point3::from_ints(x, 0, 0);
        let e = Mesh::from_named(vec![("a", p(0)), ("a", p(1))], &[], &[]).unwrap_err();
        assert_eq!(e, MeshError::DuplicateName("a".into()));
        let e = Mesh::from_named(vec![("a", p(0)), ("b", p(0))], &[["a", "b"]], &[]).unwrap_err();
        assert!(matches!(e, MeshError::ZeroLengthEdge(..)));
        let e = Mesh::from_named(vec![("a", p(0)), ("b", p(1)), ("c", p(2))], &[["a", "b"]], &[["a", "b", "c"]])
            .unwrap_err();
        assert!(matches!(e, MeshError::MissingFaceSide(..)));
    }

    #[test]
    fn gluing_two_tetrahedra() {
        let t = tetra(["a", "b", "c", "d"], [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let u = tetra(["p", "q", "r", "s"], [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, -1]]);
        let g = Mesh::glue_named(&t, &u, &[("p", "a"), ("q", "b"), ("r", "c")]).unwrap();
        let r = g.validate();
        assert_eq!((r.vertices, r.edges, r.faces), (5, 9, 6));
        assert!(r.closed);
        assert!(g.vertex_id("s").is_some() && g.vertex_id("p").is_none());
        // gluing along every face leaves no faces and no edges
        let all = Mesh::glue_named(&t, &t, &[("a", "a"), ("b", "b"), ("c", "c"), ("d", "d")]).unwrap();
        assert!(all.faces().is_empty() && all.edges().is_empty());
    }

    #[test]
    fn gluing_errors() {
        let t = tetra(["a", "b", "c", "d"], [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let u = tetra(["p", "q", "r", "s"], [[0, 0, 0], [2, 0, 0], [0, 1, 0], [0, 0, -1]]);
        let e = Mesh::glue_named(&t, &u, &[("p", "a"), ("q", "b")]).unwrap_err();
        assert_eq!(e, MeshError::PositionMismatch { a: "b".into(), b: "q".into() });
        let e = Mesh::glue_named(&t, &u, &[("p", "a")]).unwrap_err();
        assert_eq!(e, MeshError::NoSharedFace);
    }

    #[test]
    fn isometry_preserves_lengths() {
        let t = tetra(["a", "b", "c", "d"], [[0, 0, 0], [3, 0, 0], [0, 1, 0], [1, 2, 5]]);
        let k = Matrix3::from_ints([[0, -1, 0], [1, 0, 0], [0, 0, 1]]);
        let moved = t.apply_isometry(&k, &Vec3::from_ints(1, 2, 3)).unwrap();
        for ((_, a), (_, b)) in t.edge_lengths().iter().zip(moved.edge_lengths()) {
            assert!(a.exactly_equals(&b));
        }
        let bad = Matrix3::from_ints([[2, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(t.apply_isometry(&bad, &Vec3::zero()).unwrap_err(), MeshError::NonOrthogonalMatrix);
    }

    #[test]
    fn outward_winding_has_positive_volume() {
        let t = tetra(["a", "b", "c", "d"], [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let faces = t.outward_faces();
        let o = Point3::from_ints(1, 1, 1).midpoint(&Point3::origin()).midpoint(&Point3::origin());
        for f in faces {
            let v = oriented_volume6(&o, t.position(f[0]), t.position(f[1]), t.position(f[2]));
            assert!(v.sign() > 0);
        }
    }
}
