//! JSON and OBJ serialization.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Mesh, MeshError, Vertex};
use crate::exactnum::parse;
use crate::geometry::Point3;

pub const DEFAULT_OBJ_DIGITS: usize = 12;

#[derive(Serialize, Deserialize)]
struct VertexJson {
    name: String,
    x: String,
    y: String,
    z: String,
}

#[derive(Serialize, Deserialize)]
struct MeshJson {
    vertices: Vec<VertexJson>,
    edges: Vec<[String; 2]>,
    faces: Vec<[String; 3]>,
}

pub fn to_json(m: &Mesh) -> String {
    let doc = MeshJson {
        vertices: m
            .vertices()
            .iter()
            .map(|v| VertexJson {
                name: v.name.clone(),
                x: v.position.x.to_string(),
                y: v.position.y.to_string(),
                z: v.position.z.to_string(),
            })
            .collect(),
        edges: m.edges().iter().map(|e| m.edge_names(e).map(String::from)).collect(),
        faces: m.faces().iter().map(|f| m.face_names(f).map(String::from)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("mesh serializes")
}

pub fn from_json(text: &str) -> Result<Mesh, MeshError> {
    let doc: MeshJson = serde_json::from_str(text).map_err(|e| MeshError::Format(e.to_string()))?;
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for v in doc.vertices {
        let coord = |s: &str| parse(s).map_err(|source| MeshError::Coordinate { name: v.name.clone(), source });
        let position = Point3::new(coord(&v.x)?, coord(&v.y)?, coord(&v.z)?);
        vertices.push(Vertex { name: v.name.clone(), position });
    }
    let index =
        |n: &str| vertices.iter().position(|v| v.name == n).ok_or_else(|| MeshError::UnknownVertex(n.to_string()));
    let edges = doc.edges.iter().map(|[a, b]| Ok([index(a)?, index(b)?])).collect::<Result<Vec<_>, MeshError>>()?;
    let faces = doc
        .faces
        .iter()
        .map(|[a, b, c]| Ok([index(a)?, index(b)?, index(c)?]))
        .collect::<Result<Vec<_>, MeshError>>()?;
    Mesh::new(vertices, edges, faces)
}

/// Wavefront OBJ with coordinates truncated to `digits` decimals and a
/// coherent outward winding when the surface is orientable.
pub fn to_obj(m: &Mesh, digits: usize) -> String {
    let mut out = String::new();
    writeln!(out, "# flexipoly mesh export").unwrap();
    writeln!(out, "# coordinates truncated toward zero to {digits} decimal digits").unwrap();
    for v in m.vertices() {
        let [x, y, z] = v.position.to_decimal(digits);
        writeln!(out, "v {x} {y} {z}").unwrap();
    }
    for f in m.outward_faces() {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Mesh {
        let pts = [
            ("a", Point3::parse("0", "0", "sqrt(2)").unwrap()),
            ("b", Point3::parse("1/3", "0", "0").unwrap()),
            ("c", Point3::parse("0", "1+sqrt(5)", "0").unwrap()),
            ("d", Point3::parse("0", "0", "-1").unwrap()),
        ];
        Mesh::from_named(
            pts.to_vec(),
            &[["a", "b"], ["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"], ["c", "d"]],
            &[["a", "b", "c"], ["a", "b", "d"], ["a", "c", "d"], ["b", "c", "d"]],
        )
        .unwrap()
    }

    #[test]
    fn json_round_trip() {
        let m = sample();
        let back = from_json(&to_json(&m)).unwrap();
        assert_eq!(back.edge_name_set(), m.edge_name_set());
        assert_eq!(back.face_name_set(), m.face_name_set());
        for (v, w) in m.vertices().iter().zip(back.vertices()) {
            assert_eq!(v.name, w.name);
            assert!(v.position.exactly_equals(&w.position));
        }
    }

    #[test]
    fn json_errors() {
        assert!(matches!(from_json("{"), Err(MeshError::Format(_))));
        let bad = r#"{"vertices":[{"name":"a","x":"sqrt(-1)","y":"0","z":"0"}],"edges":[],"faces":[]}"#;
        assert!(matches!(from_json(bad), Err(MeshError::Coordinate { .. })));
        let bad = r#"{"vertices":[{"name":"a","x":"0","y":"0","z":"0"}],"edges":[["a","q"]],"faces":[]}"#;
        assert_eq!(from_json(bad).unwrap_err(), MeshError::UnknownVertex("q".into()));
    }

    #[test]
    fn obj_layout() {
        let obj = to_obj(&sample(), 3);
        let lines: Vec<&str> = obj.lines().collect();
        assert!(lines[1].contains("3 decimal digits"));
        assert_eq!(lines[2], "v 0.000 0.000 1.414");
        assert_eq!(lines[3], "v 0.333 0.000 0.000");
        assert_eq!(lines.iter().filter(|l| l.starts_with("f ")).count(), 4);
    }
}
