//! Published closed forms for the vertex coordinates of the modified Steffen
//! polyhedron and of its four-fold rotational assembly, plus their edge and
//! face lists. These are regression anchors for the construction pipeline.

use crate::exactnum::{parse, ConstructibleReal as Real};
use crate::geometry::Point3;

pub const RHO: &str = "167*(1712315512948039256 + 297671463726717927*sqrt(31))";
pub const OMEGA1: &str = "237*(670333576 - 497644539*sqrt(31))";
pub const OMEGA2: &str = "3*(26431711823 - 892912093*sqrt(31))";
pub const OMEGA3: &str = "(2798420941 - 176443707*sqrt(31))";

/// The radicands and coefficients shared by the closed forms.
#[derive(Clone, Debug)]
pub struct NamedConstants {
    pub rho: Real,
    pub omega1: Real,
    pub omega2: Real,
    pub omega3: Real,
}

impl NamedConstants {
    pub fn new() -> NamedConstants {
        NamedConstants {
            rho: parse(RHO).unwrap(),
            omega1: parse(OMEGA1).unwrap(),
            omega2: parse(OMEGA2).unwrap(),
            omega3: parse(OMEGA3).unwrap(),
        }
    }
}

impl Default for NamedConstants {
    fn default() -> Self {
        NamedConstants::new()
    }
}

// Coordinate templates; a leading '-' negates the whole form.
const TEMPLATES: [(&str, &str); 9] = [
    ("h", "sqrt(167)/sqrt(2)"),
    ("t", "11/sqrt(2)"),
    ("c", "(11+3*sqrt(31))/(2*sqrt(2))"),
    ("ax", "({w1}*sqrt(2) - 2*(200-33*sqrt(31))*sqrt({rho}))/1230304047998"),
    ("ay", "({w2}*sqrt(2) + 2*sqrt({rho}))/15573468962"),
    ("az", "(167*{w3}*sqrt(2) + 22*sqrt({rho}))/(15573468962*sqrt(167))"),
    ("bx", "({w2}*sqrt(2) - 2*sqrt({rho}))/15573468962"),
    ("by", "({w1}*sqrt(2) + 2*(200-33*sqrt(31))*sqrt({rho}))/1230304047998"),
    ("bz", "(167*{w3}*sqrt(2) - 22*sqrt({rho}))/(15573468962*sqrt(167))"),
];

/// Rows of the assembly's vertex table: name, coordinate forms, approximate
/// decimals as published. The first nine rows are the modified Steffen
/// polyhedron.
pub const VERTEX_TABLE: [(&str, [&str; 3], [&str; 3]); 26] = [
    ("T1", ["0", "0", "h"], ["0", "0", "9.13"]),
    ("T2", ["0", "t", "0"], ["0", "7.77", "0"]),
    ("T3", ["t", "0", "0"], ["7.77", "0", "0"]),
    ("T4", ["0", "0", "-h"], ["0", "0", "-9.13"]),
    ("C2", ["c", "c", "0"], ["9.79", "9.79", "0"]),
    ("A2", ["ax", "ay", "az"], ["-1.19", "8.89", "4.72"]),
    ("B1", ["bx", "by", "bz"], ["2.79", "0.05", "-0.46"]),
    ("Abar2", ["by", "bx", "-bz"], ["0.05", "2.79", "0.46"]),
    ("Bbar1", ["ay", "ax", "-az"], ["8.89", "-1.19", "-4.72"]),
    ("T2'", ["-t", "0", "0"], ["-7.77", "0", "0"]),
    ("C2'", ["-c", "c", "0"], ["-9.79", "9.79", "0"]),
    ("A2'", ["-ay", "ax", "az"], ["-8.89", "-1.19", "4.72"]),
    ("B1'", ["-by", "bx", "bz"], ["-0.05", "2.79", "-0.46"]),
    ("Abar2'", ["-bx", "by", "-bz"], ["-2.79", "0.05", "0.46"]),
    ("Bbar1'", ["-ax", "ay", "-az"], ["1.19", "8.89", "-4.72"]),
    ("T2''", ["0", "-t", "0"], ["0", "-7.77", "0"]),
    ("C2''", ["-c", "-c", "0"], ["-9.79", "-9.79", "0"]),
    ("A2''", ["-ax", "-ay", "az"], ["1.19", "-8.89", "4.72"]),
    ("B1''", ["-bx", "-by", "bz"], ["-2.79", "-0.05", "-0.46"]),
    ("Abar2''", ["-by", "-bx", "-bz"], ["-0.05", "-2.79", "0.46"]),
    ("Bbar1''", ["-ay", "-ax", "-az"], ["-8.89", "1.19", "-4.72"]),
    ("C2'''", ["c", "-c", "0"], ["9.79", "-9.79", "0"]),
    ("A2'''", ["ay", "-ax", "az"], ["8.89", "1.19", "4.72"]),
    ("B1'''", ["by", "-bx", "bz"], ["0.05", "-2.79", "-0.46"]),
    ("Abar2'''", ["bx", "-by", "-bz"], ["2.79", "-0.05", "0.46"]),
    ("Bbar1'''", ["ax", "-ay", "-az"], ["-1.19", "-8.89", "-4.72"]),
];

/// Vertex names of the modified Steffen polyhedron in table order.
pub const M_VERTEX_NAMES: [&str; 9] = ["T1", "T2", "T3", "T4", "C2", "A2", "B1", "Abar2", "Bbar1"];

/// Expression text for one coordinate cell of [`VERTEX_TABLE`].
pub fn coordinate_text(cell: &str) -> String {
    if cell == "0" {
        return "0".to_string();
    }
    let (neg, key) = match cell.strip_prefix('-') {
        Some(k) => (true, k),
        None => (false, cell),
    };
    let body = TEMPLATES
        .iter()
        .find(|(k, _)| *k == key)
        .unwrap_or_else(|| panic!("unknown coordinate template {key}"))
        .1
        .replace("{rho}", &format!("({RHO})"))
        .replace("{w1}", &format!("({OMEGA1})"))
        .replace("{w2}", &format!("({OMEGA2})"))
        .replace("{w3}", OMEGA3);
    if neg {
        format!("-({body})")
    } else {
        body
    }
}

/// Parsed closed-form position of a table row.
pub fn table_position(name: &str) -> Option<Point3> {
    let row = VERTEX_TABLE.iter().find(|r| r.0 == name)?;
    let [x, y, z] = row.1.map(|c| parse(&coordinate_text(c)).expect("table literal parses"));
    Some(Point3::new(x, y, z))
}

/// Edges of the assembly, one row per rotation orbit; `None` marks an edge
/// already listed in an earlier column.
pub const EDGE_TABLE: [[Option<[&str; 2]>; 4]; 20] = [
    [Some(["T1", "T2"]), Some(["T1", "T2'"]), Some(["T1", "T2''"]), None],
    [Some(["T1", "T3"]), None, None, None],
    [Some(["T1", "A2"]), Some(["T1", "A2'"]), Some(["T1", "A2''"]), Some(["T1", "A2'''"])],
    [Some(["T1", "B1"]), Some(["T1", "B1'"]), Some(["T1", "B1''"]), Some(["T1", "B1'''"])],
    [Some(["T2", "T4"]), Some(["T2'", "T4"]), Some(["T2''", "T4"]), None],
    [Some(["T2", "C2"]), Some(["T2'", "C2'"]), Some(["T2''", "C2''"]), Some(["T3", "C2'''"])],
    [Some(["T2", "A2"]), Some(["T2'", "A2'"]), Some(["T2''", "A2''"]), Some(["T3", "A2'''"])],
    [Some(["T2", "Abar2"]), Some(["T2'", "Abar2'"]), Some(["T2''", "Abar2''"]), Some(["T3", "Abar2'''"])],
    [Some(["T3", "T4"]), None, None, None],
    [Some(["T3", "C2"]), Some(["T2", "C2'"]), Some(["T2'", "C2''"]), Some(["T2''", "C2'''"])],
    [Some(["T3", "B1"]), Some(["T2", "B1'"]), Some(["T2'", "B1''"]), Some(["T2''", "B1'''"])],
    [Some(["T3", "Bbar1"]), Some(["T2", "Bbar1'"]), Some(["T2'", "Bbar1''"]), Some(["T2''", "Bbar1'''"])],
    [Some(["T4", "Abar2"]), Some(["T4", "Abar2'"]), Some(["T4", "Abar2''"]), Some(["T4", "Abar2'''"])],
    [Some(["T4", "Bbar1"]), Some(["T4", "Bbar1'"]), Some(["T4", "Bbar1''"]), Some(["T4", "Bbar1'''"])],
    [Some(["C2", "A2"]), Some(["C2'", "A2'"]), Some(["C2''", "A2''"]), Some(["C2'''", "A2'''"])],
    [Some(["C2", "B1"]), Some(["C2'", "B1'"]), Some(["C2''", "B1''"]), Some(["C2'''", "B1'''"])],
    [Some(["C2", "Abar2"]), Some(["C2'", "Abar2'"]), Some(["C2''", "Abar2''"]), Some(["C2'''", "Abar2'''"])],
    [Some(["C2", "Bbar1"]), Some(["C2'", "Bbar1'"]), Some(["C2''", "Bbar1''"]), Some(["C2'''", "Bbar1'''"])],
    [Some(["A2", "B1"]), Some(["A2'", "B1'"]), Some(["A2''", "B1''"]), Some(["A2'''", "B1'''"])],
    [
        Some(["Abar2", "Bbar1"]),
        Some(["Abar2'", "Bbar1'"]),
        Some(["Abar2''", "Bbar1''"]),
        Some(["Abar2'''", "Bbar1'''"]),
    ],
];

/// Faces of the assembly, one row per rotation orbit.
pub const FACE_TABLE: [[[&str; 3]; 4]; 12] = [
    [["T1", "T2", "A2"], ["T1", "T2'", "A2'"], ["T1", "T2''", "A2''"], ["T1", "T3", "A2'''"]],
    [["T1", "T3", "B1"], ["T1", "T2", "B1'"], ["T1", "T2'", "B1''"], ["T1", "T2''", "B1'''"]],
    [["T1", "A2", "B1"], ["T1", "A2'", "B1'"], ["T1", "A2''", "B1''"], ["T1", "A2'''", "B1'''"]],
    [["T2", "T4", "Abar2"], ["T2'", "T4", "Abar2'"], ["T2''", "T4", "Abar2''"], ["T3", "T4", "Abar2'''"]],
    [["T2", "C2", "A2"], ["T2'", "C2'", "A2'"], ["T2''", "C2''", "A2''"], ["T3", "C2'''", "A2'''"]],
    [["T2", "C2", "Abar2"], ["T2'", "C2'", "Abar2'"], ["T2''", "C2''", "Abar2''"], ["T3", "C2'''", "Abar2'''"]],
    [["T3", "T4", "Bbar1"], ["T2", "T4", "Bbar1'"], ["T2'", "T4", "Bbar1''"], ["T2''", "T4", "Bbar1'''"]],
    [["T3", "C2", "B1"], ["T2", "C2'", "B1'"], ["T2'", "C2''", "B1''"], ["T2''", "C2'''", "B1'''"]],
    [["T3", "C2", "Bbar1"], ["T2", "C2'", "Bbar1'"], ["T2'", "C2''", "Bbar1''"], ["T2''", "C2'''", "Bbar1'''"]],
    [
        ["T4", "Abar2", "Bbar1"],
        ["T4", "Abar2'", "Bbar1'"],
        ["T4", "Abar2''", "Bbar1''"],
        ["T4", "Abar2'''", "Bbar1'''"],
    ],
    [["C2", "A2", "B1"], ["C2'", "A2'", "B1'"], ["C2''", "A2''", "B1''"], ["C2'''", "A2'''", "B1'''"]],
    [
        ["C2", "Abar2", "Bbar1"],
        ["C2'", "Abar2'", "Bbar1'"],
        ["C2''", "Abar2''", "Bbar1''"],
        ["C2'''", "Abar2'''", "Bbar1'''"],
    ],
];

/// Edges of the modified Steffen polyhedron: the first column of
/// [`EDGE_TABLE`] plus the hinge `T1 T4`.
pub fn m_edges() -> Vec<[&'static str; 2]> {
    let mut out: Vec<[&str; 2]> = EDGE_TABLE.iter().filter_map(|row| row[0]).collect();
    out.push(["T1", "T4"]);
    out
}

/// Faces of the modified Steffen polyhedron: the first column of
/// [`FACE_TABLE`] plus the two faces at the hinge `T1 T4`.
pub fn m_faces() -> Vec<[&'static str; 3]> {
    let mut out: Vec<[&str; 3]> = FACE_TABLE.iter().map(|row| row[0]).collect();
    out.push(["T1", "T2", "T4"]);
    out.push(["T1", "T3", "T4"]);
    out
}

pub fn p_edges() -> Vec<[&'static str; 2]> {
    EDGE_TABLE.iter().flat_map(|row| row.iter().flatten().copied()).collect()
}

pub fn p_faces() -> Vec<[&'static str; 3]> {
    FACE_TABLE.iter().flat_map(|row| row.iter().copied()).collect()
}
