//! Recompute the published checkpoints and print one row per check.

use std::time::Instant;

use flexipoly::constructions::tables::{table_position, VERTEX_TABLE};
use flexipoly::constructions::{build_modified_steffen, build_p, build_steffen, steffen_stages_default};
use flexipoly::exactnum::parse;
use flexipoly::flex::{all_edges_rate_report, lengths_preserved, FlexConfig, FlexTarget};
use flexipoly::geometry::dihedral_cos;
use flexipoly::intersect::{self_intersection_report, IntersectionReport};
use flexipoly::mesh::Mesh;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::Failure;

#[derive(Serialize)]
struct Row {
    check: String,
    expected: String,
    got: String,
    pass: bool,
}

#[derive(Default)]
struct Rows(Vec<Row>);

impl Rows {
    fn push(&mut self, check: impl Into<String>, expected: impl Into<String>, got: impl Into<String>) {
        let (expected, got) = (expected.into(), got.into());
        let pass = expected == got;
        self.0.push(Row { check: check.into(), expected, got, pass });
    }
}

fn err(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Count of vertices whose exact position or 2-digit truncation disagrees
/// with the coordinate table.
fn coordinate_mismatches(m: &Mesh) -> usize {
    m.vertices()
        .iter()
        .filter(|v| {
            let Some(lit) = table_position(&v.name) else {
                return true;
            };
            let Some(row) = VERTEX_TABLE.iter().find(|r| r.0 == v.name) else {
                return true;
            };
            let digits_ok = v.position.to_decimal(2).iter().zip(row.2).all(|(got, want)| {
                if want.contains('.') {
                    got == want
                } else {
                    *got == format!("{want}.00")
                }
            });
            !(v.position.exactly_equals(&lit) && digits_ok)
        })
        .count()
}

fn counts(r: &IntersectionReport) -> String {
    format!("{} intersections, {} study cases, {} pairs", r.counts.intersects, r.counts.needs_study, r.total_pairs)
}

fn hinge_cos(m: &Mesh) -> Result<String, Failure> {
    let p = |n: &str| m.position_of(n).cloned().ok_or_else(|| err(format!("{n} missing")));
    let c = dihedral_cos(&p("T1")?, &p("T4")?, &p("T2")?, &p("T3")?).map_err(err)?;
    Ok(c.simplify().to_string())
}

fn collect() -> Result<Rows, Failure> {
    let mut rows = Rows::default();
    let s = build_steffen().map_err(err)?;
    let m = build_modified_steffen().map_err(err)?;
    let p = build_p().map_err(err)?;
    let bricard = steffen_stages_default().map_err(err)?.bricard;

    rows.push("M coordinates match table", "0 mismatches", format!("{} mismatches", coordinate_mismatches(&m)));
    rows.push("P coordinates match table", "0 mismatches", format!("{} mismatches", coordinate_mismatches(&p)));
    rows.push("S hinge dihedral cosine", parse("45/287").map_err(err)?.to_string(), hinge_cos(&s)?);
    rows.push("M hinge dihedral cosine", "0", hinge_cos(&m)?);

    let r = m.validate();
    rows.push(
        "M combinatorics",
        "9 V, 21 E, 14 F, chi 2",
        format!("{} V, {} E, {} F, chi {}", r.vertices, r.edges, r.faces, r.euler_characteristic),
    );
    let r = p.validate();
    rows.push(
        "P combinatorics",
        "26 V, 72 E, 48 F, chi 2",
        format!("{} V, {} E, {} F, chi {}", r.vertices, r.edges, r.faces, r.euler_characteristic),
    );

    rows.push(
        "S self-intersection",
        "0 intersections, 0 study cases, 294 pairs",
        counts(&self_intersection_report(&s)),
    );
    rows.push(
        "M self-intersection",
        "0 intersections, 0 study cases, 294 pairs",
        counts(&self_intersection_report(&m)),
    );
    rows.push(
        "P self-intersection",
        "0 intersections, 0 study cases, 3456 pairs",
        counts(&self_intersection_report(&p)),
    );
    let rb = self_intersection_report(&bricard);
    rows.push("Bricard octahedron self-intersects", "yes", if rb.counts.intersects > 0 { "yes" } else { "no" });

    let cfg = FlexConfig::new(FlexTarget::P).map_err(err)?;
    let field = cfg.velocity_field().map_err(err)?;
    let v = |n: &str| field.get(n).map(|v| format!("({})", v.to_decimal(4).join(", "))).unwrap_or_default();
    rows.push("velocity of A2", "(-0.4602, -0.1074, -0.0914)", v("A2"));
    rows.push("velocity of Abar2", "(-0.0470, -0.0004, 0.0004)", v("Abar2"));

    let rates = all_edges_rate_report(&cfg).map_err(err)?;
    let find = |a: &str, b: &str| {
        rates.iter().find(|r| (r.edge[0] == a && r.edge[1] == b) || (r.edge[0] == b && r.edge[1] == a))
    };
    let c2t2 = find("C2", "T2").map(|r| r.indicator.to_decimal(4)).unwrap_or_default();
    rows.push("dihedral rate indicator at C2T2", "-0.5253", c2t2);
    let nonzero = rates.iter().filter(|r| r.is_nonzero()).count();
    rows.push("edges with nonzero indicator", "72 of 72", format!("{nonzero} of {}", rates.len()));

    for (n, d) in [(1, 64), (-1, 64), (1, 32), (-1, 32), (1, 16), (-1, 16)] {
        let u = BigRational::new(BigInt::from(n), BigInt::from(d));
        let got = match cfg.flex_mesh(&u) {
            Ok(fm) => {
                let bad = lengths_preserved(&cfg.base, &fm).len();
                let r = self_intersection_report(&fm);
                format!(
                    "{bad} changed lengths, {} intersections, {} study cases",
                    r.counts.intersects, r.counts.needs_study
                )
            }
            Err(e) => e.to_string(),
        };
        rows.push(format!("flexed P at u = {n}/{d}"), "0 changed lengths, 0 intersections, 0 study cases", got);
    }
    Ok(rows)
}

pub fn run(as_json: bool) -> Result<(), Failure> {
    let t = Instant::now();
    let rows = collect()?.0;
    let failed = rows.iter().filter(|r| !r.pass).count();
    if as_json {
        let doc = json!({ "rows": rows, "failed": failed });
        out!("{}", serde_json::to_string_pretty(&doc).map_err(err)?);
    } else {
        for r in &rows {
            let status = if r.pass { "PASS" } else { "FAIL" };
            out!("{status}  {}: expected {}, got {}", r.check, r.expected, r.got);
        }
        out!("{} of {} checks passed in {:.1?}", rows.len() - failed, rows.len(), t.elapsed());
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{failed} checkpoint(s) differ")))
    }
}
