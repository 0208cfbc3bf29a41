//! Builders for the polyhedra studied here: the base tetrahedron, the
//! Bricard octahedron of the first type, Steffen's flexible polyhedron, its
//! modified variant with a rational hinge, and the four-fold rotational
//! assembly of the modified variant.

pub mod tables;

use std::sync::OnceLock;

use crate::exactnum::{ConstructibleReal as Real, ExactError};
use crate::geometry::{squared_distance, Matrix3, Point3, Vec3};
use crate::mesh::{Mesh, MeshError};

pub use tables::NamedConstants;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructionError {
    #[error("trilateration base points are collinear")]
    CollinearBase,
    #[error("trilateration has no real solution")]
    NegativeDiscriminant,
    #[error("trilateration has a single doubled solution")]
    Degenerate,
    #[error("branch rule cannot tell the two solutions apart")]
    AmbiguousBranch,
    #[error("rotation axis direction is zero")]
    ZeroDirection,
    #[error("opposite sides of the skew quadrilateral differ in length")]
    OppositeSideMismatch,
    #[error("symmetry axis of the skew quadrilateral is undetermined")]
    DegenerateAxis,
    #[error("{0}")]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("construction check failed: {0}")]
    Check(String),
}

/// Which of the two trilateration solutions to keep.
#[derive(Clone, Debug)]
pub enum BranchRule {
    LargestZ,
    SmallestZ,
    NearestTo(Point3),
}

/// The two points at prescribed squared distances from three base points,
/// `centre ± offset`.
#[derive(Clone, Debug)]
pub struct Trilateration {
    pub plus: Point3,
    pub minus: Point3,
}

impl Trilateration {
    pub fn select(&self, rule: &BranchRule) -> Result<Point3, ConstructionError> {
        let ord = match rule {
            BranchRule::LargestZ => self.plus.z.cmp_exact(&self.minus.z),
            BranchRule::SmallestZ => self.minus.z.cmp_exact(&self.plus.z),
            BranchRule::NearestTo(r) => squared_distance(&self.minus, r).cmp_exact(&squared_distance(&self.plus, r)),
        };
        match ord {
            std::cmp::Ordering::Greater => Ok(self.plus.clone()),
            std::cmp::Ordering::Less => Ok(self.minus.clone()),
            std::cmp::Ordering::Equal => Err(ConstructionError::AmbiguousBranch),
        }
    }
}

/// Points `x` with `|x-p|^2 = d1`, `|x-q|^2 = d2`, `|x-r|^2 = d3`.
///
/// Solved in the frame `x = p + a(q-p) + b(r-p) + s n` with `n` the base
/// normal: the Gram system gives `a, b`, then `s^2` is what is left of `d1`.
pub fn trilaterate(
    p: &Point3,
    q: &Point3,
    r: &Point3,
    d1: &Real,
    d2: &Real,
    d3: &Real,
) -> Result<Trilateration, ConstructionError> {
    let u = q.sub(p).simplify();
    let w = r.sub(p).simplify();
    let g11 = u.norm_squared();
    let g12 = u.dot(&w);
    let g22 = w.norm_squared();
    let det = (&g11 * &g22 - g12.square()).simplify();
    if det.is_zero() {
        return Err(ConstructionError::CollinearBase);
    }
    let half = Real::from_ratio(1, 2);
    let b1 = (d1 - d2 + &g11) * &half;
    let b2 = (d1 - d3 + &g22) * &half;
    let alpha = (&b1 * &g22 - &b2 * &g12).div_nonzero(&det);
    let beta = (&b2 * &g11 - &b1 * &g12).div_nonzero(&det);
    let centre = p.add(&u.scale(&alpha).add(&w.scale(&beta))).simplify();
    let h2 = (d1 - (&alpha * &b1 + &beta * &b2)).simplify();
    match h2.sign() {
        -1 => return Err(ConstructionError::NegativeDiscriminant),
        0 => return Err(ConstructionError::Degenerate),
        _ => {}
    }
    // |n|^2 equals the Gram determinant
    let s = h2.div_nonzero(&det).simplify().checked_sqrt()?;
    let offset = u.cross(&w).simplify().scale(&s);
    Ok(Trilateration { plus: centre.add(&offset), minus: centre.add(&offset.neg()) })
}

/// Trilaterate and pick a branch in one step.
pub fn trilaterate_branch(
    base: [&Point3; 3],
    squared: [&Real; 3],
    rule: &BranchRule,
) -> Result<Point3, ConstructionError> {
    trilaterate(base[0], base[1], base[2], squared[0], squared[1], squared[2])?.select(rule)
}

/// Half-turn of `x` about the line through `a` with direction `d`.
pub fn rotate_180_about_line(x: &Point3, a: &Point3, d: &Vec3) -> Result<Point3, ConstructionError> {
    let dd = d.norm_squared();
    if dd.is_zero() {
        return Err(ConstructionError::ZeroDirection);
    }
    let t = x.sub(a).dot(d).div_nonzero(&dd);
    let foot = a.add(&d.scale(&t));
    let two = Real::from_int(2);
    Ok(Point3::new(&foot.x * &two - &x.x, &foot.y * &two - &x.y, &foot.z * &two - &x.z))
}

/// Bricard octahedron of the first type over the skew quadrilateral
/// `A1 B1 A2 B2` with apex `C2`; `C1` is the image of `C2` under the half-turn
/// about the quadrilateral's symmetry axis. Vertices are named
/// `A1 B1 A2 B2 C1 C2`.
pub fn build_bricard_type1(
    a1: &Point3,
    b1: &Point3,
    a2: &Point3,
    b2: &Point3,
    c2: &Point3,
) -> Result<Mesh, ConstructionError> {
    if !squared_distance(a1, b1).exactly_equals(&squared_distance(a2, b2))
        || !squared_distance(b1, a2).exactly_equals(&squared_distance(b2, a1))
    {
        return Err(ConstructionError::OppositeSideMismatch);
    }
    let na = a1.midpoint(a2);
    let nb = b1.midpoint(b2);
    let dir = if na.exactly_equals(&nb) {
        let d = a2.sub(a1).cross(&b2.sub(b1));
        if d.is_zero() {
            return Err(ConstructionError::DegenerateAxis);
        }
        d
    } else {
        nb.sub(&na)
    };
    let c1 = rotate_180_about_line(c2, &na, &dir.simplify())?.simplify();
    let vertices = vec![
        ("A1", a1.clone()),
        ("B1", b1.clone()),
        ("A2", a2.clone()),
        ("B2", b2.clone()),
        ("C1", c1),
        ("C2", c2.clone()),
    ];
    let opposite = [("A1", "A2"), ("B1", "B2"), ("C1", "C2")];
    let names = ["A1", "B1", "A2", "B2", "C1", "C2"];
    let mut edges = Vec::new();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            if !opposite.iter().any(|&(x, y)| (x == *a && y == *b) || (x == *b && y == *a)) {
                edges.push([*a, *b]);
            }
        }
    }
    let mut faces = Vec::new();
    for a in ["A1", "A2"] {
        for b in ["B1", "B2"] {
            for c in ["C1", "C2"] {
                faces.push([a, b, c]);
            }
        }
    }
    Ok(Mesh::from_named(vertices, &edges, &faces)?)
}

/// Squared hinge length `|T1 T4|^2` of Steffen's polyhedron.
pub const STEFFEN_HINGE: i64 = 289;
/// Squared hinge length of the modified polyhedron.
pub const MODIFIED_HINGE: i64 = 334;

/// Tetrahedron `T1..T4` with `|T2T3| = 11`, the other sides touching the
/// hinge 12, and `|T1T4|^2 = hinge`. The hinge lies on the z axis centred at
/// the origin and `T2, T3` are mirror images in the plane `x = y`.
pub fn tetrahedron(hinge: &Real) -> Result<[Point3; 4], ConstructionError> {
    let quarter = hinge * Real::from_ratio(1, 4);
    let r2 = Real::from_int(144) - &quarter;
    let half_side2 = Real::from_ratio(121, 2);
    let q = &r2 * Real::from_int(2) - &half_side2;
    if q.sign() <= 0 || r2.sign() <= 0 {
        return Err(ConstructionError::NegativeDiscriminant);
    }
    let half = Real::from_ratio(1, 2);
    let sq = q.checked_sqrt()?;
    let sh = half_side2.checked_sqrt()?;
    let a = (&sq + &sh) * &half;
    let b = (&sq - &sh) * &half;
    let zt = quarter.checked_sqrt()?;
    let (a, b) = (a.simplify(), b.simplify());
    let zero = Real::zero();
    Ok([
        Point3::new(zero.clone(), zero.clone(), zt.clone()),
        Point3::new(b.clone(), a.clone(), zero.clone()),
        Point3::new(a, b, zero.clone()),
        Point3::new(zero.clone(), zero, -&zt),
    ])
}

fn tetrahedron_mesh(t: &[Point3; 4]) -> Result<Mesh, ConstructionError> {
    let names = ["T1", "T2", "T3", "T4"];
    let vertices = names.iter().zip(t.iter()).map(|(n, p)| (*n, p.clone())).collect();
    let edges = [["T1", "T2"], ["T1", "T3"], ["T1", "T4"], ["T2", "T3"], ["T2", "T4"], ["T3", "T4"]];
    let faces = [["T1", "T2", "T3"], ["T1", "T2", "T4"], ["T1", "T3", "T4"], ["T2", "T3", "T4"]];
    Ok(Mesh::from_named(vertices, &edges, &faces)?)
}

pub fn build_tetrahedron_t(hinge: i64) -> Result<Mesh, ConstructionError> {
    tetrahedron_mesh(&tetrahedron(&Real::from_int(hinge))?)
}

/// The apex `C2` shared by both octahedra: on the ray from the hinge midpoint
/// through the midpoint `Y` of `T2T3`, beyond `Y` by the circumradius-like
/// distance `sqrt(10^2 - (11/2)^2)`.
pub fn apex_c2(t2: &Point3, t3: &Point3) -> Point3 {
    let y = t2.midpoint(t3);
    let s = apex_offset();
    y.add(&Vec3::new(s.clone(), s, Real::zero())).simplify()
}

/// Per-axis offset of `C2` from `Y`: `(3 sqrt(31) / 2) / sqrt(2)`.
fn apex_offset() -> Real {
    Real::from_ratio(279, 8).checked_sqrt().expect("positive")
}

/// Squared radius of the circle `C2` may move on.
pub fn apex_radius_squared() -> Real {
    Real::from_ratio(279, 4)
}

/// Everything the staged construction produces, before the final surface is
/// assembled.
#[derive(Clone, Debug)]
pub struct SteffenStages {
    pub tetrahedron: Mesh,
    pub bricard: Mesh,
    pub bricard_bar: Mesh,
    pub with_bricard: Mesh,
    pub with_both: Mesh,
    pub surface: Mesh,
}

/// Run the staged construction for a hinge length. The second octahedron's
/// free vertices come from `bar`, which returns `(Abar2, Bbar1)` given
/// `(T, C2, A2, B1)`.
fn steffen_stages(
    hinge: i64,
    bar: impl Fn(&[Point3; 4], &Point3, &Point3, &Point3) -> Result<(Point3, Point3), ConstructionError>,
) -> Result<SteffenStages, ConstructionError> {
    let t = tetrahedron(&Real::from_int(hinge))?;
    let [t1, t2, t3, t4] = &t;
    let c2 = apex_c2(t2, t3);
    let (d10, d5, d12) = (Real::from_int(100), Real::from_int(25), Real::from_int(144));
    let a2 = trilaterate_branch([t1, t2, &c2], [&d10, &d5, &d12], &BranchRule::LargestZ)?;
    let b1 = trilaterate_branch([t1, t3, &c2], [&d10, &d5, &d12], &BranchRule::SmallestZ)?;
    let bricard = build_bricard_type1(t3, &b1, &a2, t2, &c2)?;
    if !bricard.position_of("C1").unwrap().exactly_equals(t1) {
        return Err(ConstructionError::Check("half-turn image of C2 is not T1".into()));
    }
    let (abar2, bbar1) = bar(&t, &c2, &a2, &b1)?;
    let bricard_bar = build_bricard_type1(t3, &bbar1, &abar2, t2, &c2)?.rename(|n| {
        let (letter, idx) = n.split_at(1);
        format!("{letter}bar{idx}")
    })?;
    if !bricard_bar.position_of("Cbar1").unwrap().exactly_equals(t4) {
        return Err(ConstructionError::Check("half-turn image of Cbar2 is not T4".into()));
    }
    let tetra = tetrahedron_mesh(&t)?;
    let with_bricard = Mesh::glue_named(&tetra, &bricard, &[("C1", "T1"), ("B2", "T2"), ("A1", "T3")])?;
    let with_both =
        Mesh::glue_named(&with_bricard, &bricard_bar, &[("Bbar2", "T2"), ("Abar1", "T3"), ("Cbar1", "T4")])?;
    let surface = with_both.self_glue_named(&[("Cbar2", "C2")])?.reorder(&tables::M_VERTEX_NAMES)?;
    Ok(SteffenStages { tetrahedron: tetra, bricard, bricard_bar, with_bricard, with_both, surface })
}

/// Half-turn `(x, y, z) -> (y, x, -z)` about the line `x = y, z = 0`; a
/// symmetry of the modified polyhedron swapping the two octahedra.
pub fn rotation_l() -> Matrix3 {
    Matrix3::from_ints([[0, 1, 0], [1, 0, 0], [0, 0, -1]])
}

/// Quarter turn about the hinge axis.
pub fn rotation_k() -> Matrix3 {
    Matrix3::from_ints([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
}

/// Stages of the modified construction; the second octahedron is the image
/// of the first under [`rotation_l`].
pub fn modified_steffen_stages() -> Result<SteffenStages, ConstructionError> {
    steffen_stages(MODIFIED_HINGE, |t, c2, a2, b1| {
        let l = rotation_l();
        let abar2 = l.mul_point(b1);
        let bbar1 = l.mul_point(a2);
        // the images must satisfy the octahedron's own distance constraints
        let checks = [
            (&abar2, &t[3], 100),
            (&abar2, &t[1], 25),
            (&abar2, c2, 144),
            (&bbar1, &t[3], 100),
            (&bbar1, &t[2], 25),
            (&bbar1, c2, 144),
        ];
        for (p, q, d) in checks {
            if !squared_distance(p, q).exactly_equals(&Real::from_int(d)) {
                return Err(ConstructionError::Check("mirror image misses a prescribed length".into()));
            }
        }
        Ok((abar2, bbar1))
    })
}

/// Stages of Steffen's construction. The second octahedron's free vertices
/// are trilaterated, choosing the solution nearest the corresponding vertex
/// of the modified polyhedron.
pub fn steffen_stages_default() -> Result<SteffenStages, ConstructionError> {
    let m = build_modified_steffen()?;
    steffen_stages(STEFFEN_HINGE, |t, c2, _, _| {
        let (d10, d5, d12) = (Real::from_int(100), Real::from_int(25), Real::from_int(144));
        let abar2 = trilaterate_branch(
            [&t[3], &t[1], c2],
            [&d10, &d5, &d12],
            &BranchRule::NearestTo(m.position_of("Abar2").unwrap().clone()),
        )?;
        let bbar1 = trilaterate_branch(
            [&t[3], &t[2], c2],
            [&d10, &d5, &d12],
            &BranchRule::NearestTo(m.position_of("Bbar1").unwrap().clone()),
        )?;
        Ok((abar2, bbar1))
    })
}

/// Steffen's flexible polyhedron: 9 vertices, 21 edges, 14 faces.
pub fn build_steffen() -> Result<Mesh, ConstructionError> {
    static CACHE: OnceLock<Mesh> = OnceLock::new();
    if let Some(m) = CACHE.get() {
        return Ok(m.clone());
    }
    let s = steffen_stages_default()?.surface;
    Ok(CACHE.get_or_init(|| s).clone())
}

/// The modified polyhedron with hinge `|T1T4|^2 = 334`, in table vertex
/// order. The coordinates come from the construction pipeline.
pub fn build_modified_steffen() -> Result<Mesh, ConstructionError> {
    static CACHE: OnceLock<Mesh> = OnceLock::new();
    if let Some(m) = CACHE.get() {
        return Ok(m.clone());
    }
    let m = modified_steffen_stages()?.surface;
    Ok(CACHE.get_or_init(|| m).clone())
}

/// Suffix `k` primes to every vertex name.
pub fn primed(name: &str, k: usize) -> String {
    format!("{name}{}", "'".repeat(k))
}

/// The image of the modified polyhedron under `K^k`, vertices primed `k`
/// times.
pub fn rotated_copy(m: &Mesh, k: usize) -> Result<Mesh, ConstructionError> {
    let mut rot = Matrix3::identity();
    for _ in 0..k {
        rot = rotation_k().mul(&rot);
    }
    Ok(m.apply_isometry(&rot, &Vec3::zero())?.rename(|n| primed(n, k))?)
}

/// The four-fold assembly `M ∪ K(M) ∪ K^2(M) ∪ K^3(M)` glued along the
/// hinge faces, in table vertex order: 26 vertices, 72 edges, 48 faces.
pub fn build_p() -> Result<Mesh, ConstructionError> {
    static CACHE: OnceLock<Mesh> = OnceLock::new();
    if let Some(m) = CACHE.get() {
        return Ok(m.clone());
    }
    let m = build_modified_steffen()?;
    let c1 = rotated_copy(&m, 1)?;
    let c2 = rotated_copy(&m, 2)?;
    let c3 = rotated_copy(&m, 3)?;
    let g1 = Mesh::glue_named(&m, &c1, &[("T1'", "T1"), ("T4'", "T4"), ("T3'", "T2")])?;
    let g2 = Mesh::glue_named(&g1, &c2, &[("T1''", "T1"), ("T4''", "T4"), ("T3''", "T2'")])?;
    let g3 = Mesh::glue_named(&g2, &c3, &[("T1'''", "T1"), ("T4'''", "T4"), ("T3'''", "T2''"), ("T2'''", "T3")])?;
    let order: Vec<&str> = tables::VERTEX_TABLE.iter().map(|r| r.0).collect();
    let p = g3.reorder(&order)?;
    Ok(CACHE.get_or_init(|| p).clone())
}
