//! The one-parameter flex of the modified polyhedron and of its four-fold
//! assembly.
//!
//! The apex `C2` moves on the circle of points at distance 10 from both `T2`
//! and `T3`; the tetrahedron vertices stay fixed and every octahedron vertex
//! is re-trilaterated from two tetrahedron vertices and its copy's apex. The
//! circle is parameterized by the tangent of the half angle, so sampled
//! configurations stay constructible. At the undeformed position the
//! velocities come from the linearized length constraints, and the sign of
//! `(p3 - p4) . (v3 - v4)` for the two vertices opposite an edge tells whether
//! the dihedral angle there changes to first order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::constructions::{
    apex_radius_squared, build_modified_steffen, build_p, rotation_k, trilaterate, BranchRule, ConstructionError,
};
use crate::exactnum::ConstructibleReal as Real;
use crate::geometry::{det3, squared_distance, Matrix3, Point3, Vec3};
use crate::mesh::Mesh;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlexError {
    #[error("vertex {vertex} loses its trilateration branch")]
    BranchLoss { vertex: String },
    #[error("velocity system for vertex {vertex} is singular")]
    SingularSystem { vertex: String },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FlexTarget {
    /// The modified Steffen polyhedron.
    M,
    /// Its four-fold rotational assembly.
    P,
}

/// A vertex placed from three already placed neighbours.
#[derive(Clone, Debug)]
pub struct Dependency {
    pub vertex: String,
    pub neighbours: [String; 3],
    /// Squared lengths to the neighbours, taken from the base mesh.
    pub squared: [Real; 3],
}

/// Everything the flex needs besides the parameter.
#[derive(Clone, Debug)]
pub struct FlexConfig {
    pub target: FlexTarget,
    pub base: Mesh,
    /// Midpoint of `T2 T3`.
    pub center: Point3,
    /// `T3 - T2`, normal to the driver circle.
    pub axis: Vec3,
    pub radius_squared: Real,
    /// `r e1 = C2(0) - center`.
    pub radial: Vec3,
    /// `r e2`, with `e2 = +z`.
    pub vertical: Vec3,
    pub pinned: Vec<String>,
    /// Driver names; the `k`-th is the image of `C2` under `K^k`.
    pub drivers: Vec<String>,
    /// Dependent vertices in placement order.
    pub dependencies: Vec<Dependency>,
}

/// Names of the octahedron vertices of copy `k` and the two tetrahedron
/// vertices they hang from, as named after gluing.
fn copy_names(k: usize) -> ([String; 4], String, String, String) {
    let t2 = ["T2", "T2'", "T2''", "T3"][k].to_string();
    let t3 = ["T3", "T2", "T2'", "T2''"][k].to_string();
    let p = |n: &str| format!("{n}{}", "'".repeat(k));
    ([p("A2"), p("B1"), p("Abar2"), p("Bbar1")], t2, t3, p("C2"))
}

/// A squared length that is exactly an integer is replaced by that integer.
fn tidy_length(x: Real) -> Real {
    let n = x.to_f64().round() as i64;
    let r = Real::from_int(n);
    if r.exactly_equals(&x) {
        r
    } else {
        x.simplify()
    }
}

impl FlexConfig {
    pub fn new(target: FlexTarget) -> Result<FlexConfig, FlexError> {
        let base = match target {
            FlexTarget::M => build_modified_steffen()?,
            FlexTarget::P => build_p()?,
        };
        let pos = |n: &str| base.position_of(n).cloned().ok_or_else(|| FlexError::UnknownVertex(n.to_string()));
        let (t2, t3, c2) = (pos("T2")?, pos("T3")?, pos("C2")?);
        let center = t2.midpoint(&t3).simplify();
        let radius_squared = apex_radius_squared();
        let radial = c2.sub(&center).simplify();
        let r = radius_squared.checked_sqrt().map_err(ConstructionError::from)?.simplify();
        let vertical = Vec3::new(Real::zero(), Real::zero(), r);
        let copies = match target {
            FlexTarget::M => 1,
            FlexTarget::P => 4,
        };
        let mut pinned = vec!["T1".to_string(), "T2".into(), "T3".into(), "T4".into()];
        if target == FlexTarget::P {
            pinned.extend(["T2'".to_string(), "T2''".into()]);
        }
        let mut drivers = Vec::new();
        let mut dependencies = Vec::new();
        for k in 0..copies {
            let ([a2, b1, abar2, bbar1], t2k, t3k, c2k) = copy_names(k);
            for (v, hub, side) in [(a2, "T1", &t2k), (b1, "T1", &t3k), (abar2, "T4", &t2k), (bbar1, "T4", &t3k)] {
                let neighbours = [hub.to_string(), side.clone(), c2k.clone()];
                let mut squared = Vec::new();
                for n in &neighbours {
                    let l = base.squared_length(&v, n).ok_or_else(|| FlexError::UnknownVertex(format!("{v}{n}")))?;
                    squared.push(tidy_length(l));
                }
                let squared: [Real; 3] = squared.try_into().expect("three neighbours");
                dependencies.push(Dependency { vertex: v, neighbours, squared });
            }
            drivers.push(c2k);
        }
        Ok(FlexConfig {
            target,
            base,
            center,
            axis: t3.sub(&t2),
            radius_squared,
            radial,
            vertical,
            pinned,
            drivers,
            dependencies,
        })
    }

    fn k_power(k: usize) -> Matrix3 {
        let mut m = Matrix3::identity();
        for _ in 0..k {
            m = rotation_k().mul(&m);
        }
        m
    }

    /// Position of the apex at parameter `u`:
    /// `center + cos(theta) r e1 + sin(theta) r e2` with `u = tan(theta / 2)`.
    pub fn driver_position(&self, u: &BigRational) -> Point3 {
        let (c, s) = half_angle(u);
        let (c, s) = (Real::from_rational(c), Real::from_rational(s));
        self.center.add(&self.radial.scale(&c).add(&self.vertical.scale(&s))).simplify()
    }

    /// The configuration at parameter `u`. Pins stay, drivers move on the
    /// `K`-images of the circle, and each dependent vertex takes the
    /// trilateration solution nearest its undeformed position.
    pub fn flex_mesh(&self, u: &BigRational) -> Result<Mesh, FlexError> {
        let base = &self.base;
        let mut positions: Vec<Point3> = base.vertices().iter().map(|v| v.position.clone()).collect();
        if u.is_zero() {
            return Ok(base.clone());
        }
        let c2 = self.driver_position(u);
        for (k, d) in self.drivers.iter().enumerate() {
            let id = self.id(d)?;
            positions[id] = Self::k_power(k).mul_point(&c2);
        }
        for dep in &self.dependencies {
            let id = self.id(&dep.vertex)?;
            let nb: Vec<&Point3> =
                dep.neighbours.iter().map(|n| self.id(n).map(|i| &positions[i])).collect::<Result<_, _>>()?;
            let loss = || FlexError::BranchLoss { vertex: dep.vertex.clone() };
            let sol = trilaterate(nb[0], nb[1], nb[2], &dep.squared[0], &dep.squared[1], &dep.squared[2]).map_err(
                |e| match e {
                    ConstructionError::NegativeDiscriminant
                    | ConstructionError::Degenerate
                    | ConstructionError::CollinearBase => loss(),
                    other => other.into(),
                },
            )?;
            let p = sol.select(&BranchRule::NearestTo(base.position(id).clone())).map_err(|_| loss())?;
            positions[id] = p.simplify();
        }
        Ok(base.with_positions(positions))
    }

    fn id(&self, name: &str) -> Result<usize, FlexError> {
        self.base.vertex_id(name).ok_or_else(|| FlexError::UnknownVertex(name.to_string()))
    }

    /// Driver velocities at `t = 0`: each apex moves along `+z` with unit
    /// speed (`K` fixes the z axis).
    pub fn driver_velocities(&self) -> BTreeMap<String, Vec3> {
        self.drivers.iter().map(|d| (d.clone(), Vec3::from_ints(0, 0, 1))).collect()
    }

    /// Velocity field of the undeformed configuration with the default
    /// drivers.
    pub fn velocity_field(&self) -> Result<VelocityField, FlexError> {
        velocity_field(&self.base, &self.pinned, &self.driver_velocities(), &self.dependencies)
    }

    /// Largest `|u|` on the grid `umax / 2^i` (`i < steps`) in direction
    /// `sign(umax)` at which the flex still exists, refined by bisection
    /// between the last good and first failing probe. `None` if even the
    /// smallest probe fails.
    pub fn validity_window(&self, umax: &BigRational, steps: usize) -> Option<BigRational> {
        if self.flex_mesh(umax).is_ok() {
            return Some(umax.clone());
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let mut bad = umax.clone();
        let mut good = None;
        let mut u = umax.clone();
        for _ in 0..steps {
            u = &u / &two;
            if self.flex_mesh(&u).is_ok() {
                good = Some(u.clone());
                break;
            }
            bad = u.clone();
        }
        let mut good = good?;
        for _ in 0..steps {
            let mid = (&good + &bad) / &two;
            if self.flex_mesh(&mid).is_ok() {
                good = mid;
            } else {
                bad = mid;
            }
        }
        Some(good)
    }
}

/// `(cos theta, sin theta)` for `u = tan(theta / 2)`.
pub fn half_angle(u: &BigRational) -> (BigRational, BigRational) {
    let one = BigRational::one();
    let uu = u * u;
    let den = &one + &uu;
    ((&one - &uu) / &den, (u + u) / &den)
}

/// Flex-time label `t = r theta` for parameter `u`; not used for any
/// certification.
pub fn flex_time(u: &BigRational) -> f64 {
    let uf = u.numer().to_string().parse::<f64>().unwrap_or(0.0) / u.denom().to_string().parse::<f64>().unwrap_or(1.0);
    1.5 * 31f64.sqrt() * 2.0 * uf.atan()
}

/// Velocities per vertex, in the base mesh's vertex order.
#[derive(Clone, Debug)]
pub struct VelocityField {
    pub names: Vec<String>,
    pub velocities: Vec<Vec3>,
}

impl VelocityField {
    pub fn get(&self, name: &str) -> Option<&Vec3> {
        self.names.iter().position(|n| n == name).map(|i| &self.velocities[i])
    }
}

/// Solve the linearized constraints `(x - n) . (v_x - v_n) = 0` for each
/// dependent vertex in order, by Cramer's rule. Pins get zero velocity.
pub fn velocity_field(
    base: &Mesh,
    pinned: &[String],
    drivers: &BTreeMap<String, Vec3>,
    order: &[Dependency],
) -> Result<VelocityField, FlexError> {
    let n = base.vertices().len();
    let mut vel: Vec<Option<Vec3>> = vec![None; n];
    let id = |name: &str| base.vertex_id(name).ok_or_else(|| FlexError::UnknownVertex(name.to_string()));
    for p in pinned {
        vel[id(p)?] = Some(Vec3::zero());
    }
    for (d, v) in drivers {
        vel[id(d)?] = Some(v.clone());
    }
    for dep in order {
        let x = id(&dep.vertex)?;
        let px = base.position(x);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for nb in &dep.neighbours {
            let j = id(nb)?;
            let vj = vel[j].clone().ok_or_else(|| FlexError::UnknownVertex(nb.clone()))?;
            let row = px.sub(base.position(j)).simplify();
            rhs.push(row.dot(&vj).simplify());
            rows.push(row);
        }
        let det = det3(&rows[0], &rows[1], &rows[2]).simplify();
        if det.is_zero() {
            return Err(FlexError::SingularSystem { vertex: dep.vertex.clone() });
        }
        // columns of the system matrix are the coordinates of the rows
        let col = |r: &Vec3, c: usize| [&r.x, &r.y, &r.z][c].clone();
        let solve = |c: usize| {
            let swapped: Vec<Vec3> = rows
                .iter()
                .zip(&rhs)
                .map(|(r, b)| {
                    let mut cells = [col(r, 0), col(r, 1), col(r, 2)];
                    cells[c] = b.clone();
                    let [a0, a1, a2] = cells;
                    Vec3::new(a0, a1, a2)
                })
                .collect();
            det3(&swapped[0], &swapped[1], &swapped[2]).div_nonzero(&det).simplify()
        };
        vel[x] = Some(Vec3::new(solve(0), solve(1), solve(2)));
    }
    let names = base.vertices().iter().map(|v| v.name.clone()).collect();
    let velocities = vel
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| FlexError::UnknownVertex(base.name(i).to_string())))
        .collect::<Result<_, _>>()?;
    Ok(VelocityField { names, velocities })
}

/// `(p3 - p4) . (v3 - v4)`: half the rate of change of `|p3 p4|^2`. For the
/// two vertices opposite an edge, a nonzero value means the dihedral angle at
/// that edge is not constant.
pub fn dihedral_rate_indicator(p3: &Point3, p4: &Point3, v3: &Vec3, v4: &Vec3) -> Real {
    p3.sub(p4).dot(&v3.sub(v4))
}

#[derive(Clone, Debug)]
pub struct EdgeRate {
    pub edge: [String; 2],
    /// The vertices opposite the edge in its two faces.
    pub opposite: [String; 2],
    pub indicator: Real,
    pub sign: i32,
}

impl EdgeRate {
    /// First-order certificate that the dihedral angle varies.
    pub fn is_nonzero(&self) -> bool {
        self.sign != 0
    }
}

/// Indicator for every edge of the base mesh, in edge order.
pub fn all_edges_rate_report(config: &FlexConfig) -> Result<Vec<EdgeRate>, FlexError> {
    let field = config.velocity_field()?;
    Ok(edge_rates(&config.base, &field))
}

pub fn edge_rates(base: &Mesh, field: &VelocityField) -> Vec<EdgeRate> {
    use rayon::prelude::*;
    let ef = base.edge_faces();
    base.edges()
        .par_iter()
        .enumerate()
        .map(|(ei, e)| {
            let o: Vec<usize> = ef[ei].iter().map(|&f| base.opposite_vertex(f, e)).collect();
            let (a, b) = (o[0], o[1]);
            let indicator =
                dihedral_rate_indicator(base.position(a), base.position(b), &field.velocities[a], &field.velocities[b])
                    .simplify();
            let sign = indicator.sign();
            EdgeRate {
                edge: [base.name(e[0]).to_string(), base.name(e[1]).to_string()],
                opposite: [base.name(a).to_string(), base.name(b).to_string()],
                indicator,
                sign,
            }
        })
        .collect()
}

/// Exact check that every edge keeps its squared length.
pub fn lengths_preserved(base: &Mesh, moved: &Mesh) -> Vec<[String; 2]> {
    use rayon::prelude::*;
    base.edges()
        .par_iter()
        .filter_map(|e| {
            let l0 = tidy_length(squared_distance(base.position(e[0]), base.position(e[1])));
            let l1 = squared_distance(moved.position(e[0]), moved.position(e[1]));
            if l1.exactly_equals(&l0) {
                None
            } else {
                Some([base.name(e[0]).to_string(), base.name(e[1]).to_string()])
            }
        })
        .collect()
}

/// `u = n / d` from text `"n/d"` or `"n"`.
pub fn parse_parameter(text: &str) -> Option<BigRational> {
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (text.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    let q = BigRational::new(n, d);
    // a parameter this large is outside any useful window anyway
    if q.abs() > BigRational::from_integer(BigInt::from(1_000_000)) {
        return None;
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn driver_at_zero_and_on_circle() {
        let cfg = FlexConfig::new(FlexTarget::M).unwrap();
        let c0 = cfg.driver_position(&q(0, 1));
        assert!(c0.exactly_equals(cfg.base.position_of("C2").unwrap()));
        for u in [q(1, 7), q(-3, 5), q(1, 1)] {
            let c = cfg.driver_position(&u);
            for t in ["T2", "T3"] {
                assert!(squared_distance(&c, cfg.base.position_of(t).unwrap()).exactly_equals(&Real::from_int(100)));
            }
        }
        let top = cfg.driver_position(&q(1, 1));
        assert!(top.z.exactly_equals(&parse("3*sqrt(31)/2").unwrap()));
        assert!(top.x.exactly_equals(&parse("11/(2*sqrt(2))").unwrap()));
    }

    #[test]
    fn half_angle_is_on_unit_circle() {
        for u in [q(0, 1), q(1, 3), q(-7, 2)] {
            let (c, s) = half_angle(&u);
            assert_eq!(&c * &c + &s * &s, BigRational::one());
        }
    }

    #[test]
    fn flex_at_zero_is_identity() {
        let cfg = FlexConfig::new(FlexTarget::M).unwrap();
        let m = cfg.flex_mesh(&q(0, 1)).unwrap();
        let base = build_modified_steffen().unwrap();
        for (a, b) in m.vertices().iter().zip(base.vertices()) {
            assert!(a.position.exactly_equals(&b.position));
        }
    }

    #[test]
    fn flexed_m_keeps_lengths() {
        let cfg = FlexConfig::new(FlexTarget::M).unwrap();
        let m = cfg.flex_mesh(&q(1, 10)).unwrap();
        assert!(lengths_preserved(&cfg.base, &m).is_empty());
        let d0 = cfg.base.position_of("T1").unwrap();
        let moved = squared_distance(m.position_of("C2").unwrap(), d0);
        let rest = squared_distance(cfg.base.position_of("C2").unwrap(), d0);
        assert!(!moved.exactly_equals(&rest));
    }

    #[test]
    fn pinned_vertices_have_zero_velocity() {
        let cfg = FlexConfig::new(FlexTarget::M).unwrap();
        let f = cfg.velocity_field().unwrap();
        assert!(f.get("T1").unwrap().is_zero());
        assert!(f.get("C2").unwrap().exactly_equals(&Vec3::from_ints(0, 0, 1)));
    }

    #[test]
    fn synthetic_pinned_edge_has_zero_indicator() {
        let p = Point3::from_ints(1, 2, 3);
        let r = Point3::from_ints(-1, 0, 2);
        assert!(dihedral_rate_indicator(&p, &r, &Vec3::zero(), &Vec3::zero()).is_zero());
    }

    #[test]
    fn singular_system_reported() {
        let m = Mesh::from_named(
            vec![
                ("a", Point3::from_ints(0, 0, 0)),
                ("b", Point3::from_ints(1, 0, 0)),
                ("c", Point3::from_ints(2, 0, 0)),
                ("x", Point3::from_ints(3, 0, 0)),
            ],
            &[["a", "b"], ["a", "c"], ["a", "x"], ["b", "c"], ["b", "x"], ["c", "x"]],
            &[["a", "b", "c"], ["a", "b", "x"], ["a", "c", "x"], ["b", "c", "x"]],
        )
        .unwrap();
        let dep = Dependency {
            vertex: "x".into(),
            neighbours: ["a".into(), "b".into(), "c".into()],
            squared: [Real::from_int(9), Real::from_int(4), Real::from_int(1)],
        };
        let err = velocity_field(&m, &["a".into(), "b".into(), "c".into()], &BTreeMap::new(), &[dep]).unwrap_err();
        assert_eq!(err, FlexError::SingularSystem { vertex: "x".into() });
    }

    #[test]
    fn parameter_parsing() {
        assert_eq!(parse_parameter("1/16"), Some(q(1, 16)));
        assert_eq!(parse_parameter("-3"), Some(q(-3, 1)));
        assert_eq!(parse_parameter("1/0"), None);
        assert_eq!(parse_parameter("x"), None);
    }
}
