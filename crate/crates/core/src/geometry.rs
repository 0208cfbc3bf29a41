//! Exact points, vectors, 3x3 matrices and the predicates built on them.

use std::fmt;

use crate::exactnum::{parse, ConstructibleReal as Real, ExactError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate face: a vertex lies on the hinge line")]
    DegenerateFace,
}

#[derive(Clone)]
pub struct Point3 {
    pub x: Real,
    pub y: Real,
    pub z: Real,
}

#[derive(Clone)]
pub struct Vec3 {
    pub x: Real,
    pub y: Real,
    pub z: Real,
}

#[derive(Clone)]
pub struct Matrix3 {
    pub rows: [[Real; 3]; 3],
}

impl Point3 {
    pub fn new(x: Real, y: Real, z: Real) -> Point3 {
        Point3 { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Point3 {
        Point3::new(x.into(), y.into(), z.into())
    }

    pub fn parse(x: &str, y: &str, z: &str) -> Result<Point3, ExactError> {
        Ok(Point3::new(parse(x)?, parse(y)?, parse(z)?))
    }

    pub fn origin() -> Point3 {
        Point3::from_ints(0, 0, 0)
    }

    pub fn coords(&self) -> [&Real; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn sub(&self, o: &Point3) -> Vec3 {
        Vec3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn add(&self, v: &Vec3) -> Point3 {
        Point3::new(&self.x + &v.x, &self.y + &v.y, &self.z + &v.z)
    }

    pub fn as_vec(&self) -> Vec3 {
        Vec3::new(self.x.clone(), self.y.clone(), self.z.clone())
    }

    pub fn midpoint(&self, o: &Point3) -> Point3 {
        let half = Real::from_ratio(1, 2);
        Point3::new((&self.x + &o.x) * &half, (&self.y + &o.y) * &half, (&self.z + &o.z) * &half)
    }

    pub fn exactly_equals(&self, o: &Point3) -> bool {
        self.x.exactly_equals(&o.x) && self.y.exactly_equals(&o.y) && self.z.exactly_equals(&o.z)
    }

    pub fn ptr_eq(&self, o: &Point3) -> bool {
        self.x.ptr_eq(&o.x) && self.y.ptr_eq(&o.y) && self.z.ptr_eq(&o.z)
    }

    /// Coordinates rewritten by [`Real::simplify`].
    pub fn simplify(&self) -> Point3 {
        Point3::new(self.x.simplify(), self.y.simplify(), self.z.simplify())
    }

    /// Coordinatewise identical expression trees; implies equal points.
    pub fn same_expression(&self, o: &Point3) -> bool {
        let eq = |a: &Real, b: &Real| a.ptr_eq(b) || a.structurally_equal(b);
        eq(&self.x, &o.x) && eq(&self.y, &o.y) && eq(&self.z, &o.z)
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }

    pub fn to_decimal(&self, digits: usize) -> [String; 3] {
        [self.x.to_decimal(digits), self.y.to_decimal(digits), self.z.to_decimal(digits)]
    }
}

impl fmt::Debug for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.to_decimal(6);
        write!(f, "({x}, {y}, {z})")
    }
}

impl fmt::Debug for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}, {}>", self.x.to_decimal(6), self.y.to_decimal(6), self.z.to_decimal(6))
    }
}

impl Vec3 {
    pub fn new(x: Real, y: Real, z: Real) -> Vec3 {
        Vec3 { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Vec3 {
        Vec3::new(x.into(), y.into(), z.into())
    }

    pub fn zero() -> Vec3 {
        Vec3::from_ints(0, 0, 0)
    }

    pub fn add(&self, o: &Vec3) -> Vec3 {
        Vec3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }

    pub fn sub(&self, o: &Vec3) -> Vec3 {
        Vec3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn neg(&self) -> Vec3 {
        Vec3::new(-&self.x, -&self.y, -&self.z)
    }

    pub fn scale(&self, s: &Real) -> Vec3 {
        Vec3::new(&self.x * s, &self.y * s, &self.z * s)
    }

    pub fn dot(&self, o: &Vec3) -> Real {
        &(&self.x * &o.x) + &(&self.y * &o.y) + &self.z * &o.z
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        Vec3::new(&self.y * &o.z - &self.z * &o.y, &self.z * &o.x - &self.x * &o.z, &self.x * &o.y - &self.y * &o.x)
    }

    pub fn norm_squared(&self) -> Real {
        self.dot(self)
    }

    pub fn simplify(&self) -> Vec3 {
        Vec3::new(self.x.simplify(), self.y.simplify(), self.z.simplify())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn exactly_equals(&self, o: &Vec3) -> bool {
        self.x.exactly_equals(&o.x) && self.y.exactly_equals(&o.y) && self.z.exactly_equals(&o.z)
    }

    pub fn to_decimal(&self, digits: usize) -> [String; 3] {
        [self.x.to_decimal(digits), self.y.to_decimal(digits), self.z.to_decimal(digits)]
    }
}

impl Matrix3 {
    pub fn from_ints(m: [[i64; 3]; 3]) -> Matrix3 {
        Matrix3 { rows: m.map(|r| r.map(Real::from_int)) }
    }

    pub fn identity() -> Matrix3 {
        Matrix3::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    fn row(&self, i: usize) -> Vec3 {
        let [a, b, c] = self.rows[i].clone();
        Vec3::new(a, b, c)
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }

    pub fn mul_point(&self, p: &Point3) -> Point3 {
        let v = self.mul_vec(&p.as_vec());
        Point3::new(v.x, v.y, v.z)
    }

    pub fn transpose(&self) -> Matrix3 {
        let r = &self.rows;
        Matrix3 { rows: std::array::from_fn(|i| std::array::from_fn(|j| r[j][i].clone())) }
    }

    pub fn mul(&self, o: &Matrix3) -> Matrix3 {
        let ot = o.transpose();
        Matrix3 { rows: std::array::from_fn(|i| std::array::from_fn(|j| self.row(i).dot(&ot.row(j)))) }
    }

    pub fn det(&self) -> Real {
        det3(&self.row(0), &self.row(1), &self.row(2))
    }

    pub fn exactly_equals(&self, o: &Matrix3) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.rows[i][j].exactly_equals(&o.rows[i][j])))
    }

    pub fn is_orthogonal(&self) -> bool {
        self.mul(&self.transpose()).exactly_equals(&Matrix3::identity())
    }

    pub fn is_rotation(&self) -> bool {
        self.is_orthogonal() && self.det().sign() > 0
    }
}

/// `a . (b x c)`.
pub fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> Real {
    a.dot(&b.cross(c))
}

/// Six times the signed volume of the tetrahedron `x0 x1 x2 x3`. A repeated
/// point (same expressions) gives a structural zero without a sign test.
pub fn oriented_volume6(x0: &Point3, x1: &Point3, x2: &Point3, x3: &Point3) -> Real {
    let pts = [x0, x1, x2, x3];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].same_expression(pts[j]) {
                return Real::zero();
            }
        }
    }
    det3(&x1.sub(x0), &x2.sub(x0), &x3.sub(x0))
}

pub fn dot(a: &Vec3, b: &Vec3) -> Real {
    a.dot(b)
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    a.cross(b)
}

pub fn squared_distance(p: &Point3, q: &Point3) -> Real {
    p.sub(q).norm_squared()
}

/// Squared distance from `p` to the line through `a` and `b` (`a != b`).
pub fn squared_distance_to_line(p: &Point3, a: &Point3, b: &Point3) -> Real {
    let e = b.sub(a);
    e.cross(&p.sub(a)).norm_squared().div_nonzero(&e.norm_squared())
}

/// Cosine of the dihedral angle at hinge `p1 p2` between the half-planes
/// containing `p3` and `p4`.
pub fn dihedral_cos(p1: &Point3, p2: &Point3, p3: &Point3, p4: &Point3) -> Result<Real, GeometryError> {
    let e = p2.sub(p1);
    let ee = e.norm_squared();
    let perp = |p: &Point3| {
        let w = p.sub(p1);
        w.scale(&ee).sub(&e.scale(&w.dot(&e)))
    };
    let a = perp(p3);
    let b = perp(p4);
    let aa = a.norm_squared();
    let bb = b.norm_squared();
    if aa.is_zero() || bb.is_zero() {
        return Err(GeometryError::DegenerateFace);
    }
    let den = (&aa * &bb).checked_sqrt().expect("product of squares is nonnegative");
    Ok(a.dot(&b).div_nonzero(&den))
}
