//! Oracles shared by the integration suites. Expressions are evaluated in
//! fixed-point integers and geometry is done over exact rationals; the only
//! library values consumed are sampled flex positions, read off as rationals.

#![allow(dead_code)]

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

// ---------------------------------------------------------------------------
// Expressions and a fixed-point interval evaluator

#[derive(Clone, Debug)]
pub enum Expr {
    Int(i64),
    /// `1 / 10^k`
    Tiny(u32),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
}

use Expr::*;

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

pub fn add(x: Expr, y: Expr) -> Expr {
    Add(b(x), b(y))
}
pub fn sub(x: Expr, y: Expr) -> Expr {
    Sub(b(x), b(y))
}
pub fn mul(x: Expr, y: Expr) -> Expr {
    Mul(b(x), b(y))
}
pub fn div(x: Expr, y: Expr) -> Expr {
    Div(b(x), b(y))
}
pub fn sqrt(x: Expr) -> Expr {
    Sqrt(b(x))
}

impl Expr {
    /// Text in the library's expression grammar.
    pub fn text(&self) -> String {
        match self {
            Int(v) if *v < 0 => format!("({v})"),
            Int(v) => v.to_string(),
            Tiny(k) => format!("(1/1{})", "0".repeat(*k as usize)),
            Add(x, y) => format!("({} + {})", x.text(), y.text()),
            Sub(x, y) => format!("({} - {})", x.text(), y.text()),
            Mul(x, y) => format!("({} * {})", x.text(), y.text()),
            Div(x, y) => format!("({} / {})", x.text(), y.text()),
            Sqrt(x) => format!("sqrt({})", x.text()),
        }
    }
}

/// Closed interval `[lo, hi] / scale`.
#[derive(Clone, Debug)]
pub struct Fixed {
    pub lo: BigInt,
    pub hi: BigInt,
}

pub struct FixedEval {
    pub scale: BigInt,
}

fn div_floor(a: &BigInt, d: &BigInt) -> BigInt {
    a.div_floor(d)
}

fn div_ceil(a: &BigInt, d: &BigInt) -> BigInt {
    -((-a).div_floor(d))
}

impl FixedEval {
    /// Scale `10^digits`.
    pub fn decimal(digits: u32) -> FixedEval {
        FixedEval { scale: BigInt::from(10).pow(digits) }
    }

    /// `None` if a divisor or radicand cannot be certified.
    pub fn eval(&self, e: &Expr) -> Option<Fixed> {
        let s = &self.scale;
        Some(match e {
            Int(v) => {
                let x = BigInt::from(*v) * s;
                Fixed { lo: x.clone(), hi: x }
            }
            Tiny(k) => {
                let d = BigInt::from(10).pow(*k);
                Fixed { lo: div_floor(s, &d), hi: div_ceil(s, &d) }
            }
            Add(x, y) => {
                let (x, y) = (self.eval(x)?, self.eval(y)?);
                Fixed { lo: x.lo + y.lo, hi: x.hi + y.hi }
            }
            Sub(x, y) => {
                let (x, y) = (self.eval(x)?, self.eval(y)?);
                Fixed { lo: x.lo - y.hi, hi: x.hi - y.lo }
            }
            Mul(x, y) => {
                let (x, y) = (self.eval(x)?, self.eval(y)?);
                let p = [&x.lo * &y.lo, &x.lo * &y.hi, &x.hi * &y.lo, &x.hi * &y.hi];
                let lo = p.iter().min().unwrap();
                let hi = p.iter().max().unwrap();
                Fixed { lo: div_floor(lo, s), hi: div_ceil(hi, s) }
            }
            Div(x, y) => {
                let (x, y) = (self.eval(x)?, self.eval(y)?);
                if y.lo.sign() != y.hi.sign() || y.lo.is_zero() {
                    return None;
                }
                let mut lo: Option<BigInt> = None;
                let mut hi: Option<BigInt> = None;
                for n in [&x.lo, &x.hi] {
                    for d in [&y.lo, &y.hi] {
                        let num = n * s;
                        let f = div_floor(&num, d);
                        let c = div_ceil(&num, d);
                        lo = Some(lo.map_or(f.clone(), |l| l.min(f)));
                        hi = Some(hi.map_or(c.clone(), |h| h.max(c)));
                    }
                }
                Fixed { lo: lo.unwrap(), hi: hi.unwrap() }
            }
            Sqrt(x) => {
                let x = self.eval(x)?;
                if x.hi.is_negative() {
                    return None;
                }
                let lo = if x.lo.is_negative() { BigInt::zero() } else { (&x.lo * s).sqrt() };
                let hi = (&x.hi * s).sqrt() + 1;
                Fixed { lo, hi }
            }
        })
    }

    /// Certified sign, or `None` when the enclosure straddles zero.
    pub fn sign(&self, e: &Expr) -> Option<i32> {
        let v = self.eval(e)?;
        if v.lo.is_positive() {
            Some(1)
        } else if v.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }
}

/// A random expression; square roots only of values that are positive by
/// construction.
pub fn random_expr(rng: &mut impl Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..3) {
            0 => Int(rng.gen_range(1..60)),
            1 => sqrt(Int(rng.gen_range(2..60))),
            _ => Int(rng.gen_range(-20..=20)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => add(random_expr(rng, d), random_expr(rng, d)),
        1 => sub(random_expr(rng, d), random_expr(rng, d)),
        2 => mul(random_expr(rng, d), random_expr(rng, d)),
        3 => div(random_expr(rng, d), random_expr(rng, d)),
        4 => {
            let x = random_expr(rng, d);
            sqrt(add(mul(x.clone(), x), Int(rng.gen_range(1..10))))
        }
        _ => sqrt(Int(rng.gen_range(2..200))),
    }
}

/// A random expression with every divisor certified nonzero.
pub fn defined_expr(rng: &mut impl Rng, depth: u32) -> Expr {
    let check = FixedEval::decimal(60);
    loop {
        let e = random_expr(rng, depth);
        if check.eval(&e).is_some() {
            return e;
        }
    }
}

/// An expression equal to zero by an algebraic identity.
pub fn zero_identity(rng: &mut impl Rng) -> Expr {
    let a = rng.gen_range(2..60);
    let mut bb = rng.gen_range(2..60);
    if bb == a {
        bb += 1;
    }
    let x = defined_expr(rng, 2);
    let y = defined_expr(rng, 2);
    let ra = || sqrt(Int(a));
    let rb = || sqrt(Int(bb));
    match rng.gen_range(0..6) {
        0 => sub(mul(add(ra(), rb()), add(ra(), rb())), add(add(Int(a), Int(bb)), mul(Int(2), sqrt(Int(a * bb))))),
        1 => sub(mul(add(x.clone(), y.clone()), sub(x.clone(), y.clone())), sub(mul(x.clone(), x), mul(y.clone(), y))),
        2 => {
            let r = add(mul(x.clone(), x), Int(a));
            sub(mul(sqrt(r.clone()), sqrt(r.clone())), r)
        }
        3 => sub(div(Int(1), add(ra(), rb())), div(sub(ra(), rb()), Int(a - bb))),
        4 => sub(sqrt(Int(a * bb * bb)), mul(Int(bb), ra())),
        // denesting: sqrt(a + b + 2 sqrt(ab)) = sqrt(a) + sqrt(b)
        _ => sub(sqrt(add(Int(a + bb), mul(Int(2), sqrt(Int(a * bb))))), add(ra(), rb())),
    }
}

// ---------------------------------------------------------------------------
// Rational geometry

pub type Q = BigRational;
pub type P3 = [Q; 3];

pub fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

fn vsub(a: &P3, b: &P3) -> P3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn vcross(a: &P3, b: &P3) -> P3 {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

fn vdot(a: &P3, b: &P3) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Q::zero();
    for c in 0..n {
        let minor: Vec<Vec<Q>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][c] * det_cofactor(&minor);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `det [[1, p_i]]` over four points.
pub fn volume_oracle(p: [&P3; 4]) -> Q {
    let m: Vec<Vec<Q>> = p.iter().map(|x| vec![Q::one(), x[0].clone(), x[1].clone(), x[2].clone()]).collect();
    det_cofactor(&m)
}

/// How a segment meets a triangle, found by solving for the plane crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RationalContact {
    /// Neither endpoint in the plane and both on one side.
    SameSide,
    /// An endpoint lies in the plane.
    EndpointInPlane,
    /// The crossing point lies strictly inside the triangle.
    CrossesInterior,
    /// The crossing point lies on the line through a side.
    CrossesOnSideLine,
    /// The crossing point lies strictly outside some side.
    CrossesOutside,
}

pub fn rational_contact(tri: [&P3; 3], seg: [&P3; 2]) -> RationalContact {
    let n = vcross(&vsub(tri[1], tri[0]), &vsub(tri[2], tri[0]));
    let d1 = vdot(&n, &vsub(seg[0], tri[0]));
    let d2 = vdot(&n, &vsub(seg[1], tri[0]));
    if d1.is_zero() || d2.is_zero() {
        return RationalContact::EndpointInPlane;
    }
    if d1.is_positive() == d2.is_positive() {
        return RationalContact::SameSide;
    }
    let t = &d1 / (&d1 - &d2);
    let dir = vsub(seg[1], seg[0]);
    let p: P3 = [&seg[0][0] + &t * &dir[0], &seg[0][1] + &t * &dir[1], &seg[0][2] + &t * &dir[2]];
    // barycentric weights, scaled by |n|^2
    let w: Vec<Q> = (0..3)
        .map(|i| {
            let (a, c) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
            vdot(&n, &vcross(&vsub(a, &p), &vsub(c, &p)))
        })
        .collect();
    if w.iter().any(|x| x.is_zero()) {
        RationalContact::CrossesOnSideLine
    } else if w.iter().any(|x| x.is_negative()) {
        RationalContact::CrossesOutside
    } else {
        RationalContact::CrossesInterior
    }
}

// ---------------------------------------------------------------------------
// Fixed-point dihedral cosines for numerical differentiation

/// Binary fixed point with `bits` fractional bits.
#[derive(Clone, Copy)]
pub struct Bin {
    pub bits: u32,
}

impl Bin {
    pub fn one(&self) -> BigInt {
        BigInt::one() << self.bits
    }

    pub fn encode(&self, x: &Q) -> BigInt {
        (x.numer() << self.bits).div_floor(x.denom())
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }

    pub fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a << self.bits).div_floor(b)
    }

    pub fn sqrt(&self, a: &BigInt) -> BigInt {
        (a << self.bits).sqrt()
    }

    pub fn decode(&self, a: &BigInt) -> Q {
        Q::new(a.clone(), self.one())
    }

    fn sub3(a: &[BigInt; 3], b: &[BigInt; 3]) -> [BigInt; 3] {
        [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
    }

    fn dot3(&self, a: &[BigInt; 3], b: &[BigInt; 3]) -> BigInt {
        (&a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]) >> self.bits
    }

    /// Component of `p - a` orthogonal to the line `a b`.
    fn perp(&self, p: &[BigInt; 3], a: &[BigInt; 3], bpt: &[BigInt; 3]) -> [BigInt; 3] {
        let e = Self::sub3(bpt, a);
        let w = Self::sub3(p, a);
        let t = self.div(&self.dot3(&w, &e), &self.dot3(&e, &e));
        [&w[0] - self.mul(&t, &e[0]), &w[1] - self.mul(&t, &e[1]), &w[2] - self.mul(&t, &e[2])]
    }

    /// Cosine of the angle at hinge `a b` between the half-planes through
    /// `p3` and `p4`.
    pub fn dihedral_cos(&self, a: &[BigInt; 3], bpt: &[BigInt; 3], p3: &[BigInt; 3], p4: &[BigInt; 3]) -> BigInt {
        let u = self.perp(p3, a, bpt);
        let v = self.perp(p4, a, bpt);
        let nu = self.sqrt(&self.dot3(&u, &u));
        let nv = self.sqrt(&self.dot3(&v, &v));
        self.div(&self.dot3(&u, &v), &self.mul(&nu, &nv))
    }

    /// Distance from `p` to the line `a b`.
    pub fn height(&self, p: &[BigInt; 3], a: &[BigInt; 3], bpt: &[BigInt; 3]) -> BigInt {
        let u = self.perp(p, a, bpt);
        self.sqrt(&self.dot3(&u, &u))
    }
}

/// `|a - b| <= tol * |b|` over rationals.
pub fn relative_close(a: &Q, b: &Q, tol: &Q) -> bool {
    (a - b).abs() <= tol * b.abs()
}

pub fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

// ---------------------------------------------------------------------------
// Numerical differentiation along the flex

use flexipoly::flex::{EdgeRate, FlexConfig};
use flexipoly::geometry::Point3;
use flexipoly::mesh::Mesh;

const FRAC_BITS: u32 = 720;

fn fixed_point(bin: &Bin, p: &Point3) -> [BigInt; 3] {
    [&p.x, &p.y, &p.z].map(|c| bin.encode(&c.approx_rational(FRAC_BITS + 16)))
}

/// Samples of the flex at `u = k h` for `k = -2, -1, 1, 2`, `h = 2^-h_bits`.
pub fn stencil_meshes(cfg: &FlexConfig, h_bits: u32) -> Vec<Mesh> {
    let h = Q::new(BigInt::one(), BigInt::one() << h_bits);
    [-2i64, -1, 1, 2].iter().map(|&k| cfg.flex_mesh(&(&h * q(k))).expect("flex exists near zero")).collect()
}

/// `-h3 h4 d(cos)/dt` at `t = 0` from a five-point stencil in `u`, with
/// `dt/du = 3 sqrt(31)` at zero. This equals the first-order indicator when
/// the flex is differentiable.
pub fn numeric_indicator(cfg: &FlexConfig, samples: &[Mesh], h_bits: u32, rate: &EdgeRate) -> Q {
    let bin = Bin { bits: FRAC_BITS };
    let names = [&rate.edge[0], &rate.edge[1], &rate.opposite[0], &rate.opposite[1]];
    let cos_at = |m: &Mesh| {
        let [a, b, p3, p4] = names.map(|n| fixed_point(&bin, m.position_of(n).unwrap()));
        bin.dihedral_cos(&a, &b, &p3, &p4)
    };
    let f: Vec<BigInt> = samples.iter().map(cos_at).collect();
    // f'(0) ~ (f(-2h) - 8 f(-h) + 8 f(h) - f(2h)) / (12 h)
    let num = &f[0] - BigInt::from(8) * &f[1] + BigInt::from(8) * &f[2] - &f[3];
    let dcos_du = bin.decode(&num) * Q::new(BigInt::one() << h_bits, BigInt::from(12));
    let dt_du = bin.decode(&bin.sqrt(&(bin.one() * BigInt::from(279))));
    let base = &cfg.base;
    let [a, b, p3, p4] = names.map(|n| fixed_point(&bin, base.position_of(n).unwrap()));
    let h3 = bin.decode(&bin.height(&p3, &a, &b));
    let h4 = bin.decode(&bin.height(&p4, &a, &b));
    -(h3 * h4 * dcos_du / dt_du)
}

// ---------------------------------------------------------------------------
// Suite drivers: each case is generated from an RNG, judged by an oracle
// above and compared with the library. `Err` carries a description.

use flexipoly::exactnum::{parse, ConstructibleReal as Real};
use flexipoly::geometry::oriented_volume6;
use flexipoly::intersect::{segment_triangle_verdict, Outcome, StudyReason};

/// One sign case: random expression (80%), algebraic zero (10%), or a zero
/// perturbed by `+-10^-k` (10%). `Ok(None)` when the oracle cannot decide.
pub fn sign_case(rng: &mut impl Rng) -> Result<Option<i32>, String> {
    let oracle = FixedEval::decimal(320);
    let roll = rng.gen_range(0..10);
    let (e, want) = if roll < 8 {
        let e = random_expr(rng, 4);
        match oracle.sign(&e) {
            Some(s) => (e, s),
            None => return Ok(None),
        }
    } else if roll == 8 {
        (zero_identity(rng), 0)
    } else {
        let z = zero_identity(rng);
        let k = rng.gen_range(100..300);
        let e = if rng.gen_bool(0.5) { add(z, Tiny(k)) } else { sub(z, Tiny(k)) };
        let s = oracle.sign(&e).ok_or_else(|| format!("oracle undecided on {}", e.text()))?;
        (e, s)
    };
    let got = parse(&e.text()).map_err(|err| format!("{err} on {}", e.text()))?.sign();
    if got == want {
        Ok(Some(got))
    } else {
        Err(format!("sign {got}, oracle {want}: {}", e.text()))
    }
}

fn small_q(rng: &mut impl Rng) -> Q {
    Q::new(rng.gen_range(-12..=12).into(), rng.gen_range(1..=4).into())
}

fn rand_p3(rng: &mut impl Rng) -> P3 {
    [small_q(rng), small_q(rng), small_q(rng)]
}

fn int_p3(rng: &mut impl Rng) -> P3 {
    std::array::from_fn(|_| q(rng.gen_range(-2..=2)))
}

fn to_point(p: &P3) -> Point3 {
    Point3::new(Real::from_rational(p[0].clone()), Real::from_rational(p[1].clone()), Real::from_rational(p[2].clone()))
}

/// A point with coordinates `a + b sqrt(c)`.
fn radical_point(rng: &mut impl Rng) -> Point3 {
    let mut c = || {
        let text = format!("{} + {}*sqrt({})", rng.gen_range(-5..=5), rng.gen_range(-3..=3), rng.gen_range(2..12));
        parse(&text).unwrap()
    };
    Point3::new(c(), c(), c())
}

/// Four-by-four cofactor expansion of `det [[1, p_i]]` in library arithmetic.
fn volume_by_cofactors(p: [&Point3; 4]) -> Real {
    fn det3(m: [[&Real; 3]; 3]) -> Real {
        m[0][0] * &(m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * &(m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * &(m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    let one = Real::one();
    let rows: Vec<[&Real; 4]> = p.iter().map(|x| [&one, &x.x, &x.y, &x.z]).collect();
    let mut acc = Real::zero();
    for c in 0..4 {
        let minor = |r: usize| {
            let cols: Vec<&Real> = (0..4).filter(|&j| j != c).map(|j| rows[r][j]).collect();
            [cols[0], cols[1], cols[2]]
        };
        let term = rows[0][c] * &det3([minor(1), minor(2), minor(3)]);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// One oriented-volume case. Rational points are compared with the rational
/// cofactor oracle; radical points with a cofactor expansion; a quarter of
/// the cases are coplanar by construction. Every case also checks that a
/// transposition negates and an even permutation preserves the value.
pub fn volume_case(rng: &mut impl Rng) -> Result<(), String> {
    let kind = rng.gen_range(0..4);
    let (pts, want): ([Point3; 4], Option<Q>) = match kind {
        0 | 1 => {
            let r = [rand_p3(rng), rand_p3(rng), rand_p3(rng), rand_p3(rng)];
            let v = volume_oracle([&r[0], &r[1], &r[2], &r[3]]);
            ([to_point(&r[0]), to_point(&r[1]), to_point(&r[2]), to_point(&r[3])], Some(v))
        }
        2 => {
            let r = [rand_p3(rng), rand_p3(rng), rand_p3(rng)];
            let (a, b) = (small_q(rng), small_q(rng));
            let d: P3 = std::array::from_fn(|i| &r[0][i] + &a * (&r[1][i] - &r[0][i]) + &b * (&r[2][i] - &r[0][i]));
            ([to_point(&r[0]), to_point(&r[1]), to_point(&r[2]), to_point(&d)], Some(Q::zero()))
        }
        _ => ([radical_point(rng), radical_point(rng), radical_point(rng), radical_point(rng)], None),
    };
    let [a, b, c, d] = &pts;
    let v = oriented_volume6(a, b, c, d);
    let reference = match &want {
        Some(q) => Real::from_rational(q.clone()),
        None => volume_by_cofactors([a, b, c, d]),
    };
    if !v.exactly_equals(&reference) {
        return Err(format!("volume differs from cofactor oracle: {:?} {:?} {:?} {:?}", a, b, c, d));
    }
    if !oriented_volume6(b, a, c, d).exactly_equals(&-&v) || !oriented_volume6(a, b, d, c).exactly_equals(&-&v) {
        return Err("transposition does not negate".into());
    }
    if !oriented_volume6(b, c, a, d).exactly_equals(&v) {
        return Err("even permutation changes the value".into());
    }
    Ok(())
}

/// One segment-triangle case over small rational coordinates, where
/// degenerate configurations are common. A fifth of the cases share a vertex.
/// `Ok(None)` for draws with repeated points, which a mesh cannot produce.
pub fn segment_triangle_case(rng: &mut impl Rng) -> Result<Option<Outcome>, String> {
    let tri = [int_p3(rng), int_p3(rng), int_p3(rng)];
    let shared = rng.gen_range(0..5) == 0;
    let seg = if shared { [tri[0].clone(), int_p3(rng)] } else { [int_p3(rng), int_p3(rng)] };
    if seg[0] == seg[1] || tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
        return Ok(None);
    }
    if tri.iter().filter(|t| seg.contains(t)).count() != usize::from(shared) {
        return Ok(None);
    }
    let tp: Vec<Point3> = tri.iter().map(to_point).collect();
    let sp: Vec<Point3> =
        if shared { vec![tp[0].clone(), to_point(&seg[1])] } else { seg.iter().map(to_point).collect() };
    let got = segment_triangle_verdict([&tp[0], &tp[1], &tp[2]], [&sp[0], &sp[1]], usize::from(shared));
    let want = if shared {
        let n = vcross(&vsub(&tri[1], &tri[0]), &vsub(&tri[2], &tri[0]));
        if vdot(&n, &vsub(&seg[1], &tri[0])).is_zero() {
            Outcome::NeedsStudy(StudyReason::CoplanarIncident)
        } else {
            Outcome::Disjoint
        }
    } else {
        match rational_contact([&tri[0], &tri[1], &tri[2]], [&seg[0], &seg[1]]) {
            RationalContact::SameSide | RationalContact::CrossesOutside => Outcome::Disjoint,
            RationalContact::CrossesInterior => Outcome::Intersects,
            RationalContact::EndpointInPlane => Outcome::NeedsStudy(StudyReason::ZeroPlaneDet),
            RationalContact::CrossesOnSideLine => Outcome::NeedsStudy(StudyReason::ZeroLinkDet),
        }
    };
    if got == want {
        Ok(Some(got))
    } else {
        Err(format!("verdict {got:?}, oracle {want:?}: tri {tri:?} seg {seg:?}"))
    }
}
