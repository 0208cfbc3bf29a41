//! Exact real numbers built from rationals with `+ - * /` and square roots.
//!
//! A [`ConstructibleReal`] is an immutable expression DAG. Signs are decided by
//! refining interval enclosures until either the enclosure excludes zero or it
//! fits inside the root separation bound of the expression, in which case the
//! value is exactly zero.

pub mod dyadic;
mod format;
pub mod interval;
mod mq;
mod parse;

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::ops;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use parking_lot::{Mutex, RwLock};

use self::dyadic::Dyadic;
use self::interval::Interval;

pub use self::parse::parse;

/// Environment variable capping the working precision (bits) of sign refinement.
pub const MAX_BITS_ENV: &str = "FLEXIPOLY_MAX_BITS";

const START_BITS: u32 = 64;
const JUMP_BITS: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative number")]
    NegativeRadicand,
}

#[derive(Clone)]
pub struct ConstructibleReal(Arc<Node>);

pub(crate) enum Kind {
    Rational(BigRational),
    Neg(ConstructibleReal),
    Add(ConstructibleReal, ConstructibleReal),
    Sub(ConstructibleReal, ConstructibleReal),
    Mul(ConstructibleReal, ConstructibleReal),
    Div(ConstructibleReal, ConstructibleReal),
    Sqrt(ConstructibleReal),
}

pub(crate) struct Node {
    kind: Kind,
    fingerprint: u64,
    // log2 upper bounds for the numerator / denominator measures of the
    // division-free form of the expression
    log_u: f64,
    log_l: f64,
    sign: OnceLock<i32>,
    cache: RwLock<Option<(u32, Interval)>>,
}

fn max_bits() -> Option<u32> {
    static CAP: OnceLock<Option<u32>> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(MAX_BITS_ENV).ok().and_then(|v| v.trim().parse::<u32>().ok()).filter(|&b| b >= START_BITS)
    })
}

fn log2_up(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1 {
        return 0.0;
    }
    if bits <= 60 {
        let v = x.to_u64().unwrap() as f64;
        return (v.log2() + 1e-9).min(bits as f64);
    }
    let top = (x >> (bits - 60)).to_u64().unwrap() as f64 + 1.0;
    top.log2() + (bits - 60) as f64 + 1e-9
}

fn inflate(v: f64) -> f64 {
    v + v.abs() * 1e-12 + 1e-12
}

fn hash_of<T: Hash>(v: T) -> u64 {
    let mut h = DefaultHasher::new();
    v.hash(&mut h);
    h.finish()
}

impl ConstructibleReal {
    fn from_kind(kind: Kind) -> ConstructibleReal {
        let (fingerprint, log_u, log_l) = match &kind {
            Kind::Rational(q) => {
                let fp = hash_of((0u8, q.numer().to_signed_bytes_le(), q.denom().to_signed_bytes_le()));
                (fp, log2_up(q.numer().magnitude()), log2_up(q.denom().magnitude()))
            }
            Kind::Neg(x) => (hash_of((1u8, x.0.fingerprint)), x.0.log_u, x.0.log_l),
            Kind::Add(a, b) | Kind::Sub(a, b) => {
                let tag = if matches!(kind, Kind::Add(..)) { 2u8 } else { 3u8 };
                let s1 = a.0.log_u + b.0.log_l;
                let s2 = a.0.log_l + b.0.log_u;
                let (hi, lo) = if s1 >= s2 { (s1, s2) } else { (s2, s1) };
                let lu = hi + (1.0 + (lo - hi).exp2()).log2();
                (hash_of((tag, a.0.fingerprint, b.0.fingerprint)), inflate(lu), inflate(a.0.log_l + b.0.log_l))
            }
            Kind::Mul(a, b) => (
                hash_of((4u8, a.0.fingerprint, b.0.fingerprint)),
                inflate(a.0.log_u + b.0.log_u),
                inflate(a.0.log_l + b.0.log_l),
            ),
            Kind::Div(a, b) => (
                hash_of((5u8, a.0.fingerprint, b.0.fingerprint)),
                inflate(a.0.log_u + b.0.log_l),
                inflate(a.0.log_l + b.0.log_u),
            ),
            Kind::Sqrt(x) => {
                let (u, l) = (x.0.log_u, x.0.log_l);
                let mid = inflate((u + l) / 2.0);
                let (lu, ll) = if u >= l { (mid, l) } else { (u, mid) };
                (hash_of((6u8, x.0.fingerprint)), lu, ll)
            }
        };
        ConstructibleReal(Arc::new(Node {
            kind,
            fingerprint,
            log_u: log_u.max(0.0),
            log_l: log_l.max(0.0),
            sign: OnceLock::new(),
            cache: RwLock::new(None),
        }))
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn from_rational(q: BigRational) -> ConstructibleReal {
        ConstructibleReal::from_kind(Kind::Rational(q))
    }

    pub fn from_int(v: i64) -> ConstructibleReal {
        ConstructibleReal::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(n: i64, d: i64) -> ConstructibleReal {
        ConstructibleReal::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> ConstructibleReal {
        ConstructibleReal::from_int(0)
    }

    pub fn one() -> ConstructibleReal {
        ConstructibleReal::from_int(1)
    }

    /// The rational value, when this node is a rational leaf.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0.kind {
            Kind::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn ptr_eq(&self, other: &ConstructibleReal) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn is_rational_zero(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_zero())
    }

    fn is_rational_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// Same expression tree, ignoring sharing.
    pub fn structurally_equal(&self, other: &ConstructibleReal) -> bool {
        struct_eq(self, other, &mut HashSet::new())
    }

    pub fn checked_add(&self, o: &ConstructibleReal) -> ConstructibleReal {
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return ConstructibleReal::from_rational(a + b);
        }
        if self.is_rational_zero() {
            return o.clone();
        }
        if o.is_rational_zero() {
            return self.clone();
        }
        ConstructibleReal::from_kind(Kind::Add(self.clone(), o.clone()))
    }

    pub fn checked_sub(&self, o: &ConstructibleReal) -> ConstructibleReal {
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return ConstructibleReal::from_rational(a - b);
        }
        if o.is_rational_zero() {
            return self.clone();
        }
        if self.is_rational_zero() {
            return o.neg_ref();
        }
        if self.ptr_eq(o) || (self.0.fingerprint == o.0.fingerprint && self.structurally_equal(o)) {
            return ConstructibleReal::zero();
        }
        ConstructibleReal::from_kind(Kind::Sub(self.clone(), o.clone()))
    }

    pub fn checked_mul(&self, o: &ConstructibleReal) -> ConstructibleReal {
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return ConstructibleReal::from_rational(a * b);
        }
        if self.is_rational_zero() || o.is_rational_zero() {
            return ConstructibleReal::zero();
        }
        if self.is_rational_one() {
            return o.clone();
        }
        if o.is_rational_one() {
            return self.clone();
        }
        if self.as_rational().is_some_and(|q| (-q).is_one()) {
            return o.neg_ref();
        }
        if o.as_rational().is_some_and(|q| (-q).is_one()) {
            return self.neg_ref();
        }
        if self.ptr_eq(o) {
            if let Kind::Sqrt(r) = &self.0.kind {
                if r.as_rational().is_some() {
                    return r.clone();
                }
            }
        }
        ConstructibleReal::from_kind(Kind::Mul(self.clone(), o.clone()))
    }

    pub fn neg_ref(&self) -> ConstructibleReal {
        match &self.0.kind {
            Kind::Rational(q) => ConstructibleReal::from_rational(-q),
            Kind::Neg(x) => x.clone(),
            _ => ConstructibleReal::from_kind(Kind::Neg(self.clone())),
        }
    }

    pub fn checked_div(&self, o: &ConstructibleReal) -> Result<ConstructibleReal, ExactError> {
        if o.sign() == 0 {
            return Err(ExactError::DivisionByZero);
        }
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return Ok(ConstructibleReal::from_rational(a / b));
        }
        if self.is_rational_zero() {
            return Ok(ConstructibleReal::zero());
        }
        if o.is_rational_one() {
            return Ok(self.clone());
        }
        if self.ptr_eq(o) {
            return Ok(ConstructibleReal::one());
        }
        Ok(ConstructibleReal::from_kind(Kind::Div(self.clone(), o.clone())))
    }

    pub fn checked_sqrt(&self) -> Result<ConstructibleReal, ExactError> {
        match self.sign() {
            s if s < 0 => Err(ExactError::NegativeRadicand),
            0 => Ok(ConstructibleReal::zero()),
            _ => Ok(match self.as_rational() {
                Some(q) => sqrt_rational(q),
                None => ConstructibleReal::from_kind(Kind::Sqrt(self.clone())),
            }),
        }
    }

    /// Same value with every subexpression that lies in a multiquadratic
    /// field over distinct primes rewritten in its exact normal form.
    pub fn simplify(&self) -> ConstructibleReal {
        mq::simplify(self)
    }

    /// Division by a value the caller knows to be nonzero.
    pub fn div_nonzero(&self, o: &ConstructibleReal) -> ConstructibleReal {
        self.checked_div(o).expect("division by a value certified nonzero")
    }

    pub fn square(&self) -> ConstructibleReal {
        self.checked_mul(self)
    }

    /// Exact sign: -1, 0 or 1.
    pub fn sign(&self) -> i32 {
        if let Some(&s) = self.0.sign.get() {
            return s;
        }
        let s = match &self.0.kind {
            Kind::Rational(q) => {
                if q.is_zero() {
                    0
                } else if q.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Kind::Neg(x) => -x.sign(),
            Kind::Mul(a, b) | Kind::Div(a, b) => {
                let sa = a.sign();
                if sa == 0 {
                    0
                } else {
                    sa * b.sign()
                }
            }
            // radicands are certified positive at construction
            Kind::Sqrt(_) => 1,
            Kind::Add(..) | Kind::Sub(..) => self.sign_by_refinement(),
        };
        let _ = self.0.sign.set(s);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    pub fn cmp_exact(&self, other: &ConstructibleReal) -> std::cmp::Ordering {
        self.checked_sub(other).sign().cmp(&0)
    }

    pub fn exactly_equals(&self, other: &ConstructibleReal) -> bool {
        self.checked_sub(other).sign() == 0
    }

    fn sign_by_refinement(&self) -> i32 {
        let cap = max_bits();
        let mut bound: Option<i64> = None;
        let mut prec = START_BITS;
        loop {
            if let Some(iv) = self.eval(prec) {
                if let Some(s) = iv.strict_sign() {
                    return s;
                }
                let b = *bound.get_or_insert_with(|| self.separation_bits());
                if iv.within_pow2(-b) {
                    return 0;
                }
            }
            let mut next = prec.saturating_mul(2);
            // past a few thousand bits an unresolved sign is most likely a zero:
            // go straight to the separation bound instead of doubling towards it
            if let Some(b) = bound {
                if next > JUMP_BITS {
                    let target = b.saturating_add(b / 16).saturating_add(64).min(u32::MAX as i64 / 2) as u32;
                    next = next.max(target);
                }
            }
            if let Some(c) = cap {
                if prec >= c {
                    return 0;
                }
                next = next.min(c);
            }
            prec = next;
        }
    }

    /// `t` such that a nonzero value of this expression has magnitude at least `2^-t`.
    pub fn separation_bits(&self) -> i64 {
        let k = self.distinct_radicals() as i32;
        let d_minus_one = if k >= 1000 { f64::MAX } else { 2f64.powi(k) - 1.0 };
        let t = d_minus_one * self.0.log_u + self.0.log_l;
        if !t.is_finite() || t > 1e15 {
            return i64::MAX / 4;
        }
        (t * (1.0 + 1e-9)).ceil() as i64 + 2
    }

    /// Number of structurally distinct square-root nodes in the DAG.
    pub fn distinct_radicals(&self) -> usize {
        let mut seen: HashSet<*const Node> = HashSet::new();
        let mut stack = vec![self.clone()];
        let mut groups: HashMap<u64, Vec<ConstructibleReal>> = HashMap::new();
        let mut memo = HashSet::new();
        let mut count = 0;
        while let Some(n) = stack.pop() {
            if !seen.insert(Arc::as_ptr(&n.0)) {
                continue;
            }
            match &n.0.kind {
                Kind::Rational(_) => {}
                Kind::Neg(x) => stack.push(x.clone()),
                Kind::Add(a, b) | Kind::Sub(a, b) | Kind::Mul(a, b) | Kind::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Kind::Sqrt(x) => {
                    stack.push(x.clone());
                    let group = groups.entry(n.0.fingerprint).or_default();
                    if !group.iter().any(|g| struct_eq(g, &n, &mut memo)) {
                        group.push(n.clone());
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Enclosure at working precision `prec`; `None` if a divisor enclosure
    /// still contains zero at this precision.
    pub fn eval(&self, prec: u32) -> Option<Interval> {
        if let Some((p, iv)) = &*self.0.cache.read() {
            if *p >= prec {
                // a much finer cached enclosure would make every parent op pay for its size
                return Some(if *p > prec { iv.round_outward(prec + 8) } else { iv.clone() });
            }
        }
        let iv = match &self.0.kind {
            Kind::Rational(q) => Interval::from_rational(q, prec),
            Kind::Neg(x) => x.eval(prec)?.neg(),
            Kind::Add(a, b) => a.eval(prec)?.add(&b.eval(prec)?, prec),
            Kind::Sub(a, b) => a.eval(prec)?.sub(&b.eval(prec)?, prec),
            Kind::Mul(a, b) => {
                if a.ptr_eq(b) {
                    a.eval(prec)?.square(prec)
                } else {
                    a.eval(prec)?.mul(&b.eval(prec)?, prec)
                }
            }
            Kind::Div(a, b) => a.eval(prec)?.div(&b.eval(prec)?, prec)?,
            Kind::Sqrt(x) => x.eval(prec)?.sqrt(prec),
        };
        let mut slot = self.0.cache.write();
        let merged = match &*slot {
            Some((p, old)) => (prec.max(*p), old.intersect(&iv)),
            None => (prec, iv),
        };
        let out = merged.1.clone();
        *slot = Some(merged);
        Some(out)
    }

    /// Best enclosure computed so far, with its precision.
    pub fn cached_enclosure(&self) -> Option<(u32, Interval)> {
        self.0.cache.read().clone()
    }

    /// Enclosure of width below `2^-abs_bits`.
    pub fn enclosure(&self, abs_bits: u32) -> Interval {
        let target = Dyadic::new(BigInt::one(), -(abs_bits as i64));
        let mut prec = START_BITS.max(abs_bits + 16);
        loop {
            if let Some(iv) = self.eval(prec) {
                if iv.width() <= target {
                    return iv;
                }
            }
            prec = prec.saturating_mul(2);
        }
    }

    /// Rational within `2^-abs_bits` of the value.
    pub fn approx_rational(&self, abs_bits: u32) -> BigRational {
        self.enclosure(abs_bits).midpoint()
    }

    pub fn to_f64(&self) -> f64 {
        let mut prec = START_BITS;
        loop {
            if let Some(iv) = self.eval(prec) {
                let lo = iv.lo.to_f64();
                let hi = iv.hi.to_f64();
                if (hi - lo).abs() <= 1e-12 * hi.abs().max(lo.abs()).max(1e-300) || prec >= 4096 {
                    return (lo + hi) / 2.0;
                }
            }
            prec *= 2;
        }
    }

    /// Decimal expansion truncated toward zero to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format::to_decimal(self, digits)
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        let mut seen: HashSet<*const Node> = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(n) = stack.pop() {
            if !seen.insert(Arc::as_ptr(&n.0)) {
                continue;
            }
            match &n.0.kind {
                Kind::Rational(_) => {}
                Kind::Neg(x) | Kind::Sqrt(x) => stack.push(x.clone()),
                Kind::Add(a, b) | Kind::Sub(a, b) | Kind::Mul(a, b) | Kind::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
            }
        }
        seen.len()
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        self.0.fingerprint
    }
}

fn struct_eq(a: &ConstructibleReal, b: &ConstructibleReal, memo: &mut HashSet<(usize, usize)>) -> bool {
    if a.ptr_eq(b) {
        return true;
    }
    if a.0.fingerprint != b.0.fingerprint {
        return false;
    }
    let key = (Arc::as_ptr(&a.0) as usize, Arc::as_ptr(&b.0) as usize);
    if memo.contains(&key) {
        return true;
    }
    let eq = match (&a.0.kind, &b.0.kind) {
        (Kind::Rational(x), Kind::Rational(y)) => x == y,
        (Kind::Neg(x), Kind::Neg(y)) | (Kind::Sqrt(x), Kind::Sqrt(y)) => struct_eq(x, y, memo),
        (Kind::Add(x1, x2), Kind::Add(y1, y2))
        | (Kind::Sub(x1, x2), Kind::Sub(y1, y2))
        | (Kind::Mul(x1, x2), Kind::Mul(y1, y2))
        | (Kind::Div(x1, x2), Kind::Div(y1, y2)) => struct_eq(x1, y1, memo) && struct_eq(x2, y2, memo),
        _ => false,
    };
    if eq {
        memo.insert(key);
    }
    eq
}

const TRIAL_PRIME_LIMIT: u64 = 4096;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_PRIME_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if sieve[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        out
    })
}

/// Interned `sqrt(m)` for a positive integer `m` that is not a perfect square.
fn interned_radical(m: &BigInt) -> ConstructibleReal {
    static TABLE: OnceLock<Mutex<HashMap<BigInt, ConstructibleReal>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut t = table.lock();
    t.entry(m.clone())
        .or_insert_with(|| {
            ConstructibleReal::from_kind(Kind::Sqrt(ConstructibleReal::from_rational(BigRational::from_integer(
                m.clone(),
            ))))
        })
        .clone()
}

/// `sqrt(q)` for positive rational `q`, as `c * sqrt(p1) * ... * sqrt(r)`
/// over small primes `p_i` and a leftover cofactor `r`.
fn sqrt_rational(q: &BigRational) -> ConstructibleReal {
    let den = q.denom().clone();
    let mut m = q.numer() * &den;
    let mut coeff = BigInt::one();
    let mut radicals: Vec<BigInt> = Vec::new();
    for &p in small_primes() {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0u32;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        for _ in 0..e / 2 {
            coeff *= &pb;
        }
        if e % 2 == 1 {
            radicals.push(pb);
        }
    }
    if !m.is_one() {
        let r = m.sqrt();
        if &r * &r == m {
            coeff *= r;
        } else {
            radicals.push(m);
        }
    }
    radicals.sort();
    let mut out = ConstructibleReal::from_rational(BigRational::new(coeff, den));
    let mut prod: Option<ConstructibleReal> = None;
    for r in &radicals {
        let s = interned_radical(r);
        prod = Some(match prod {
            None => s,
            Some(p) => p.checked_mul(&s),
        });
    }
    if let Some(p) = prod {
        out = out.checked_mul(&p);
    }
    out
}

impl std::fmt::Debug for ConstructibleReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (~{})", self, self.to_decimal(6))
    }
}

impl std::fmt::Display for ConstructibleReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format::to_expr_string(self))
    }
}

impl From<i64> for ConstructibleReal {
    fn from(v: i64) -> Self {
        ConstructibleReal::from_int(v)
    }
}

impl From<BigRational> for ConstructibleReal {
    fn from(q: BigRational) -> Self {
        ConstructibleReal::from_rational(q)
    }
}

impl std::str::FromStr for ConstructibleReal {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl ops::$tr<&ConstructibleReal> for &ConstructibleReal {
            type Output = ConstructibleReal;
            fn $m(self, o: &ConstructibleReal) -> ConstructibleReal {
                self.$f(o)
            }
        }
        impl ops::$tr<ConstructibleReal> for ConstructibleReal {
            type Output = ConstructibleReal;
            fn $m(self, o: ConstructibleReal) -> ConstructibleReal {
                self.$f(&o)
            }
        }
        impl ops::$tr<&ConstructibleReal> for ConstructibleReal {
            type Output = ConstructibleReal;
            fn $m(self, o: &ConstructibleReal) -> ConstructibleReal {
                self.$f(o)
            }
        }
        impl ops::$tr<ConstructibleReal> for &ConstructibleReal {
            type Output = ConstructibleReal;
            fn $m(self, o: ConstructibleReal) -> ConstructibleReal {
                self.$f(&o)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl ops::Neg for &ConstructibleReal {
    type Output = ConstructibleReal;
    fn neg(self) -> ConstructibleReal {
        self.neg_ref()
    }
}

impl ops::Neg for ConstructibleReal {
    type Output = ConstructibleReal;
    fn neg(self) -> ConstructibleReal {
        self.neg_ref()
    }
}
