//! Dyadic numbers `m * 2^e` with directed rounding to a mantissa width.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `floor(m / 2^k)` or `ceil(m / 2^k)`.
fn shr_round(m: &BigInt, k: u64, dir: Round) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    match dir {
        // Shr on a negative BigInt rounds toward negative infinity.
        Round::Down => m >> k,
        Round::Up => -((-m) >> k),
    }
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant, exp }
    }

    pub fn from_int(v: i64) -> Dyadic {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Smallest `t` with `|self| < 2^t`; `i64::MIN` for zero.
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        Dyadic::new(shr_round(&self.mant, k, dir), self.exp + k as i64)
    }

    /// Round onto the grid `2^min_exp` when finer than it.
    fn coarsen(&self, min_exp: i64, dir: Round) -> Dyadic {
        if self.exp >= min_exp || self.is_zero() {
            return self.clone();
        }
        let k = (min_exp - self.exp) as u64;
        Dyadic::new(shr_round(&self.mant, k, dir), min_exp)
    }

    pub(crate) fn add_exact(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn add_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let floor_exp = self.top().max(other.top()) - prec as i64 - 4;
        let a = self.coarsen(floor_exp, dir);
        let b = other.coarsen(floor_exp, dir);
        a.add_exact(&b).round(prec, dir)
    }

    pub fn mul_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp).round(prec, dir)
    }

    /// `self / other`; `other` must be nonzero.
    pub fn div_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64;
        let s = want.max(0) as u64;
        let num = &self.mant << s;
        let (num, den) = if other.mant.is_negative() { (-num, -&other.mant) } else { (num, other.mant.clone()) };
        let q = match dir {
            Round::Down => num.div_floor(&den),
            Round::Up => -((-num).div_floor(&den)),
        };
        Dyadic::new(q, self.exp - other.exp - s as i64).round(prec, dir)
    }

    /// Square root of a nonnegative dyadic.
    pub fn sqrt_round(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.mant.is_negative(), "dyadic sqrt of a negative value");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * prec as i64 + 2 - self.mant.bits() as i64;
        let mut s = want.max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m = &self.mant << s as u64;
        let mut r = m.sqrt();
        if dir == Round::Up && &r * &r < m {
            r += 1;
        }
        Dyadic::new(r, (self.exp - s) / 2).round(prec, dir)
    }

    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Dyadic {
        let num = Dyadic::new(q.numer().clone(), 0);
        if q.denom().is_one() {
            return num.round(prec, dir);
        }
        let den = Dyadic::new(q.denom().clone(), 0);
        num.div_round(&den, prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, Round::Down);
        let m: f64 = r.mant.to_string().parse().unwrap_or(0.0);
        let e = r.exp.clamp(-2000, 2000) as i32;
        m * 2f64.powi(e)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            let mag = ta.cmp(&tb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}
