//! Closed intervals with dyadic endpoints and outward rounding.

use num_rational::BigRational;

use super::dyadic::{Dyadic, Round};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn point(d: Dyadic) -> Interval {
        Interval { lo: d.clone(), hi: d }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Interval {
        Interval { lo: Dyadic::from_rational(q, prec, Round::Down), hi: Dyadic::from_rational(q, prec, Round::Up) }
    }

    /// Widen to endpoints of at most `prec` significant bits.
    pub fn round_outward(&self, prec: u32) -> Interval {
        Interval { lo: self.lo.round(prec, Round::Down), hi: self.hi.round(prec, Round::Up) }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    /// Sign of every point of the interval, if they agree and are nonzero.
    pub fn strict_sign(&self) -> Option<i32> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else {
            None
        }
    }

    /// Whether the interval lies inside the open interval `(-2^t, 2^t)`.
    pub fn within_pow2(&self, t: i64) -> bool {
        self.lo.top() <= t && self.hi.top() <= t
    }

    /// Upper bound on `hi - lo`; the difference is taken exactly, since
    /// rounding the endpoints first would swamp a narrow interval.
    pub fn width(&self) -> Dyadic {
        self.hi.add_exact(&self.lo.neg()).round(64, Round::Up)
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Interval { lo: self.lo.add_round(&o.lo, prec, Round::Down), hi: self.hi.add_round(&o.hi, prec, Round::Up) }
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        let (a, b) = (self, o);
        let a_nonneg = a.lo.signum() >= 0;
        let a_nonpos = a.hi.signum() <= 0;
        let b_nonneg = b.lo.signum() >= 0;
        let b_nonpos = b.hi.signum() <= 0;
        let pair = |x: &Dyadic, y: &Dyadic, u: &Dyadic, v: &Dyadic| Interval {
            lo: x.mul_round(y, prec, Round::Down),
            hi: u.mul_round(v, prec, Round::Up),
        };
        if a_nonneg && b_nonneg {
            pair(&a.lo, &b.lo, &a.hi, &b.hi)
        } else if a_nonpos && b_nonpos {
            pair(&a.hi, &b.hi, &a.lo, &b.lo)
        } else if a_nonneg && b_nonpos {
            pair(&a.hi, &b.lo, &a.lo, &b.hi)
        } else if a_nonpos && b_nonneg {
            pair(&a.lo, &b.hi, &a.hi, &b.lo)
        } else {
            let cands = [(&a.lo, &b.lo), (&a.lo, &b.hi), (&a.hi, &b.lo), (&a.hi, &b.hi)];
            let lo = cands.iter().map(|(x, y)| x.mul_round(y, prec, Round::Down)).min().unwrap();
            let hi = cands.iter().map(|(x, y)| x.mul_round(y, prec, Round::Up)).max().unwrap();
            Interval { lo, hi }
        }
    }

    pub fn square(&self, prec: u32) -> Interval {
        let (small, large) = if self.lo.abs() <= self.hi.abs() {
            (self.lo.abs(), self.hi.abs())
        } else {
            (self.hi.abs(), self.lo.abs())
        };
        let lo = if self.contains_zero() { Dyadic::zero() } else { small.mul_round(&small, prec, Round::Down) };
        Interval { lo, hi: large.mul_round(&large, prec, Round::Up) }
    }

    /// `None` when the divisor interval contains zero.
    pub fn div(&self, o: &Interval, prec: u32) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let (a, b) = (self, o);
        let pair = |x: &Dyadic, y: &Dyadic, u: &Dyadic, v: &Dyadic| Interval {
            lo: x.div_round(y, prec, Round::Down),
            hi: u.div_round(v, prec, Round::Up),
        };
        let r = if b.lo.signum() > 0 {
            if a.lo.signum() >= 0 {
                pair(&a.lo, &b.hi, &a.hi, &b.lo)
            } else if a.hi.signum() <= 0 {
                pair(&a.lo, &b.lo, &a.hi, &b.hi)
            } else {
                pair(&a.lo, &b.lo, &a.hi, &b.lo)
            }
        } else if a.lo.signum() >= 0 {
            pair(&a.hi, &b.hi, &a.lo, &b.lo)
        } else if a.hi.signum() <= 0 {
            pair(&a.hi, &b.lo, &a.lo, &b.hi)
        } else {
            pair(&a.hi, &b.hi, &a.lo, &b.hi)
        };
        Some(r)
    }

    /// Square root, clamping a slightly negative lower end to zero.
    pub fn sqrt(&self, prec: u32) -> Interval {
        let lo = if self.lo.signum() <= 0 { Dyadic::zero() } else { self.lo.sqrt_round(prec, Round::Down) };
        let hi = if self.hi.signum() <= 0 { Dyadic::zero() } else { self.hi.sqrt_round(prec, Round::Up) };
        Interval { lo, hi }
    }

    pub fn intersect(&self, o: &Interval) -> Interval {
        let lo = if self.lo >= o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi <= o.hi { self.hi.clone() } else { o.hi.clone() };
        debug_assert!(lo <= hi, "disjoint enclosures of one value");
        Interval { lo, hi }
    }

    pub fn midpoint(&self) -> BigRational {
        (self.lo.to_rational() + self.hi.to_rational()) / BigRational::from_integer(2.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn iv(a: i64, b: i64) -> Interval {
        Interval { lo: Dyadic::from_int(a), hi: Dyadic::from_int(b) }
    }

    fn contains(i: &Interval, v: &BigRational) -> bool {
        &i.lo.to_rational() <= v && v <= &i.hi.to_rational()
    }

    #[test]
    fn width_of_a_narrow_interval_is_not_swamped() {
        // [1, 1 + 2^-300]
        let lo = Dyadic::from_int(1);
        let hi = Dyadic::new((BigInt::from(1) << 300u32) + 1, -300);
        let w = Interval { lo, hi }.width();
        assert_eq!(w.to_rational(), BigRational::new(1.into(), BigInt::from(1) << 300u32));
    }

    #[test]
    fn mul_all_sign_cases() {
        let samples = [-3i64, -1, 0, 2, 5];
        for &a0 in &samples {
            for &a1 in &samples {
                for &b0 in &samples {
                    for &b1 in &samples {
                        if a0 > a1 || b0 > b1 {
                            continue;
                        }
                        let p = iv(a0, a1).mul(&iv(b0, b1), 32);
                        for x in [a0, a1] {
                            for y in [b0, b1] {
                                let v = BigRational::from_integer(BigInt::from(x * y));
                                assert!(contains(&p, &v));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn div_all_sign_cases() {
        for (a0, a1) in [(-3, -1), (-2, 4), (1, 6)] {
            for (b0, b1) in [(-5, -2), (3, 7)] {
                let d = iv(a0, a1).div(&iv(b0, b1), 40).unwrap();
                for x in [a0, a1] {
                    for y in [b0, b1] {
                        let v = BigRational::new(BigInt::from(x), BigInt::from(y));
                        assert!(contains(&d, &v));
                    }
                }
            }
        }
        assert!(iv(1, 2).div(&iv(-1, 1), 40).is_none());
    }

    #[test]
    fn square_is_tighter_than_mul() {
        let s = iv(-2, 3).square(32);
        assert_eq!(s.lo, Dyadic::zero());
        assert_eq!(s.hi, Dyadic::from_int(9));
    }
}
