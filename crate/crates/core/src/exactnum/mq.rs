//! Exact normal form for values of a multiquadratic field `Q(sqrt p1, ...,
//! sqrt pn)` over distinct primes.
//!
//! Square roots of distinct squarefree integers are linearly independent over
//! the rationals, so an element has a unique expansion `sum c_S sqrt(prod S)`
//! over subsets `S` of the primes. Arithmetic on the expansion is exact, which
//! lets subexpressions built only from rationals and square roots of
//! rationals be collapsed before anything is evaluated.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{interned_radical, small_primes, ConstructibleReal, Kind, TRIAL_PRIME_LIMIT};

/// Sorted distinct primes.
type Monomial = Vec<BigInt>;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Mq(BTreeMap<Monomial, BigRational>);

impl Mq {
    fn rational(q: BigRational) -> Mq {
        let mut m = BTreeMap::new();
        if !q.is_zero() {
            m.insert(Vec::new(), q);
        }
        Mq(m)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn as_rational(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => self.0.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn insert(&mut self, k: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(k) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn add(&self, o: &Mq) -> Mq {
        let mut out = self.clone();
        for (k, c) in &o.0 {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> Mq {
        Mq(self.0.iter().map(|(k, c)| (k.clone(), -c)).collect())
    }

    fn sub(&self, o: &Mq) -> Mq {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Mq) -> Mq {
        let mut out = Mq(BTreeMap::new());
        for (ka, ca) in &self.0 {
            for (kb, cb) in &o.0 {
                let (k, f) = monomial_product(ka, kb);
                out.insert(k, ca * cb * BigRational::from_integer(f));
            }
        }
        out
    }

    /// Split off the largest prime `g`: `self = a + b sqrt(g)`.
    fn split_largest(&self) -> Option<(BigInt, Mq, Mq)> {
        let g = self.0.keys().filter_map(|k| k.last()).max()?.clone();
        let mut a = Mq(BTreeMap::new());
        let mut b = Mq(BTreeMap::new());
        for (k, c) in &self.0 {
            // monomials are sorted, so g can only be the last prime
            if k.last() == Some(&g) {
                b.insert(k[..k.len() - 1].to_vec(), c.clone());
            } else {
                a.insert(k.clone(), c.clone());
            }
        }
        Some((g, a, b))
    }

    fn inv(&self) -> Option<Mq> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Mq::rational(q.recip()));
        }
        // (a + b sqrt g)^-1 = (a - b sqrt g) / (a^2 - g b^2), the norm lies in
        // the field without sqrt g
        let (g, a, b) = self.split_largest()?;
        let gq = Mq::rational(BigRational::from_integer(g.clone()));
        let norm = a.mul(&a).sub(&gq.mul(&b.mul(&b)));
        let root = Mq(BTreeMap::from([(vec![g], BigRational::one())]));
        let conj = a.sub(&b.mul(&root));
        Some(conj.mul(&norm.inv()?))
    }

    /// Square root of a positive rational, if its radicand factors into
    /// certified primes.
    fn sqrt_of_rational(q: &BigRational) -> Option<Mq> {
        if !q.is_positive() {
            return if q.is_zero() { Some(Mq::rational(BigRational::zero())) } else { None };
        }
        let den = q.denom().clone();
        let mut m = q.numer() * &den;
        let mut coeff = BigInt::one();
        let mut primes = Vec::new();
        for &p in small_primes() {
            let pb = BigInt::from(p);
            if &pb * &pb > m {
                break;
            }
            let mut e = 0u32;
            while m.is_multiple_of(&pb) {
                m /= &pb;
                e += 1;
            }
            for _ in 0..e / 2 {
                coeff *= &pb;
            }
            if e % 2 == 1 {
                primes.push(pb);
            }
        }
        if !m.is_one() {
            // no factor up to the trial limit, so below limit^2 it is prime
            let limit = BigInt::from(TRIAL_PRIME_LIMIT + 1);
            if m >= &limit * &limit {
                return None;
            }
            primes.push(m);
        }
        primes.sort();
        Some(Mq(BTreeMap::from([(primes, BigRational::new(coeff, den))])))
    }

    /// `(sum n_S sqrt S) / D` over a common denominator.
    fn to_real(&self) -> ConstructibleReal {
        if let Some(q) = self.as_rational() {
            return ConstructibleReal::from_rational(q);
        }
        let den = self.0.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut sum: Option<ConstructibleReal> = None;
        for (k, c) in &self.0 {
            let n = ConstructibleReal::from_rational(BigRational::from_integer(
                (c * BigRational::from_integer(den.clone())).to_integer(),
            ));
            let mut term = n;
            for p in k {
                term = term.checked_mul(&interned_radical(p));
            }
            sum = Some(match sum {
                None => term,
                Some(s) => s.checked_add(&term),
            });
        }
        let sum = sum.expect("nonrational element has terms");
        if den.is_one() {
            sum
        } else {
            ConstructibleReal::from_kind(Kind::Div(
                sum,
                ConstructibleReal::from_rational(BigRational::from_integer(den)),
            ))
        }
    }
}

fn monomial_product(a: &[BigInt], b: &[BigInt]) -> (Monomial, BigInt) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut factor = BigInt::one();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j].clone());
            j += 1;
        } else {
            factor *= &a[i];
            i += 1;
            j += 1;
        }
    }
    (out, factor)
}

/// Collapse every maximal multiquadratic subexpression to its normal form.
pub(crate) fn simplify(x: &ConstructibleReal) -> ConstructibleReal {
    walk(x, &mut HashMap::new()).0
}

/// Simplified expression, plus its normal form when it has one.
type Walked = (ConstructibleReal, Option<Arc<Mq>>);

fn walk(x: &ConstructibleReal, memo: &mut HashMap<usize, Walked>) -> Walked {
    let key = Arc::as_ptr(&x.0) as usize;
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let out = walk_uncached(x, memo);
    memo.insert(key, out.clone());
    out
}

fn walk_uncached(x: &ConstructibleReal, memo: &mut HashMap<usize, Walked>) -> Walked {
    let done = |m: Mq| {
        let r = m.to_real();
        // keep the original node (and its cached enclosures) when already canonical
        let r = if r.structurally_equal(x) { x.clone() } else { r };
        (r, Some(Arc::new(m)))
    };
    match x.kind() {
        Kind::Rational(q) => done(Mq::rational(q.clone())),
        Kind::Neg(a) => {
            let (ra, ma) = walk(a, memo);
            match ma {
                Some(m) => done(m.neg()),
                None if ra.ptr_eq(a) => (x.clone(), None),
                None => (ra.neg_ref(), None),
            }
        }
        Kind::Add(a, b) | Kind::Sub(a, b) | Kind::Mul(a, b) | Kind::Div(a, b) => {
            let (ra, ma) = walk(a, memo);
            let (rb, mb) = walk(b, memo);
            if let (Some(ma), Some(mb)) = (&ma, &mb) {
                let m = match x.kind() {
                    Kind::Add(..) => Some(ma.add(mb)),
                    Kind::Sub(..) => Some(ma.sub(mb)),
                    Kind::Mul(..) => Some(ma.mul(mb)),
                    _ => mb.inv().map(|i| ma.mul(&i)),
                };
                if let Some(m) = m {
                    return done(m);
                }
            }
            if ra.ptr_eq(a) && rb.ptr_eq(b) {
                return (x.clone(), None);
            }
            let r = match x.kind() {
                Kind::Add(..) => ra.checked_add(&rb),
                Kind::Sub(..) => ra.checked_sub(&rb),
                Kind::Mul(..) => ra.checked_mul(&rb),
                _ => ConstructibleReal::from_kind(Kind::Div(ra, rb)),
            };
            (r, None)
        }
        Kind::Sqrt(a) => {
            let (ra, ma) = walk(a, memo);
            if let Some(q) = ma.as_ref().and_then(|m| m.as_rational()) {
                if let Some(m) = Mq::sqrt_of_rational(&q) {
                    return done(m);
                }
            }
            if ra.ptr_eq(a) {
                return (x.clone(), None);
            }
            (ConstructibleReal::from_kind(Kind::Sqrt(ra)), None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn simp(s: &str) -> ConstructibleReal {
        simplify(&parse(s).unwrap())
    }

    #[test]
    fn collapses_to_rational() {
        let x = simp("(1+sqrt(2))*(1-sqrt(2))");
        assert_eq!(x.as_rational(), Some(&BigRational::from_integer((-1).into())));
        let y = simp("1/(sqrt(2)+sqrt(3)) - (sqrt(3)-sqrt(2))");
        assert!(y.is_zero() && y.as_rational().is_some());
    }

    #[test]
    fn preserves_value() {
        for s in [
            "(3+sqrt(31))/(2*sqrt(2)) - 11/sqrt(2)",
            "(sqrt(167)+sqrt(2))/(sqrt(31)-5*sqrt(2)) + 7/3",
            "sqrt(2 + sqrt(3)) * (1 + 1/sqrt(3))",
            "sqrt(12) * sqrt(3)",
        ] {
            let x = parse(s).unwrap();
            let y = simplify(&x);
            assert!(x.exactly_equals(&y), "{s}");
        }
        assert_eq!(simp("sqrt(12) * sqrt(3)").as_rational(), Some(&BigRational::from_integer(6.into())));
    }

    #[test]
    fn irrational_radicand_keeps_its_root() {
        let x = simp("sqrt((1+sqrt(2))*(1+sqrt(2)))");
        assert!(matches!(x.kind(), Kind::Sqrt(_)));
        assert!(x.exactly_equals(&parse("1+sqrt(2)").unwrap()));
    }

    #[test]
    fn large_prime_radicand_is_left_alone() {
        // 2^61 - 1 is prime but above the certified range
        let x = simp("sqrt(2305843009213693951) + 1 - 1");
        assert!(x.exactly_equals(&parse("sqrt(2305843009213693951)").unwrap()));
    }
}
