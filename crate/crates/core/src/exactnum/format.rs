//! Expression strings and truncated decimal expansions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ConstructibleReal, Kind};

// binding strength of a printed node; higher binds tighter
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const SIGNED: u8 = 3;
const ATOM: u8 = 4;

fn level(x: &ConstructibleReal) -> u8 {
    match x.kind() {
        Kind::Add(..) | Kind::Sub(..) => SUM,
        Kind::Mul(..) | Kind::Div(..) => PRODUCT,
        Kind::Neg(_) => SIGNED,
        Kind::Sqrt(_) => ATOM,
        Kind::Rational(q) => {
            if !q.denom().is_one() {
                PRODUCT
            } else if q.is_negative() {
                SIGNED
            } else {
                ATOM
            }
        }
    }
}

fn write(x: &ConstructibleReal, need: u8, out: &mut String) {
    if level(x) < need {
        out.push('(');
        write(x, SUM, out);
        out.push(')');
        return;
    }
    match x.kind() {
        Kind::Rational(q) => {
            out.push_str(&q.numer().to_string());
            if !q.denom().is_one() {
                out.push('/');
                out.push_str(&q.denom().to_string());
            }
        }
        Kind::Neg(a) => {
            out.push('-');
            write(a, ATOM, out);
        }
        Kind::Add(a, b) | Kind::Sub(a, b) => {
            write(a, SUM, out);
            out.push_str(if matches!(x.kind(), Kind::Add(..)) { " + " } else { " - " });
            write(b, PRODUCT, out);
        }
        Kind::Mul(a, b) | Kind::Div(a, b) => {
            write(a, PRODUCT, out);
            out.push(if matches!(x.kind(), Kind::Mul(..)) { '*' } else { '/' });
            write(b, SIGNED, out);
        }
        Kind::Sqrt(a) => {
            out.push_str("sqrt(");
            write(a, SUM, out);
            out.push(')');
        }
    }
}

/// Render in the grammar accepted by [`super::parse`].
pub(crate) fn to_expr_string(x: &ConstructibleReal) -> String {
    let mut out = String::new();
    write(x, SUM, &mut out);
    out
}

pub(crate) fn to_decimal(x: &ConstructibleReal, digits: usize) -> String {
    let sign = x.sign();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let t = if sign == 0 { BigInt::zero() } else { truncated_scaled(x, sign, &scale) };
    let mut s = String::new();
    if sign < 0 {
        s.push('-');
    }
    let (int_part, frac) = t.div_rem(&scale);
    s.push_str(&int_part.to_string());
    if digits > 0 {
        let f = frac.to_string();
        s.push('.');
        for _ in f.len()..digits {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}

/// `floor(|x| * scale)` for nonzero `x` with the given sign.
fn truncated_scaled(x: &ConstructibleReal, sign: i32, scale: &BigInt) -> BigInt {
    let scale_q = BigRational::from_integer(scale.clone());
    let mut prec = 64u32;
    loop {
        if let Some(iv) = x.eval(prec) {
            let (lo, hi) = if sign > 0 {
                (iv.lo.to_rational(), iv.hi.to_rational())
            } else {
                (-iv.hi.to_rational(), -iv.lo.to_rational())
            };
            let lo = if lo.is_negative() { BigRational::zero() } else { lo };
            let a = (&lo * &scale_q).floor().to_integer();
            let b = (&hi * &scale_q).floor().to_integer();
            if a == b {
                return a;
            }
            if &b - &a == BigInt::one() && (&hi - &lo) * &scale_q < BigRational::one() {
                // one boundary b/scale inside the enclosure: decide exactly
                let boundary = ConstructibleReal::from_rational(BigRational::new(b.clone(), scale.clone()));
                let abs = if sign > 0 { x.clone() } else { x.neg_ref() };
                return if abs.checked_sub(&boundary).sign() >= 0 { b } else { a };
            }
        }
        prec = prec.saturating_mul(2);
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;

    #[test]
    fn decimals_truncate_toward_zero() {
        assert_eq!(parse("sqrt(2)").unwrap().to_decimal(4), "1.4142");
        assert_eq!(parse("-sqrt(2)").unwrap().to_decimal(4), "-1.4142");
        assert_eq!(parse("2/3").unwrap().to_decimal(2), "0.66");
        assert_eq!(parse("-2/3").unwrap().to_decimal(0), "-0");
        assert_eq!(parse("sqrt(2)*sqrt(2)-2").unwrap().to_decimal(4), "0.0000");
        assert_eq!(parse("1/100000 - 1/10000").unwrap().to_decimal(4), "-0.0000");
        assert_eq!(parse("12").unwrap().to_decimal(3), "12.000");
    }

    #[test]
    fn exact_boundary_values() {
        // (sqrt(2)-1)*(sqrt(2)+1) is exactly 1
        assert_eq!(parse("(sqrt(2)-1)*(sqrt(2)+1)").unwrap().to_decimal(5), "1.00000");
        assert_eq!(parse("sqrt(6.25)").unwrap().to_decimal(1), "2.5");
        assert_eq!(parse("sqrt(2)*sqrt(3)/sqrt(6) - 1/2").unwrap().to_decimal(3), "0.500");
    }

    #[test]
    fn printed_forms_round_trip() {
        for s in [
            "-sqrt(2) + 3/4",
            "(1 + sqrt(5))/2",
            "2 - (3 - sqrt(7))",
            "1/(2*sqrt(3))",
            "-(sqrt(2)*sqrt(3)) - -2",
            "sqrt(1 + sqrt(2))*(5 - 1/sqrt(11))",
            "2*(3*sqrt(2))",
        ] {
            let a = parse(s).unwrap();
            let printed = a.to_string();
            let b = parse(&printed).unwrap();
            assert!(a.structurally_equal(&b), "{s} -> {printed}");
            assert_eq!(a.checked_sub(&b).sign(), 0);
        }
    }
}
