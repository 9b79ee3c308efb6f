//! Exact arithmetic: big rationals, quadratic surds, real expression trees
//! with certified interval evaluation.

mod compare;
mod expr;
mod interval;
mod surd;

pub use compare::{certified_compare, certified_floor, nearest_int, CertifiedOrdering, PRECISION_LADDER_START};
pub use expr::RealExpr;
pub use interval::Interval;
pub use surd::Surd;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rat_arith(a: &Rational, op: ArithOp, b: &Rational) -> Result<Rational> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            a / b
        }
    })
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Formats as `num/den`, the canonical serialized form.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `a/b`, integers and finite decimals such as `-1.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse(0, "empty number"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::parse(0, format!("bad numerator in {t:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::parse(0, format!("bad denominator in {t:?}")))?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) || (ip.is_empty() && fp.is_empty()) {
            return Err(Error::parse(0, format!("bad decimal {t:?}")));
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().map_err(|_| Error::parse(0, format!("bad decimal {t:?}")))?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = t.parse().map_err(|_| Error::parse(0, format!("bad integer {t:?}")))?;
    Ok(Rational::from_integer(n))
}

pub fn floor_rat(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil_rat(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// floor(sqrt(s)) for s >= 0.
pub fn sqrt_floor(s: &Rational) -> BigInt {
    debug_assert!(!s.is_negative());
    floor_rat(s).sqrt()
}

/// Largest integer m with m <= c + sqrt(s), s >= 0.
pub fn floor_c_plus_sqrt(c: &Rational, s: &Rational) -> BigInt {
    let ok = |m: &BigInt| {
        let t = Rational::from_integer(m.clone()) - c;
        !t.is_positive() || &(&t * &t) <= s
    };
    let mut m = floor_rat(&(c + sqrt_lower(s, 64)));
    while ok(&(&m + 1)) {
        m += 1;
    }
    while !ok(&m) {
        m -= 1;
    }
    m
}

/// Smallest integer m with m >= c - sqrt(s), s >= 0.
pub fn ceil_c_minus_sqrt(c: &Rational, s: &Rational) -> BigInt {
    -floor_c_plus_sqrt(&-c, s)
}

/// Dyadic lower bound of sqrt(s) with `bits` fractional bits.
pub fn sqrt_lower(s: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << (2 * bits as usize);
    let r = floor_rat(&(s * Rational::from_integer(scale))).sqrt();
    Rational::new(r, BigInt::one() << bits as usize)
}

/// Dyadic upper bound of sqrt(s) with `bits` fractional bits.
pub fn sqrt_upper(s: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << (2 * bits as usize);
    let x = ceil_rat(&(s * Rational::from_integer(scale)));
    let mut r = x.sqrt();
    if &r * &r < x {
        r += 1;
    }
    Rational::new(r, BigInt::one() << bits as usize)
}

pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Writes n = s^2 * m with m squarefree when n is small enough to factor;
/// larger inputs may return a non-squarefree m, which is still a valid
/// representation.
pub fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut r = n.clone();
    let mut p = 2u64;
    let limit = 2_000_000u64;
    while p < limit {
        let pb = BigInt::from(p);
        if &pb * &pb * &pb > r {
            break;
        }
        let mut e = 0u32;
        while (&r % &pb).is_zero() {
            r /= &pb;
            e += 1;
        }
        if e > 0 {
            s *= num_traits::pow(pb.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                m *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(t) = is_perfect_square(&r) {
        s *= t;
    } else {
        m *= r;
    }
    (s, m)
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let qt = r0.div_floor(&r1);
        let r2 = &r0 - &qt * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &qt * &s1;
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &qt * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arith_examples() {
        assert_eq!(rat_arith(&rat(1, 2), ArithOp::Add, &rat(1, 3)).unwrap(), rat(5, 6));
        assert_eq!(rat_arith(&rat(3, 6), ArithOp::Mul, &int(1)).unwrap(), rat(1, 2));
        assert_eq!(rat_arith(&rat(2, 3), ArithOp::Div, &int(0)), Err(Error::DivisionByZero));
        assert_eq!(format_rational(&rat(3, 6)), "1/2");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("9/10").unwrap(), rat(9, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("42").unwrap(), int(42));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn floor_sqrt_bounds() {
        for (c, s) in [(rat(1, 3), rat(2, 1)), (rat(-7, 2), rat(9, 4)), (rat(0, 1), rat(4, 1)), (rat(5, 1), rat(0, 1))] {
            let f = floor_c_plus_sqrt(&c, &s);
            let v = to_f64(&c) + to_f64(&s).sqrt();
            assert_eq!(f, BigInt::from(v.floor() as i64), "c={c} s={s}");
            let g = ceil_c_minus_sqrt(&c, &s);
            let w = to_f64(&c) - to_f64(&s).sqrt();
            assert_eq!(g, BigInt::from(w.ceil() as i64));
        }
        let lo = sqrt_lower(&int(2), 40);
        let hi = sqrt_upper(&int(2), 40);
        assert!(&lo * &lo <= int(2) && &hi * &hi >= int(2));
    }

    #[test]
    fn squares() {
        assert_eq!(square_split(&BigInt::from(72)), (BigInt::from(6), BigInt::from(2)));
        assert_eq!(square_split(&BigInt::from(49)), (BigInt::from(7), BigInt::from(1)));
        let (g, x, y) = egcd(&BigInt::from(240), &BigInt::from(46));
        assert_eq!(g, BigInt::from(2));
        assert_eq!(BigInt::from(240) * x + BigInt::from(46) * y, g);
    }
}
