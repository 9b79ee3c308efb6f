use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{floor_rat, square_split, to_f64, Rational};

/// `a + b*sqrt(m)` with rational a, b and integer radicand m >= 2.
/// Rational values are stored with b = 0 and m = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Rational,
    b: Rational,
    m: BigInt,
}

impl Surd {
    pub fn rational(a: Rational) -> Self {
        Surd { a, b: Rational::zero(), m: BigInt::one() }
    }

    pub fn new(a: Rational, b: Rational, m: BigInt) -> Option<Self> {
        if m.is_negative() {
            return None;
        }
        if b.is_zero() || m.is_zero() {
            return Some(Self::rational(a));
        }
        let (s, m) = square_split(&m);
        let b = b * Rational::from_integer(s);
        if m.is_one() {
            Some(Self::rational(a + b))
        } else {
            Some(Surd { a, b, m })
        }
    }

    /// Assembles a surd whose radicand is already reduced.
    fn with_radicand(a: Rational, b: Rational, m: BigInt) -> Self {
        if b.is_zero() || m.is_one() {
            Self::rational(a + b * Rational::from_integer(m))
        } else {
            Surd { a, b, m }
        }
    }

    /// sqrt(r) for r >= 0.
    pub fn sqrt_of(r: &Rational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        let nd = r.numer() * r.denom();
        Self::new(Rational::zero(), Rational::new(BigInt::one(), r.denom().clone()), nd)
    }

    pub fn parts(&self) -> (&Rational, &Rational, &BigInt) {
        (&self.a, &self.b, &self.m)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    fn radicand_with(&self, o: &Surd) -> Option<BigInt> {
        match (self.is_rational(), o.is_rational()) {
            (true, true) => Some(BigInt::one()),
            (true, false) => Some(o.m.clone()),
            (false, true) => Some(self.m.clone()),
            (false, false) => (self.m == o.m).then(|| self.m.clone()),
        }
    }

    pub fn add(&self, o: &Surd) -> Option<Surd> {
        let m = self.radicand_with(o)?;
        Some(Surd::with_radicand(&self.a + &o.a, &self.b + &o.b, m))
    }

    pub fn sub(&self, o: &Surd) -> Option<Surd> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Surd {
        Surd { a: -&self.a, b: -&self.b, m: self.m.clone() }
    }

    pub fn mul(&self, o: &Surd) -> Option<Surd> {
        if let Some(m) = self.radicand_with(o) {
            let mq = Rational::from_integer(m.clone());
            let a = &self.a * &o.a + &self.b * &o.b * mq;
            let b = &self.a * &o.b + &self.b * &o.a;
            return Some(Surd::with_radicand(a, b, m));
        }
        if self.a.is_zero() && o.a.is_zero() {
            return Surd::new(Rational::zero(), &self.b * &o.b, &self.m * &o.m);
        }
        None
    }

    pub fn recip(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        let mq = Rational::from_integer(self.m.clone());
        let den = &self.a * &self.a - &self.b * &self.b * mq;
        Some(Surd::with_radicand(&self.a / &den, -&self.b / &den, self.m.clone()))
    }

    pub fn div(&self, o: &Surd) -> Option<Surd> {
        self.mul(&o.recip()?)
    }

    /// sqrt of a surd, only when it is rational.
    pub fn sqrt(&self) -> Option<Surd> {
        Surd::sqrt_of(self.as_rational()?)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 m
        let a2 = &self.a * &self.a;
        let b2m = &self.b * &self.b * Rational::from_integer(self.m.clone());
        match a2.cmp(&b2m) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Exact comparison; None when radicands differ.
    pub fn cmp_exact(&self, o: &Surd) -> Option<Ordering> {
        Some(self.sub(o)?.signum())
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return floor_rat(&self.a);
        }
        // (P + B sqrt(m)) / D with floor(y / D) = floor(floor(y) / D)
        let d = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&d / self.a.denom());
        let b = self.b.numer() * (&d / self.b.denom());
        let r = (&b * &b * &self.m).sqrt();
        let root = if b.is_positive() { r } else { -r - 1 };
        (p + root).div_floor(&d)
    }

    /// Rational enclosure `lo <= self <= hi` with error below 2^-bits times
    /// the size of the irrational part.
    pub fn bounds(&self, bits: u32) -> (Rational, Rational) {
        if self.is_rational() {
            return (self.a.clone(), self.a.clone());
        }
        let m = Rational::from_integer(self.m.clone());
        let (sl, su) = (super::sqrt_lower(&m, bits), super::sqrt_upper(&m, bits));
        let (x, y) = (&self.a + &self.b * &sl, &self.a + &self.b * &su);
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Nearest double, refining the enclosure until cancellation between the
    /// two parts no longer matters.
    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return to_f64(&self.a);
        }
        let mut bits = 64;
        loop {
            let (lo, hi) = self.bounds(bits);
            let (l, h) = (to_f64(&lo), to_f64(&hi));
            if l == h || (h - l).abs() <= f64::EPSILON * l.abs().max(h.abs()) || bits >= 1 << 14 {
                return to_f64(&((lo + hi) / Rational::from_integer(2.into())));
            }
            bits *= 2;
        }
    }
}

impl From<Rational> for Surd {
    fn from(r: Rational) -> Self {
        Surd::rational(r)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.m)
        }
    }
}
