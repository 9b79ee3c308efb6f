use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Closed dyadic interval `[lo, hi] * 2^-prec` with outward rounding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub prec: u32,
}

fn pow2(p: u32) -> BigInt {
    BigInt::one() << p as usize
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn sqrt_ceil(x: &BigInt) -> BigInt {
    let r = x.sqrt();
    if &r * &r < *x {
        r + 1
    } else {
        r
    }
}

impl Interval {
    pub fn point_rational(r: &Rational, prec: u32) -> Self {
        let n = r.numer() << prec as usize;
        Interval { lo: div_floor(&n, r.denom()), hi: div_ceil(&n, r.denom()), prec }
    }

    pub fn width_log2_le(&self, bits: u32) -> bool {
        (&self.hi - &self.lo) <= pow2(bits)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi, prec: self.prec }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo, prec: self.prec }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let ps = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mn = ps.iter().min().unwrap();
        let mx = ps.iter().max().unwrap();
        let s = pow2(self.prec);
        Interval { lo: div_floor(mn, &s), hi: div_ceil(mx, &s), prec: self.prec }
    }

    /// None when the divisor interval contains zero.
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let s = pow2(self.prec);
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&o.lo, &o.hi] {
                let n = a * &s;
                let f = div_floor(&n, b);
                let c = div_ceil(&n, b);
                lo = Some(match lo {
                    Some(x) if x <= f => x,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(x) if x >= c => x,
                    _ => c,
                });
            }
        }
        Some(Interval { lo: lo.unwrap(), hi: hi.unwrap(), prec: self.prec })
    }

    /// None when the interval is certainly negative.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi.is_negative() {
            return None;
        }
        let s = pow2(self.prec);
        let lo = if self.lo.is_positive() { (&self.lo * &s).sqrt() } else { BigInt::zero() };
        let hi = sqrt_ceil(&(&self.hi * &s));
        Some(Interval { lo, hi, prec: self.prec })
    }

    /// Re-express at a lower precision, rounding outward.
    pub fn round_to(&self, prec: u32) -> Interval {
        if prec >= self.prec {
            let sh = (prec - self.prec) as usize;
            return Interval { lo: &self.lo << sh, hi: &self.hi << sh, prec };
        }
        let s = pow2(self.prec - prec);
        Interval { lo: div_floor(&self.lo, &s), hi: div_ceil(&self.hi, &s), prec }
    }

    pub fn lo_rational(&self) -> Rational {
        Rational::new(self.lo.clone(), pow2(self.prec))
    }

    pub fn hi_rational(&self) -> Rational {
        Rational::new(self.hi.clone(), pow2(self.prec))
    }

    pub fn mid_f64(&self) -> f64 {
        let m = (&self.lo + &self.hi) / 2;
        super::to_f64(&Rational::new(m, pow2(self.prec)))
    }
}
