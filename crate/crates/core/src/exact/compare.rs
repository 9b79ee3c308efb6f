use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rational, RealExpr, Surd};
use crate::{Error, Result};

pub const PRECISION_LADDER_START: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifiedOrdering {
    Less,
    Equal,
    Greater,
    Undecided(u32),
}

impl CertifiedOrdering {
    pub fn reverse(self) -> Self {
        match self {
            CertifiedOrdering::Less => CertifiedOrdering::Greater,
            CertifiedOrdering::Greater => CertifiedOrdering::Less,
            o => o,
        }
    }

    pub fn decided(self) -> Option<Ordering> {
        match self {
            CertifiedOrdering::Less => Some(Ordering::Less),
            CertifiedOrdering::Equal => Some(Ordering::Equal),
            CertifiedOrdering::Greater => Some(Ordering::Greater),
            CertifiedOrdering::Undecided(_) => None,
        }
    }
}

impl From<Ordering> for CertifiedOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => CertifiedOrdering::Less,
            Ordering::Equal => CertifiedOrdering::Equal,
            Ordering::Greater => CertifiedOrdering::Greater,
        }
    }
}

/// Compares two real expressions: symbolically when both fold to surds of a
/// common field, otherwise by doubling the interval precision from 64 bits
/// until the enclosures separate or `max_precision` is passed.
pub fn certified_compare(a: &RealExpr, b: &RealExpr, max_precision: u32) -> CertifiedOrdering {
    if let (Some(x), Some(y)) = (a.surd(), b.surd()) {
        if let Some(o) = x.cmp_exact(y) {
            return o.into();
        }
    }
    let d = a - b;
    let mut p = PRECISION_LADDER_START;
    while p <= max_precision {
        match d.enclose(p) {
            Ok(iv) => {
                if iv.lo.is_positive() {
                    return CertifiedOrdering::Greater;
                }
                if iv.hi.is_negative() {
                    return CertifiedOrdering::Less;
                }
            }
            Err(Error::PrecisionExhausted(_)) => {}
            Err(_) => return CertifiedOrdering::Undecided(p),
        }
        p = p.saturating_mul(2);
    }
    CertifiedOrdering::Undecided(max_precision)
}

/// floor(x): exact for surds, otherwise by enclosures of increasing
/// precision.
pub fn certified_floor(x: &RealExpr, max_precision: u32) -> Result<BigInt> {
    if let Some(s) = x.surd() {
        return Ok(s.floor());
    }
    let mut p = PRECISION_LADDER_START;
    while p <= max_precision {
        match x.enclose(p) {
            Ok(iv) => {
                let one = BigInt::one() << p as usize;
                let lo = iv.lo.div_floor(&one);
                if lo == iv.hi.div_floor(&one) {
                    return Ok(lo);
                }
            }
            Err(Error::PrecisionExhausted(_)) => {}
            Err(e) => return Err(e),
        }
        p = p.saturating_mul(2);
    }
    Err(Error::PrecisionExhausted(max_precision))
}

/// Nearest integer with ties to even, and the distance `|x - m|`.
pub fn nearest_int(x: &RealExpr, max_precision: u32) -> Result<(BigInt, RealExpr)> {
    if let Some(s) = x.surd() {
        let half = Surd::rational(Rational::new(BigInt::one(), BigInt::from(2)));
        let shifted = s.add(&half).expect("rational shift");
        let mut m = shifted.floor();
        let tie = shifted.is_rational() && shifted.as_rational().unwrap().is_integer();
        if tie && m.is_odd() {
            m -= 1;
        }
        let d = s.sub(&Surd::rational(Rational::from_integer(m.clone()))).unwrap();
        let dist = if d.signum() == Ordering::Less { d.neg() } else { d };
        return Ok((m, RealExpr::from_surd(&dist)));
    }
    let mut p = PRECISION_LADDER_START;
    while p <= max_precision {
        let iv = x.enclose(p)?;
        let one = BigInt::one() << p as usize;
        let half = BigInt::one() << (p as usize - 1);
        let lo = (&iv.lo + &half).div_floor(&one);
        let hi = (&iv.hi + &half).div_floor(&one);
        let lo_on_tie = ((&iv.lo + &half) % &one).is_zero();
        if lo == hi && !lo_on_tie {
            let m = lo;
            let mi = &m << p as usize;
            let diff = x - &RealExpr::int(m.clone());
            let dist = if iv.lo >= mi {
                diff
            } else if iv.hi <= mi {
                -diff
            } else {
                match certified_compare(x, &RealExpr::int(m.clone()), max_precision) {
                    CertifiedOrdering::Greater => diff,
                    CertifiedOrdering::Less => -diff,
                    CertifiedOrdering::Equal => RealExpr::int(0),
                    CertifiedOrdering::Undecided(b) => return Err(Error::PrecisionExhausted(b)),
                }
            };
            return Ok((m, dist));
        }
        p = p.saturating_mul(2);
    }
    Err(Error::UndecidedTie(max_precision))
}
