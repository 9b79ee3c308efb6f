//! Best simultaneous approximations of a vector in the plane under the
//! Euclidean norm.

pub mod clattice;
mod cylinder;
mod enumerate;

pub use cylinder::{
    classify, cylinder_int_empty, cylinder_int_empty_with, dist2, naive_report, BoundaryPoint, CylinderReport, Engine,
    PointClass, SCAN_LIMIT,
};
pub use enumerate::ellipsoid_points;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{certified_compare, nearest_int, CertifiedOrdering, Rational, RealExpr, Surd};
use crate::lattice3::IVec3;
use crate::{Error, Result};

pub const MAX_PRECISION: u32 = 1 << 14;

#[derive(Debug, Clone)]
pub struct TargetVector {
    pub v1: RealExpr,
    pub v2: RealExpr,
}

impl TargetVector {
    pub fn new(v1: RealExpr, v2: RealExpr) -> Self {
        TargetVector { v1, v2 }
    }

    pub fn rational(a: Rational, b: Rational) -> Self {
        TargetVector { v1: RealExpr::rational(a), v2: RealExpr::rational(b) }
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Ok(TargetVector { v1: RealExpr::parse(a)?, v2: RealExpr::parse(b)? })
    }

    pub fn as_rational(&self) -> Option<[Rational; 2]> {
        Some([self.v1.as_rational()?.clone(), self.v2.as_rational()?.clone()])
    }
}

#[derive(Debug, Clone)]
pub struct BestApproxRecord {
    pub n: usize,
    pub q: BigInt,
    pub p: [BigInt; 2],
    /// `|q v - p|^2`.
    pub r2_next: RealExpr,
    /// `q_{n+1} |q_n v - p_n|^2`, known once the next record is.
    pub v_over_pi: Option<RealExpr>,
    /// Some coordinate of `q v` is a half-integer; p takes the smaller choice.
    pub ambiguous: bool,
}

impl BestApproxRecord {
    pub fn point(&self) -> IVec3 {
        [self.q.clone(), self.p[0].clone(), self.p[1].clone()]
    }
}

#[derive(Debug, Clone)]
pub struct Chain {
    pub records: Vec<BestApproxRecord>,
    /// An exact hit `q v` in Z^2 ended the chain.
    pub degenerate: bool,
    pub rational_input: bool,
}

impl Chain {
    pub fn denominators(&self) -> Vec<BigInt> {
        self.records.iter().map(|r| r.q.clone()).collect()
    }

    fn push(&mut self, q: BigInt, p: [BigInt; 2], r2: RealExpr, ambiguous: bool) {
        if let Some(last) = self.records.last_mut() {
            last.v_over_pi = Some(RealExpr::from(&q) * last.r2_next.clone());
        }
        let n = self.records.len();
        self.records.push(BestApproxRecord { n, q, p, r2_next: r2, v_over_pi: None, ambiguous });
    }
}

#[derive(Debug, Clone)]
pub struct Cylinder {
    pub v: TargetVector,
    pub q: RealExpr,
    pub r2: RealExpr,
}

impl Cylinder {
    pub fn volume_over_pi(&self) -> RealExpr {
        &self.q * &self.r2
    }
}

/// Best approximations with denominators up to `q_max`.
pub fn best_approx_seq(v: &TargetVector, q_max: u64) -> Result<Chain> {
    if q_max == 0 {
        return Err(Error::InvalidInput("q_max must be positive".into()));
    }
    match v.as_rational() {
        Some(r) => Ok(rational_chain(&r, q_max)),
        None => irrational_chain(v, q_max),
    }
}

fn rational_chain(v: &[Rational; 2], q_max: u64) -> Chain {
    let d = v[0].denom().lcm(v[1].denom());
    let a = [(&v[0] * Rational::from_integer(d.clone())).to_integer(), (&v[1] * Rational::from_integer(d.clone())).to_integer()];
    let mut chain = Chain { records: Vec::new(), degenerate: false, rational_input: true };
    let record = |chain: &mut Chain, q: u64, r: [&BigInt; 2]| {
        let qb = BigInt::from(q);
        let mut p: [BigInt; 2] = Default::default();
        let mut s = BigInt::zero();
        let mut ambiguous = false;
        for i in 0..2 {
            let twice = r[i] * 2u32;
            p[i] = (&qb * &a[i] - r[i]) / &d;
            let di = if twice > d {
                p[i] += 1;
                &d - r[i]
            } else {
                ambiguous |= twice == d;
                r[i].clone()
            };
            s += &di * &di;
        }
        let r2 = Rational::new(s.clone(), &d * &d);
        chain.push(qb, p, RealExpr::rational(r2), ambiguous);
        s.is_zero()
    };
    if let (Some(dd), Some(a0), Some(a1)) = (d.to_u64(), a[0].mod_floor(&d).to_u64(), a[1].mod_floor(&d).to_u64()) {
        if dd < 1 << 62 {
            let (dd, a0, a1) = (dd as u128, a0 as u128, a1 as u128);
            let (mut r0, mut r1) = (0u128, 0u128);
            let mut best = u128::MAX;
            for q in 1..=q_max {
                r0 += a0;
                if r0 >= dd {
                    r0 -= dd;
                }
                r1 += a1;
                if r1 >= dd {
                    r1 -= dd;
                }
                let d0 = r0.min(dd - r0);
                let d1 = r1.min(dd - r1);
                let s = d0 * d0 + d1 * d1;
                if s < best {
                    best = s;
                    if record(&mut chain, q, [&BigInt::from(r0), &BigInt::from(r1)]) {
                        chain.degenerate = true;
                        break;
                    }
                }
            }
            return chain;
        }
    }
    let base = [a[0].mod_floor(&d), a[1].mod_floor(&d)];
    let mut r = [BigInt::zero(), BigInt::zero()];
    let mut best: Option<BigInt> = None;
    for q in 1..=q_max {
        let mut s = BigInt::zero();
        for i in 0..2 {
            r[i] += &base[i];
            if r[i] >= d {
                r[i] -= &d;
            }
            let di = if &r[i] * 2u32 > d { &d - &r[i] } else { r[i].clone() };
            s += &di * &di;
        }
        if best.as_ref().is_none_or(|b| &s < b) {
            best = Some(s);
            if record(&mut chain, q, [&r[0], &r[1]]) {
                chain.degenerate = true;
                break;
            }
        }
    }
    chain
}

/// 128-bit fixed-point fractional part of x, below the true value by less
/// than 2^-127.
fn frac_fixed(x: &RealExpr) -> Result<u128> {
    let iv = x.enclose(192)?;
    let one = BigInt::one() << 192usize;
    let f: BigInt = iv.lo.mod_floor(&one) >> 64usize;
    Ok(f.to_u128().unwrap_or(u128::MAX))
}

fn nearest_point(x: &[RealExpr; 2], q: &BigInt) -> Result<([BigInt; 2], RealExpr, bool)> {
    let qe = RealExpr::from(q);
    let (p1, d1) = nearest_int(&(&qe * &x[0]), MAX_PRECISION)?;
    let (p2, d2) = nearest_int(&(&qe * &x[1]), MAX_PRECISION)?;
    let half = |d: &RealExpr| d.as_rational().is_some_and(|r| *r == Rational::new(BigInt::one(), BigInt::from(2)));
    let mut p = [p1, p2];
    let ambiguous = half(&d1) || half(&d2);
    // ties go to the smaller integer
    for (i, d) in [&d1, &d2].into_iter().enumerate() {
        if half(d) && Rational::from_integer(p[i].clone()) > (&qe * &x[i]).as_rational().cloned().unwrap_or_default() {
            p[i] -= 1;
        }
    }
    let r2 = d1.square() + d2.square();
    Ok((p, r2, ambiguous))
}

fn irrational_chain(v: &TargetVector, q_max: u64) -> Result<Chain> {
    let x = [v.v1.clone(), v.v2.clone()];
    let f = [frac_fixed(&x[0])?, frac_fixed(&x[1])?];
    let mut chain = Chain { records: Vec::new(), degenerate: false, rational_input: false };
    let scale = 2f64.powi(-128);
    let (mut acc0, mut acc1) = (0u128, 0u128);
    let mut best_f = f64::INFINITY;
    let mut best_r2: Option<RealExpr> = None;
    for q in 1..=q_max {
        acc0 = acc0.wrapping_add(f[0]);
        acc1 = acc1.wrapping_add(f[1]);
        let d0 = acc0.min(acc0.wrapping_neg()) as f64 * scale;
        let d1 = acc1.min(acc1.wrapping_neg()) as f64 * scale;
        let s = d0 * d0 + d1 * d1;
        if s >= best_f * (1.0 + 1e-9) {
            continue;
        }
        let qb = BigInt::from(q);
        let (p, r2, ambiguous) = nearest_point(&x, &qb)?;
        let accept = match &best_r2 {
            None => true,
            Some(b) => match certified_compare(&r2, b, MAX_PRECISION) {
                CertifiedOrdering::Less => true,
                CertifiedOrdering::Undecided(bits) => return Err(Error::UndecidedTie(bits)),
                _ => false,
            },
        };
        if accept {
            best_f = r2.to_f64();
            let zero = r2.as_rational().is_some_and(|r| r.is_zero());
            best_r2 = Some(r2.clone());
            chain.push(qb, p, r2, ambiguous);
            if zero {
                chain.degenerate = true;
                break;
            }
        }
    }
    Ok(chain)
}

/// `min_{1 <= q <= t} |q v - p|`.
pub fn psi2(v: &TargetVector, t: &Rational) -> Result<RealExpr> {
    if *t < Rational::one() {
        return Err(Error::InvalidInput("psi2 needs t >= 1".into()));
    }
    let q_max = t.floor().to_integer().to_u64().ok_or_else(|| Error::InvalidInput("t too large".into()))?;
    let chain = best_approx_seq(v, q_max)?;
    Ok(chain.records.last().expect("q = 1 is always a record").r2_next.sqrt())
}

/// Chain of a rational vector found by lattice enumeration, independent of
/// the size of the denominators. Stops after `max_records` records, at an
/// exact hit, or once the next denominator would exceed `q_max`.
pub fn lattice_chain(v: &[Rational; 2], max_records: usize, q_max: Option<&BigInt>) -> Chain {
    let mut chain = Chain { records: Vec::new(), degenerate: false, rational_input: true };
    let vx = [RealExpr::rational(v[0].clone()), RealExpr::rational(v[1].clone())];
    let (p, r2, amb) = nearest_point(&vx, &BigInt::one()).expect("rational nearest point");
    chain.push(BigInt::one(), p, r2, amb);
    while chain.records.len() < max_records {
        let last = chain.records.last().unwrap();
        let r2 = last.r2_next.as_rational().unwrap().clone();
        if r2.is_zero() {
            chain.degenerate = true;
            break;
        }
        let qk = last.q.clone();
        let mut x_top = &qk * 2u32;
        let found = loop {
            if let Some(cap) = q_max {
                if x_top > cap * 2u32 {
                    break None;
                }
            }
            let pts = cylinder::enumerate_points(v, &Rational::from_integer(x_top.clone()), &r2);
            let mut cands: Vec<(BigInt, Rational, BigInt, BigInt)> = pts
                .into_iter()
                .filter(|u| u[0].is_positive() && u[0] <= x_top)
                .map(|u| {
                    let d = dist2(v, &u);
                    let [x, p1, p2] = u;
                    (x, d, p1, p2)
                })
                .filter(|c| c.1 < r2)
                .collect();
            cands.sort();
            let best = cands.first().map(|(x, d, p1, p2)| {
                let tie = cands.get(1).is_some_and(|c| &c.0 == x && &c.1 == d);
                (x.clone(), d.clone(), [p1.clone(), p2.clone()], tie)
            });
            if best.is_some() {
                break best;
            }
            x_top *= 2u32;
        };
        let Some((x, d, p, amb)) = found else { break };
        if q_max.is_some_and(|c| &x > c) {
            break;
        }
        chain.push(x, p, RealExpr::rational(d), amb);
    }
    chain
}

/// Result of checking the four defining conditions of a best-approximation
/// sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// First violated condition (1 to 4), if any.
    pub failed: Option<u8>,
    pub index: Option<usize>,
    pub witness: Option<IVec3>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failed.is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.failed, self.index) {
            (None, _) => write!(f, "PASS"),
            (Some(c), Some(n)) => write!(f, "FAIL condition {c} at n={n}"),
            (Some(c), None) => write!(f, "FAIL condition {c}"),
        }
    }
}

/// Checks q_0 = 1, increasing q, decreasing R, then emptiness of every
/// cylinder interior `int Pi(v, [0, q_n], R_n)`.
pub fn validate_best_approx(chain: &[BestApproxRecord], v: &[Rational; 2]) -> ValidationReport {
    let fail = |c: u8, n: usize, w: Option<IVec3>| ValidationReport { failed: Some(c), index: Some(n), witness: w };
    if chain.is_empty() || !chain[0].q.is_one() {
        return fail(1, 0, None);
    }
    let r2: Vec<Rational> = chain.iter().map(|r| dist2(v, &r.point())).collect();
    for n in 1..chain.len() {
        if chain[n].q <= chain[n - 1].q {
            return fail(3, n - 1, None);
        }
    }
    let mut prev = Rational::one();
    for (n, r) in r2.iter().enumerate() {
        if *r >= prev {
            return fail(4, n, None);
        }
        prev = r.clone();
    }
    for n in 0..chain.len() {
        let rn = if n == 0 { Rational::one() } else { r2[n - 1].clone() };
        let rep = cylinder_int_empty(v, &Rational::from_integer(chain[n].q.clone()), &rn);
        if !rep.empty {
            return fail(2, n, rep.witness);
        }
    }
    ValidationReport { failed: None, index: None, witness: None }
}

/// Upper bound 4/pi as a rational just below it, and 2/sqrt(3) exactly.
pub fn four_over_pi_lower() -> Rational {
    let pi_hi: BigInt = "314159265358979323846264338327950289".parse().unwrap();
    Rational::new(BigInt::from(4) * num_traits::pow(BigInt::from(10), 35), pi_hi)
}

pub fn two_over_sqrt3() -> Surd {
    Surd::new(Rational::zero(), Rational::new(BigInt::from(2), BigInt::from(3)), BigInt::from(3)).unwrap()
}

#[derive(Debug, Clone)]
pub struct SpectrumBounds {
    pub max_product: Option<RealExpr>,
    pub max_index: Option<usize>,
    /// Certified `max_product < 4/pi`.
    pub below_four_over_pi: bool,
    /// Certified `max_product <= 2/sqrt(3)`.
    pub below_two_over_sqrt3: bool,
    pub degenerate: bool,
    pub records: usize,
}

pub fn spectrum_bounds_check(v: &TargetVector, q_max: u64) -> Result<SpectrumBounds> {
    let chain = best_approx_seq(v, q_max)?;
    let mut best: Option<(usize, RealExpr)> = None;
    for r in &chain.records {
        let Some(p) = &r.v_over_pi else { continue };
        let better = match &best {
            None => true,
            Some((_, b)) => match certified_compare(p, b, MAX_PRECISION) {
                CertifiedOrdering::Greater => true,
                CertifiedOrdering::Undecided(bits) => return Err(Error::UndecidedTie(bits)),
                _ => false,
            },
        };
        if better {
            best = Some((r.n, p.clone()));
        }
    }
    let (below_pi, below_sqrt3) = match &best {
        None => (true, true),
        Some((_, p)) => {
            let a = certified_compare(p, &RealExpr::rational(four_over_pi_lower()), MAX_PRECISION);
            let b = certified_compare(p, &RealExpr::from_surd(&two_over_sqrt3()), MAX_PRECISION);
            (a == CertifiedOrdering::Less, matches!(b, CertifiedOrdering::Less | CertifiedOrdering::Equal))
        }
    };
    Ok(SpectrumBounds {
        max_index: best.as_ref().map(|b| b.0),
        max_product: best.map(|b| b.1),
        below_four_over_pi: below_pi,
        below_two_over_sqrt3: below_sqrt3,
        degenerate: chain.degenerate,
        records: chain.records.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn sqrt23() -> TargetVector {
        TargetVector::parse("(sqrt 2)", "(sqrt 3)").unwrap()
    }

    #[test]
    fn sqrt2_sqrt3_chain() {
        let c = best_approx_seq(&sqrt23(), 10).unwrap();
        assert_eq!(c.denominators(), vec![BigInt::from(1), BigInt::from(3), BigInt::from(7)]);
        assert_eq!(c.records[1].p, [BigInt::from(4), BigInt::from(5)]);
        assert_eq!(c.records[2].p, [BigInt::from(10), BigInt::from(12)]);
        assert!((c.records[2].r2_next.to_f64().sqrt() - 0.159893).abs() < 1e-6);
        assert!((c.records[1].r2_next.to_f64() - 0.097350).abs() < 1e-6);
        assert!((c.records[1].v_over_pi.as_ref().unwrap().to_f64() - 0.681452).abs() < 1e-5);
        assert!(!c.degenerate && !c.rational_input);
    }

    #[test]
    fn psi2_examples() {
        let v = sqrt23();
        assert!((psi2(&v, &int(1)).unwrap().to_f64() - 0.493326).abs() < 1e-6);
        let oracle = (1..=6)
            .map(|q| {
                let (a, b) = (q as f64 * 2f64.sqrt(), q as f64 * 3f64.sqrt());
                ((a - a.round()).powi(2) + (b - b.round()).powi(2)).sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((psi2(&v, &int(6)).unwrap().to_f64() - oracle).abs() < 1e-12);
        assert!((oracle - 0.312010).abs() < 1e-6);
        let r = TargetVector::rational(rat(1, 2), rat(1, 3));
        assert_eq!(psi2(&r, &int(6)).unwrap().as_rational(), Some(&int(0)));
        assert!(best_approx_seq(&r, 100).unwrap().degenerate);
        assert!(psi2(&v, &rat(1, 2)).is_err());
    }

    #[test]
    fn validation() {
        let v = [rat(141, 100), rat(173, 100)];
        let c = best_approx_seq(&TargetVector::rational(v[0].clone(), v[1].clone()), 50).unwrap();
        assert!(validate_best_approx(&c.records, &v).passed());
        let mut dup = c.records.clone();
        dup[2].q = dup[1].q.clone();
        dup[2].p = dup[1].p.clone();
        assert_eq!(validate_best_approx(&dup, &v).failed, Some(3));
        let mut up = c.records.clone();
        up.swap(1, 2);
        up[1].q = up[2].q.clone() - 1;
        let rep = validate_best_approx(&up, &v);
        assert!(rep.failed.is_some());
        let mut skip = c.records.clone();
        skip.remove(1);
        assert_eq!(validate_best_approx(&skip, &v).failed, Some(2));
    }

    #[test]
    fn lattice_chain_matches_scan() {
        for v in [[rat(141, 100), rat(173, 100)], [rat(355, 113), rat(-22, 7)], [rat(1, 2), rat(1, 3)]] {
            let a = best_approx_seq(&TargetVector::rational(v[0].clone(), v[1].clone()), 1_000_000).unwrap();
            let b = lattice_chain(&v, 1000, None);
            assert_eq!(a.denominators(), b.denominators());
            assert_eq!(a.degenerate, b.degenerate);
            for (x, y) in a.records.iter().zip(&b.records) {
                assert_eq!(x.p, y.p);
            }
        }
    }

    #[test]
    fn bounds() {
        let b = spectrum_bounds_check(&sqrt23(), 10_000).unwrap();
        assert!(b.below_four_over_pi && b.below_two_over_sqrt3);
        let r = spectrum_bounds_check(&TargetVector::rational(rat(1, 2), rat(1, 3)), 100).unwrap();
        assert!(r.degenerate);
        assert!(four_over_pi_lower() < rat(1273240, 1000000) && four_over_pi_lower() > rat(1273239, 1000000));
    }
}
