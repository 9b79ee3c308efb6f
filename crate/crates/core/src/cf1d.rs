//! Continued fractions, the one-dimensional irrationality measure function
//! and Dirichlet products `q_{n+1} * ||q_n alpha||`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{nearest_int, Rational, RealExpr, Surd};
use crate::{Error, Result};

/// Working precision ceiling used by the one-dimensional routines.
pub const MAX_PRECISION: u32 = 1 << 14;

#[derive(Debug, Clone)]
pub struct CFExpansion {
    pub a0: BigInt,
    pub quotients: Vec<BigInt>,
    pub source: RealExpr,
    /// True when the source is rational and the expansion ended exactly.
    pub terminated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
}

impl CFExpansion {
    /// All terms `a_0, a_1, ...`.
    pub fn terms(&self) -> Vec<BigInt> {
        std::iter::once(self.a0.clone()).chain(self.quotients.iter().cloned()).collect()
    }

    pub fn len(&self) -> usize {
        1 + self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn convergents(&self) -> Vec<Convergent> {
        convergents_of(&self.terms())
    }
}

pub fn convergents_of(terms: &[BigInt]) -> Vec<Convergent> {
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(terms.len());
    for (n, a) in terms.iter().enumerate() {
        let p = a * &p1 + &p2;
        let q = a * &q1 + &q2;
        p2 = std::mem::replace(&mut p1, p.clone());
        q2 = std::mem::replace(&mut q1, q.clone());
        out.push(Convergent { n, p, q });
    }
    out
}

/// First `n` terms (counting `a_0`) of the continued fraction of `alpha`.
pub fn cf_expand(alpha: &RealExpr, n: usize) -> Result<CFExpansion> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one term".into()));
    }
    let mut terms = Vec::with_capacity(n);
    let mut terminated = false;
    if let Some(s) = alpha.surd() {
        let mut x = s.clone();
        while terms.len() < n {
            let a = x.floor();
            let frac = x.sub(&Surd::rational(Rational::from_integer(a.clone()))).unwrap();
            terms.push(a);
            if frac.is_zero() {
                terminated = true;
                break;
            }
            x = frac.recip().unwrap();
        }
    } else {
        // alpha_k = -(q_{k-2} alpha - p_{k-2}) / (q_{k-1} alpha - p_{k-1})
        let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
        let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
        while terms.len() < n {
            let num = -(&(RealExpr::int(q2.clone()) * alpha.clone()) - &RealExpr::int(p2.clone()));
            let den = RealExpr::int(q1.clone()) * alpha.clone() - RealExpr::int(p1.clone());
            let tail = num / den;
            let a = certified_floor(&tail)?;
            let p = &a * &p1 + &p2;
            let q = &a * &q1 + &q2;
            p2 = std::mem::replace(&mut p1, p);
            q2 = std::mem::replace(&mut q1, q);
            terms.push(a);
        }
    }
    let a0 = terms.remove(0);
    Ok(CFExpansion { a0, quotients: terms, source: alpha.clone(), terminated })
}

fn certified_floor(x: &RealExpr) -> Result<BigInt> {
    crate::exact::certified_floor(x, MAX_PRECISION)
}

/// Expands until the denominators pass `t` (or the expansion terminates).
fn expand_past(alpha: &RealExpr, t: &BigInt) -> Result<(CFExpansion, Vec<Convergent>)> {
    let mut n = 8;
    loop {
        let cf = cf_expand(alpha, n)?;
        let conv = cf.convergents();
        if cf.terminated || conv.last().unwrap().q > *t {
            return Ok((cf, conv));
        }
        n *= 2;
    }
}

fn dist_to_int(x: &RealExpr) -> Result<RealExpr> {
    Ok(nearest_int(x, MAX_PRECISION)?.1)
}

/// `psi_alpha(t) = min_{1<=q<=t} ||q alpha||`, read off the convergents.
pub fn psi1(alpha: &RealExpr, t: &Rational) -> Result<RealExpr> {
    if *t < Rational::one() {
        return Err(Error::InvalidInput("t must be at least 1".into()));
    }
    let tf = t.floor().to_integer();
    let (_, conv) = expand_past(alpha, &tf)?;
    let c = conv.iter().rev().find(|c| c.q <= tf).expect("q_0 = 1 <= t");
    dist_to_int(&(RealExpr::int(c.q.clone()) * alpha.clone()))
}

#[derive(Debug, Clone)]
pub struct DirichletProduct {
    pub n: usize,
    pub q: BigInt,
    pub p: BigInt,
    pub q_next: BigInt,
    pub dist: RealExpr,
    pub product: RealExpr,
}

/// Products `q_{n+1} ||q_n alpha||` for n = 0..count-1. Rational inputs stop
/// early when the expansion terminates.
pub fn dirichlet_products(alpha: &RealExpr, count: usize) -> Result<Vec<DirichletProduct>> {
    let cf = cf_expand(alpha, count + 1)?;
    let conv = cf.convergents();
    let mut out = Vec::with_capacity(count);
    for n in 0..count.min(conv.len().saturating_sub(1)) {
        let c = &conv[n];
        let dist = dist_to_int(&(RealExpr::int(c.q.clone()) * alpha.clone()))?;
        let product = RealExpr::int(conv[n + 1].q.clone()) * dist.clone();
        out.push(DirichletProduct { n, q: c.q.clone(), p: c.p.clone(), q_next: conv[n + 1].q.clone(), dist, product });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BasicRelation {
    pub n: usize,
    pub lhs: RealExpr,
    /// Certified enclosure of the right-hand side.
    pub rhs_lo: Rational,
    pub rhs_hi: Rational,
    /// Certified upper bound on |lhs - rhs|.
    pub gap: Rational,
}

/// `q_{n+1} ||q_n alpha|| = 1 / (1 + 1/(alpha_{n+2} alpha**_{n+1}))` with
/// `alpha**_{n+1} = q_{n+1}/q_n` and the infinite tail `alpha_{n+2}` enclosed
/// by truncation.
pub fn basic_relation_check(alpha: &RealExpr, n: usize, prec: u32) -> Result<BasicRelation> {
    if n < 1 {
        return Err(Error::InvalidInput("the basic relation needs n >= 1".into()));
    }
    let rhs_of = |tail: &Rational, qs: (&BigInt, &BigInt)| {
        let star = Rational::new(qs.1.clone(), qs.0.clone());
        Rational::one() / (Rational::one() + Rational::one() / (tail * star))
    };
    let mut depth = n + 8;
    loop {
        let cf = cf_expand(alpha, depth + 2)?;
        let terms = cf.terms();
        if terms.len() < n + 3 {
            return Err(Error::InvalidInput("expansion terminates before the tail".into()));
        }
        let conv = convergents_of(&terms);
        let (qn, qn1) = (&conv[n].q, &conv[n + 1].q);
        let tail_terms = &terms[n + 2..];
        let (lo_t, hi_t) = tail_bounds(tail_terms, cf.terminated);
        let r1 = rhs_of(&lo_t, (qn, qn1));
        let r2 = rhs_of(&hi_t, (qn, qn1));
        let (rhs_lo, rhs_hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let width_ok = {
            let w = &rhs_hi - &rhs_lo;
            w * Rational::from_integer(BigInt::one() << prec as usize) <= Rational::one()
        };
        if width_ok || cf.terminated {
            let dist = dist_to_int(&(RealExpr::int(qn.clone()) * alpha.clone()))?;
            let lhs = RealExpr::int(qn1.clone()) * dist;
            let iv = lhs.enclose(prec)?;
            let (l_lo, l_hi) = (iv.lo_rational(), iv.hi_rational());
            let g1 = (&l_hi - &rhs_lo).abs();
            let g2 = (&rhs_hi - &l_lo).abs();
            let gap = if g1 > g2 { g1 } else { g2 };
            return Ok(BasicRelation { n, lhs, rhs_lo, rhs_hi, gap });
        }
        depth *= 2;
    }
}

/// Rational bounds on `[t_0; t_1, ..., t_k, x]` over x in [1, inf).
fn tail_bounds(t: &[BigInt], exact: bool) -> (Rational, Rational) {
    // [t_0; ..., t_{k-1}, x] = (P x + P') / (Q x + Q') from the convergents
    let head = convergents_of(&t[..t.len() - 1]);
    let (p, q, p1, q1) = match head.len() {
        0 => (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()),
        1 => (head[0].p.clone(), head[0].q.clone(), BigInt::one(), BigInt::zero()),
        k => (head[k - 1].p.clone(), head[k - 1].q.clone(), head[k - 2].p.clone(), head[k - 2].q.clone()),
    };
    let eval = |x: BigInt| Rational::new(&p * &x + &p1, &q * &x + &q1);
    let last = t[t.len() - 1].clone();
    if exact {
        let v = eval(last);
        return (v.clone(), v);
    }
    let a = eval(last.clone());
    let b = eval(last + 1);
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Windowed maximum of the Dirichlet products over n in [N/2, N). This is an
/// estimator of the limsup, not a certified value.
pub fn limsup_estimate(alpha: &RealExpr, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput("need N >= 2".into()));
    }
    let prods = dirichlet_products(alpha, n)?;
    let from = n / 2;
    let best = prods.iter().filter(|d| d.n >= from).map(|d| d.product.to_f64()).fold(f64::NEG_INFINITY, f64::max);
    if best.is_finite() {
        Ok(best)
    } else {
        prods.iter().map(|d| d.product.to_f64()).reduce(f64::max).ok_or_else(|| Error::InvalidInput("no products".into()))
    }
}

/// Periodic continued fraction `[a0; pre..., (period)...]` as an exact surd.
pub fn periodic_surd(a0: i64, pre: &[i64], period: &[i64]) -> Surd {
    assert!(!period.is_empty() && period.iter().all(|&a| a >= 1));
    // y = [period; y] solves y = (P y + P') / (Q y + Q')
    let terms: Vec<BigInt> = period.iter().map(|&a| BigInt::from(a)).collect();
    let conv = convergents_of(&terms);
    let k = conv.len();
    let (pk, qk) = (&conv[k - 1].p, &conv[k - 1].q);
    let (pk1, qk1) = if k >= 2 { (conv[k - 2].p.clone(), conv[k - 2].q.clone()) } else { (BigInt::one(), BigInt::zero()) };
    // qk y^2 + (qk1 - pk) y - pk1 = 0, positive root
    let a = Rational::from_integer(qk.clone());
    let b = Rational::from_integer(&qk1 - pk);
    let c = Rational::from_integer(-pk1);
    let disc = &b * &b - Rational::from_integer(BigInt::from(4)) * &a * &c;
    let root = Surd::sqrt_of(&disc).unwrap();
    let two_a = Rational::from_integer(BigInt::from(2)) * &a;
    let mut y = Surd::rational(-&b / &two_a).add(&root.mul(&Surd::rational(Rational::one() / &two_a)).unwrap()).unwrap();
    for &t in pre.iter().rev() {
        y = Surd::rational(Rational::from_integer(BigInt::from(t))).add(&y.recip().unwrap()).unwrap();
    }
    Surd::rational(Rational::from_integer(BigInt::from(a0))).add(&y.recip().unwrap()).unwrap()
}
