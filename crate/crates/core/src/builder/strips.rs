//! Candidate search along the strips of the fixed-volume family in the
//! neighbor plane. Heights are handled through the exact scaled coordinate
//! `Y = y~ sqrt(N)`, which is rational on lattice points; with `h = 1/sqrt(N)`
//! and `y2 = lambda d` the family parabola reads `x1 = q^2 (Y^2 + 1) / (N lambda)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{check_candidate, epsilon_search, frame_for, lambda_star, BuildOptions, ChartParams, ConstructionState, Outcome, TargetInterval};
use crate::approx2d::MAX_PRECISION;
use crate::exact::{certified_compare, certified_floor, CertifiedOrdering, Rational, RealExpr};
use crate::lattice3::{add, scale, Frame, IVec3};
use crate::{Error, Result};

/// Lattice point accepted inside strip k.
#[derive(Debug, Clone)]
pub struct StripHit {
    pub k: BigInt,
    pub u: IVec3,
}

fn c_k(f: &Frame, lambda: &RealExpr, k: &BigInt) -> RealExpr {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let base = Rational::from_integer(&f.a + k * &f.q) + Rational::from_integer(f.q.clone()) * half;
    lambda * &RealExpr::rational(base)
}

fn x1_low(f: &Frame, lambda: &RealExpr, y: &RealExpr) -> RealExpr {
    let q2 = RealExpr::from(&(&f.q * &f.q));
    q2 * (y.square() + RealExpr::int(1)) / (RealExpr::from(&f.big_n) * lambda.clone())
}

/// Horizontal width of strip k at its lower edge, between the parabolas of
/// heights `lambda d` and `y2_low`.
pub fn parabola_gap(f: &Frame, lambda: &RealExpr, eps: &RealExpr, k: &BigInt) -> RealExpr {
    let c = c_k(f, lambda, k);
    let y = (&c - eps) / RealExpr::from(&f.q);
    let lo = x1_low(f, lambda, &y);
    &lo * &(eps / &c)
}

fn greater(a: &RealExpr, b: &RealExpr) -> Result<bool> {
    match certified_compare(a, b, MAX_PRECISION) {
        CertifiedOrdering::Undecided(bits) => Err(Error::PrecisionExhausted(bits)),
        o => Ok(o == CertifiedOrdering::Greater),
    }
}

/// Smallest `k >= 0` whose parabola gap exceeds `2q`.
pub fn initial_k_min(f: &Frame, lambda: &RealExpr, eps: &RealExpr) -> Result<BigInt> {
    let target = RealExpr::from(&(&f.q * 2));
    let ok = |k: &BigInt| greater(&parabola_gap(f, lambda, eps, k), &target);
    if ok(&BigInt::zero())? {
        return Ok(BigInt::zero());
    }
    let mut hi = BigInt::one();
    while !ok(&hi)? {
        hi <<= 1;
    }
    let mut lo = &hi >> 1;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if ok(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Lattice points of the neighbor plane strictly inside strip k, ordered by
/// height then denominator.
pub fn strip_points(f: &Frame, lambda: &RealExpr, eps: &RealExpr, k: &BigInt) -> Result<Vec<IVec3>> {
    let c = c_k(f, lambda, k);
    let n = RealExpr::from(&f.big_n);
    let qb = RealExpr::rational(Rational::from_integer(f.q.clone()) * &f.b_scaled);
    let j_lo = -certified_floor(&((&qb - &(&c - eps)) / n.clone()), MAX_PRECISION)?;
    let j_hi = certified_floor(&((&c - &qb) / n), MAX_PRECISION)?;
    let step = Rational::new(f.big_n.clone(), f.q.clone());
    let qe = RealExpr::from(&f.q);
    let ratio = (&c + eps) / c.clone();
    let mut out = Vec::new();
    let mut j = j_lo;
    while j <= j_hi {
        let y = RealExpr::rational(&f.b_scaled + Rational::from_integer(j.clone()) * &step);
        let lo = x1_low(f, lambda, &y);
        let hi = &lo * &ratio;
        let x0 = RealExpr::from(&(&f.w0p[0] + &j * &f.a));
        let i_lo = certified_floor(&((&lo - &x0) / qe.clone()), MAX_PRECISION)? + 1;
        let i_hi = -certified_floor(&((&x0 - &hi) / qe.clone()), MAX_PRECISION)? - 1;
        let base = add(&f.w0p, &scale(&j, &f.g2));
        let mut i = i_lo;
        while i <= i_hi {
            out.push(add(&base, &scale(&i, &f.w)));
            i += 1;
        }
        j += 1;
    }
    Ok(out)
}

/// Scans strips `k_min, k_min + 1, ...` (at most `budget` of them) and
/// returns the first point `accept` takes.
pub fn admissible_k_search(
    f: &Frame,
    lambda: &RealExpr,
    eps: &RealExpr,
    k_min: &BigInt,
    budget: usize,
    mut accept: impl FnMut(&IVec3) -> bool,
) -> Result<Option<StripHit>> {
    let mut k = k_min.clone();
    for _ in 0..budget {
        for u in strip_points(f, lambda, eps, &k)? {
            if accept(&u) {
                return Ok(Some(StripHit { k, u }));
            }
        }
        k += 1;
    }
    Ok(None)
}

pub(super) fn step_strips(
    state: &ConstructionState,
    delta: &TargetInterval,
    branch: bool,
    opts: &BuildOptions,
) -> Result<ConstructionState> {
    let f = frame_for(state, branch)?;
    let cp = ChartParams::from(&f);
    let (mut tested, mut rejected) = (0usize, [0usize; 6]);
    for attempt in 0..4 {
        let lam = lambda_star(delta, attempt)?;
        let eps = epsilon_search(&cp, &lam)?;
        let k_min = initial_k_min(&f, &lam, &eps)? << attempt;
        let mut found = None;
        admissible_k_search(&f, &lam, &eps, &k_min, opts.budget.max(1), |u| {
            if opts.q_cap.as_ref().is_some_and(|cap| &u[0] > cap) {
                return false;
            }
            tested += 1;
            match check_candidate(state, delta, u) {
                Outcome::Reject(i) => {
                    rejected[i] += 1;
                    false
                }
                Outcome::Accept(c) => {
                    found = Some(c);
                    true
                }
            }
        })?;
        if let Some(mut cert) = found {
            cert.tested = tested;
            cert.rejected = rejected;
            return Ok(super::accept(state, delta, branch, *cert));
        }
    }
    Err(Error::SearchExhausted(format!(
        "step {}: no strip point accepted ({tested} tested, rejections by property {rejected:?})",
        state.n() + 1
    )))
}
