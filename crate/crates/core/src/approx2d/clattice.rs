//! The lattice `L = q Z^2 + Z P` of values `c(u) = q p - x P` for a
//! primitive `w = (q, P)`. Every u is determined by c(u) up to multiples
//! of w, and `|x P/q - p| = |c(u)| / q`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{ceil_c_minus_sqrt, egcd, floor_c_plus_sqrt, floor_rat, Rational};
use crate::lattice3::{add, scale, IVec3};

pub type C2 = [BigInt; 2];

#[derive(Debug, Clone)]
struct Gen {
    c: C2,
    pre: IVec3,
}

pub fn norm2(c: &C2) -> BigInt {
    &c[0] * &c[0] + &c[1] * &c[1]
}

fn combine(a: &Gen, ka: &BigInt, b: &Gen, kb: &BigInt) -> Gen {
    Gen {
        c: [ka * &a.c[0] + kb * &b.c[0], ka * &a.c[1] + kb * &b.c[1]],
        pre: add(&scale(ka, &a.pre), &scale(kb, &b.pre)),
    }
}

/// Reduced basis of L with a preimage for each basis vector.
#[derive(Debug, Clone)]
pub struct CLattice {
    basis: [Gen; 2],
    w: IVec3,
}

impl CLattice {
    pub fn new(w: &IVec3) -> Self {
        let q = &w[0];
        let gens = [
            Gen { c: [q.clone(), BigInt::zero()], pre: [BigInt::zero(), BigInt::one(), BigInt::zero()] },
            Gen { c: [BigInt::zero(), q.clone()], pre: [BigInt::zero(), BigInt::zero(), BigInt::one()] },
            Gen { c: [w[1].clone(), w[2].clone()], pre: [-BigInt::one(), BigInt::zero(), BigInt::zero()] },
        ];
        // echelon form on the first coordinate, then the second
        let mut rows: Vec<Gen> = gens.to_vec();
        let mut top: Option<Gen> = None;
        let mut rest = Vec::new();
        for g in rows.drain(..) {
            match top.take() {
                None => top = Some(g),
                Some(t) => {
                    let (e, lo) = egcd_pair(&t, &g, 0);
                    top = Some(e);
                    rest.push(lo);
                }
            }
        }
        let mut second: Option<Gen> = None;
        for g in rest {
            match second.take() {
                None => second = Some(g),
                Some(t) => second = Some(egcd_pair(&t, &g, 1).0),
            }
        }
        let b = lagrange(top.unwrap(), second.unwrap());
        CLattice { basis: b, w: w.clone() }
    }

    /// All c in L with `0 < |c|^2 < bound`, each with one preimage.
    pub fn short_vectors(&self, bound: &Rational) -> Vec<(C2, IVec3)> {
        self.vectors(bound, false)
    }

    /// As `short_vectors`, including `|c|^2 = bound` when `closed`.
    pub fn vectors(&self, bound: &Rational, closed: bool) -> Vec<(C2, IVec3)> {
        let [b1, b2] = &self.basis;
        let n1 = Rational::from_integer(norm2(&b1.c));
        let dot12 = Rational::from_integer(&b1.c[0] * &b2.c[0] + &b1.c[1] * &b2.c[1]);
        let mu = &dot12 / &n1;
        let n2s = Rational::from_integer(norm2(&b2.c)) - &mu * &dot12;
        let mut out = Vec::new();
        let zero = Rational::zero();
        let jmax = floor_c_plus_sqrt(&zero, &(bound / &n2s));
        let mut j = -jmax.clone();
        while j <= jmax {
            let jr = Rational::from_integer(j.clone());
            let rest = bound - &n2s * &jr * &jr;
            if rest.is_positive() || (closed && rest.is_zero()) {
                let centre = -(&mu * &jr);
                let s = &rest / &n1;
                let mut i = ceil_c_minus_sqrt(&centre, &s);
                let ihi = floor_c_plus_sqrt(&centre, &s);
                while i <= ihi {
                    let g = combine(b1, &i, b2, &j);
                    let n = Rational::from_integer(norm2(&g.c));
                    if !n.is_zero() && (&n < bound || (closed && &n == bound)) {
                        out.push((g.c, g.pre));
                    }
                    i += 1;
                }
            }
            j += 1;
        }
        out
    }

    pub fn w(&self) -> &IVec3 {
        &self.w
    }
}

fn egcd_pair(a: &Gen, b: &Gen, k: usize) -> (Gen, Gen) {
    let (x, y) = (&a.c[k], &b.c[k]);
    if y.is_zero() {
        return (a.clone(), b.clone());
    }
    if x.is_zero() {
        return (b.clone(), a.clone());
    }
    let (g, s, t) = egcd(x, y);
    let e = combine(a, &s, b, &t);
    let lo = combine(a, &(y / &g), b, &-(x / &g));
    (e, lo)
}

fn lagrange(mut a: Gen, mut b: Gen) -> [Gen; 2] {
    loop {
        if norm2(&a.c) > norm2(&b.c) {
            std::mem::swap(&mut a, &mut b);
        }
        let na = norm2(&a.c);
        let ab = &a.c[0] * &b.c[0] + &a.c[1] * &b.c[1];
        let m = floor_rat(&(Rational::new(ab * 2 + &na, na.clone() * 2)));
        if m.is_zero() {
            return [a, b];
        }
        b = combine(&b, &BigInt::one(), &a, &-m);
        if norm2(&b.c) >= na {
            return [a, b];
        }
    }
}

