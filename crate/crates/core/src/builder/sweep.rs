//! Candidate enumeration for one step. For the previous record w = (q, P)
//! every integer u = (x, p) maps to `c(u) = q p - x P`, and the image
//! is the lattice `L = q Z^2 + Z P`; u is determined by c(u) up to
//! multiples of w. Then `V/pi = |c|^2 / x`, `R^2 = |c|^2 / x^2` and
//! `|p/x - P/q|^2 = |c|^2 / (q x)^2`, so candidates are swept by c.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub use crate::approx2d::clattice::CLattice;
use crate::approx2d::clattice::{norm2, C2};
use crate::exact::{floor_rat, Rational};
use crate::lattice3::{add, dot, scale, IVec3};

/// A candidate u with its c-value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Candidate {
    pub x: BigInt,
    pub c_norm2: BigInt,
    pub c: C2,
    pub u: IVec3,
}

/// Bounds for one sweep window.
pub struct Window<'a> {
    /// Exclusive lower bound on x.
    pub x_after: &'a BigInt,
    /// Inclusive upper bound on x.
    pub x_max: &'a BigInt,
    /// Rational bounds with `lo_down <= lo` and `hi_up >= hi` for V/pi.
    pub lo_down: &'a Rational,
    pub hi_up: &'a Rational,
    /// Lower bound for `x^2 q^2 / |c|^2`.
    pub step_factor: &'a Rational,
    /// Keep only c on this side of the plane through w (sign of n . u).
    pub normal: &'a IVec3,
    pub negative_side: bool,
}

/// Candidates of one window in increasing (x, |c|^2, c) order, produced
/// lazily: each c contributes the arithmetic progression of its admissible x.
pub struct WindowStream {
    heap: BinaryHeap<Reverse<(Candidate, BigInt)>>,
    w: IVec3,
}

impl Iterator for WindowStream {
    type Item = Candidate;

    fn next(&mut self) -> Option<Candidate> {
        let Reverse((cand, hi)) = self.heap.pop()?;
        let q = &self.w[0];
        let x = &cand.x + q;
        if x <= hi {
            let u = add(&cand.u, &self.w);
            let next = Candidate { x, c_norm2: cand.c_norm2.clone(), c: cand.c.clone(), u };
            self.heap.push(Reverse((next, hi)));
        }
        Some(cand)
    }
}

pub fn window_candidates(lat: &CLattice, win: &Window<'_>) -> WindowStream {
    let w = lat.w();
    let q = &w[0];
    let bound = win.hi_up * Rational::from_integer(win.x_max.clone());
    let mut heap = BinaryHeap::new();
    for (c, pre) in lat.short_vectors(&bound) {
        let side = dot(win.normal, &pre);
        let ok_side = if win.negative_side { side.is_negative() } else { side.is_positive() };
        if !ok_side {
            continue;
        }
        let cn = norm2(&c);
        let cnr = Rational::from_integer(cn.clone());
        // x > |c|^2 / hi, x > |c| sqrt(step_factor) / q, x > x_after
        let mut lo = floor_rat(&(&cnr / win.hi_up));
        let s5 = floor_rat(&(&cnr * win.step_factor / Rational::from_integer(q * q))).sqrt();
        lo = lo.max(s5).max(win.x_after.clone()).max(q.clone());
        let mut hi = win.x_max.clone();
        if win.lo_down.is_positive() {
            hi = hi.min(floor_rat(&(&cnr / win.lo_down)) + 1);
        }
        // smallest x > lo with x = pre_x (mod q)
        let r = (&pre[0] - &lo).mod_floor(q);
        let x = &lo + if r.is_zero() { q.clone() } else { r };
        if x <= hi {
            let k = (&x - &pre[0]) / q;
            let u = add(&pre, &scale(&k, w));
            heap.push(Reverse((Candidate { x, c_norm2: cn, c, u }, hi)));
        }
    }
    WindowStream { heap, w: w.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice3::ivec;

    fn c_of(w: &IVec3, u: &IVec3) -> C2 {
        [&w[0] * &u[1] - &u[0] * &w[1], &w[0] * &u[2] - &u[0] * &w[2]]
    }

    #[test]
    fn short_vectors_match_brute_force() {
        for w in [ivec(7, 3, 5), ivec(12, 5, 9), ivec(1, 0, 0)] {
            let lat = CLattice::new(&w);
            let bound = Rational::from_integer(BigInt::from(400));
            let mut got: Vec<C2> = lat
                .short_vectors(&bound)
                .into_iter()
                .map(|(c, pre)| {
                    assert_eq!(c_of(&w, &pre), c);
                    c
                })
                .collect();
            got.sort();
            let mut want = Vec::new();
            let q = w[0].clone();
            for x in 0..q.to_string().parse::<i64>().unwrap() {
                for a in -30i64..=30 {
                    for b in -30i64..=30 {
                        let c = c_of(&w, &ivec(x, a, b));
                        let n = norm2(&c);
                        if !n.is_zero() && n < BigInt::from(400) && !want.contains(&c) {
                            want.push(c);
                        }
                    }
                }
            }
            want.sort();
            assert_eq!(got, want, "w={w:?}");
        }
    }
}
