//! Integer points in a rational ellipsoid `(u - c)^T M (u - c) <= bound` in
//! three dimensions: lattice reduction of the form followed by an exact
//! depth-first search over the Gram-Schmidt levels.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{ceil_c_minus_sqrt, floor_c_plus_sqrt, Rational};

type Mat = [[Rational; 3]; 3];
type IMat = [[BigInt; 3]; 3];

fn zero() -> Rational {
    Rational::zero()
}

fn gram(basis: &IMat, m: &Mat) -> Mat {
    let mut g: Mat = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut s = zero();
            for a in 0..3 {
                if basis[i][a].is_zero() {
                    continue;
                }
                for b in 0..3 {
                    if basis[j][b].is_zero() || m[a][b].is_zero() {
                        continue;
                    }
                    s += &m[a][b] * Rational::from_integer(&basis[i][a] * &basis[j][b]);
                }
            }
            g[i][j] = s;
        }
    }
    g
}

/// Gram-Schmidt data from a Gram matrix: squared lengths `d` and
/// coefficients `mu[i][j]` for j < i.
fn gso(g: &Mat) -> ([Rational; 3], Mat) {
    let mut d: [Rational; 3] = Default::default();
    let mut mu: Mat = Default::default();
    for i in 0..3 {
        for j in 0..i {
            let mut s = g[i][j].clone();
            for k in 0..j {
                s -= &mu[i][k] * &mu[j][k] * &d[k];
            }
            mu[i][j] = s / &d[j];
        }
        let mut s = g[i][i].clone();
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &d[k];
        }
        d[i] = s;
    }
    (d, mu)
}

fn round_rat(r: &Rational) -> BigInt {
    (r + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// LLL with delta = 3/4 on the rows of `basis` under the form `m`.
pub fn lll(mut basis: IMat, m: &Mat) -> IMat {
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1usize;
    let mut guard = 0usize;
    while k < 3 {
        guard += 1;
        if guard > 10_000 {
            break;
        }
        for j in (0..k).rev() {
            let (_, mu) = gso(&gram(&basis, m));
            let r = round_rat(&mu[k][j]);
            if !r.is_zero() {
                for a in 0..3 {
                    let t = &r * &basis[j][a];
                    basis[k][a] -= t;
                }
            }
        }
        let g = gram(&basis, m);
        let (d, mu) = gso(&g);
        let lhs = &d[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &d[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    basis
}

/// Floating-point LLL pass on a Gram matrix; returns the unimodular row
/// transform it applied. Only the quality of the reduction depends on
/// rounding, never the exactness of what is built on top of it.
fn lll_float(mut g: [[f64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut t = [[1i64, 0, 0], [0, 1, 0], [0, 0, 1]];
    let gso_f = |g: &[[f64; 3]; 3]| {
        let mut d = [0f64; 3];
        let mut mu = [[0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..i {
                let mut s = g[i][j];
                for k in 0..j {
                    s -= mu[i][k] * mu[j][k] * d[k];
                }
                mu[i][j] = s / d[j];
            }
            let mut s = g[i][i];
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * d[k];
            }
            d[i] = s;
        }
        (d, mu)
    };
    let mut k = 1usize;
    for _ in 0..1000 {
        if k >= 3 {
            break;
        }
        for j in (0..k).rev() {
            let (_, mu) = gso_f(&g);
            let r = mu[k][j].round();
            if r != 0.0 && r.is_finite() && r.abs() < 1e15 {
                // b_k -= r b_j
                let gkk = g[k][k] - 2.0 * r * g[k][j] + r * r * g[j][j];
                for i in 0..3 {
                    if i != k {
                        g[k][i] -= r * g[j][i];
                        g[i][k] = g[k][i];
                    }
                }
                g[k][k] = gkk;
                let ri = r as i64;
                for a in 0..3 {
                    t[k][a] = t[k][a].saturating_sub(ri.saturating_mul(t[j][a]));
                }
            }
        }
        let (d, mu) = gso_f(&g);
        if !(d[k] < (0.75 - mu[k][k - 1] * mu[k][k - 1]) * d[k - 1]) {
            k += 1;
        } else {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            t.swap(k, k - 1);
            k = k.saturating_sub(1).max(1);
        }
    }
    t
}

/// Reduction by repeated floating passes, each seeded with the exact Gram
/// matrix of the current basis.
fn reduce(m: &Mat) -> IMat {
    let mut basis: IMat = [
        [BigInt::one(), BigInt::zero(), BigInt::zero()],
        [BigInt::zero(), BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::zero(), BigInt::one()],
    ];
    for _ in 0..8 {
        let g = gram(&basis, m);
        let gf = g.clone().map(|row| row.map(|x| crate::exact::to_f64(&x)));
        if gf.iter().flatten().any(|x| !x.is_finite()) {
            return lll(basis, m);
        }
        let t = lll_float(gf);
        if t == [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            return basis;
        }
        let mut next: IMat = Default::default();
        for i in 0..3 {
            for a in 0..3 {
                let mut s = BigInt::zero();
                for k in 0..3 {
                    s += BigInt::from(t[i][k]) * &basis[k][a];
                }
                next[i][a] = s;
            }
        }
        if !det(&next).abs().is_one() {
            return lll(basis, m);
        }
        basis = next;
    }
    basis
}

fn det(b: &IMat) -> BigInt {
    &b[0][0] * (&b[1][1] * &b[2][2] - &b[1][2] * &b[2][1]) - &b[0][1] * (&b[1][0] * &b[2][2] - &b[1][2] * &b[2][0])
        + &b[0][2] * (&b[1][0] * &b[2][1] - &b[1][1] * &b[2][0])
}

fn inverse_unimodular(b: &IMat) -> IMat {
    // adjugate divided by the determinant (+-1)
    let c = |i: usize, j: usize| -> BigInt {
        let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let s: Vec<usize> = (0..3).filter(|&x| x != j).collect();
        &b[r[0]][s[0]] * &b[r[1]][s[1]] - &b[r[0]][s[1]] * &b[r[1]][s[0]]
    };
    let det = &b[0][0] * c(0, 0) - &b[0][1] * c(0, 1) + &b[0][2] * c(0, 2);
    debug_assert!(det.abs().is_one());
    let mut inv: IMat = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let sign = if (i + j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            inv[j][i] = sign * c(i, j) * &det;
        }
    }
    inv
}

/// All integer u with `(u - c)^T M (u - c) <= bound`. `m` must be positive
/// definite. `cap` bounds the number of reported points.
pub fn ellipsoid_points(m: &Mat, c: &[Rational; 3], bound: &Rational, cap: usize) -> Vec<[BigInt; 3]> {
    let basis = reduce(m);
    let g = gram(&basis, m);
    let (d, mu) = gso(&g);
    // u = sum_i y_i b_i (rows), so y = u * B^{-1}
    let inv = inverse_unimodular(&basis);
    let mut y0: [Rational; 3] = Default::default();
    for (i, y) in y0.iter_mut().enumerate() {
        let mut s = zero();
        for a in 0..3 {
            s += &c[a] * Rational::from_integer(inv[a][i].clone());
        }
        *y = s;
    }
    let mut out = Vec::new();
    let mut y: [BigInt; 3] = Default::default();
    search(2, bound.clone(), &d, &mu, &y0, &mut y, &basis, &mut out, cap);
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    level: usize,
    budget: Rational,
    d: &[Rational; 3],
    mu: &Mat,
    y0: &[Rational; 3],
    y: &mut [BigInt; 3],
    basis: &IMat,
    out: &mut Vec<[BigInt; 3]>,
    cap: usize,
) {
    if out.len() >= cap {
        return;
    }
    // shift from already fixed coordinates: t_j + sum_{i>j} mu[i][j] t_i
    let mut shift = zero();
    for i in level + 1..3 {
        shift += &mu[i][level] * (Rational::from_integer(y[i].clone()) - &y0[i]);
    }
    let center = &y0[level] - &shift;
    let s = &budget / &d[level];
    let lo = ceil_c_minus_sqrt(&center, &s);
    let hi = floor_c_plus_sqrt(&center, &s);
    let mut v = lo;
    while v <= hi {
        let t = Rational::from_integer(v.clone()) - &center;
        let used = &d[level] * &t * &t;
        let rest = &budget - used;
        if !rest.is_negative() {
            y[level] = v.clone();
            if level == 0 {
                let mut u: [BigInt; 3] = Default::default();
                for (a, ua) in u.iter_mut().enumerate() {
                    let mut s = BigInt::zero();
                    for i in 0..3 {
                        s += &y[i] * &basis[i][a];
                    }
                    *ua = s;
                }
                out.push(u);
                if out.len() >= cap {
                    return;
                }
            } else {
                search(level - 1, rest, d, mu, y0, y, basis, out, cap);
            }
        }
        v += 1;
    }
}
