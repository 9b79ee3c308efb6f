//! Integer lattice geometry around a primitive point w = (q, p1, p2): the
//! rational plane through 0 and w, its neighbor planes and the frame in
//! which that plane becomes `z = 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::exact::{egcd, floor_rat, Rational, RealExpr, Surd};
use crate::{Error, Result};

pub type IVec3 = [BigInt; 3];

pub fn ivec(x: i64, y: i64, z: i64) -> IVec3 {
    [x.into(), y.into(), z.into()]
}

pub fn dot(a: &IVec3, b: &IVec3) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub fn add(a: &IVec3, b: &IVec3) -> IVec3 {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

pub fn scale(k: &BigInt, a: &IVec3) -> IVec3 {
    [k * &a[0], k * &a[1], k * &a[2]]
}

pub fn neg(a: &IVec3) -> IVec3 {
    [-&a[0], -&a[1], -&a[2]]
}

pub fn det3(a: &IVec3, b: &IVec3, c: &IVec3) -> BigInt {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

pub fn gcd3(a: &IVec3) -> BigInt {
    a[0].gcd(&a[1]).gcd(&a[2])
}

pub fn is_primitive(a: &IVec3) -> bool {
    gcd3(a).is_one()
}

/// `{u : n . u = level}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPlane {
    pub normal: IVec3,
    pub level: BigInt,
}

fn check_point(w: &IVec3) -> Result<()> {
    if !w[0].is_positive() {
        return Err(Error::DomainViolation("first coordinate must be positive".into()));
    }
    if !is_primitive(w) {
        return Err(Error::DomainViolation("point must be primitive".into()));
    }
    Ok(())
}

fn yz_norm(n: &IVec3) -> BigInt {
    &n[1] * &n[1] + &n[2] * &n[2]
}

/// Ordering key of candidate normals: shortest (n_y, n_z) first, then
/// smallest |n_y|, then lexicographic.
fn normal_key(n: &IVec3) -> (BigInt, BigInt, IVec3) {
    (yz_norm(n), n[1].abs(), n.clone())
}

fn sign_normalize(n: IVec3) -> IVec3 {
    let first = if !n[1].is_zero() { &n[1] } else { &n[2] };
    if first.is_negative() {
        neg(&n)
    } else {
        n
    }
}

/// A basis of the integer normals of planes through 0 and w.
fn normal_basis(w: &IVec3) -> (IVec3, IVec3) {
    let (q, p1, p2) = (&w[0], &w[1], &w[2]);
    let (g1, s, t) = egcd(q, p1);
    let k1 = [p1 / &g1, -(q / &g1), BigInt::zero()];
    let k2 = [&s * p2, &t * p2, -g1];
    (k1, k2)
}

/// Gauss reduction of a rank-2 lattice under the (n_y, n_z) norm.
fn gauss_reduce(mut a: IVec3, mut b: IVec3) -> (IVec3, IVec3) {
    loop {
        if yz_norm(&a) > yz_norm(&b) {
            std::mem::swap(&mut a, &mut b);
        }
        let na = yz_norm(&a);
        let ab = &a[1] * &b[1] + &a[2] * &b[2];
        let m = floor_rat(&(Rational::new(ab, na.clone()) + Rational::new(BigInt::one(), BigInt::from(2))));
        if m.is_zero() {
            return (a, b);
        }
        b = add(&b, &scale(&-m, &a));
        if yz_norm(&b) >= na {
            return (a, b);
        }
    }
}

/// Canonical plane through 0 and w: the normal with the shortest
/// (n_y, n_z) part, ties broken by |n_y| and then lexicographically, with
/// the first nonzero of (n_y, n_z) positive.
pub fn plane_through(w: &IVec3) -> Result<RationalPlane> {
    check_point(w)?;
    let (k1, k2) = normal_basis(w);
    let (a, b) = gauss_reduce(k1, k2);
    let mut best: Option<IVec3> = None;
    for i in -2i64..=2 {
        for j in -2i64..=2 {
            if i == 0 && j == 0 {
                continue;
            }
            let n = sign_normalize(add(&scale(&i.into(), &a), &scale(&j.into(), &b)));
            if !is_primitive(&n) {
                continue;
            }
            if best.as_ref().is_none_or(|c| normal_key(&n) < normal_key(c)) {
                best = Some(n);
            }
        }
    }
    Ok(RationalPlane { normal: best.expect("reduced basis yields a primitive normal"), level: BigInt::zero() })
}

/// Lattice points on `n . u = 1` and `n . u = -1`.
pub fn neighbor_planes(plane: &RationalPlane) -> Result<(IVec3, IVec3)> {
    let n = &plane.normal;
    if !plane.level.is_zero() || !is_primitive(n) {
        return Err(Error::DomainViolation("need a primitive plane through the origin".into()));
    }
    let plus = match (0..3).find(|&i| n[i].abs().is_one()) {
        Some(i) => {
            let mut u = ivec(0, 0, 0);
            u[i] = n[i].clone();
            u
        }
        None => {
            let (g12, s, t) = egcd(&n[0], &n[1]);
            let (_, s2, t2) = egcd(&g12, &n[2]);
            [&s2 * &s, &s2 * &t, t2]
        }
    };
    debug_assert!(dot(n, &plus).is_one());
    let minus = neg(&plus);
    Ok((plus, minus))
}

/// Exact description of one construction step's lattice: the plane
/// `n . u = 0` through w with lattice basis (w, g2), and the neighbor point
/// w0p with `n . w0p = 1`.
#[derive(Debug, Clone)]
pub struct Frame {
    pub n: IVec3,
    pub w: IVec3,
    pub g2: IVec3,
    pub w0p: IVec3,
    pub q: BigInt,
    /// `n_y^2 + n_z^2`.
    pub big_n: BigInt,
    pub h2: Rational,
    pub d2: Rational,
    pub a: BigInt,
    /// `y~(w0p) * sqrt(N)`, rational.
    pub b_scaled: Rational,
    pub h: Surd,
    pub d: Surd,
    pub b: Surd,
}

/// `y~(u) * sqrt(N)` for the frame normal n and base point w.
fn yr(n: &IVec3, w: &IVec3, u: &IVec3) -> Rational {
    let lin = &n[2] * &u[1] - &n[1] * &u[2];
    let shift = &n[2] * &w[1] - &n[1] * &w[2];
    Rational::from_integer(lin) - Rational::new(&u[0] * shift, w[0].clone())
}

/// Frame for w. Branch 0 uses the neighbor plane on the side of the
/// canonical normal, branch 1 the opposite one; the normal is oriented so
/// the chosen plane is `n . u = 1`.
pub fn build_frame(w: &IVec3, branch: bool) -> Result<Frame> {
    let plane = plane_through(w)?;
    let n = if branch { neg(&plane.normal) } else { plane.normal.clone() };
    let oriented = RationalPlane { normal: n.clone(), level: BigInt::zero() };
    let (w0, _) = neighbor_planes(&oriented)?;
    let q = w[0].clone();
    let big_n = yz_norm(&n);

    // basis of the plane lattice, then complete w to a basis
    let g = n[1].gcd(&n[2]);
    let (_, s, t) = egcd(&n[1], &n[2]);
    let e1 = [BigInt::zero(), &n[2] / &g, -(&n[1] / &g)];
    let e2 = [g.clone(), -(&n[0] * &s), -(&n[0] * &t)];
    let (alpha, beta) = coords_in(&e1, &e2, w)?;
    let (_, x, y) = egcd(&alpha, &beta);
    // alpha*x + beta*y = 1, so g2 = -y e1 + x e2 has det(w, g2) = 1
    let mut g2 = add(&scale(&-y, &e1), &scale(&x, &e2));
    let step = Rational::new(big_n.clone(), q.clone());
    let yg = yr(&n, w, &g2);
    if yg == -&step {
        g2 = neg(&g2);
    } else if yg != step {
        return Err(Error::DomainViolation("frame basis completion failed".into()));
    }
    // x-coordinate of g2 into (0, q]
    let k = -((&g2[0] - BigInt::one()).div_floor(&q));
    g2 = add(&g2, &scale(&k, w));

    // w0p: y~ in [0, d) and x in [0, q)
    let j = -floor_rat(&(yr(&n, w, &w0) / &step));
    let mut w0p = add(&w0, &scale(&j, &g2));
    let i = -w0p[0].div_floor(&q);
    w0p = add(&w0p, &scale(&i, w));
    let b_scaled = yr(&n, w, &w0p);

    let nr = Rational::from_integer(big_n.clone());
    let qr = Rational::from_integer(q.clone());
    let h2 = Rational::one() / &nr;
    let d2 = &nr / (&qr * &qr);
    let h = Surd::sqrt_of(&h2).expect("positive");
    let d = Surd::sqrt_of(&d2).expect("positive");
    // b = b_scaled / sqrt(N) = b_scaled * sqrt(N) / N
    let b = Surd::sqrt_of(&nr).unwrap().mul(&Surd::rational(&b_scaled / &nr)).unwrap();
    Ok(Frame { a: g2[0].clone(), n, w: w.clone(), g2, w0p, q, big_n, h2, d2, b_scaled, h, d, b })
}

/// Integer (alpha, beta) with u = alpha e1 + beta e2.
fn coords_in(e1: &IVec3, e2: &IVec3, u: &IVec3) -> Result<(BigInt, BigInt)> {
    // e1[0] = 0, so beta comes from the x coordinate
    let (beta, r) = u[0].div_rem(&e2[0]);
    if !r.is_zero() {
        return Err(Error::DomainViolation("point not in plane lattice".into()));
    }
    let rest = add(u, &scale(&-&beta, e2));
    let idx = if !e1[1].is_zero() { 1 } else { 2 };
    let (alpha, r) = rest[idx].div_rem(&e1[idx]);
    if !r.is_zero() || scale(&alpha, e1) != rest {
        return Err(Error::DomainViolation("point not in plane lattice".into()));
    }
    Ok((alpha, beta))
}

/// Coordinates of a lattice point in the frame basis and its tilde image.
#[derive(Debug, Clone)]
pub struct TildeCoords {
    /// u = alpha w + beta g2 + gamma w0p.
    pub coeffs: [BigInt; 3],
    pub x: BigInt,
    pub y: RealExpr,
    pub z: RealExpr,
}

pub fn tilde_coords(u: &IVec3, f: &Frame) -> TildeCoords {
    let gamma = dot(&f.n, u);
    let yu = yr(&f.n, &f.w, u);
    let step = Rational::new(f.big_n.clone(), f.q.clone());
    let beta = ((yu - Rational::from_integer(gamma.clone()) * &f.b_scaled) / step).to_integer();
    let rest = &u[0] - &beta * &f.a - &gamma * &f.w0p[0];
    let alpha = rest / &f.q;
    let y = RealExpr::from(&beta) * RealExpr::from_surd(&f.d) + RealExpr::from(&gamma) * RealExpr::from_surd(&f.b);
    let z = RealExpr::from(&gamma) * RealExpr::from_surd(&f.h);
    TildeCoords { coeffs: [alpha, beta, gamma], x: u[0].clone(), y, z }
}

impl Frame {
    /// `y~(u) * sqrt(N)` as an exact rational.
    pub fn y_scaled(&self, u: &IVec3) -> Rational {
        yr(&self.n, &self.w, u)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v = |u: &IVec3| json!([u[0].to_string(), u[1].to_string(), u[2].to_string()]);
        let r = crate::exact::format_rational;
        json!({
            "n": v(&self.n),
            "w": v(&self.w),
            "g2": v(&self.g2),
            "w0p": v(&self.w0p),
            "q": self.q.to_string(),
            "h2": r(&self.h2),
            "d2": r(&self.d2),
            "a": self.a.to_string(),
            "h": format!("{:.20}", self.h.to_f64()),
            "d": format!("{:.20}", self.d.to_f64()),
            "b": format!("{:.20}", self.b.to_f64()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn plane_examples() {
        assert_eq!(plane_through(&ivec(1, 0, 0)).unwrap().normal, ivec(0, 0, 1));
        let n = plane_through(&ivec(2, 1, 1)).unwrap().normal;
        assert!(dot(&n, &ivec(2, 1, 1)).is_zero() && is_primitive(&n));
        assert_eq!(yz_norm(&n), BigInt::from(2));
        assert!(plane_through(&ivec(0, 1, 0)).is_err());
        let p = RationalPlane { normal: ivec(0, 0, 1), level: BigInt::zero() };
        assert_eq!(neighbor_planes(&p).unwrap(), (ivec(0, 0, 1), ivec(0, 0, -1)));
        let p = RationalPlane { normal: ivec(1, -1, -1), level: BigInt::zero() };
        assert_eq!(neighbor_planes(&p).unwrap().0, ivec(1, 0, 0));
        let p = RationalPlane { normal: ivec(6, 10, 15), level: BigInt::zero() };
        let (u, m) = neighbor_planes(&p).unwrap();
        assert!(dot(&p.normal, &u).is_one() && is_primitive(&u) && m == neg(&u));
    }

    #[test]
    fn frame_examples() {
        let f = build_frame(&ivec(1, 0, 0), false).unwrap();
        assert_eq!((f.q.clone(), f.h2.clone(), f.d2.clone()), (BigInt::one(), int(1), int(1)));
        let f = build_frame(&ivec(2, 1, 1), false).unwrap();
        assert_eq!((f.h2.clone(), f.d2.clone()), (rat(1, 2), rat(1, 2)));
        let t = tilde_coords(&f.w, &f);
        assert_eq!(t.coeffs, [BigInt::one(), BigInt::zero(), BigInt::zero()]);
        let t = tilde_coords(&f.g2, &f);
        assert_eq!(t.coeffs, [BigInt::zero(), BigInt::one(), BigInt::zero()]);
        let t = tilde_coords(&f.w0p, &f);
        assert_eq!(t.coeffs, [BigInt::zero(), BigInt::zero(), BigInt::one()]);
        assert_eq!(t.z.surd().unwrap(), &f.h);
    }
}
