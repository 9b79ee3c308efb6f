//! Lattice points of the closed cylinder `0 <= x <= Q, |x v - p| <= R` for a
//! rational axis v.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::clattice::CLattice;
use super::enumerate::ellipsoid_points;
use crate::exact::{ceil_c_minus_sqrt, ceil_rat, floor_c_plus_sqrt, floor_rat, Rational};
use crate::lattice3::{add, scale, IVec3};

/// Where a lattice point sits relative to the cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Interior,
    Lateral,
    BackFace,
    FrontFace,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPoint {
    pub point: IVec3,
    pub kind: PointClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderReport {
    pub empty: bool,
    pub witness: Option<IVec3>,
    pub boundary: Vec<BoundaryPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Auto,
    /// Per-x disk scan.
    Scan,
    /// Ellipsoid enumeration after lattice reduction.
    Enumerate,
    /// Short vectors of the plane lattice `c(u)` relative to the axis point.
    Lattice,
}

/// Longest cylinder handled by the per-x scan under `Engine::Auto`.
pub const SCAN_LIMIT: i64 = 2048;

/// Largest `R^2 max(D, Q)` (D the axis denominator) for the lattice engine
/// under `Engine::Auto`.
pub const LATTICE_LIMIT: i64 = 512;

/// `|x v - p|^2`.
pub fn dist2(v: &[Rational; 2], u: &IVec3) -> Rational {
    let x = Rational::from_integer(u[0].clone());
    let d1 = &x * &v[0] - Rational::from_integer(u[1].clone());
    let d2 = &x * &v[1] - Rational::from_integer(u[2].clone());
    &d1 * &d1 + &d2 * &d2
}

pub fn classify(v: &[Rational; 2], q: &Rational, r2: &Rational, u: &IVec3) -> PointClass {
    let x = Rational::from_integer(u[0].clone());
    if x.is_negative() || &x > q {
        return PointClass::Outside;
    }
    let d = dist2(v, u);
    if &d > r2 {
        return PointClass::Outside;
    }
    if x.is_zero() {
        return PointClass::BackFace;
    }
    if &x == q {
        return PointClass::FrontFace;
    }
    if &d < r2 {
        PointClass::Interior
    } else {
        PointClass::Lateral
    }
}

pub fn cylinder_int_empty(v: &[Rational; 2], q: &Rational, r2: &Rational) -> CylinderReport {
    cylinder_int_empty_with(v, q, r2, Engine::Auto)
}

pub fn cylinder_int_empty_with(v: &[Rational; 2], q: &Rational, r2: &Rational, engine: Engine) -> CylinderReport {
    let mut report = CylinderReport { empty: true, witness: None, boundary: Vec::new() };
    if !q.is_positive() || r2.is_negative() {
        return report;
    }
    let pts = if r2.is_zero() {
        axis_points(v, q)
    } else {
        let engine = match engine {
            Engine::Auto => {
                let d = Rational::from_integer(common_denominator(v));
                let span = if &d > q { d } else { q.clone() };
                if r2 * span <= Rational::from_integer(LATTICE_LIMIT.into()) {
                    Engine::Lattice
                } else if *q <= Rational::from_integer(SCAN_LIMIT.into()) {
                    Engine::Scan
                } else {
                    Engine::Enumerate
                }
            }
            e => e,
        };
        match engine {
            Engine::Scan => scan_points(v, q, r2),
            Engine::Lattice => lattice_points(v, q, r2),
            _ => enumerate_points(v, q, r2),
        }
    };
    let mut best: Option<(Rational, IVec3)> = None;
    for u in pts {
        match classify(v, q, r2, &u) {
            PointClass::Outside => {}
            PointClass::Interior => {
                let d = dist2(v, &u);
                let better = match &best {
                    None => true,
                    Some((bd, bu)) => (&u[0], &d, &u[1], &u[2]) < (&bu[0], bd, &bu[1], &bu[2]),
                };
                if better {
                    best = Some((d, u));
                }
            }
            kind => report.boundary.push(BoundaryPoint { point: u, kind }),
        }
    }
    report.boundary.sort_by(|a, b| a.point.cmp(&b.point));
    report.boundary.dedup();
    if let Some((_, u)) = best {
        report.empty = false;
        report.witness = Some(u);
    }
    report
}

fn common_denominator(v: &[Rational; 2]) -> BigInt {
    v[0].denom().lcm(v[1].denom())
}

/// Lattice points on the axis segment itself.
fn axis_points(v: &[Rational; 2], q: &Rational) -> Vec<IVec3> {
    let d = common_denominator(v);
    let kmax = floor_rat(&(q / Rational::from_integer(d.clone())));
    let mut out = Vec::new();
    let mut k = BigInt::zero();
    while k <= kmax {
        let x = &k * &d;
        let xr = Rational::from_integer(x.clone());
        out.push([x, (&xr * &v[0]).to_integer(), (&xr * &v[1]).to_integer()]);
        k += 1;
    }
    out
}

/// Points with `0 <= x <= Q` and `|x v - p|^2 <= R^2`: with v = P/D every
/// such point has `c = D p - x P` in the lattice of c-values, `|c| <= R D`,
/// and x is fixed modulo D by c.
fn lattice_points(v: &[Rational; 2], q: &Rational, r2: &Rational) -> Vec<IVec3> {
    let d = common_denominator(v);
    let dr = Rational::from_integer(d.clone());
    let w: IVec3 = [d.clone(), (&dr * &v[0]).to_integer(), (&dr * &v[1]).to_integer()];
    let lat = CLattice::new(&w);
    let mut seeds = lat.vectors(&(r2 * &dr * &dr), true);
    seeds.push(([BigInt::zero(), BigInt::zero()], [BigInt::zero(), BigInt::zero(), BigInt::zero()]));
    let xmax = floor_rat(q);
    let mut out = Vec::new();
    for (_, pre) in seeds {
        let k = -pre[0].div_floor(&d);
        let mut u = add(&pre, &scale(&k, &w));
        while u[0] <= xmax {
            out.push(u.clone());
            u = add(&u, &w);
        }
    }
    out
}

fn scan_points(v: &[Rational; 2], q: &Rational, r2: &Rational) -> Vec<IVec3> {
    let mut out = Vec::new();
    let xmax = floor_rat(q);
    let mut x = BigInt::zero();
    while x <= xmax {
        disk_points(v, &x, r2, &mut out);
        x += 1;
    }
    out
}

/// Integer p with `|x v - p|^2 <= r2` for a fixed x.
fn disk_points(v: &[Rational; 2], x: &BigInt, r2: &Rational, out: &mut Vec<IVec3>) {
    let xr = Rational::from_integer(x.clone());
    let c1 = &xr * &v[0];
    let c2 = &xr * &v[1];
    let lo = ceil_c_minus_sqrt(&c1, r2);
    let hi = floor_c_plus_sqrt(&c1, r2);
    let mut p1 = lo;
    while p1 <= hi {
        let t = Rational::from_integer(p1.clone()) - &c1;
        let rest = r2 - &t * &t;
        if !rest.is_negative() {
            let lo2 = ceil_c_minus_sqrt(&c2, &rest);
            let hi2 = floor_c_plus_sqrt(&c2, &rest);
            let mut p2 = lo2;
            while p2 <= hi2 {
                out.push([x.clone(), p1.clone(), p2.clone()]);
                p2 += 1;
            }
        }
        p1 += 1;
    }
}

/// Points of the ellipsoid `|x v - p|^2 / R^2 + (2x/Q - 1)^2 <= 2`, which
/// contains the closed cylinder.
pub(crate) fn enumerate_points(v: &[Rational; 2], q: &Rational, r2: &Rational) -> Vec<IVec3> {
    let inv_r2 = Rational::one() / r2;
    let a = [[v[0].clone(), -Rational::one(), Rational::zero()], [v[1].clone(), Rational::zero(), -Rational::one()]];
    let mut m: [[Rational; 3]; 3] = Default::default();
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let s = &a[0][i] * &a[0][j] + &a[1][i] * &a[1][j];
            *cell = s * &inv_r2;
        }
    }
    m[0][0] += Rational::from_integer(4.into()) / (q * q);
    let half = q / Rational::from_integer(2.into());
    let c = [half.clone(), &half * &v[0], &half * &v[1]];
    ellipsoid_points(&m, &c, &Rational::from_integer(2.into()), usize::MAX)
}

/// Naive reference: every integer point of the bounding box.
pub fn naive_report(v: &[Rational; 2], q: &Rational, r2: &Rational) -> CylinderReport {
    let mut report = CylinderReport { empty: true, witness: None, boundary: Vec::new() };
    if !q.is_positive() || r2.is_negative() {
        return report;
    }
    let qa = ceil_rat(q);
    let r: BigInt = floor_rat(r2).sqrt() + 1;
    let bound = |vi: &Rational| -> BigInt { ceil_rat(&(Rational::from_integer(qa.clone()) * vi.abs())) + &r + 1 };
    let (b1, b2) = (bound(&v[0]), bound(&v[1]));
    let mut best: Option<(Rational, IVec3)> = None;
    let mut x = -qa.clone();
    while x <= qa {
        let mut p1 = -b1.clone();
        while p1 <= b1 {
            let mut p2 = -b2.clone();
            while p2 <= b2 {
                let u = [x.clone(), p1.clone(), p2.clone()];
                match classify(v, q, r2, &u) {
                    PointClass::Outside => {}
                    PointClass::Interior => {
                        let d = dist2(v, &u);
                        let better = match &best {
                            None => true,
                            Some((bd, bu)) => (&u[0], &d, &u[1], &u[2]) < (&bu[0], bd, &bu[1], &bu[2]),
                        };
                        if better {
                            best = Some((d, u));
                        }
                    }
                    kind => report.boundary.push(BoundaryPoint { point: u, kind }),
                }
                p2 += 1;
            }
            p1 += 1;
        }
        x += 1;
    }
    report.boundary.sort_by(|a, b| a.point.cmp(&b.point));
    if let Some((_, u)) = best {
        report.empty = false;
        report.witness = Some(u);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn iv(a: i64, b: i64, c: i64) -> IVec3 {
        [a.into(), b.into(), c.into()]
    }

    #[test]
    fn small_examples() {
        let v = [rat(1, 2), rat(1, 3)];
        let r = cylinder_int_empty(&v, &int(2), &rat(1, 25));
        assert!(r.empty);
        let r = cylinder_int_empty(&v, &int(6), &rat(1, 4));
        assert!(!r.empty);
        assert_eq!(r.witness, Some(iv(2, 1, 1)));
        let r = cylinder_int_empty(&v, &int(6), &int(0));
        assert!(r.empty);
        // origin and (6,3,2) lie on the faces of the degenerate cylinder
        assert_eq!(r.boundary.len(), 2);
    }

    #[test]
    fn engines_agree_on_long_cylinder() {
        let v = [rat(141, 100), rat(173, 100)];
        for (q, r2) in [(int(50), rat(1, 40)), (int(300), rat(1, 900)), (rat(997, 3), rat(1, 5000))] {
            let a = cylinder_int_empty_with(&v, &q, &r2, Engine::Scan);
            let b = cylinder_int_empty_with(&v, &q, &r2, Engine::Enumerate);
            let c = cylinder_int_empty_with(&v, &q, &r2, Engine::Lattice);
            assert_eq!(a, b, "Q={q} R2={r2}");
            assert_eq!(a, c, "Q={q} R2={r2}");
        }
    }

    #[test]
    fn naive_agrees() {
        let v = [rat(2, 7), rat(-3, 5)];
        for (q, r2) in [(int(9), rat(1, 10)), (rat(15, 2), rat(1, 3)), (int(12), rat(9, 1225)), (int(70), rat(1, 50))] {
            let b = naive_report(&v, &q, &r2);
            for e in [Engine::Auto, Engine::Scan, Engine::Enumerate, Engine::Lattice] {
                assert_eq!(cylinder_int_empty_with(&v, &q, &r2, e), b, "Q={q} R2={r2} {e:?}");
            }
        }
    }
}
