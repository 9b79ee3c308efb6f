//! The three parametrizations of cylinders through a frame, the family of
//! fixed volume and the admissible set B2.

use num_bigint::BigInt;
use num_traits::One;

use crate::approx2d::{Cylinder, TargetVector, MAX_PRECISION};
use crate::exact::{certified_compare, nearest_int, CertifiedOrdering, Rational, RealExpr, Surd};
use crate::lattice3::Frame;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    A0,
    A1,
    A2,
}

#[derive(Debug, Clone)]
pub struct ParamPoint {
    pub chart: Chart,
    pub x: RealExpr,
    pub y: RealExpr,
    pub z: RealExpr,
}

/// Frame quantities the charts depend on.
#[derive(Debug, Clone)]
pub struct ChartParams {
    pub q: RealExpr,
    pub h: RealExpr,
    pub a: RealExpr,
}

impl ChartParams {
    pub fn new(q: RealExpr, h: RealExpr, a: RealExpr) -> Self {
        ChartParams { q, h, a }
    }

    /// `d = 1 / (q h)`.
    pub fn d(&self) -> RealExpr {
        RealExpr::int(1) / (&self.q * &self.h)
    }
}

impl From<&Frame> for ChartParams {
    fn from(f: &Frame) -> Self {
        ChartParams { q: RealExpr::from(&f.q), h: RealExpr::from_surd(&f.h), a: RealExpr::from(&f.a) }
    }
}

impl ParamPoint {
    pub fn new(chart: Chart, x: RealExpr, y: RealExpr, z: RealExpr) -> Self {
        ParamPoint { chart, x, y, z }
    }

    pub fn rational(chart: Chart, x: Rational, y: Rational, z: Rational) -> Self {
        ParamPoint { chart, x: x.into(), y: y.into(), z: z.into() }
    }

    pub fn as_rational(&self) -> Option<[Rational; 3]> {
        Some([self.x.as_rational()?.clone(), self.y.as_rational()?.clone(), self.z.as_rational()?.clone()])
    }
}

fn cmp(a: &RealExpr, b: &RealExpr) -> Result<CertifiedOrdering> {
    match certified_compare(a, b, MAX_PRECISION) {
        CertifiedOrdering::Undecided(bits) => Err(Error::PrecisionExhausted(bits)),
        o => Ok(o),
    }
}

fn positive(e: &RealExpr, what: &str) -> Result<()> {
    if cmp(e, &RealExpr::int(0))? != CertifiedOrdering::Greater {
        return Err(Error::DomainViolation(format!("{what} must be positive")));
    }
    Ok(())
}

fn equal(e: &RealExpr, v: &RealExpr, what: &str) -> Result<()> {
    if cmp(e, v)? != CertifiedOrdering::Equal {
        return Err(Error::DomainViolation(format!("{what} is off the chart")));
    }
    Ok(())
}

fn check_domain(p: &ParamPoint, f: &ChartParams) -> Result<()> {
    match p.chart {
        Chart::A0 => {
            equal(&p.x, &f.q, "x0")?;
            positive(&p.y, "y0")?;
            positive(&p.z, "z0")
        }
        Chart::A1 => {
            positive(&p.x, "x1")?;
            positive(&p.y, "y1")?;
            equal(&p.z, &f.h, "z1")
        }
        Chart::A2 => {
            positive(&p.x, "x2")?;
            positive(&p.y, "y2")?;
            equal(&p.z, &RealExpr::int(0), "z2")
        }
    }
}

fn to_a1(p: &ParamPoint, f: &ChartParams) -> ParamPoint {
    let (q, h) = (&f.q, &f.h);
    match p.chart {
        Chart::A1 => p.clone(),
        Chart::A0 => {
            let x1 = q * h / p.z.clone();
            let y1 = h * &p.y / p.z.clone();
            ParamPoint::new(Chart::A1, x1, y1, h.clone())
        }
        Chart::A2 => {
            let s = p.x.square() + q.square();
            let x1 = h * &s / (&p.y * q);
            let y1 = h * &p.x / q.clone();
            ParamPoint::new(Chart::A1, x1, y1, h.clone())
        }
    }
}

fn from_a1(p: &ParamPoint, target: Chart, f: &ChartParams) -> ParamPoint {
    let (q, h) = (&f.q, &f.h);
    let (x1, y1) = (&p.x, &p.y);
    match target {
        Chart::A1 => p.clone(),
        Chart::A0 => ParamPoint::new(Chart::A0, q.clone(), q * y1 / x1.clone(), q * h / x1.clone()),
        Chart::A2 => {
            let x2 = q * y1 / h.clone();
            let y2 = q * &(y1.square() + h.square()) / (x1 * h);
            ParamPoint::new(Chart::A2, x2, y2, RealExpr::int(0))
        }
    }
}

/// Moves a point between the charts; the maps are mutually inverse.
pub fn reparam(p: &ParamPoint, target: Chart, f: &ChartParams) -> Result<ParamPoint> {
    check_domain(p, f)?;
    if p.chart == target {
        return Ok(p.clone());
    }
    // direct maps between A0 and A2 keep rational inputs rational
    let (q, h) = (&f.q, &f.h);
    Ok(match (p.chart, target) {
        (Chart::A2, Chart::A0) => {
            let s = p.x.square() + q.square();
            let y0 = q * &p.x * p.y.clone() / s.clone();
            let z0 = q.square() * p.y.clone() / s;
            ParamPoint::new(Chart::A0, q.clone(), y0, z0)
        }
        (Chart::A0, Chart::A2) => {
            let x2 = q * &p.y / p.z.clone();
            let y2 = (p.y.square() + p.z.square()) / p.z.clone();
            ParamPoint::new(Chart::A2, x2, y2, RealExpr::int(0))
        }
        _ => {
            let _ = h;
            from_a1(&to_a1(p, f), target, f)
        }
    })
}

/// The cylinder shared by the three parametrizations: axis through
/// `(x1, y1, h)`, length x1, and `w~ = (q, 0, 0)` on its lateral surface.
pub fn cylinder_of(p: &ParamPoint, f: &ChartParams) -> Result<Cylinder> {
    let a1 = reparam(p, Chart::A1, f)?;
    let (x1, y1, h) = (&a1.x, &a1.y, &f.h);
    let v = TargetVector::new(y1 / x1, h / x1);
    let r2 = (&f.q / x1).square() * (y1.square() + h.square());
    Ok(Cylinder { v, q: x1.clone(), r2 })
}

/// Cylinders of volume `2 pi r q h`: `y2 = 2r` in the A2 chart.
#[derive(Debug, Clone)]
pub struct FamilyConstraint {
    pub r: RealExpr,
    pub params: ChartParams,
}

pub fn family_r(r: RealExpr, f: &ChartParams) -> FamilyConstraint {
    FamilyConstraint { r, params: f.clone() }
}

impl FamilyConstraint {
    pub fn contains(&self, p: &ParamPoint) -> Result<bool> {
        let a2 = reparam(p, Chart::A2, &self.params)?;
        Ok(cmp(&a2.y, &(RealExpr::int(2) * self.r.clone()))? == CertifiedOrdering::Equal)
    }

    /// `V / pi = 2r / d`.
    pub fn v_over_pi(&self) -> RealExpr {
        RealExpr::int(2) * self.r.clone() / self.params.d()
    }

    /// The A1 point of the family at height y1.
    pub fn a1_point(&self, y1: RealExpr) -> ParamPoint {
        let f = &self.params;
        let x1 = &f.q * &(y1.square() + f.h.square()) / (RealExpr::int(2) * self.r.clone() * f.h.clone());
        ParamPoint::new(Chart::A1, x1, y1, f.h.clone())
    }
}

/// Whether the open infinite cylinder of an A2 point misses every nonzero
/// point of the plane lattice `{(i q + l a, l d, 0)}`.
///
/// With `lambda = y2 / d` and `theta = (a - x2 / lambda) / q` the point with
/// index l lies inside exactly when `dist(l theta, Z)^2 < 1 - l^2/lambda^2`,
/// which can only happen for `1 <= l < lambda`.
pub fn b2_contains(p2: &ParamPoint, f: &ChartParams) -> Result<bool> {
    check_domain(p2, f)?;
    if p2.chart != Chart::A2 {
        return Err(Error::DomainViolation("b2_contains expects an A2 point".into()));
    }
    let lambda = &p2.y / &f.d();
    let theta = (&f.a - &(&p2.x / &lambda)) / f.q.clone();
    let mut l = BigInt::one();
    loop {
        let le = RealExpr::from(&l);
        if cmp(&le, &lambda)? != CertifiedOrdering::Less {
            return Ok(true);
        }
        let t = &le * &theta;
        let (_, dist) = nearest_int(&t, MAX_PRECISION)?;
        let room = RealExpr::int(1) - (&le / &lambda).square();
        if cmp(&dist.square(), &room)? == CertifiedOrdering::Less {
            return Ok(false);
        }
        l += 1;
    }
}

/// Direct form of the same test for one lattice point `(X, Y, 0)`:
/// `|X v - (Y, 0)|^2 < R^2` with the A2 cylinder's axis and radius.
pub fn b2_point_inside(p2: &ParamPoint, f: &ChartParams, x: &RealExpr, y: &RealExpr) -> Result<bool> {
    let s = p2.x.square() + f.q.square();
    let vy = &p2.x * &p2.y / s.clone();
    let vz = &f.q * &p2.y / s.clone();
    let r2 = (&f.q * &p2.y).square() / s;
    let d2 = (x * &vy - y.clone()).square() + (x * &vz).square();
    Ok(cmp(&d2, &r2)? == CertifiedOrdering::Less)
}

pub fn two_over_sqrt3() -> Surd {
    crate::approx2d::two_over_sqrt3()
}

/// Half-width ε such that both `lambda (a + q/2 +- ε, d, 0)` lie in B2,
/// halving from q/4.
pub fn epsilon_search(f: &ChartParams, lambda: &RealExpr) -> Result<RealExpr> {
    if cmp(lambda, &RealExpr::int(0))? != CertifiedOrdering::Greater
        || cmp(lambda, &RealExpr::from_surd(&two_over_sqrt3()))? != CertifiedOrdering::Less
    {
        return Err(Error::DomainViolation("lambda must lie in (0, 2/sqrt(3))".into()));
    }
    let mut eps = &f.q / &RealExpr::int(4);
    let centre = &f.a + &(&f.q / &RealExpr::int(2));
    let y2 = lambda * &f.d();
    for _ in 0..256 {
        let ok = [RealExpr::int(1), RealExpr::int(-1)].iter().try_fold(true, |acc, sign| -> Result<bool> {
            if !acc {
                return Ok(false);
            }
            let x2 = lambda * &(&centre + &(sign * &eps));
            b2_contains(&ParamPoint::new(Chart::A2, x2, y2.clone(), RealExpr::int(0)), f)
        })?;
        if ok {
            return Ok(eps);
        }
        eps = &eps / &RealExpr::int(2);
    }
    Err(Error::NoEpsilonFound(256))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn params() -> ChartParams {
        ChartParams::new(RealExpr::int(2), RealExpr::rational(rat(1, 2)), RealExpr::int(1))
    }

    fn r3(p: &ParamPoint) -> [Rational; 3] {
        p.as_rational().expect("rational point")
    }

    #[test]
    fn chart_examples() {
        let f = params();
        let p = ParamPoint::rational(Chart::A1, int(4), int(3), rat(1, 2));
        let a2 = reparam(&p, Chart::A2, &f).unwrap();
        assert_eq!(r3(&a2), [int(12), rat(37, 4), int(0)]);
        let a0 = reparam(&p, Chart::A0, &f).unwrap();
        assert_eq!(r3(&a0), [int(2), rat(3, 2), rat(1, 4)]);
        assert_eq!(r3(&reparam(&a0, Chart::A1, &f).unwrap()), r3(&p));
        assert_eq!(r3(&reparam(&a2, Chart::A0, &f).unwrap()), r3(&a0));
        assert_eq!(r3(&reparam(&a0, Chart::A2, &f).unwrap()), r3(&a2));
        let bad = ParamPoint::rational(Chart::A1, int(4), int(3), int(1));
        assert!(matches!(reparam(&bad, Chart::A2, &f), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn cylinder_examples() {
        let f = params();
        let p = ParamPoint::rational(Chart::A1, int(4), int(3), rat(1, 2));
        let c = cylinder_of(&p, &f).unwrap();
        assert_eq!(c.q.as_rational(), Some(&int(4)));
        assert_eq!(c.r2.as_rational(), Some(&rat(37, 16)));
        assert_eq!(c.volume_over_pi().as_rational(), Some(&rat(37, 4)));
        let a2 = reparam(&p, Chart::A2, &f).unwrap();
        let c2 = cylinder_of(&a2, &f).unwrap();
        assert_eq!(c2.volume_over_pi().as_rational(), Some(&rat(37, 4)));
        // y2 q h is the same volume
        assert_eq!((&a2.y * &f.q * f.h.clone()).as_rational(), Some(&rat(37, 4)));
    }

    #[test]
    fn family_example() {
        let f = params();
        let fam = family_r(RealExpr::rational(rat(1, 2)), &f);
        let p = ParamPoint::rational(Chart::A1, int(2), rat(1, 2), rat(1, 2));
        assert!(fam.contains(&p).unwrap());
        assert_eq!(fam.v_over_pi().as_rational(), Some(&int(1)));
        let a0 = reparam(&p, Chart::A0, &f).unwrap();
        let [_, y0, z0] = r3(&a0);
        let r = rat(1, 2);
        assert_eq!(&y0 * &y0 + (&z0 - &r) * (&z0 - &r), &r * &r);
    }

    #[test]
    fn b2_boundary_flip() {
        let f = params();
        let d = f.d();
        let centre = &f.a + &(&f.q / &RealExpr::int(2));
        let at = |mu: f64| {
            let m = RealExpr::rational(Rational::from_float(mu).unwrap());
            ParamPoint::new(Chart::A2, &m * &centre, &m * &d, RealExpr::int(0))
        };
        let mu = two_over_sqrt3().to_f64();
        assert!(b2_contains(&at(mu - 1e-6), &f).unwrap());
        assert!(!b2_contains(&at(mu + 1e-6), &f).unwrap());
        let exact = ParamPoint::new(
            Chart::A2,
            RealExpr::from_surd(&two_over_sqrt3()) * centre.clone(),
            RealExpr::from_surd(&two_over_sqrt3()) * d.clone(),
            RealExpr::int(0),
        );
        // on the boundary: the open cylinder just touches (a, d, 0)
        assert!(b2_contains(&exact, &f).unwrap());
    }

    #[test]
    fn epsilon_examples() {
        let frame = crate::lattice3::build_frame(&crate::lattice3::ivec(1, 0, 0), false).unwrap();
        let f = ChartParams::from(&frame);
        let e = epsilon_search(&f, &RealExpr::rational(rat(1, 2))).unwrap();
        assert_eq!(e.as_rational(), Some(&rat(1, 4)));
        let near = RealExpr::from_surd(&two_over_sqrt3()) * RealExpr::rational(int(1) - rat(1, 1_000_000));
        let e = epsilon_search(&f, &near).unwrap();
        assert!(e.to_f64() > 0.0 && e.to_f64() < 1e-5);
        assert!(epsilon_search(&f, &RealExpr::from_surd(&two_over_sqrt3())).is_err());
    }
}
