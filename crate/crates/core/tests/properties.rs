use std::cmp::Ordering;

use dirspec_core::approx2d::{self, best_approx_seq, cylinder_int_empty, naive_report, psi2, PointClass, TargetVector};
use dirspec_core::builder::{self, reparam, BuildOptions, Chart, ChartParams};
use dirspec_core::cf1d::{basic_relation_check, cf_expand, dirichlet_products, periodic_surd, psi1};
use dirspec_core::exact::{certified_compare, nearest_int, rat, rat_arith, ArithOp};
use dirspec_core::lattice3::{build_frame, dot, is_primitive, tilde_coords};
use dirspec_core::{CertifiedOrdering, IVec3, ParamPoint, Rational, RealExpr, Surd, TargetInterval};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..200).prop_map(|(n, d)| rat(n, d))
}

fn pos_rat(max: i64, den: i64) -> impl Strategy<Value = Rational> {
    (1..=max, 1..=den).prop_map(|(n, d)| rat(n, d))
}

fn quadratic() -> impl Strategy<Value = Surd> {
    (0i64..5, prop::collection::vec(1i64..10, 0..3), prop::collection::vec(1i64..10, 1..4))
        .prop_map(|(a0, pre, period)| periodic_surd(a0, &pre, &period))
}

/// `||q alpha||` exactly, by nearest integer on the surd.
fn dist_exact(alpha: &Surd, q: i64) -> Surd {
    let x = alpha.mul(&Surd::rational(rat(q, 1))).unwrap();
    let m = x.add(&Surd::rational(rat(1, 2))).unwrap().floor();
    let d = x.sub(&Surd::rational(Rational::from_integer(m))).unwrap();
    if d.signum() == Ordering::Less {
        d.neg()
    } else {
        d
    }
}

/// Exact squared distance of qv to the nearest lattice point, for rational v.
fn rat_dist2(v: &[Rational; 2], q: u64) -> Rational {
    v.iter()
        .map(|c| {
            let x = c * Rational::from_integer(q.into());
            let e = &x - x.round();
            &e * &e
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in small_rat(), b in small_rat(), c in small_rat()) {
        let add = |x: &Rational, y: &Rational| rat_arith(x, ArithOp::Add, y).unwrap();
        let mul = |x: &Rational, y: &Rational| rat_arith(x, ArithOp::Mul, y).unwrap();
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        let s = add(&a, &b);
        prop_assert!(s.denom().is_positive() && s.numer().gcd(s.denom()).is_one());
    }

    #[test]
    fn compare_is_antisymmetric(a in small_rat(), b in small_rat(), m in 2i64..50, k in 2i64..50) {
        let x = RealExpr::rational(a) + RealExpr::int(m).sqrt();
        let y = RealExpr::rational(b) * RealExpr::int(k).sqrt();
        let ab = certified_compare(&x, &y, 1 << 12);
        let ba = certified_compare(&y, &x, 1 << 12);
        prop_assert_eq!(ab == CertifiedOrdering::Less, ba == CertifiedOrdering::Greater);
        prop_assert_eq!(ab == CertifiedOrdering::Greater, ba == CertifiedOrdering::Less);
        prop_assert_eq!(certified_compare(&x, &x, 1 << 12), CertifiedOrdering::Equal);
    }

    #[test]
    fn nearest_int_is_periodic(a in small_rat(), m in 2i64..50, k in -20i64..20) {
        let x = RealExpr::rational(a) * RealExpr::int(m).sqrt();
        let (n0, d0) = nearest_int(&x, 1 << 12).unwrap();
        let (n1, d1) = nearest_int(&(x.clone() + RealExpr::int(k)), 1 << 12).unwrap();
        prop_assert_eq!(n1, n0 + k);
        prop_assert!(certified_compare(&d0, &RealExpr::rational(rat(1, 2)), 1 << 12) != CertifiedOrdering::Greater);
        prop_assert_eq!(certified_compare(&d0, &d1, 1 << 12), CertifiedOrdering::Equal);
    }

    #[test]
    fn convergent_recurrence(alpha in quadratic()) {
        let cf = cf_expand(&RealExpr::from_surd(&alpha), 30).unwrap();
        let c = cf.convergents();
        let t = cf.terms();
        prop_assert!(cf.quotients.iter().all(|a| a >= &BigInt::one()));
        for n in 2..c.len() {
            prop_assert_eq!(&c[n].p, &(&t[n] * &c[n - 1].p + &c[n - 2].p));
            prop_assert_eq!(&c[n].q, &(&t[n] * &c[n - 1].q + &c[n - 2].q));
        }
        for n in 1..c.len() {
            let det = &c[n].p * &c[n - 1].q - &c[n - 1].p * &c[n].q;
            prop_assert!(det.abs().is_one());
        }
    }

    #[test]
    fn dirichlet_products_below_one(alpha in quadratic()) {
        for d in dirichlet_products(&RealExpr::from_surd(&alpha), 20).unwrap() {
            prop_assert_eq!(certified_compare(&d.product, &RealExpr::int(1), 1 << 12), CertifiedOrdering::Less);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn psi1_matches_scan(alpha in quadratic(), t in 1i64..10_000) {
        let got = psi1(&RealExpr::from_surd(&alpha), &rat(t, 1)).unwrap();
        let mut best = dist_exact(&alpha, 1);
        for q in 2..=t.min(3000) {
            let d = dist_exact(&alpha, q);
            if d.cmp_exact(&best) == Some(Ordering::Less) {
                best = d;
            }
        }
        if t <= 3000 {
            prop_assert_eq!(got.surd(), Some(&best));
        } else {
            // beyond the scan the minimum can only shrink
            prop_assert!(got.surd().unwrap().cmp_exact(&best) != Some(Ordering::Greater));
        }
    }

    #[test]
    fn basic_relation_gap_shrinks(alpha in quadratic(), n in 1usize..=25) {
        let a = RealExpr::from_surd(&alpha);
        let lo = basic_relation_check(&a, n, 64).unwrap();
        let hi = basic_relation_check(&a, n, 256).unwrap();
        prop_assert!(hi.gap <= lo.gap);
        prop_assert!(hi.gap < rat(1, 1) / Rational::from_integer(BigInt::one() << 200));
    }

    #[test]
    fn best_approx_rescan(num in (0i64..100_000, 0i64..100_000), den in 2i64..100_000, q_max in 1u64..3000) {
        let v = [rat(num.0 % den, den), rat(num.1 % den, den)];
        let chain = best_approx_seq(&TargetVector::rational(v[0].clone(), v[1].clone()), q_max).unwrap();
        let qs: Vec<u64> = chain.records.iter().map(|r| (&r.q).try_into().unwrap()).collect();
        prop_assert_eq!(qs[0], 1);
        let mut it = chain.records.iter().peekable();
        let mut best: Option<Rational> = None;
        for q in 1..=q_max {
            let d = rat_dist2(&v, q);
            let record = best.as_ref().is_none_or(|b| &d < b);
            if record {
                let r = it.next();
                prop_assert!(r.is_some(), "missing record q={}", q);
                let r = r.unwrap();
                prop_assert_eq!(&r.q, &BigInt::from(q));
                prop_assert_eq!(r.r2_next.as_rational(), Some(&d));
                if q > 1 {
                    prop_assert!(r.q.gcd(&r.p[0]).gcd(&r.p[1]).is_one());
                }
                let zero = d.is_zero();
                best = Some(d);
                if zero {
                    break;
                }
            }
        }
        prop_assert!(it.next().is_none());
    }

    #[test]
    fn psi2_steps(num in (1i64..1000, 1i64..1000), den in 1001i64..5000) {
        let v = TargetVector::rational(rat(num.0, den), rat(num.1, den));
        let chain = best_approx_seq(&v, 400).unwrap();
        let qs: Vec<i64> = chain.records.iter().map(|r| (&r.q).try_into().unwrap()).collect();
        let mut prev: Option<Rational> = None;
        for t in 1..=400i64 {
            let p = psi2(&v, &rat(t, 1)).unwrap().square().as_rational().unwrap().clone();
            if let Some(pp) = &prev {
                prop_assert!(&p <= pp);
                if !qs.contains(&t) {
                    prop_assert_eq!(&p, pp);
                }
            }
            prev = Some(p);
        }
    }

    #[test]
    fn products_below_four_over_pi(num in (0i64..1 << 40, 0i64..1 << 40)) {
        let den = 1i64 << 40;
        let chain = best_approx_seq(&TargetVector::rational(rat(num.0, den), rat(num.1, den)), 20_000).unwrap();
        let bound = approx2d::four_over_pi_lower();
        for r in &chain.records {
            if let Some(p) = &r.v_over_pi {
                prop_assert!(p.as_rational().unwrap() <= &bound);
            }
        }
    }

    #[test]
    fn cylinder_matches_naive(
        v in ((-80i64..80, -80i64..80), 40i64..80),
        q in pos_rat(120, 3),
        r2 in (0i64..30, 1i64..30),
    ) {
        let v = [rat(v.0 .0, v.1), rat(v.0 .1, v.1)];
        let q = if q > rat(40, 1) { rat(40, 1) } else { q };
        let r2 = rat(r2.0, r2.1);
        let fast = cylinder_int_empty(&v, &q, &r2);
        let slow = naive_report(&v, &q, &r2);
        prop_assert_eq!(fast.empty, slow.empty);
        prop_assert_eq!(&fast.boundary, &slow.boundary);
    }

    #[test]
    fn chart_round_trips(q in pos_rat(40, 5), h in pos_rat(30, 40), a in -10i64..10, y in pos_rat(200, 30), z in pos_rat(200, 30)) {
        let f = ChartParams::new(q.clone().into(), h.into(), RealExpr::int(a));
        let p0 = ParamPoint::rational(Chart::A0, q, y, z);
        let start = p0.as_rational().unwrap();
        for (c1, c2) in [(Chart::A1, Chart::A2), (Chart::A2, Chart::A1)] {
            let p1 = reparam(&p0, c1, &f).unwrap();
            let p2 = reparam(&p1, c2, &f).unwrap();
            let back = reparam(&p2, Chart::A0, &f).unwrap();
            prop_assert_eq!(back.as_rational(), Some(start.clone()));
            // pairwise inverses
            prop_assert_eq!(reparam(&p1, Chart::A0, &f).unwrap().as_rational(), Some(start.clone()));
            prop_assert_eq!(reparam(&p2, c1, &f).unwrap().as_rational(), p1.as_rational());
        }
    }

    #[test]
    fn family_volume(q in pos_rat(40, 5), h in pos_rat(30, 40), r in pos_rat(50, 20), y1 in pos_rat(80, 20)) {
        let f = ChartParams::new(q.clone().into(), h.clone().into(), RealExpr::int(0));
        let fam = builder::family_r(r.clone().into(), &f);
        let p = fam.a1_point(y1.into());
        let want = rat(2, 1) * r * q * h;
        prop_assert!(fam.contains(&p).unwrap());
        let vol = builder::cylinder_of(&p, &f).unwrap().volume_over_pi();
        prop_assert_eq!(vol.as_rational(), Some(&want));
    }
}

fn ivec() -> impl Strategy<Value = IVec3> {
    (1i64..100_000, -100_000i64..100_000, -100_000i64..100_000)
        .prop_map(|(a, b, c)| [a.into(), b.into(), c.into()])
        .prop_filter("primitive", is_primitive)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frame_invariants(w in ivec(), branch in any::<bool>(), pts in prop::collection::vec((-50i64..50, -50i64..50, -50i64..50), 2..6)) {
        let f = build_frame(&w, branch).unwrap();
        let q2 = Rational::from_integer(&w[0] * &w[0]);
        prop_assert!((&q2 * &f.h2 * &f.d2).is_one());
        prop_assert!(dirspec_core::lattice3::det3(&f.w, &f.g2, &f.w0p).abs().is_one());
        prop_assert!(dot(&f.n, &f.w).is_zero() && dot(&f.n, &f.g2).is_zero() && dot(&f.n, &f.w0p).is_one());
        let n2 = Rational::from_integer(f.big_n.clone());
        let us: Vec<IVec3> = pts.iter().map(|&(a, b, c)| [a.into(), b.into(), c.into()]).collect();
        for u in &us {
            // z~ / h is the plane index
            let tc = tilde_coords(u, &f);
            prop_assert_eq!(&tc.coeffs[2], &dot(&f.n, u));
            // plane points sit on lines y~ in dZ
            let mut g = u.clone();
            for i in 0..3 {
                g[i] = &u[i] - &tc.coeffs[2] * &f.w0p[i];
            }
            let ys = f.y_scaled(&g);
            let beta = Rational::from_integer(tc.coeffs[1].clone());
            prop_assert_eq!(&ys * &ys, &beta * &beta * &f.d2 * &n2);
        }
        // slices keep distances: (dy~)^2 + (dz~)^2 = dy^2 + dz^2 for equal x
        for u in &us {
            let mut v = us[0].clone();
            v[0] = u[0].clone();
            let dy = f.y_scaled(u) - f.y_scaled(&v);
            let dz = Rational::from_integer(dot(&f.n, u) - dot(&f.n, &v));
            let lhs = (&dy * &dy + &dz * &dz) / &n2;
            let (a, b) = (&u[1] - &v[1], &u[2] - &v[2]);
            prop_assert_eq!(lhs, Rational::from_integer(&a * &a + &b * &b));
        }
    }
}

/// Lattice points of the closed cylinder `0 <= x <= Q, |x v - p|^2 <= R2`,
/// split into interior and lateral points.
fn naive_points(v: &[Rational; 2], q: &BigInt, r2: &Rational) -> (Vec<IVec3>, Vec<IVec3>, Vec<IVec3>) {
    let (mut inner, mut lateral, mut front) = (Vec::new(), Vec::new(), Vec::new());
    let rad = r2.floor().to_integer().sqrt() + 1;
    let mut x = BigInt::zero();
    while &x <= q {
        let xr = Rational::from_integer(x.clone());
        let c = [&xr * &v[0], &xr * &v[1]];
        let mut p1: BigInt = c[0].floor().to_integer() - &rad;
        while p1 <= c[0].ceil().to_integer() + &rad {
            let mut p2: BigInt = c[1].floor().to_integer() - &rad;
            while p2 <= c[1].ceil().to_integer() + &rad {
                let a = &c[0] - Rational::from_integer(p1.clone());
                let b = &c[1] - Rational::from_integer(p2.clone());
                let d = &a * &a + &b * &b;
                let u: IVec3 = [x.clone(), p1.clone(), p2.clone()];
                if &d <= r2 && x.is_positive() {
                    if &x == q {
                        front.push(u);
                    } else if &d < r2 {
                        inner.push(u);
                    } else {
                        lateral.push(u);
                    }
                }
                p2 += 1;
            }
            p1 += 1;
        }
        x += 1;
    }
    (inner, lateral, front)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn construction_steps(lambda in (1i64..23).prop_map(|k| rat(k, 20)), bits in prop::collection::vec(any::<bool>(), 5)) {
        let iv = TargetInterval::around(&Surd::rational(lambda), &rat(1, 20)).unwrap();
        let targets = vec![iv; 5];
        let res = builder::construct(&targets, &bits, 5, &BuildOptions::default()).unwrap();
        let w = &res.state.records;
        for n in 1..w.len() {
            let c = &res.state.certificates[n - 1];
            prop_assert!(is_primitive(&w[n]));
            prop_assert_eq!(c.side.is_positive(), !bits[n - 1]);
            prop_assert!(!c.side.is_zero());
            let qn = Rational::from_integer(w[n][0].clone());
            let v = [Rational::from_integer(w[n][1].clone()) / &qn, Rational::from_integer(w[n][2].clone()) / &qn];
            let vp = [Rational::from_integer(w[n - 1][1].clone()) / Rational::from_integer(w[n - 1][0].clone()),
                      Rational::from_integer(w[n - 1][2].clone()) / Rational::from_integer(w[n - 1][0].clone())];
            let step2 = (&v[0] - &vp[0]) * (&v[0] - &vp[0]) + (&v[1] - &vp[1]) * (&v[1] - &vp[1]);
            prop_assert!(step2 * Rational::from_integer(BigInt::one() << (2 * n)) < Rational::one());
            let mut prev = Rational::one();
            for nu in 1..=n {
                let dist = approx2d::dist2(&v, &w[nu - 1]);
                let val = Rational::from_integer(w[nu][0].clone()) * &dist;
                prop_assert!(targets[nu - 1].contains_open(&val));
                prop_assert!(dist < &prev / Rational::from_integer(4.into()));
                prev = dist.clone();
                // empty interior, lateral points only w_{nu-1} and its mirror
                if w[nu][0] <= BigInt::from(3000) {
                    let (inner, lateral, front) = naive_points(&v, &w[nu][0], &dist);
                    prop_assert!(inner.is_empty(), "interior point in Pi_{}^{}", n, nu);
                    let mirror: IVec3 = [&w[n][0] - &w[nu - 1][0], &w[n][1] - &w[nu - 1][1], &w[n][2] - &w[nu - 1][2]];
                    for p in &lateral {
                        prop_assert!(*p == w[nu - 1] || *p == mirror, "stray lateral point {:?}", p);
                    }
                    if nu == n {
                        prop_assert_eq!(front, vec![w[n].clone()]);
                    }
                }
            }
        }
        let again = builder::construct(&targets, &bits, 5, &BuildOptions::default()).unwrap();
        prop_assert_eq!(&again.state.records, w);
        let kinds: Vec<PointClass> = res.state.certificates.iter().flat_map(|c| c.boundary.iter().flatten().map(|b| b.kind)).collect();
        prop_assert!(!kinds.contains(&PointClass::Interior));
    }
}
