//! Worked examples, each checked against a direct floating-point or exact
//! recomputation done here.

use dirspec_core::approx2d::{best_approx_seq, cylinder_int_empty, psi2, spectrum_bounds_check, validate_best_approx, TargetVector};
use dirspec_core::builder::{self, BuildOptions};
use dirspec_core::cf1d::{basic_relation_check, cf_expand, dirichlet_products, limsup_estimate, psi1};
use dirspec_core::exact::{certified_compare, int, nearest_int, rat, to_f64};
use dirspec_core::lattice3::{build_frame, dot, ivec, neighbor_planes, plane_through};
use dirspec_core::{CertifiedOrdering, RealExpr, TargetInterval};
use num_traits::Zero;

fn e(s: &str) -> RealExpr {
    RealExpr::parse(s).unwrap()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() < tol, "{a} vs {b}");
}

/// `min_{q <= t} ||q a||` and `min_{q <= t} |q v - p|` in floating point.
fn scan1(a: f64, t: u32) -> f64 {
    (1..=t).map(|q| (q as f64 * a - (q as f64 * a).round()).abs()).fold(f64::INFINITY, f64::min)
}

fn dist2(v: [f64; 2], q: u32) -> f64 {
    v.iter().map(|c| (q as f64 * c - (q as f64 * c).round()).powi(2)).sum()
}

#[test]
fn exact_examples() {
    assert_eq!(certified_compare(&e("(/ 2 (sqrt 3))"), &e("1.1547"), 256), CertifiedOrdering::Greater);
    let (m, d) = nearest_int(&e("(* 2 (sqrt 3))"), 256).unwrap();
    assert_eq!(m, 3.into());
    close(d.to_f64(), 2.0 * 3f64.sqrt() - 3.0, 1e-15);
}

#[test]
fn one_dimensional_examples() {
    let cf = cf_expand(&RealExpr::rational(rat(355, 113)), 3).unwrap();
    assert_eq!(cf.terms(), vec![3.into(), 7.into(), 16.into()]);
    assert!(cf.terminated);

    let s2 = 2f64.sqrt();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    close(psi1(&e("(sqrt 2)"), &int(11)).unwrap().to_f64(), scan1(s2, 11), 1e-12);
    close(scan1(s2, 11), 0.071068, 1e-6);
    close(psi1(&e("(/ (+ 1 (sqrt 5)) 2)"), &int(8)).unwrap().to_f64(), scan1(phi, 8), 1e-12);
    close(scan1(phi, 8), 0.055728, 1e-6);

    let p = dirichlet_products(&e("(sqrt 2)"), 4).unwrap();
    close(p[0].product.to_f64(), 2.0 * (s2 - 1.0), 1e-12);
    close(p[3].product.to_f64(), 29.0 * (17.0 - 12.0 * s2), 1e-9);
    close(p[3].product.to_f64(), 0.853680, 1e-6);

    // rhs = 1/(1 + 1/((1 + sqrt 2) 29/12))
    let b = basic_relation_check(&e("(sqrt 2)"), 3, 128).unwrap();
    let rhs = 1.0 / (1.0 + 1.0 / ((1.0 + s2) * 29.0 / 12.0));
    close(to_f64(&b.rhs_lo), rhs, 1e-12);
    close(b.lhs.to_f64(), rhs, 1e-12);

    close(limsup_estimate(&e("(sqrt 2)"), 30).unwrap(), (2.0 + s2) / 4.0, 1e-4);
    close(limsup_estimate(&e("(/ (+ 1 (sqrt 5)) 2)"), 30).unwrap(), (5.0 + 5f64.sqrt()) / 10.0, 1e-4);
}

#[test]
fn two_dimensional_examples() {
    let v = TargetVector::parse("(sqrt 2)", "(sqrt 3)").unwrap();
    let f = [2f64.sqrt(), 3f64.sqrt()];
    close(psi2(&v, &int(1)).unwrap().to_f64(), dist2(f, 1).sqrt(), 1e-12);
    close(dist2(f, 1).sqrt(), 0.493326, 1e-6);
    let scan6 = (1..=6).map(|q| dist2(f, q)).fold(f64::INFINITY, f64::min).sqrt();
    close(psi2(&v, &int(6)).unwrap().to_f64(), scan6, 1e-12);
    // attained at q = 3
    close(scan6, dist2(f, 3).sqrt(), 1e-15);
    close(scan6, 0.312010, 1e-6);

    let chain = best_approx_seq(&v, 10).unwrap();
    assert_eq!(chain.denominators(), vec![1.into(), 3.into(), 7.into()]);
    assert_eq!(chain.records[1].p, [4.into(), 5.into()]);
    assert_eq!(chain.records[2].p, [10.into(), 12.into()]);
    close(chain.records[2].r2_next.to_f64().sqrt(), dist2(f, 7).sqrt(), 1e-12);
    close(dist2(f, 7).sqrt(), 0.159893, 1e-6);
    close(chain.records[1].v_over_pi.as_ref().unwrap().to_f64(), 7.0 * dist2(f, 3), 1e-12);
    close(7.0 * dist2(f, 3), 0.681452, 1e-5);

    let big = spectrum_bounds_check(&v, 10_000).unwrap();
    assert!(big.below_two_over_sqrt3 && big.below_four_over_pi);
    // frozen from a floating-point rescan of q <= 10^4
    let mut best = f64::INFINITY;
    let mut rec = Vec::new();
    for q in 1..=10_000 {
        let d = dist2(f, q);
        if d < best {
            best = d;
            rec.push((q, d));
        }
    }
    let max = rec.windows(2).map(|w| w[1].0 as f64 * w[0].1).fold(0.0, f64::max);
    close(big.max_product.unwrap().to_f64(), max, 1e-9);
    close(max, 0.8075227, 1e-6);
}

#[test]
fn cylinder_examples() {
    let v = [rat(1, 2), rat(1, 3)];
    assert!(cylinder_int_empty(&v, &int(2), &rat(1, 25)).empty);
    let r = cylinder_int_empty(&v, &int(6), &rat(1, 4));
    assert!(!r.empty);
    assert_eq!(r.witness, Some(ivec(2, 1, 1)));

    let w = [rat(141, 100), rat(173, 100)];
    let chain = best_approx_seq(&TargetVector::rational(w[0].clone(), w[1].clone()), 50).unwrap();
    assert!(validate_best_approx(&chain.records, &w).passed());
}

#[test]
fn frame_examples() {
    let w = ivec(2, 1, 1);
    let plane = plane_through(&w).unwrap();
    assert!(dot(&plane.normal, &w).is_zero());
    let n = plane.normal.clone();
    let flip = [-&n[0], -&n[1], -&n[2]];
    assert!(n == ivec(1, -1, -1) || flip == ivec(1, -1, -1));
    let (plus, minus) = neighbor_planes(&plane).unwrap();
    assert_eq!(dot(&n, &plus), 1.into());
    assert_eq!(dot(&n, &minus), (-1).into());
    let f = build_frame(&w, false).unwrap();
    assert_eq!(f.h2, rat(1, 2));
    assert_eq!(f.d2, rat(1, 2));
}

#[test]
fn one_step_fixture() {
    let delta = TargetInterval::rational(rat(9, 10), rat(11, 10)).unwrap();
    let r = builder::construct(std::slice::from_ref(&delta), &[false], 1, &BuildOptions::default()).unwrap();
    let w1 = &r.state.records[1];
    let val = &r.state.v_over_pi[1];
    assert!(delta.contains_open(val));
    // q_1 |q_0 v_1 - p_0|^2 with w_0 = (1, 0, 0) is (p_1^2 + p_2^2) / q_1
    assert_eq!(*w1, ivec(18, -4, 1));
    assert_eq!(*val, rat(17, 18));
}
