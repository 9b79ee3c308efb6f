//! Shared fixtures for the benchmarks.

use dirspec_core::approx2d::TargetVector;
use dirspec_core::exact::rat;
use dirspec_core::{Rational, RealExpr, Surd, TargetInterval};

pub fn sqrt_pair() -> TargetVector {
    TargetVector::parse("(sqrt 2)", "(sqrt 3)").expect("valid expressions")
}

pub fn golden() -> RealExpr {
    RealExpr::parse("(/ (+ 1 (sqrt 5)) 2)").expect("valid expression")
}

/// A rational axis with a large common denominator.
pub fn rational_axis() -> [Rational; 2] {
    [rat(141_421_356, 100_000_007), rat(173_205_080, 100_000_007)]
}

pub fn targets(lambda: Rational, n: usize) -> Vec<TargetInterval> {
    vec![TargetInterval::around(&Surd::rational(lambda), &rat(1, 20)).expect("valid target"); n]
}
