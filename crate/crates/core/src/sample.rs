//! Empirical Dirichlet spectrum: products `q_{n+1} |q_n v - p_n|^2` over the
//! best-approximation chains of random vectors.

use std::cmp::Ordering;
use std::fmt::Write;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::approx2d::{best_approx_seq, four_over_pi_lower, two_over_sqrt3, TargetVector};
use crate::exact::{to_f64, Rational, Surd};
use crate::Result;

/// Denominator exponent of sampled coordinates: `v_i = m / 2^64`.
pub const SAMPLE_BITS: usize = 64;

/// Seeded vectors with coordinates `m / 2^64`, m uniform.
pub fn sample_vectors(count: usize, seed: u64) -> Vec<[Rational; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = BigInt::from(1) << SAMPLE_BITS;
    (0..count)
        .map(|_| {
            let a: u64 = rng.gen();
            let b: u64 = rng.gen();
            [Rational::new(a.into(), den.clone()), Rational::new(b.into(), den.clone())]
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct VectorProducts {
    pub v: [Rational; 2],
    pub products: Vec<Rational>,
    pub records: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct SampleReport {
    pub seed: u64,
    pub q_max: u64,
    pub vectors: Vec<VectorProducts>,
    /// Fixed-width bins over `[0, 4/pi]`.
    pub bins: Vec<u64>,
    pub bin_width: f64,
    pub max_product: Option<Rational>,
    /// Every product is at most a rational lower bound of 4/pi.
    pub certified_below_four_over_pi: bool,
    /// Products exceeding `2/sqrt(3) + 1e-9`.
    pub above_two_over_sqrt3: usize,
    pub total_products: usize,
}

fn products_of(v: &[Rational; 2], q_max: u64) -> Result<VectorProducts> {
    let chain = best_approx_seq(&TargetVector::rational(v[0].clone(), v[1].clone()), q_max)?;
    let products = chain.records.iter().filter_map(|r| r.v_over_pi.as_ref().and_then(|p| p.as_rational().cloned())).collect();
    Ok(VectorProducts { v: v.clone(), products, records: chain.records.len(), degenerate: chain.degenerate })
}

/// Samples `count` vectors, computes their chains up to `q_max` in parallel
/// and aggregates the products in input order.
pub fn sample_spectrum(count: usize, q_max: u64, seed: u64, nbins: usize) -> Result<SampleReport> {
    let vs = sample_vectors(count, seed);
    let vectors: Vec<VectorProducts> = vs.par_iter().map(|v| products_of(v, q_max)).collect::<Result<_>>()?;
    let nbins = nbins.max(1);
    let top = 4.0 / std::f64::consts::PI;
    let bin_width = top / nbins as f64;
    let mut bins = vec![0u64; nbins];
    let bound_pi = four_over_pi_lower();
    let bound_mahler = two_over_sqrt3().add(&Surd::rational(Rational::new(1.into(), BigInt::from(10).pow(9)))).expect("rational shift");
    let mut max_product: Option<Rational> = None;
    let mut certified = true;
    let mut above = 0;
    let mut total = 0;
    for vp in &vectors {
        for p in &vp.products {
            total += 1;
            let i = ((to_f64(p) / bin_width) as usize).min(nbins - 1);
            bins[i] += 1;
            if p > &bound_pi {
                certified = false;
            }
            if Surd::rational(p.clone()).cmp_exact(&bound_mahler) == Some(Ordering::Greater) {
                above += 1;
            }
            if max_product.as_ref().is_none_or(|m| p > m) {
                max_product = Some(p.clone());
            }
        }
    }
    Ok(SampleReport {
        seed,
        q_max,
        vectors,
        bins,
        bin_width,
        max_product,
        certified_below_four_over_pi: certified,
        above_two_over_sqrt3: above,
        total_products: total,
    })
}

impl SampleReport {
    /// Plot-ready histogram: `bin_lo,bin_hi,count` rows after a comment header.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# vectors={} q_max={} seed={} products={}", self.vectors.len(), self.q_max, self.seed, self.total_products);
        let _ = writeln!(
            out,
            "# max_product={} certified_below_4/pi={} above_2/sqrt3={}",
            self.max_product.as_ref().map(crate::exact::format_rational).unwrap_or_else(|| "none".into()),
            self.certified_below_four_over_pi,
            self.above_two_over_sqrt3
        );
        out.push_str("bin_lo,bin_hi,count\n");
        for (i, c) in self.bins.iter().enumerate() {
            let _ = writeln!(out, "{:.6},{:.6},{}", i as f64 * self.bin_width, (i + 1) as f64 * self.bin_width, c);
        }
        out
    }

    /// Total count in bins starting at or above `x`.
    pub fn mass_from(&self, x: f64) -> u64 {
        self.bins.iter().enumerate().filter(|(i, _)| *i as f64 * self.bin_width >= x).map(|(_, c)| c).sum()
    }
}
