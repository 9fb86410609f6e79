//! Statistical corroboration of the exact density by direct simulation.
//!
//! This is not a proof of anything. It catches gross errors in the exact
//! pipeline, for instance a density that is invariant but not the one the
//! map actually equidistributes to.

use num_bigint::BigInt;
use num_traits::One;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use twofloat::TwoFloat;

use super::SearchConfig;
use crate::density::{build_density, StepFunction};
use crate::dynamics::orbit_of_one;
use crate::error::{Error, Result};
use crate::exactnum::{rational_to_f64, ExactValue, FieldElement, Rational};

pub const BURN_IN: usize = 64;
/// Largest acceptable bin deviation at 10⁶ samples and 32 bins, about five
/// binomial standard deviations.
pub const THRESHOLD: f64 = 0.01;

#[derive(Clone, Debug, Serialize)]
pub struct McReport {
    pub beta: ExactValue,
    pub samples: u64,
    pub bins: usize,
    pub seed: u64,
    pub burn_in: usize,
    pub empirical: Vec<f64>,
    pub exact: Vec<f64>,
    pub max_deviation: f64,
    pub worst_bin: usize,
    pub threshold: f64,
    pub pass: bool,
    pub rigorous: bool,
}

/// `β` as a double-double taken from a `2^−120` enclosure.
fn beta_twofloat(beta: &FieldElement) -> TwoFloat {
    let (lo, hi) = beta.to_interval(&Rational::new(BigInt::one(), BigInt::one() << 120));
    let mid = (lo + hi) / Rational::from_integer(BigInt::from(2));
    let h = rational_to_f64(&mid);
    let rest = mid - Rational::from_float(h).expect("finite");
    TwoFloat::new_add(h, rational_to_f64(&rest))
}

/// Exact `ν_β([j/bins, (j+1)/bins))` for each bin, rounded to `f64`.
fn exact_bin_masses(h: &StepFunction, bins: usize) -> Vec<f64> {
    let field = h.field();
    let w = Rational::new(BigInt::one(), BigInt::one() << 60);
    (0..bins)
        .map(|j| {
            let a = FieldElement::from_rational(field, &Rational::new(j.into(), bins.into()));
            let b = FieldElement::from_rational(field, &Rational::new((j + 1).into(), bins.into()));
            let mut mass = FieldElement::zero(field);
            for (lo, hi, v) in h.pieces() {
                let l = if lo.cmp_real(&a).is_gt() { lo } else { &a };
                let r = if hi.cmp_real(&b).is_lt() { hi } else { &b };
                let len = r - l;
                if len.sign() > 0 {
                    mass = &mass + &(&len * v);
                }
            }
            let (lo, hi) = mass.to_interval(&w);
            rational_to_f64(&((lo + hi) / Rational::from_integer(BigInt::from(2))))
        })
        .collect()
}

/// Uniform double-double in `[0, 1)` with 106 random bits, enough that
/// 65 steps of an integer base do not run out of digits.
fn uniform(rng: &mut ChaCha8Rng) -> TwoFloat {
    let a = (rng.next_u64() >> 11) as f64;
    let b = (rng.next_u64() >> 11) as f64;
    TwoFloat::new_add(a * 2f64.powi(-53), b * 2f64.powi(-106))
}

/// Pushes `cfg.mc_samples` uniform points forward `64 + 1` steps of `T_β`
/// and compares the histogram over `cfg.mc_bins` equal bins with the exact
/// bin masses of the normalized density.
pub fn mc_validate(beta: &FieldElement, cfg: &SearchConfig) -> Result<McReport> {
    if cfg.mc_samples == 0 {
        return Err(Error::EmptySample);
    }
    if cfg.mc_bins == 0 {
        return Err(Error::Config("mc_bins must be at least 1".into()));
    }
    let bins = cfg.mc_bins;
    let h = build_density(&orbit_of_one(beta, cfg.orbit_budget)?)?.normalize()?;
    let exact = exact_bin_masses(&h, bins);

    let b = beta_twofloat(beta);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let starts: Vec<TwoFloat> = (0..cfg.mc_samples).map(|_| uniform(&mut rng)).collect();
    let counts = starts
        .par_chunks(1 << 14)
        .map(|chunk| {
            let mut counts = vec![0u64; bins];
            for &x0 in chunk {
                let mut x = x0;
                for _ in 0..=BURN_IN {
                    let y = b * x;
                    x = y - y.floor();
                }
                let idx = ((x.hi() * bins as f64) as usize).min(bins - 1);
                counts[idx] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let n = cfg.mc_samples as f64;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let (worst_bin, max_deviation) = empirical
        .iter()
        .zip(&exact)
        .map(|(e, x)| (e - x).abs())
        .enumerate()
        .fold((0, 0.0), |best, (i, d)| if d > best.1 { (i, d) } else { best });
    Ok(McReport {
        beta: ExactValue::from(beta),
        samples: cfg.mc_samples,
        bins,
        seed: cfg.seed,
        burn_in: BURN_IN,
        empirical,
        exact,
        max_deviation,
        worst_bin,
        threshold: THRESHOLD,
        pass: max_deviation < THRESHOLD,
        rigorous: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{isolate_roots_above_one, quadratic_family_field};

    fn small(samples: u64, bins: usize) -> SearchConfig {
        SearchConfig {
            mc_samples: samples,
            mc_bins: bins,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn exact_masses_sum_to_one() {
        let b = FieldElement::theta(&quadratic_family_field(1, 1).unwrap());
        let h = build_density(&orbit_of_one(&b, 100).unwrap()).unwrap().normalize().unwrap();
        let m = exact_bin_masses(&h, 7);
        assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // the first bin lies inside the high step (5 + 3√5)/10
        assert!((m[0] - 1.170820393249937 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn double_double_beta() {
        let b = FieldElement::theta(&quadratic_family_field(1, 1).unwrap());
        let t = beta_twofloat(&b);
        assert_eq!(t.hi(), 1.618033988749895);
        assert!(t.lo() != 0.0 && t.lo().abs() < 1e-16);
    }

    #[test]
    fn empty_sample() {
        let b = FieldElement::theta(&quadratic_family_field(1, 1).unwrap());
        assert!(matches!(mc_validate(&b, &small(0, 4)), Err(Error::EmptySample)));
    }

    #[test]
    fn integer_base_is_uniform() {
        let f = isolate_roots_above_one(&[-2, 1].map(BigInt::from)).unwrap()[0].clone();
        let r = mc_validate(&FieldElement::theta(&f), &small(20_000, 8)).unwrap();
        assert!(r.exact.iter().all(|&m| m == 0.125));
        assert!(r.max_deviation < 0.02, "{r:?}");
    }

    #[test]
    fn deterministic_for_a_seed() {
        let b = FieldElement::theta(&quadratic_family_field(1, 2).unwrap());
        let r1 = mc_validate(&b, &small(5_000, 10)).unwrap();
        let r2 = mc_validate(&b, &small(5_000, 10)).unwrap();
        assert_eq!(r1.empirical, r2.empirical);
        assert!(r1.max_deviation < 0.05);
    }
}
