//! Independent numeric oracles.
//!
//! These recompute orbits, densities and normalization constants with plain
//! rational arithmetic rounded to a fixed 2^-400 grid. `β` comes from Newton
//! iteration on the defining polynomial, not from the library's isolating
//! intervals, so agreement here is a genuine cross-check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use parry_core::density::{build_density, series_k};
use parry_core::dynamics::{orbit_of_one, DEFAULT_BUDGET};
use parry_core::exactnum::{isolate_roots_above_one, FieldElement};

const BITS: u32 = 400;

fn grid() -> BigInt {
    BigInt::one() << BITS
}

fn round(x: &BigRational) -> BigRational {
    let scaled = x * BigRational::from_integer(grid());
    BigRational::new(scaled.round().to_integer(), grid())
}

fn eval(poly: &[i64], x: &BigRational) -> BigRational {
    poly.iter()
        .rev()
        .fold(BigRational::zero(), |acc, &c| acc * x + BigRational::from_integer(c.into()))
}

fn deriv(poly: &[i64]) -> Vec<i64> {
    poly.iter().enumerate().skip(1).map(|(i, &c)| c * i as i64).collect()
}

/// Largest real root of `poly`, found by an f64 scan and refined by Newton.
fn largest_root(poly: &[i64]) -> BigRational {
    let f = |x: f64| poly.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64);
    let bound = 1.0 + poly.iter().map(|c| c.abs() as f64).fold(0.0, f64::max);
    let step = 1e-4;
    let mut hi = bound;
    while f(hi - step).signum() == f(hi).signum() {
        hi -= step;
        assert!(hi > 0.0, "no positive root");
    }
    let mut x = round(&BigRational::from_float(hi - step / 2.0).unwrap());
    let d = deriv(poly);
    for _ in 0..12 {
        x = round(&(&x - eval(poly, &x) / eval(&d, &x)));
    }
    x
}

fn floor(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// `T^n(1)` for `n = 1..=count`; values within 2^-200 of 0 are taken to be
/// 0, which only happens when the exact orbit reaches 0.
fn float_orbit(beta: &BigRational, count: usize) -> Vec<BigRational> {
    let tiny = BigRational::new(BigInt::one(), BigInt::one() << 200);
    let mut out = Vec::with_capacity(count);
    let mut x = BigRational::one();
    for _ in 0..count {
        let bx = beta * &x;
        let mut next = round(&(&bx - BigRational::from_integer(floor(&bx))));
        if next.abs() < tiny || (&next - BigRational::one()).abs() < tiny {
            next = BigRational::zero();
        }
        out.push(next.clone());
        x = next;
    }
    out
}

fn rational_of(e: &FieldElement) -> BigRational {
    let (lo, hi) = e.to_interval(&BigRational::new(BigInt::one(), BigInt::one() << 300));
    (lo + hi) / BigRational::from_integer(2.into())
}

const BASES: &[&[i64]] = &[
    &[-1, -1, 1],
    &[1, -3, 1],
    &[-1, -2, 1],
    &[-2, -2, 1],
    &[-3, -5, 1],
    &[-1, -1, 0, 1],
    &[-1, -1, -1, 1],
    &[-1, -2, -2, 1],
    &[2, -4, 1],
];

fn field_theta(poly: &[i64]) -> FieldElement {
    let coeffs: Vec<BigInt> = poly.iter().map(|&c| BigInt::from(c)).collect();
    let fields = isolate_roots_above_one(&coeffs).unwrap();
    FieldElement::theta(fields.last().unwrap())
}

#[test]
fn first_fifty_iterates_agree_with_float_oracle() {
    let tol = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 50));
    for poly in BASES {
        let beta = field_theta(poly);
        let approx = largest_root(poly);
        assert!((rational_of(&beta) - &approx).abs() < tol, "{poly:?}: root");
        let orbit = orbit_of_one(&beta, DEFAULT_BUDGET).unwrap();
        assert!(orbit.is_complete(), "{poly:?} should be a Parry number");
        for (n, x) in float_orbit(&approx, 50).iter().enumerate() {
            let exact = rational_of(&orbit.point(n + 1).unwrap());
            assert!((exact - x).abs() < tol, "{poly:?}: T^{}(1)", n + 1);
        }
    }
}

/// `h(x) ≈ Σ_{n=0}^{N} β^{-n} 1[x < T^n(1)]` with `T^0(1) = 1`.
fn truncated_density(beta: &BigRational, orbit: &[BigRational], x: &BigRational) -> f64 {
    let mut sum = 1.0;
    let inv = 1.0 / beta.to_f64().unwrap();
    let mut w = 1.0;
    for t in orbit {
        w *= inv;
        if x < t {
            sum += w;
        }
    }
    sum
}

#[test]
fn density_agrees_with_truncated_series() {
    const N: usize = 60;
    for poly in BASES {
        let beta = field_theta(poly);
        let approx = largest_root(poly);
        let orbit = float_orbit(&approx, N);
        let h = build_density(&orbit_of_one(&beta, DEFAULT_BUDGET).unwrap()).unwrap();
        // tail bound Σ_{n>N} β^{-n}
        let b = approx.to_f64().unwrap();
        let tail = b.powi(-(N as i32)) / (b - 1.0);
        for k in 0..97 {
            let x = BigRational::new(BigInt::from(k), BigInt::from(97));
            // stay away from breakpoints the float orbit cannot resolve
            if orbit.iter().any(|t| (t - &x).abs() < BigRational::new(1.into(), BigInt::from(10u64.pow(12)))) {
                continue;
            }
            let exact = h.evaluate(&FieldElement::from_rational(beta.field(), &x)).unwrap().to_f64();
            let series = truncated_density(&approx, &orbit, &x);
            assert!((exact - series).abs() <= tail + 1e-12, "{poly:?} at {k}/97: {exact} vs {series}");
        }
    }
}

#[test]
fn normalization_constant_agrees_with_truncated_series() {
    const N: usize = 200;
    for poly in BASES {
        let beta = field_theta(poly);
        let approx = largest_root(poly);
        let orbit = float_orbit(&approx, N);
        let mut k = BigRational::one();
        let mut w = BigRational::one();
        let inv = round(&approx.recip());
        for t in &orbit {
            w = round(&(&w * &inv));
            k += &w * t;
        }
        let d = orbit_of_one(&beta, DEFAULT_BUDGET).unwrap();
        let exact = build_density(&d).unwrap().integral();
        assert_eq!(exact, series_k(&d).unwrap());
        let b = approx.to_f64().unwrap();
        let tail = b.powi(-(N as i32)) / (b - 1.0) + 1e-30;
        let diff = (rational_of(&exact) - k).abs().to_f64().unwrap();
        assert!(diff <= tail, "{poly:?}: {diff}");
    }
}
