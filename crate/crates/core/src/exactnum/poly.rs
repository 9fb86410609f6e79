//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored from the constant term upwards and kept trimmed,
//! so the zero polynomial is the empty vector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Rational) -> Self {
        QPoly::new(vec![-r.clone(), Rational::one()])
    }

    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        QPoly::new(coeffs.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QPoly::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        QPoly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn scale(&self, s: &Rational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = &rem[i] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &c * d;
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Returns `(g, s)` with `g = gcd(self, m)` monic and `s·self ≡ g (mod m)`.
    pub fn gcd_cofactor(&self, m: &QPoly) -> (QPoly, QPoly) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let lc = r0.leading();
        if lc.is_zero() {
            return (QPoly::zero(), QPoly::zero());
        }
        let inv = lc.recip();
        (r0.scale(&inv), s0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree(&self) -> QPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        sign_of(&self.eval(x))
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Strictly larger than the absolute value of every complex root.
    pub fn cauchy_bound(&self) -> Rational {
        let lc = self.leading().abs();
        let mut m = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let r = c.abs() / &lc;
            if r > m {
                m = r;
            }
        }
        m + Rational::one()
    }

    pub fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }
}

pub(crate) fn sign_of(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_variations(seq: &[QPoly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots(seq: &[QPoly], a: &Rational, b: &Rational) -> usize {
    sign_variations(seq, a).saturating_sub(sign_variations(seq, b))
}

/// Isolates every real root of `p` in the open interval `(lo, hi)`, ordered
/// left to right. Each returned `(a, b)` holds exactly one root in its
/// interior and neither endpoint is a root. `lo` and `hi` must not be roots.
pub fn isolate_real_roots_in(p: &QPoly, lo: &Rational, hi: &Rational) -> Vec<(Rational, Rational)> {
    let sf = p.squarefree();
    if sf.is_constant() {
        return Vec::new();
    }
    let seq = sf.sturm_sequence();
    let mut out = Vec::new();
    let two = Rational::from_integer(BigInt::from(2));
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        match count_roots(&seq, &a, &b) {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let mut mid = (&a + &b) / &two;
                while sf.eval(&mid).is_zero() {
                    mid = (&mid + &b) / &two;
                }
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Isolates all real roots of `p`.
pub fn isolate_real_roots(p: &QPoly) -> Vec<(Rational, Rational)> {
    let sf = p.squarefree();
    if sf.is_constant() {
        return Vec::new();
    }
    let b = power_of_two_above(&sf.cauchy_bound());
    isolate_real_roots_in(&sf, &-b.clone(), &b)
}

/// Smallest power of two strictly greater than `r` (and at least 1).
pub(crate) fn power_of_two_above(r: &Rational) -> Rational {
    let mut b = Rational::one();
    while &b <= r {
        b *= Rational::from_integer(BigInt::from(2));
    }
    b
}

/// Integer roots of a monic integer polynomial (the only rational ones).
pub fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let Some(c0) = coeffs.first() else {
        return Vec::new();
    };
    let p = QPoly::from_integers(coeffs);
    if c0.is_zero() {
        let mut roots = integer_roots(&coeffs[1..]);
        roots.push(BigInt::zero());
        roots.sort();
        roots.dedup();
        return roots;
    }
    let mut roots = Vec::new();
    for d in divisors(&c0.abs()) {
        for cand in [d.clone(), -d] {
            if p.eval(&Rational::from_integer(cand.clone())).is_zero() {
                roots.push(cand);
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &(&d * &d) <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = a.is_one();
            match i {
                0 => write!(f, "{a}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{a}*x")?,
                _ if unit => write!(f, "x^{i}")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn division_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = QPoly::from_i64(&[-1, 0, 1]);
        let b = QPoly::from_i64(&[1, 1]);
        let (qu, r) = a.div_rem(&b);
        assert_eq!(qu, QPoly::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        let g = a.gcd(&QPoly::from_i64(&[-1, 1]).mul(&QPoly::from_i64(&[2, 1])));
        assert_eq!(g, QPoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn cofactor_inverts_modulo() {
        let m = QPoly::from_i64(&[-1, -1, 1]);
        let a = QPoly::from_i64(&[0, 1]);
        let (g, s) = a.gcd_cofactor(&m);
        assert_eq!(g, QPoly::one());
        assert_eq!(s.mul(&a).rem(&m), QPoly::one());
    }

    #[test]
    fn squarefree_part() {
        // (x - 1)^2 (x + 2)
        let p = QPoly::from_i64(&[-1, 1])
            .pow(2)
            .mul(&QPoly::from_i64(&[2, 1]));
        assert_eq!(p.squarefree(), QPoly::from_i64(&[-2, 1, 1]));
    }

    #[test]
    fn sturm_counts_golden_roots() {
        let p = QPoly::from_i64(&[-1, -1, 1]);
        let seq = p.sturm_sequence();
        assert_eq!(count_roots(&seq, &q(-2, 1), &q(2, 1)), 2);
        assert_eq!(count_roots(&seq, &q(1, 1), &q(2, 1)), 1);
        assert_eq!(count_roots(&seq, &q(3, 2), &q(13, 8)), 1);
    }

    #[test]
    fn isolation_finds_rational_and_irrational_roots() {
        // (x - 1/2)(x^2 - 2)
        let p = QPoly::new(vec![q(1, 1), q(-2, 1), q(-1, 2), q(1, 1)]);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().any(|(a, b)| a < &q(1, 2) && &q(1, 2) < b));
        for (a, b) in &roots {
            assert!(a < b);
            assert!(!p.eval(a).is_zero() && !p.eval(b).is_zero());
        }
    }

    #[test]
    fn integer_root_search() {
        // (x - 2)(x + 3) x
        let c: Vec<BigInt> = [0, -6, 1, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(
            integer_roots(&c),
            vec![BigInt::from(-3), BigInt::from(0), BigInt::from(2)]
        );
        let none: Vec<BigInt> = [-1, -1, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert!(integer_roots(&none).is_empty());
    }

    #[test]
    fn display() {
        assert_eq!(QPoly::from_i64(&[-1, -1, 1]).to_string(), "x^2 - x - 1");
        assert_eq!(QPoly::from_i64(&[3, 0, 0, 2]).to_string(), "2*x^3 + 3");
    }
}
