//! Real algebraic number fields `Q(θ)` with `θ > 1` pinned down by an
//! isolating interval.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

use super::poly::{count_roots, integer_roots, isolate_real_roots_in, power_of_two_above, QPoly};
use super::Rational;
use crate::error::{Error, Result};

/// Dyadic enclosure of the generator, `θ ∈ [lo, hi] / 2^bits`, together with
/// integer bounds on `θ^i · 2^bits` for every basis power.
#[derive(Debug)]
pub(crate) struct Enclosure {
    pub(crate) bits: u64,
    pub(crate) lo: BigInt,
    pub(crate) hi: BigInt,
    pub(crate) pow_lo: Vec<BigInt>,
    pub(crate) pow_hi: Vec<BigInt>,
}

impl Enclosure {
    fn new(bits: u64, lo: BigInt, hi: BigInt, degree: usize) -> Self {
        let one = BigInt::one() << bits;
        let mut pow_lo = vec![one.clone()];
        let mut pow_hi = vec![one];
        let (mut plo, mut phi) = (lo.clone(), hi.clone());
        for i in 1..degree {
            let shift = bits * (i as u64 - 1);
            pow_lo.push(&plo >> shift);
            let ceil = (&phi + ((BigInt::one() << shift) - 1)) >> shift;
            pow_hi.push(ceil);
            plo *= &lo;
            phi *= &hi;
        }
        Enclosure { bits, lo, hi, pow_lo, pow_hi }
    }

    fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Number of correct binary digits after the point.
    pub(crate) fn precision(&self) -> u64 {
        if self.is_exact() {
            return u64::MAX;
        }
        self.bits.saturating_sub((&self.hi - &self.lo).bits())
    }

    /// Bounds `[s_lo, s_hi] / (den · 2^bits)` on `Σ nums[i] θ^i / den`.
    pub(crate) fn eval(&self, nums: &[BigInt]) -> (BigInt, BigInt) {
        let mut s_lo = BigInt::zero();
        let mut s_hi = BigInt::zero();
        for (i, n) in nums.iter().enumerate() {
            match n.sign() {
                Sign::NoSign => {}
                Sign::Plus => {
                    s_lo += n * &self.pow_lo[i];
                    s_hi += n * &self.pow_hi[i];
                }
                Sign::Minus => {
                    s_lo += n * &self.pow_hi[i];
                    s_hi += n * &self.pow_lo[i];
                }
            }
        }
        (s_lo, s_hi)
    }
}

/// `Q[x]/(m)` with a distinguished real root `θ > 1` of the monic integer
/// polynomial `m`.
pub struct NumberField {
    modulus: Vec<BigInt>,
    modulus_poly: QPoly,
    root_interval: (Rational, Rational),
    irreducible: bool,
    enclosure: RwLock<Arc<Enclosure>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("modulus", &self.modulus_poly.to_string())
            .field("root_interval", &self.root_interval)
            .finish()
    }
}

fn two() -> Rational {
    Rational::from_integer(BigInt::from(2))
}

/// Sign of `m(n / 2^k)` for an integer polynomial `m`.
fn sign_at_dyadic(m: &[BigInt], n: &BigInt, k: u64) -> i32 {
    let d = m.len() - 1;
    let mut acc = BigInt::zero();
    let mut npow = BigInt::one();
    for (i, c) in m.iter().enumerate() {
        if !c.is_zero() {
            acc += (c * &npow) << (k * (d - i) as u64);
        }
        npow *= n;
    }
    match acc.sign() {
        Sign::Plus => 1,
        Sign::Minus => -1,
        Sign::NoSign => 0,
    }
}

/// `(n, k)` with `r = n / 2^k`, when `r` is dyadic.
fn as_dyadic(r: &Rational) -> Option<(BigInt, u64)> {
    let den = r.denom();
    let k = den.bits() - 1;
    (den == &(BigInt::one() << k)).then(|| (r.numer().clone(), k))
}

impl NumberField {
    /// Builds a field from a monic integer modulus and an interval that
    /// isolates exactly one root `θ > 1`.
    pub fn new(modulus: Vec<BigInt>, lo: Rational, hi: Rational) -> Result<Arc<Self>> {
        validate_monic(&modulus)?;
        let poly = QPoly::from_integers(&modulus);
        if lo > hi {
            return Err(Error::InvalidPolynomial("empty root interval".into()));
        }
        let sf = poly.squarefree();
        if sf.degree() != poly.degree() {
            return Err(Error::InvalidPolynomial(format!(
                "modulus {poly} is not squarefree"
            )));
        }
        let on_lo = poly.eval(&lo).is_zero();
        let inside = count_roots(&poly.sturm_sequence(), &lo, &hi) + usize::from(on_lo);
        if inside != 1 {
            return Err(Error::InvalidPolynomial(format!(
                "interval [{lo}, {hi}] holds {inside} roots of {poly}"
            )));
        }
        let one = Rational::one();
        let below_one = if on_lo {
            lo <= one
        } else if hi <= one {
            true
        } else {
            lo < one && (poly.eval(&one).is_zero() || count_roots(&poly.sturm_sequence(), &lo, &one) == 1)
        };
        if below_one {
            return Err(Error::NoRootAboveOne);
        }
        let irreducible = poly.degree() == Some(1)
            || (poly.degree().unwrap_or(0) <= 3 && integer_roots(&modulus).is_empty());
        Ok(Arc::new(Self::build(modulus, poly, lo, hi, irreducible)))
    }

    fn build(modulus: Vec<BigInt>, poly: QPoly, lo: Rational, hi: Rational, irreducible: bool) -> Self {
        let degree = modulus.len() - 1;
        let enclosure = Self::initial_enclosure(&modulus, &poly, &lo, &hi, degree);
        let mut field = NumberField {
            modulus,
            modulus_poly: poly,
            root_interval: (lo, hi),
            irreducible,
            enclosure: RwLock::new(Arc::new(enclosure)),
        };
        let enc = field.refine_to(64);
        let scale = Rational::from_integer(BigInt::one() << enc.bits);
        let lo = Rational::from_integer(enc.lo.clone()) / &scale;
        let hi = Rational::from_integer(enc.hi.clone()) / &scale;
        if lo > field.root_interval.0 {
            field.root_interval.0 = lo;
        }
        if hi < field.root_interval.1 {
            field.root_interval.1 = hi;
        }
        field
    }

    fn initial_enclosure(modulus: &[BigInt], poly: &QPoly, lo: &Rational, hi: &Rational, degree: usize) -> Enclosure {
        if poly.eval(lo).is_zero() {
            return exact_enclosure(lo, degree);
        }
        if poly.eval(hi).is_zero() {
            return exact_enclosure(hi, degree);
        }
        if let (Some((nl, kl)), Some((nh, kh))) = (as_dyadic(lo), as_dyadic(hi)) {
            let k = kl.max(kh);
            return Enclosure::new(k, nl << (k - kl), nh << (k - kh), degree);
        }
        // shrink with rational bisection, then widen outward to dyadic endpoints
        let seq = poly.sturm_sequence();
        let (mut a, mut b) = (lo.clone(), hi.clone());
        let mut k = 8u64;
        loop {
            let scale = BigInt::one() << k;
            let nl = (a.clone() * Rational::from_integer(scale.clone())).floor().to_integer();
            let nh = (b.clone() * Rational::from_integer(scale.clone())).ceil().to_integer();
            let dl = Rational::new(nl.clone(), scale.clone());
            let dh = Rational::new(nh.clone(), scale);
            if sign_at_dyadic(modulus, &nl, k) * sign_at_dyadic(modulus, &nh, k) < 0
                && count_roots(&seq, &dl, &dh) == 1
            {
                return Enclosure::new(k, nl, nh, degree);
            }
            let mid = (&a + &b) / two();
            if poly.eval(&mid).is_zero() {
                return exact_enclosure(&mid, degree);
            }
            if poly.sign_at(&a) * poly.sign_at(&mid) < 0 {
                b = mid;
            } else {
                a = mid;
            }
            k += 8;
        }
    }

    pub(crate) fn from_parts(modulus: Vec<BigInt>, lo: Rational, hi: Rational, irreducible: bool) -> Arc<Self> {
        let poly = QPoly::from_integers(&modulus);
        Arc::new(Self::build(modulus, poly, lo, hi, irreducible))
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn modulus_poly(&self) -> &QPoly {
        &self.modulus_poly
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn root_interval(&self) -> &(Rational, Rational) {
        &self.root_interval
    }

    /// Whether the modulus is known to be irreducible (degree at most 3 with
    /// no rational root). Zero tests on uncertified fields go through a gcd.
    pub fn is_certified_irreducible(&self) -> bool {
        self.irreducible
    }

    pub(crate) fn enclosure(&self) -> Arc<Enclosure> {
        self.enclosure.read().expect("enclosure lock poisoned").clone()
    }

    /// Enclosure with at least `target` bits after the point.
    pub(crate) fn refine_to(&self, target: u64) -> Arc<Enclosure> {
        let current = self.enclosure();
        if current.precision() >= target {
            return current;
        }
        let refined = Arc::new(self.bisect(&current, target));
        let mut guard = self.enclosure.write().expect("enclosure lock poisoned");
        if guard.precision() < refined.precision() {
            *guard = refined.clone();
        }
        guard.clone()
    }

    fn bisect(&self, enc: &Enclosure, target: u64) -> Enclosure {
        let m = &self.modulus;
        let (mut lo, mut hi, mut bits) = (enc.lo.clone(), enc.hi.clone(), enc.bits);
        let s_lo = sign_at_dyadic(m, &lo, bits);
        let width_bits = (&hi - &lo).bits();
        while bits.saturating_sub(width_bits) < target {
            let mid = &lo + &hi;
            lo <<= 1;
            hi <<= 1;
            bits += 1;
            let s = sign_at_dyadic(m, &mid, bits);
            if s == 0 {
                return Enclosure::new(bits, mid.clone(), mid, self.degree());
            }
            if s == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Enclosure::new(bits, lo, hi, self.degree())
    }

    /// Rational enclosure of `θ` with width at most `2^-bits`.
    pub fn theta_interval(&self, bits: u64) -> (Rational, Rational) {
        let enc = self.refine_to(bits);
        let scale = BigInt::one() << enc.bits;
        (
            Rational::new(enc.lo.clone(), scale.clone()),
            Rational::new(enc.hi.clone(), scale),
        )
    }

    /// Whether both fields denote the same modulus and the same root.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        if Arc::ptr_eq(self, other) {
            return true;
        }
        if self.modulus != other.modulus {
            return false;
        }
        // the root interval of `self` isolates a single root, so the other
        // root is the same one iff it lies inside it
        let (a, b) = &self.root_interval;
        let mut bits = 64;
        loop {
            let (lo, hi) = other.theta_interval(bits);
            if &lo >= a && &hi <= b {
                return true;
            }
            if &hi < a || &lo > b {
                return false;
            }
            bits *= 2;
        }
    }

    /// True if the real root of `g` lying in the isolating interval is `θ`,
    /// for a divisor `g` of the modulus.
    pub(crate) fn divisor_vanishes_at_theta(&self, g: &QPoly) -> bool {
        if g.is_constant() {
            return false;
        }
        let (a, b) = &self.root_interval;
        g.eval(a).is_zero() || count_roots(&g.sturm_sequence(), a, b) > 0
    }

    /// Field over whichever of `factor` and `modulus / factor` has `θ` as a
    /// root, for a monic integer factor found by [`super::FieldElement::invert`].
    pub fn split(&self, factor: &QPoly) -> Result<Arc<Self>> {
        let (cofactor, rem) = self.modulus_poly.div_rem(factor);
        if !rem.is_zero() || factor.is_constant() || cofactor.is_constant() {
            return Err(Error::InvalidPolynomial(format!(
                "{factor} is not a proper factor of {}",
                self.modulus_poly
            )));
        }
        let keep = if self.divisor_vanishes_at_theta(&factor.monic()) {
            factor.monic()
        } else {
            cofactor.monic()
        };
        let modulus = keep
            .to_integers()
            .ok_or_else(|| Error::InvalidPolynomial(format!("{keep} has non-integer coefficients")))?;
        let enc = self.enclosure();
        let scale = BigInt::one() << enc.bits;
        let lo = Rational::new(enc.lo.clone(), scale.clone());
        let hi = Rational::new(enc.hi.clone(), scale);
        let (lo, hi) = (lo.max(self.root_interval.0.clone()), hi.min(self.root_interval.1.clone()));
        NumberField::new(modulus, lo, hi)
    }
}

fn exact_enclosure(r: &Rational, degree: usize) -> Enclosure {
    let (n, k) = as_dyadic(r).expect("rational roots of monic integer polynomials are integers");
    Enclosure::new(k, n.clone(), n, degree)
}

pub(crate) fn validate_monic(modulus: &[BigInt]) -> Result<()> {
    match modulus.last() {
        None => Err(Error::InvalidPolynomial("empty polynomial".into())),
        Some(_) if modulus.len() < 2 => Err(Error::InvalidPolynomial(
            "polynomial must have degree at least 1".into(),
        )),
        Some(lc) if !lc.is_one() => Err(Error::InvalidPolynomial(
            "leading coefficient must be 1".into(),
        )),
        Some(_) => Ok(()),
    }
}

/// Parses comma-separated integer coefficients, constant term first.
pub fn parse_poly(text: &str) -> Result<Vec<BigInt>> {
    let coeffs = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::InvalidPolynomial(format!("bad coefficient {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_monic(&coeffs)?;
    Ok(coeffs)
}

/// One field per distinct real root `θ > 1` of a monic integer polynomial,
/// ordered by increasing root.
///
/// Integer roots become linear fields; the remaining roots share the
/// squarefree part with its integer roots divided out.
pub fn isolate_roots_above_one(poly: &[BigInt]) -> Result<Vec<Arc<NumberField>>> {
    validate_monic(poly)?;
    let sf = QPoly::from_integers(poly).squarefree();
    let sf_int = sf.to_integers().expect("monic factors of monic integer polynomials are integral");
    let roots = integer_roots(&sf_int);
    let mut rest = sf;
    let mut fields = Vec::new();
    for r in &roots {
        rest = rest.div_rem(&QPoly::linear_root(&Rational::from_integer(r.clone()))).0;
        if r > &BigInt::one() {
            let q = Rational::from_integer(r.clone());
            fields.push(NumberField::from_parts(vec![-r.clone(), BigInt::one()], q.clone(), q, true));
        }
    }
    if !rest.is_constant() {
        let modulus = rest.to_integers().expect("integral cofactor");
        let irreducible = rest.degree().unwrap_or(0) <= 3;
        let bound = power_of_two_above(&rest.cauchy_bound());
        for (a, b) in isolate_real_roots_in(&rest, &Rational::one(), &bound) {
            fields.push(NumberField::from_parts(modulus.clone(), a, b, irreducible));
        }
    }
    if fields.is_empty() {
        return Err(Error::NoRootAboveOne);
    }
    fields.sort_by(compare_roots);
    Ok(fields)
}

fn compare_roots(a: &Arc<NumberField>, b: &Arc<NumberField>) -> Ordering {
    if a.same_as(b) {
        return Ordering::Equal;
    }
    let mut bits = 64;
    loop {
        let (alo, ahi) = a.theta_interval(bits);
        let (blo, bhi) = b.theta_interval(bits);
        if ahi < blo {
            return Ordering::Less;
        }
        if bhi < alo {
            return Ordering::Greater;
        }
        bits *= 2;
    }
}

/// Field of the root `θ = (q + √(q² + 4p)) / 2 > 1` of `x² − qx − p`.
pub fn quadratic_family_field(p: i64, q: i64) -> Result<Arc<NumberField>> {
    if p < 1 || p > q {
        return Err(Error::InvalidFamily { p, q });
    }
    let modulus = vec![BigInt::from(-p), BigInt::from(-q), BigInt::one()];
    let lo = Rational::from_integer(BigInt::from(q));
    let hi = Rational::from_integer(BigInt::from(q + 1));
    Ok(NumberField::from_parts(modulus, lo, hi, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn golden_root_is_isolated_in_three_halves_to_thirteen_eighths() {
        let fields = isolate_roots_above_one(&ints(&[-1, -1, 1])).unwrap();
        assert_eq!(fields.len(), 1);
        let (lo, hi) = fields[0].root_interval().clone();
        assert!(lo >= q(3, 2) && hi <= q(13, 8), "[{lo}, {hi}]");
        assert!(lo > Rational::one());
        // θ ∈ [lo, hi] iff lo² − lo − 1 ≤ 0 ≤ hi² − hi − 1
        let m = QPoly::from_i64(&[-1, -1, 1]);
        assert!(m.eval(&lo) <= Rational::zero() && m.eval(&hi) >= Rational::zero());
    }

    #[test]
    fn linear_polynomial_gives_integer_root() {
        let fields = isolate_roots_above_one(&ints(&[-2, 1])).unwrap();
        assert_eq!(fields.len(), 1);
        assert_eq!(fields[0].root_interval(), &(q(2, 1), q(2, 1)));
        assert_eq!(fields[0].degree(), 1);
    }

    #[test]
    fn no_real_root_above_one() {
        assert!(matches!(
            isolate_roots_above_one(&ints(&[1, 0, 1])),
            Err(Error::NoRootAboveOne)
        ));
        assert!(matches!(
            isolate_roots_above_one(&ints(&[-1, 1])),
            Err(Error::NoRootAboveOne)
        ));
    }

    #[test]
    fn reducible_input_splits_off_integer_roots() {
        // (x - 3)(x^2 - x - 1)(x + 2)
        let p = QPoly::from_i64(&[-3, 1])
            .mul(&QPoly::from_i64(&[-1, -1, 1]))
            .mul(&QPoly::from_i64(&[2, 1]));
        let fields = isolate_roots_above_one(&p.to_integers().unwrap()).unwrap();
        assert_eq!(fields.len(), 2);
        assert_eq!(fields[0].modulus(), &ints(&[-1, -1, 1])[..]);
        assert_eq!(fields[1].modulus(), &ints(&[-3, 1])[..]);
    }

    #[test]
    fn several_roots_are_sorted_and_disjoint() {
        // (x^2 - 2)(x^2 - 3) has roots √2 < √3 above one
        let fields = isolate_roots_above_one(&ints(&[6, 0, -5, 0, 1])).unwrap();
        assert_eq!(fields.len(), 2);
        assert!(fields[0].root_interval().1 < fields[1].root_interval().0);
        assert!(!fields[0].is_certified_irreducible());
    }

    #[test]
    fn family_field_interval() {
        let f = quadratic_family_field(1, 2).unwrap();
        let (lo, hi) = f.root_interval();
        assert!(lo >= &q(2, 1) && hi <= &q(3, 1));
        assert!(matches!(
            quadratic_family_field(2, 1),
            Err(Error::InvalidFamily { p: 2, q: 1 })
        ));
        assert!(quadratic_family_field(0, 3).is_err());
    }

    #[test]
    fn refinement_reaches_requested_width() {
        let f = quadratic_family_field(1, 1).unwrap();
        let (lo, hi) = f.theta_interval(300);
        let width = &hi - &lo;
        assert!(width <= Rational::new(BigInt::one(), BigInt::one() << 300));
    }

    #[test]
    fn non_dyadic_interval_is_accepted() {
        let f = NumberField::new(ints(&[-1, -1, 1]), q(3, 2), q(5, 3)).unwrap();
        let (lo, hi) = f.theta_interval(40);
        assert!(lo > q(3, 2) && hi < q(5, 3));
        assert!(NumberField::new(ints(&[-1, -1, 1]), q(-1, 1), q(5, 3)).is_err());
    }

    #[test]
    fn parse_text_format() {
        assert_eq!(parse_poly("-1,-1,1").unwrap(), ints(&[-1, -1, 1]));
        assert_eq!(parse_poly(" -2 , 1").unwrap(), ints(&[-2, 1]));
        assert!(parse_poly("-1,2").is_err());
        assert!(parse_poly("1").is_err());
        assert!(parse_poly("a,1").is_err());
    }
}
