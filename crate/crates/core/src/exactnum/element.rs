use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::field::NumberField;
use super::poly::{isolate_real_roots, QPoly};
use super::Rational;
use crate::error::{Error, Result};

/// An element `(c_0 + c_1 θ + … + c_{d−1} θ^{d−1})` of a [`NumberField`],
/// stored as integer numerators over one positive common denominator.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    nums: Vec<BigInt>,
    den: BigInt,
}

impl FieldElement {
    fn from_parts(field: &Arc<NumberField>, nums: Vec<BigInt>, den: BigInt) -> Self {
        debug_assert_eq!(nums.len(), field.degree());
        let mut e = FieldElement {
            field: field.clone(),
            nums,
            den,
        };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for n in &mut self.nums {
                *n = -std::mem::take(n);
            }
        }
        if self.den.is_one() {
            return;
        }
        if self.nums.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for n in &self.nums {
            if g.is_one() {
                return;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            self.den /= &g;
            for n in &mut self.nums {
                *n /= &g;
            }
        }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        FieldElement {
            field: field.clone(),
            nums: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn from_int(field: &Arc<NumberField>, n: impl Into<BigInt>) -> Self {
        let mut nums = vec![BigInt::zero(); field.degree()];
        nums[0] = n.into();
        FieldElement {
            field: field.clone(),
            nums,
            den: BigInt::one(),
        }
    }

    pub fn from_rational(field: &Arc<NumberField>, r: &Rational) -> Self {
        let mut nums = vec![BigInt::zero(); field.degree()];
        nums[0] = r.numer().clone();
        Self::from_parts(field, nums, r.denom().clone())
    }

    /// The generator `θ`.
    pub fn theta(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &QPoly::from_i64(&[0, 1]))
    }

    /// Reduces a rational polynomial in `θ` modulo the field modulus.
    pub fn from_poly(field: &Arc<NumberField>, p: &QPoly) -> Self {
        let r = p.rem(field.modulus_poly());
        let den = r
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = (0..field.degree())
            .map(|i| {
                let c = r.coeff(i);
                c.numer() * (&den / c.denom())
            })
            .collect();
        Self::from_parts(field, nums, den)
    }

    pub fn from_coeffs(field: &Arc<NumberField>, coeffs: Vec<Rational>) -> Self {
        Self::from_poly(field, &QPoly::new(coeffs))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Coefficients `c_0, …, c_{d−1}` in the power basis.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.nums
            .iter()
            .map(|n| Rational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn to_poly(&self) -> QPoly {
        QPoly::new(self.coeffs())
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.nums
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Structural zero test. Exact on certified-irreducible fields; use
    /// [`FieldElement::sign`] for a value test on any field.
    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.nums[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| Rational::new(self.nums[0].clone(), self.den.clone()))
    }

    fn check_field(&self, other: &FieldElement) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        Ok(self.combine(other, true))
    }

    fn combine(&self, other: &FieldElement, subtract: bool) -> FieldElement {
        let nums: Vec<BigInt> = if self.den == other.den {
            self.nums
                .iter()
                .zip(&other.nums)
                .map(|(a, b)| if subtract { a - b } else { a + b })
                .collect()
        } else {
            self.nums
                .iter()
                .zip(&other.nums)
                .map(|(a, b)| {
                    let (x, y) = (a * &other.den, b * &self.den);
                    if subtract {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect()
        };
        let den = if self.den == other.den {
            self.den.clone()
        } else {
            &self.den * &other.den
        };
        Self::from_parts(&self.field, nums, den)
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_field(other)?;
        let d = self.field.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.nums.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.nums.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let m = self.field.modulus();
        for i in (d..2 * d - 1).rev() {
            let c = std::mem::take(&mut prod[i]);
            if c.is_zero() {
                continue;
            }
            for (j, mj) in m[..d].iter().enumerate() {
                if !mj.is_zero() {
                    prod[i - d + j] -= &c * mj;
                }
            }
        }
        prod.truncate(d);
        Ok(Self::from_parts(&self.field, prod, &self.den * &other.den))
    }

    pub fn add_int(&self, k: impl Into<BigInt>) -> FieldElement {
        let mut nums = self.nums.clone();
        nums[0] += k.into() * &self.den;
        FieldElement {
            field: self.field.clone(),
            nums,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, r: &Rational) -> FieldElement {
        let nums = self.nums.iter().map(|n| n * r.numer()).collect();
        Self::from_parts(&self.field, nums, &self.den * r.denom())
    }

    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = FieldElement::from_int(&self.field, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the modulus. A nontrivial common factor is handed back so the caller
    /// can split the field.
    pub fn invert(&self) -> Result<FieldElement> {
        if let Some(r) = self.as_rational() {
            if r.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(FieldElement::from_rational(&self.field, &r.recip()));
        }
        let (g, s) = self.to_poly().gcd_cofactor(self.field.modulus_poly());
        if !g.is_constant() {
            if self.field.divisor_vanishes_at_theta(&g) {
                return Err(Error::DivisionByZero);
            }
            return Err(Error::NonInvertible(g));
        }
        Ok(FieldElement::from_poly(&self.field, &s))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.checked_mul(&other.invert()?)
    }

    /// Whether the real value is zero, including on uncertified fields.
    fn vanishes(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.field.is_certified_irreducible() || self.as_rational().is_some() {
            return false;
        }
        let g = self.to_poly().gcd(self.field.modulus_poly());
        self.field.divisor_vanishes_at_theta(&g)
    }

    fn magnitude_bits(&self) -> u64 {
        self.nums.iter().map(|n| n.bits()).max().unwrap_or(0) + self.den.bits()
    }

    /// Tightens the field enclosure until `accept` is satisfied by the
    /// bounds `[lo, hi] / scale` of the real value.
    fn refine_until<T>(&self, mut accept: impl FnMut(&BigInt, &BigInt, &BigInt) -> Option<T>) -> T {
        let mut enc = self.field.enclosure();
        let mut target = enc.precision().min(1 << 20);
        loop {
            let (lo, hi) = enc.eval(&self.nums);
            let scale = &self.den << enc.bits;
            if let Some(t) = accept(&lo, &hi, &scale) {
                return t;
            }
            target = (2 * target).max(self.magnitude_bits() + 64);
            enc = self.field.refine_to(target);
        }
    }

    /// Exact sign of the real value.
    pub fn sign(&self) -> i32 {
        if let Some(r) = self.as_rational() {
            return super::poly::sign_of(&r);
        }
        if self.vanishes() {
            return 0;
        }
        self.refine_until(|lo, hi, _| {
            if lo.is_positive() {
                Some(1)
            } else if hi.is_negative() {
                Some(-1)
            } else {
                None
            }
        })
    }

    /// The integer `n` with `n ≤ self < n + 1`.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor().to_integer();
        }
        let (n_lo, n_hi) = self.refine_until(|lo, hi, scale| {
            let a = lo.div_floor(scale);
            let b = hi.div_floor(scale);
            (&b - &a <= BigInt::one()).then_some((a, b))
        });
        if n_lo == n_hi || self.add_int(-n_hi.clone()).sign() >= 0 {
            n_hi
        } else {
            n_lo
        }
    }

    /// Whether the value is an integer.
    pub fn is_integer_valued(&self) -> bool {
        let f = self.floor();
        self.add_int(-f).sign() == 0
    }

    /// Rational enclosure `[lo, hi]` of the value with `hi − lo ≤ width`.
    pub fn to_interval(&self, width: &Rational) -> (Rational, Rational) {
        assert!(width.is_positive(), "interval width must be positive");
        if let Some(r) = self.as_rational() {
            return (r.clone(), r);
        }
        self.refine_until(|lo, hi, scale| {
            let w = Rational::new(hi - lo, scale.clone());
            (&w <= width).then(|| {
                (
                    Rational::new(lo.clone(), scale.clone()),
                    Rational::new(hi.clone(), scale.clone()),
                )
            })
        })
    }

    /// Rounded decimal rendering with `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let ten = BigInt::from(10);
        let width = Rational::new(BigInt::one(), num_traits::pow(ten.clone(), digits + 8));
        let (lo, hi) = self.to_interval(&width);
        let mid = (lo + hi) / Rational::from_integer(BigInt::from(2));
        format_decimal(&mid, digits)
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.to_interval(&Rational::new(BigInt::one(), BigInt::one() << 60));
        let mid = (lo + hi) / Rational::from_integer(BigInt::from(2));
        rational_to_f64(&mid)
    }

    /// Characteristic polynomial of multiplication by `self`, monic of the
    /// field degree (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> QPoly {
        let d = self.field.degree();
        let theta = FieldElement::theta(&self.field);
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        for j in 0..d {
            if j > 0 {
                cur = &cur * &theta;
            }
            cols.push(cur.coeffs());
        }
        // a[i][j] = row i, column j
        let a: Vec<Vec<Rational>> = (0..d)
            .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
            .collect();
        let mut coeffs = vec![Rational::zero(); d + 1];
        coeffs[d] = Rational::one();
        let mut m = vec![vec![Rational::zero(); d]; d];
        for k in 1..=d {
            // m ← a·m + c_{d−k+1} I
            let mut next = vec![vec![Rational::zero(); d]; d];
            for i in 0..d {
                for j in 0..d {
                    let mut s = Rational::zero();
                    for l in 0..d {
                        if !a[i][l].is_zero() && !m[l][j].is_zero() {
                            s += &a[i][l] * &m[l][j];
                        }
                    }
                    next[i][j] = s;
                }
                next[i][i] += &coeffs[d - k + 1];
            }
            m = next;
            let mut tr = Rational::zero();
            for i in 0..d {
                for l in 0..d {
                    tr += &a[i][l] * &m[l][i];
                }
            }
            coeffs[d - k] = -tr / Rational::from_integer(BigInt::from(k));
        }
        QPoly::new(coeffs)
    }

    /// Squarefree part of the characteristic polynomial. On an irreducible
    /// field this is the minimal polynomial of the value.
    pub fn min_poly(&self) -> QPoly {
        self.char_poly().squarefree()
    }

    /// `p(self)` evaluated in the field.
    pub fn eval_poly(&self, p: &QPoly) -> FieldElement {
        p.coeffs()
            .iter()
            .rev()
            .fold(FieldElement::zero(&self.field), |acc, c| {
                (&acc * self).add_rational(c)
            })
    }

    pub fn add_rational(&self, r: &Rational) -> FieldElement {
        self + &FieldElement::from_rational(&self.field, r)
    }

    /// Whether two elements, possibly of different fields, have the same
    /// real value.
    pub fn equal_cross_field(&self, other: &FieldElement) -> bool {
        if self.field.same_as(&other.field) {
            return self.checked_sub(other).map(|d| d.sign() == 0).unwrap_or(false);
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => return a == b,
            (Some(a), None) => return other.add_rational(&-a).sign() == 0,
            (None, Some(b)) => return self.add_rational(&-b).sign() == 0,
            (None, None) => {}
        }
        let w = Rational::new(BigInt::one(), BigInt::one() << 40);
        let (alo, ahi) = self.to_interval(&w);
        let (blo, bhi) = other.to_interval(&w);
        if ahi < blo || bhi < alo {
            return false;
        }
        let g = self.min_poly().gcd(&other.min_poly());
        if g.is_constant() {
            return false;
        }
        if self.eval_poly(&g).sign() != 0 || other.eval_poly(&g).sign() != 0 {
            return false;
        }
        // both values are real roots of g; compare which isolating interval
        let roots = isolate_real_roots(&g);
        let locate = |e: &FieldElement| {
            roots.iter().position(|(l, r)| {
                e.add_rational(&-l.clone()).sign() > 0 && e.add_rational(&-r.clone()).sign() < 0
            })
        };
        let ia = locate(self);
        ia.is_some() && ia == locate(other)
    }

    /// Total order on real values across fields.
    pub fn cmp_real(&self, other: &FieldElement) -> Ordering {
        if self.field.same_as(&other.field) {
            return (self - other).sign().cmp(&0);
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => return a.cmp(&b),
            (Some(a), None) => return 0.cmp(&other.add_rational(&-a).sign()),
            (None, Some(b)) => return self.add_rational(&-b).sign().cmp(&0),
            (None, None) => {}
        }
        if self.equal_cross_field(other) {
            return Ordering::Equal;
        }
        let mut bits = 64u32;
        loop {
            let w = Rational::new(BigInt::one(), BigInt::one() << bits);
            let (alo, ahi) = self.to_interval(&w);
            let (blo, bhi) = other.to_interval(&w);
            if ahi < blo {
                return Ordering::Less;
            }
            if bhi < alo {
                return Ordering::Greater;
            }
            bits *= 2;
        }
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn format_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * Rational::from_integer(scale.clone());
    // round half away from zero
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let n = if scaled.is_negative() {
        -((-scaled) + half).floor().to_integer()
    } else {
        (scaled + half).floor().to_integer()
    };
    let neg = n.is_negative();
    let abs = n.abs();
    let (int, frac) = abs.div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
}

impl PartialEq for FieldElement {
    /// Structural equality of the reduced representation within one field.
    fn eq(&self, other: &Self) -> bool {
        self.nums == other.nums && self.den == other.den && self.field.same_as(&other.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.modulus().hash(state);
        self.nums.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in Q[θ]/({})", self, self.field.modulus_poly())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly().to_string().replace('x', "θ"))
    }
}

/// Exact and decimal rendering of a field element for reports.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExactValue {
    pub decimal: String,
    pub coeffs: Vec<String>,
}

impl From<&FieldElement> for ExactValue {
    fn from(e: &FieldElement) -> Self {
        ExactValue {
            decimal: e.to_decimal(20),
            coeffs: e.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            /// Panics when the operands belong to different fields.
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            nums: self.nums.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
