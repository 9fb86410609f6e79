//! Exact iteration of `T_β(x) = βx mod 1` on the orbit of 1.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{ExactValue, FieldElement};

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// The orbit reaches 0.
    SimpleParry,
    /// The orbit is eventually periodic without reaching 0.
    Parry,
    /// Neither 0 nor a repetition was seen within the iteration budget.
    BudgetExceeded,
}

/// The orbit `T_β^n(1)`, `n ≥ 1`, with `T_β^1(1) = β − ⌊β⌋`.
///
/// Points equal to 0 are not listed; `hits_zero` records that the orbit
/// reached 0 right after the last preperiod point.
#[derive(Clone, Debug)]
pub struct OrbitDescriptor {
    pub beta: FieldElement,
    pub preperiod: Vec<FieldElement>,
    pub period: Vec<FieldElement>,
    /// `d_n = ⌊β T^{n−1}(1)⌋` for every computed step, starting with `⌊β⌋`.
    pub digits: Vec<u64>,
    pub classification: Classification,
    pub hits_zero: bool,
    pub budget: usize,
}

fn to_digit(d: &BigInt) -> Result<u64> {
    d.to_u64()
        .ok_or_else(|| Error::DomainError(format!("digit {d} does not fit in 64 bits")))
}

fn check_unit_interval(x: &FieldElement) -> Result<()> {
    if x.sign() < 0 || x.add_int(-1).sign() >= 0 {
        return Err(Error::DomainError(format!("{x} is outside [0, 1)")));
    }
    Ok(())
}

fn check_base(beta: &FieldElement) -> Result<()> {
    if beta.add_int(-1).sign() <= 0 {
        return Err(Error::DomainError(format!("base {beta} is not greater than 1")));
    }
    Ok(())
}

/// One application of `T_β`: returns `(⌊βx⌋, βx − ⌊βx⌋)`.
pub fn step(beta: &FieldElement, x: &FieldElement) -> Result<(u64, FieldElement)> {
    check_base(beta)?;
    check_unit_interval(x)?;
    let bx = beta.checked_mul(x)?;
    let d = bx.floor();
    let next = bx.add_int(-d.clone());
    Ok((to_digit(&d)?, next))
}

/// Iterates the orbit of 1 until it reaches 0, repeats a point, or uses up
/// `budget` points. Repetitions are found by hashing the exact elements.
pub fn orbit_of_one(beta: &FieldElement, budget: usize) -> Result<OrbitDescriptor> {
    check_base(beta)?;
    let first = beta.floor();
    let mut digits = vec![to_digit(&first)?];
    let mut t = beta.add_int(-first);
    let mut points: Vec<FieldElement> = Vec::new();
    // the hash ignores the cached enclosure, the only interior mutability
    #[allow(clippy::mutable_key_type)]
    let mut seen: HashMap<FieldElement, usize> = HashMap::new();
    let done = |preperiod, period, classification, hits_zero, digits| OrbitDescriptor {
        beta: beta.clone(),
        preperiod,
        period,
        digits,
        classification,
        hits_zero,
        budget,
    };
    loop {
        if t.sign() == 0 {
            return Ok(done(points, Vec::new(), Classification::SimpleParry, true, digits));
        }
        if let Some(&j) = seen.get(&t) {
            let period = points.split_off(j);
            return Ok(done(points, period, Classification::Parry, false, digits));
        }
        if points.len() >= budget {
            return Ok(done(points, Vec::new(), Classification::BudgetExceeded, false, digits));
        }
        let bt = beta * &t;
        let d = bt.floor();
        digits.push(to_digit(&d)?);
        seen.insert(t.clone(), points.len());
        points.push(t);
        t = bt.add_int(-d);
    }
}

impl OrbitDescriptor {
    pub fn is_complete(&self) -> bool {
        self.classification != Classification::BudgetExceeded
    }

    /// Number of distinct nonzero orbit points.
    pub fn len(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nonzero points in orbit order.
    pub fn points(&self) -> impl Iterator<Item = &FieldElement> {
        self.preperiod.iter().chain(&self.period)
    }

    /// `T_β^n(1)` for `n ≥ 1`, unrolling the period; `None` when the orbit
    /// is unresolved past the computed points.
    pub fn point(&self, n: usize) -> Option<FieldElement> {
        assert!(n >= 1, "orbit indices start at 1");
        let k = self.preperiod.len();
        if n <= k {
            return Some(self.preperiod[n - 1].clone());
        }
        match self.classification {
            Classification::SimpleParry => Some(FieldElement::zero(self.beta.field())),
            Classification::Parry => Some(self.period[(n - k - 1) % self.period.len()].clone()),
            Classification::BudgetExceeded => None,
        }
    }

    pub fn to_report(&self) -> OrbitReport {
        OrbitReport {
            beta_poly: self.beta.field().modulus().iter().map(ToString::to_string).collect(),
            beta: ExactValue::from(&self.beta),
            preperiod: self.preperiod.iter().map(ExactValue::from).collect(),
            period: self.period.iter().map(ExactValue::from).collect(),
            digits: self.digits.clone(),
            classification: self.classification,
            hits_zero: self.hits_zero,
        }
    }
}

/// `O_β = {T_β^n(1) : n ≥ 1}` as a list of distinct values, including 0
/// when the orbit reaches it.
pub fn orbit_set(d: &OrbitDescriptor) -> Result<Vec<FieldElement>> {
    if !d.is_complete() {
        return Err(Error::IncompleteOrbit { budget: d.budget });
    }
    let mut out: Vec<FieldElement> = d.points().cloned().collect();
    if d.hits_zero {
        out.push(FieldElement::zero(d.beta.field()));
    }
    Ok(out)
}

/// JSON form of an orbit. Orbit points are given in the power basis of the
/// field whose modulus is `beta_poly`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub beta_poly: Vec<String>,
    pub beta: ExactValue,
    pub preperiod: Vec<ExactValue>,
    pub period: Vec<ExactValue>,
    pub digits: Vec<u64>,
    pub classification: Classification,
    pub hits_zero: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{isolate_roots_above_one, quadratic_family_field, Rational};

    fn golden() -> FieldElement {
        FieldElement::theta(&quadratic_family_field(1, 1).unwrap())
    }

    #[test]
    fn step_examples() {
        let b = golden();
        let (d, next) = step(&b, &b.add_int(-1)).unwrap();
        assert_eq!(d, 1);
        assert!(next.is_zero());

        let s = FieldElement::theta(&quadratic_family_field(1, 2).unwrap());
        let (d, next) = step(&s, &s.add_int(-2)).unwrap();
        assert_eq!(d, 1);
        assert!(next.is_zero());

        let q = isolate_roots_above_one(&[-5, 2].map(BigInt::from));
        assert!(q.is_err(), "2x - 5 is not monic");
        let two = isolate_roots_above_one(&[-2, 1].map(BigInt::from)).unwrap()[0].clone();
        let half = FieldElement::from_rational(&two, &Rational::new(5.into(), 2.into()));
        let (d, next) = step(&half, &FieldElement::zero(&two)).unwrap();
        assert_eq!(d, 0);
        assert!(next.is_zero());
    }

    #[test]
    fn step_rejects_points_outside_unit_interval() {
        let b = golden();
        assert!(matches!(step(&b, &b), Err(Error::DomainError(_))));
        assert!(matches!(
            step(&b, &FieldElement::from_int(b.field(), -1)),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(
            step(&b, &FieldElement::from_int(b.field(), 1)),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn golden_orbit_hits_zero() {
        let b = golden();
        let o = orbit_of_one(&b, DEFAULT_BUDGET).unwrap();
        assert_eq!(o.preperiod, vec![b.add_int(-1)]);
        assert!(o.period.is_empty());
        assert_eq!(o.digits, vec![1, 1]);
        assert_eq!(o.classification, Classification::SimpleParry);
        assert!(o.hits_zero);
        let set = orbit_set(&o).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.contains(&b.add_int(-1)));
        assert!(set.contains(&FieldElement::zero(b.field())));
    }

    #[test]
    fn golden_square_orbit_is_a_fixed_point() {
        let b2 = golden().add_int(1);
        let o = orbit_of_one(&b2, DEFAULT_BUDGET).unwrap();
        assert!(o.preperiod.is_empty());
        assert_eq!(o.period, vec![b2.add_int(-2)]);
        assert_eq!(o.classification, Classification::Parry);
        assert!(!o.hits_zero);
        assert_eq!(orbit_set(&o).unwrap(), vec![b2.add_int(-2)]);
        for n in 1..6 {
            assert_eq!(o.point(n).unwrap(), b2.add_int(-2));
        }
    }

    #[test]
    fn integer_base() {
        let f = isolate_roots_above_one(&[-2, 1].map(BigInt::from)).unwrap()[0].clone();
        let o = orbit_of_one(&FieldElement::theta(&f), 10).unwrap();
        assert!(o.hits_zero && o.is_empty());
        assert_eq!(o.digits, vec![2]);
        assert_eq!(orbit_set(&o).unwrap(), vec![FieldElement::zero(&f)]);
    }

    #[test]
    fn budget_exceeded_is_a_classification() {
        // x^2 - x - 3 has a conjugate below -1, so the orbit never cycles
        let f = isolate_roots_above_one(&[-3, -1, 1].map(BigInt::from)).unwrap()[0].clone();
        let o = orbit_of_one(&FieldElement::theta(&f), 30).unwrap();
        assert_eq!(o.classification, Classification::BudgetExceeded);
        assert_eq!(o.preperiod.len(), 30);
        assert!(matches!(orbit_set(&o), Err(Error::IncompleteOrbit { budget: 30 })));
        assert!(o.point(31).is_none());
    }

    #[test]
    fn base_must_exceed_one() {
        let f = quadratic_family_field(1, 1).unwrap();
        let half = FieldElement::from_rational(&f, &Rational::new(1.into(), 2.into()));
        assert!(orbit_of_one(&half, 10).is_err());
    }
}
