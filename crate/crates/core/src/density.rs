//! Right-continuous step functions on `[0, 1)` and the Rényi–Parry density
//! `h_β(x) = Σ_{T^n(1) > x} β^{−n}`.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::Serialize;

use crate::dynamics::OrbitDescriptor;
use crate::error::{Error, Result};
use crate::exactnum::{ExactValue, FieldElement, NumberField, Rational};

/// A right-continuous piecewise-constant function on `[0, 1)`.
///
/// `breakpoints` runs `0 = b_0 < b_1 < … < b_r < b_{r+1} = 1` and the
/// function equals `values[i]` on `[b_i, b_{i+1})`. Adjacent values are
/// always distinct, so two step functions agree pointwise exactly when their
/// pieces agree.
#[derive(Clone, Debug)]
pub struct StepFunction {
    breakpoints: Vec<FieldElement>,
    values: Vec<FieldElement>,
}

impl StepFunction {
    /// Builds and canonicalizes a step function from its interior
    /// breakpoints and one value per piece.
    pub fn new(interior: Vec<FieldElement>, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != interior.len() + 1 {
            return Err(Error::DomainError(format!(
                "{} interior breakpoints need {} values, got {}",
                interior.len(),
                interior.len() + 1,
                values.len()
            )));
        }
        let field = values[0].field().clone();
        if interior.iter().chain(&values).any(|e| !e.field().same_as(&field)) {
            return Err(Error::FieldMismatch);
        }
        let mut prev = FieldElement::zero(&field);
        for b in &interior {
            if (b - &prev).sign() <= 0 {
                return Err(Error::DomainError(
                    "breakpoints must increase strictly inside (0, 1)".into(),
                ));
            }
            prev = b.clone();
        }
        if prev.add_int(-1).sign() >= 0 {
            return Err(Error::DomainError("breakpoints must lie below 1".into()));
        }
        Ok(Self::from_sorted(&field, interior, values))
    }

    /// Interior breakpoints already sorted and inside `(0, 1)`.
    pub(crate) fn from_sorted(field: &Arc<NumberField>, interior: Vec<FieldElement>, values: Vec<FieldElement>) -> Self {
        let mut breakpoints = vec![FieldElement::zero(field)];
        let mut merged: Vec<FieldElement> = vec![values[0].clone()];
        for (b, v) in interior.into_iter().zip(values.into_iter().skip(1)) {
            if (&v - merged.last().expect("nonempty")).sign() == 0 {
                continue;
            }
            breakpoints.push(b);
            merged.push(v);
        }
        breakpoints.push(FieldElement::from_int(field, 1));
        StepFunction {
            breakpoints,
            values: merged,
        }
    }

    pub fn constant(value: FieldElement) -> Self {
        let field = value.field().clone();
        Self::from_sorted(&field, Vec::new(), vec![value])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.values[0].field()
    }

    /// All breakpoints including the endpoints 0 and 1.
    pub fn breakpoints(&self) -> &[FieldElement] {
        &self.breakpoints
    }

    pub fn interior_breakpoints(&self) -> &[FieldElement] {
        &self.breakpoints[1..self.breakpoints.len() - 1]
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    /// `(lo, hi, value)` for every piece `[lo, hi)`.
    pub fn pieces(&self) -> impl Iterator<Item = (&FieldElement, &FieldElement, &FieldElement)> {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (&self.breakpoints[i], &self.breakpoints[i + 1], v))
    }

    /// `Σ v_i (b_{i+1} − b_i)`
    pub fn integral(&self) -> FieldElement {
        self.pieces()
            .fold(FieldElement::zero(self.field()), |acc, (lo, hi, v)| {
                &acc + &(v * &(hi - lo))
            })
    }

    /// Divides every value by the integral.
    pub fn normalize(&self) -> Result<StepFunction> {
        let k = self.integral();
        if k.sign() == 0 {
            return Err(Error::ZeroMass);
        }
        let inv = k.invert()?;
        Ok(self.map_values(|v| v * &inv))
    }

    pub fn map_values(&self, f: impl Fn(&FieldElement) -> FieldElement) -> StepFunction {
        let values: Vec<FieldElement> = self.values.iter().map(f).collect();
        Self::from_sorted(self.field(), self.interior_breakpoints().to_vec(), values)
    }

    /// Value at `x ∈ [0, 1)`, taken from the right at breakpoints. `x` may
    /// come from any field.
    pub fn evaluate(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.sign() < 0 || x.add_int(-1).sign() >= 0 {
            return Err(Error::DomainError(format!("{x} is outside [0, 1)")));
        }
        // index of the last breakpoint b_i ≤ x
        let interior = self.interior_breakpoints();
        let idx = interior.partition_point(|b| b.cmp_real(x) != Ordering::Greater);
        Ok(self.values[idx].clone())
    }

    /// Pointwise equality, comparing across fields when needed.
    pub fn equal(&self, other: &StepFunction) -> bool {
        if self.values.len() != other.values.len() {
            return false;
        }
        if self.field().same_as(other.field()) {
            return self
                .values
                .iter()
                .zip(&other.values)
                .chain(self.interior_breakpoints().iter().zip(other.interior_breakpoints()))
                .all(|(a, b)| (a - b).sign() == 0);
        }
        // cheap separation test before the exact comparison
        let w = Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 40));
        let pairs: Vec<_> = self
            .values
            .iter()
            .zip(&other.values)
            .chain(self.interior_breakpoints().iter().zip(other.interior_breakpoints()))
            .collect();
        for (a, b) in &pairs {
            let (alo, ahi) = a.to_interval(&w);
            let (blo, bhi) = b.to_interval(&w);
            if ahi < blo || bhi < alo {
                return false;
            }
        }
        pairs.iter().all(|(a, b)| a.equal_cross_field(b))
    }

    /// Whether values strictly decrease from left to right.
    pub fn is_strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| (&w[0] - &w[1]).sign() > 0)
    }

    pub fn to_report(&self) -> StepFunctionReport {
        StepFunctionReport {
            modulus: self.field().modulus().iter().map(ToString::to_string).collect(),
            segments: self
                .pieces()
                .map(|(lo, hi, v)| Segment {
                    lo: ExactValue::from(lo),
                    hi: ExactValue::from(hi),
                    value: ExactValue::from(v),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Segment {
    pub lo: ExactValue,
    pub hi: ExactValue,
    pub value: ExactValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepFunctionReport {
    pub modulus: Vec<String>,
    pub segments: Vec<Segment>,
}

/// `β^L / (β^L − 1)` for a period of length `L`.
fn period_factor(beta: &FieldElement, len: usize) -> Result<FieldElement> {
    let bl = beta.pow(len as u32);
    bl.checked_div(&bl.add_int(-1))
}

/// Orbit points paired with their coefficients in `h_β`, zero points dropped.
fn density_terms(d: &OrbitDescriptor) -> Result<Vec<(FieldElement, FieldElement)>> {
    if !d.is_complete() {
        return Err(Error::IncompleteOrbit { budget: d.budget });
    }
    let inv = d.beta.invert()?;
    let mut terms = Vec::with_capacity(d.len());
    let mut weight = FieldElement::from_int(d.beta.field(), 1);
    for t in &d.preperiod {
        weight = &weight * &inv;
        terms.push((t.clone(), weight.clone()));
    }
    if !d.period.is_empty() {
        let factor = period_factor(&d.beta, d.period.len())?;
        for y in &d.period {
            weight = &weight * &inv;
            terms.push((y.clone(), &factor * &weight));
        }
    }
    terms.retain(|(t, _)| t.sign() != 0);
    Ok(terms)
}

/// The unnormalized density `h_β = 1 + Σ_n c_n 1_[0, T^n(1))` as a
/// canonical step function.
pub fn build_density(d: &OrbitDescriptor) -> Result<StepFunction> {
    let field = d.beta.field().clone();
    let mut terms = density_terms(d)?;
    terms.sort_by(|a, b| (&a.0 - &b.0).sign().cmp(&0));
    // coincident points add their coefficients
    let mut merged: Vec<(FieldElement, FieldElement)> = Vec::with_capacity(terms.len());
    for (t, c) in terms {
        match merged.last_mut() {
            Some((last, acc)) if (&t - last).sign() == 0 => *acc = &*acc + &c,
            _ => merged.push((t, c)),
        }
    }
    let one = FieldElement::from_int(&field, 1);
    let mut value = merged.iter().fold(one, |acc, (_, c)| &acc + c);
    let mut values = vec![value.clone()];
    let mut interior = Vec::with_capacity(merged.len());
    for (t, c) in merged {
        value = &value - &c;
        values.push(value.clone());
        interior.push(t);
    }
    Ok(StepFunction::from_sorted(&field, interior, values))
}

/// `K_β = Σ_{n ≥ 0} T^n(1) / β^n` with the periodic tail summed in closed form.
pub fn series_k(d: &OrbitDescriptor) -> Result<FieldElement> {
    let terms = density_terms(d)?;
    Ok(terms
        .iter()
        .fold(FieldElement::from_int(d.beta.field(), 1), |acc, (t, c)| {
            &acc + &(t * c)
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{orbit_of_one, DEFAULT_BUDGET};
    use crate::exactnum::{isolate_roots_above_one, quadratic_family_field};
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn golden() -> FieldElement {
        FieldElement::theta(&quadratic_family_field(1, 1).unwrap())
    }

    fn density_of(beta: &FieldElement) -> StepFunction {
        build_density(&orbit_of_one(beta, DEFAULT_BUDGET).unwrap()).unwrap()
    }

    #[test]
    fn golden_density() {
        let b = golden();
        let h = density_of(&b);
        assert_eq!(h.interior_breakpoints(), &[b.add_int(-1)]);
        assert_eq!(h.values()[0], b.invert().unwrap().add_int(1));
        assert_eq!(h.values()[1], FieldElement::from_int(b.field(), 1));
    }

    #[test]
    fn golden_square_density_matches_golden() {
        let b = golden();
        let b2 = b.add_int(1);
        let h2 = density_of(&b2);
        let expected = StepFunction::new(
            vec![b2.add_int(-2)],
            vec![b2.add_int(-1).invert().unwrap().add_int(1), FieldElement::from_int(b.field(), 1)],
        )
        .unwrap();
        assert!(h2.equal(&expected));
        assert!(h2.equal(&density_of(&b)));
    }

    #[test]
    fn integer_base_density_is_constant() {
        let f = isolate_roots_above_one(&[-2, 1].map(BigInt::from)).unwrap()[0].clone();
        let h = density_of(&FieldElement::theta(&f));
        assert_eq!(h.values().len(), 1);
        assert_eq!(h.values()[0], FieldElement::from_int(&f, 1));
    }

    #[test]
    fn integrals_and_series() {
        let b = golden();
        let o = orbit_of_one(&b, DEFAULT_BUDGET).unwrap();
        let k = build_density(&o).unwrap().integral();
        // (5 − √5)/2 = 2 − (θ − 1)... with √5 = 2θ − 1: (6 − 2θ)/2 = 3 − θ
        let expected = (-&b).add_int(3);
        assert_eq!(k, expected);
        assert_eq!(series_k(&o).unwrap(), expected);

        let b2 = b.add_int(1);
        assert_eq!(series_k(&orbit_of_one(&b2, 100).unwrap()).unwrap(), expected);

        let s = FieldElement::theta(&quadratic_family_field(1, 2).unwrap());
        let hs = density_of(&s);
        // 4 − 2√2 with √2 = θ − 1
        assert_eq!(hs.integral(), (&s * &FieldElement::from_int(s.field(), -2)).add_int(6));
        let one = StepFunction::constant(FieldElement::from_int(s.field(), 1));
        assert_eq!(one.integral(), FieldElement::from_int(s.field(), 1));
    }

    #[test]
    fn normalization() {
        let b = golden();
        let n = density_of(&b).normalize().unwrap();
        // (5 + 3√5)/10 and (5 + √5)/10 with √5 = 2θ − 1
        let hi = b.scale(&q(3, 5)).add_rational(&q(1, 5));
        let lo = b.scale(&q(1, 5)).add_rational(&q(2, 5));
        assert_eq!(n.values(), &[hi, lo]);
        assert_eq!(n.integral(), FieldElement::from_int(b.field(), 1));

        let s = FieldElement::theta(&quadratic_family_field(1, 2).unwrap());
        assert_eq!(
            density_of(&s).normalize().unwrap().integral(),
            FieldElement::from_int(s.field(), 1)
        );
        let zero = StepFunction::constant(FieldElement::zero(b.field()));
        assert!(matches!(zero.normalize(), Err(Error::ZeroMass)));
    }

    #[test]
    fn evaluation_is_right_continuous() {
        let b = golden();
        let h = density_of(&b);
        let top = b.invert().unwrap().add_int(1);
        assert_eq!(h.evaluate(&FieldElement::zero(b.field())).unwrap(), top);
        assert_eq!(
            h.evaluate(&b.add_int(-1)).unwrap(),
            FieldElement::from_int(b.field(), 1)
        );
        assert_eq!(
            h.evaluate(&FieldElement::from_rational(b.field(), &q(1, 2))).unwrap(),
            top
        );
        assert!(h.evaluate(&FieldElement::from_int(b.field(), 1)).is_err());
    }

    #[test]
    fn equality_across_fields() {
        let g = density_of(&golden());
        let f2 = isolate_roots_above_one(&[1, -3, 1].map(BigInt::from)).unwrap()[0].clone();
        let h2 = density_of(&FieldElement::theta(&f2));
        assert!(g.equal(&h2));
        let s = density_of(&FieldElement::theta(&quadratic_family_field(1, 2).unwrap()));
        assert!(!g.equal(&s));
        assert!(g.equal(&g));
    }

    #[test]
    fn canonical_merge_and_validation() {
        let f = quadratic_family_field(1, 1).unwrap();
        let c = |n: i64, d: i64| FieldElement::from_rational(&f, &q(n, d));
        let s = StepFunction::new(vec![c(1, 3), c(2, 3)], vec![c(2, 1), c(2, 1), c(1, 1)]).unwrap();
        assert_eq!(s.interior_breakpoints(), &[c(2, 3)]);
        assert!(StepFunction::new(vec![c(2, 3), c(1, 3)], vec![c(1, 1), c(2, 1), c(3, 1)]).is_err());
        assert!(StepFunction::new(vec![c(1, 1)], vec![c(1, 1), c(2, 1)]).is_err());
        assert!(StepFunction::new(vec![c(1, 2)], vec![c(1, 1)]).is_err());
    }
}
