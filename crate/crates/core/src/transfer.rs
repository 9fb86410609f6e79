//! The transfer operator of `T_β` acting on step functions.

use serde::Serialize;

use crate::density::StepFunction;
use crate::error::{Error, Result};
use crate::exactnum::{ExactValue, FieldElement};

/// `(Lf)(x) = β^{−1} Σ_k f((x + k)/β)` over the branches `k = 0..=⌊β⌋`
/// with `(x + k)/β < 1`, computed exactly.
///
/// Candidate breakpoints are the images `β b − k` of the breakpoints of `f`
/// together with the cutoff `β − ⌊β⌋` of the last, partial branch.
pub fn transfer_operator(beta: &FieldElement, f: &StepFunction) -> Result<StepFunction> {
    if !beta.field().same_as(f.field()) {
        return Err(Error::FieldMismatch);
    }
    if beta.add_int(-1).sign() <= 0 {
        return Err(Error::DomainError(format!("base {beta} is not greater than 1")));
    }
    let field = beta.field().clone();
    let top = beta.floor();
    let branches: u64 = num_traits::ToPrimitive::to_u64(&top).expect("base fits in 64 bits");
    let inv = beta.invert()?;

    let in_open_unit = |x: &FieldElement| x.sign() > 0 && x.add_int(-1).sign() < 0;
    let mut cuts: Vec<FieldElement> = Vec::new();
    let cutoff = beta.add_int(-top);
    if in_open_unit(&cutoff) {
        cuts.push(cutoff);
    }
    for b in f.interior_breakpoints() {
        let bb = beta * b;
        for k in 0..=branches {
            let x = bb.add_int(-(k as i64));
            if in_open_unit(&x) {
                cuts.push(x);
            }
        }
    }
    cuts.sort_by(|a, b| (a - b).sign().cmp(&0));
    cuts.dedup_by(|a, b| (&*a - &*b).sign() == 0);

    let mut starts = vec![FieldElement::zero(&field)];
    starts.extend(cuts.iter().cloned());
    let values = starts
        .iter()
        .map(|x| {
            let mut acc = FieldElement::zero(&field);
            for k in 0..=branches {
                // the piece starting at x lies in branch k's domain [0, β − k)
                if (beta.add_int(-(k as i64)) - x.clone()).sign() <= 0 {
                    continue;
                }
                let pre = &x.add_int(k as i64) * &inv;
                acc = &acc + &f.evaluate(&pre)?;
            }
            Ok(&acc * &inv)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StepFunction::from_sorted(&field, cuts, values))
}

/// Whether `f` is a fixed point of the transfer operator, i.e. `f dx` is a
/// `T_β`-invariant measure.
pub fn check_invariance(beta: &FieldElement, f: &StepFunction) -> Result<bool> {
    Ok(transfer_operator(beta, f)?.equal(f))
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub fixed_point: bool,
    pub lhs_breakpoints: Vec<ExactValue>,
    pub rhs_breakpoints: Vec<ExactValue>,
}

/// `lhs` is `Lf`, `rhs` is `f`.
pub fn invariance_report(beta: &FieldElement, f: &StepFunction) -> Result<InvarianceReport> {
    let lf = transfer_operator(beta, f)?;
    Ok(InvarianceReport {
        fixed_point: lf.equal(f),
        lhs_breakpoints: lf.breakpoints().iter().map(ExactValue::from).collect(),
        rhs_breakpoints: f.breakpoints().iter().map(ExactValue::from).collect(),
    })
}
