//! Exact arithmetic over the rationals and over real algebraic number fields.
//!
//! A [`NumberField`] is `Q[x]/(m)` for a monic integer polynomial `m`,
//! together with an isolating interval that picks out one real root `θ > 1`.
//! Signs are decided by a zero test followed by interval evaluation against
//! a dyadic enclosure of `θ` that is refined on demand.

mod element;
mod field;
mod poly;

pub use element::{ExactValue, FieldElement};
pub use field::{isolate_roots_above_one, parse_poly, quadratic_family_field, NumberField};
pub use poly::{count_roots, integer_roots, isolate_real_roots, QPoly};

#[allow(unused_imports)]
pub(crate) use element::{format_decimal, rational_to_f64};

/// Arbitrary-precision fraction in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;
