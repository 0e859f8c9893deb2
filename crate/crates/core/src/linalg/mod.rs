//! Exact dense linear algebra over arbitrary-precision rationals.
//!
//! Everything here is exact: determinants use fraction-free elimination,
//! inverses and ranks use rational Gauss-Jordan. Floats only appear through
//! [`RationalMatrix::to_f64`], for the root-finding paths elsewhere.

mod combinatorics;
mod matrix;

pub use combinatorics::{
    all_colorings, binomial, coloring_signature, combinations, mixed_column_det, permutation_sign, plucker_coords,
    Coloring, IndexSet,
};
pub use matrix::{rational_to_f64, sign_of, RationalMatrix};

use num_rational::BigRational;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `p/q` as an exact rational.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let r: Rational = s.parse().map_err(|_| Error::Schema(format!("not a rational: {s:?}")))?;
    Ok(r)
}
