//! Exact arithmetic: Laurent polynomials in `d`, truncated power series in
//! `x`, and constants of the form `q * sqrt(pi)^p`.
//!
//! [`Laurent`] and [`Series`] are generic over the coefficient type; the
//! engines use them with [`Rational`](crate::Rational) coefficients.

mod laurent;
mod series;
mod symbolic;

pub use laurent::Laurent;
pub use series::{
    binomial_series, catalan, catalan_prefactor, gf_coefficient, gf_from_ed, Series, Sign,
};
pub use symbolic::{gamma_half, PiAffine, SymbolicConstant};

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{Num, ToPrimitive};

use crate::Rational;

/// Coefficient ring for [`Laurent`] and [`Series`].
pub trait Coeff: Clone + PartialEq + Debug + Num + Neg<Output = Self> {}

impl<T: Clone + PartialEq + Debug + Num + Neg<Output = T>> Coeff for T {}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
