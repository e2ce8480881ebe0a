//! Exact and simulated statistics of pattern-occurrence counts in uniformly
//! random 132-avoiding permutations.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`]: permutations, patterns, naive occurrence counting, symmetries.
//! * [`tree`]: the bijection between 132-avoiders and binary trees, the
//!   subtree recursion for occurrence counts and inorder height profiles.
//! * [`algebra`]: exact rationals, Laurent polynomials in `d`, truncated
//!   power series and exact Gamma values at half-integers.
//! * [`enumerate`]: brute-force enumeration of all trees of a given size.
//! * [`expectation`]: the Galton–Watson expectation engine (`E_d X_s`).
//! * [`moments`]: exact mixed moments and the three scalar moment
//!   recursions used as an independent oracle.
//! * [`sampler`]: uniform random trees (Rémy) and Monte Carlo estimates.
//! * [`excursion`]: discrete Brownian excursions and limit functionals.
//! * [`verify`]: the cross-engine oracle suite used by `avoid132 verify`.
//!
//! Numeric code that does not need exactness is generic over the scalar
//! type; the aliases below fix the concrete types used by the engines.

pub mod algebra;
pub mod enumerate;
pub mod error;
pub mod excursion;
pub mod expectation;
pub mod moments;
pub mod perm;
pub mod rmq;
pub mod sampler;
pub mod stats;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type Integer = num_bigint::BigInt;
/// Arbitrary-precision unsigned integer, used for occurrence counts.
pub type Natural = num_bigint::BigUint;
/// Exact rational number in canonical form.
pub type Rational = num_rational::BigRational;

/// Laurent polynomial in `d` with exact rational coefficients.
pub type LaurentPoly = algebra::Laurent<Rational>;
/// Truncated power series in `x` with exact rational coefficients.
pub type TruncatedSeries = algebra::Series<Rational>;
/// Floating-point Laurent polynomial, handy for numeric evaluation.
pub type LaurentF64 = algebra::Laurent<f64>;

/// Compensated accumulator over `f64`.
pub type Accumulator = stats::Compensated<f64>;

pub use algebra::{catalan, SymbolicConstant};
pub use moments::Monomial;
pub use perm::{Pattern, Permutation};
pub use tree::{BinaryTree, HeightProfile};
