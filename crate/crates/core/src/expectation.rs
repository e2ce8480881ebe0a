//! Expectations `E_d X_s` over the critical-minus-`d` Galton–Watson tree.
//!
//! Each node has two independent potential children, each present with
//! probability `p = (1 - d) / 2`. Taking expectations in the subtree
//! recursion gives
//!
//! `E_d X_s = d^{-1} ( sum_{q in Δ} p^2 E_d X_pre E_d X_suf + F_pre F_suf )`
//!
//! for the prefix `s_1..s_{m-1}` and suffix `s_{m+1}..s_k` around the
//! maximum, with `F = p E_d X` for a nonempty part and `F = 1` otherwise.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::algebra::{rat, SymbolicConstant};
use crate::error::{Error, Result};
use crate::perm::{Pattern, Permutation};
use crate::{LaurentPoly, Rational};

/// `p = (1 - d) / 2` as a Laurent polynomial.
pub fn child_probability() -> LaurentPoly {
    LaurentPoly::from_terms([(0, rat(1, 2)), (1, rat(-1, 2))])
}

pub fn inverse_d() -> LaurentPoly {
    LaurentPoly::monomial(Rational::one(), -1)
}

/// Memoized engine for `E_d X_s` and the leading coefficients `e_s`.
///
/// Single-threaded per instance; results are deterministic.
#[derive(Default)]
pub struct ExpectationEngine {
    memo: HashMap<Permutation, LaurentPoly>,
    leading: HashMap<Permutation, Rational>,
}

impl ExpectationEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `E_d X_s` as a Laurent polynomial in `d`.
    pub fn ed_expectation(&mut self, sigma: &Permutation) -> Result<LaurentPoly> {
        if let Some(v) = self.memo.get(sigma) {
            return Ok(v.clone());
        }
        let pat = Pattern::avoiding_132(sigma.clone())?;
        let p = child_probability();
        let p2 = &p * &p;
        let mut inner = LaurentPoly::zero();
        for &q in pat.delta() {
            let a = self.ed_expectation(&pat.prefix(q))?;
            let b = self.ed_expectation(&pat.suffix(q))?;
            inner = inner + &(&p2 * &(&a * &b));
        }
        let m = pat.max_pos();
        let side = |eng: &mut Self, part: Permutation| -> Result<LaurentPoly> {
            if part.is_empty() {
                Ok(LaurentPoly::one())
            } else {
                Ok(&p * &eng.ed_expectation(&part)?)
            }
        };
        let left = side(self, pat.prefix(m - 1))?;
        let right = side(self, pat.suffix(m))?;
        inner = inner + &(&left * &right);
        let result = &inverse_d() * &inner;
        check_shape(&result, pat.lambda(), sigma)?;
        self.memo.insert(sigma.clone(), result.clone());
        Ok(result)
    }

    /// `e_s` by its own recursion, independent of the polynomial engine.
    pub fn leading_coeff(&mut self, sigma: &Permutation) -> Result<Rational> {
        if let Some(v) = self.leading.get(sigma) {
            return Ok(v.clone());
        }
        let pat = Pattern::avoiding_132(sigma.clone())?;
        let k = pat.len();
        let value = if k == 1 {
            Rational::one()
        } else {
            let mut e = Rational::zero();
            for &q in pat.delta() {
                e += self.leading_coeff(&pat.prefix(q))? * self.leading_coeff(&pat.suffix(q))?;
            }
            e *= rat(1, 4);
            if pat.max_pos() == k {
                e += self.leading_coeff(&pat.prefix(k - 1))? * rat(1, 2);
            }
            e
        };
        self.leading.insert(sigma.clone(), value.clone());
        Ok(value)
    }

    /// `A_s` with `E n_s(pi_n) ~ A_s n^{lambda(s)/2}`.
    pub fn asymptotic_constant(&mut self, sigma: &Permutation) -> Result<SymbolicConstant> {
        let pat = Pattern::avoiding_132(sigma.clone())?;
        let e = self.leading_coeff(sigma)?;
        SymbolicConstant::singularity_transfer(&e, pat.lambda() as u32 - 1)
    }
}

/// Vanishing constant term, no positive powers and inverse degree
/// `lambda - 1`.
fn check_shape(f: &LaurentPoly, lambda: usize, sigma: &Permutation) -> Result<()> {
    if let Some(e) = f.max_exp().filter(|&e| e >= 0) {
        return Err(Error::Consistency(format!(
            "E_d X_{sigma} has a term d^{e}"
        )));
    }
    if f.inverse_degree() != Some(lambda as i32 - 1) {
        return Err(Error::Consistency(format!(
            "E_d X_{sigma} has degree {:?} in 1/d, expected {}",
            f.inverse_degree(),
            lambda - 1
        )));
    }
    Ok(())
}

/// `E_d(N Z) = -1/2 (d^{-1} - d) f'(d) + d^{-1} f(d)` for `f = E_d Z`.
pub fn size_bias(f: &LaurentPoly) -> LaurentPoly {
    let factor = LaurentPoly::from_terms([(-1, rat(-1, 2)), (1, rat(1, 2))]);
    &(&factor * &f.derivative()) + &(&inverse_d() * f)
}

/// One-shot helper around [`ExpectationEngine::ed_expectation`].
pub fn ed_expectation(sigma: &Permutation) -> Result<LaurentPoly> {
    ExpectationEngine::new().ed_expectation(sigma)
}

pub fn leading_coeff(sigma: &Permutation) -> Result<Rational> {
    ExpectationEngine::new().leading_coeff(sigma)
}

pub fn asymptotic_constant(sigma: &Permutation) -> Result<SymbolicConstant> {
    ExpectationEngine::new().asymptotic_constant(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::perm::avoiders_132;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn l(terms: &[(i32, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, a, b)| (e, rat(a, b))))
    }

    #[test]
    fn small_patterns() {
        let mut eng = ExpectationEngine::new();
        assert_eq!(eng.ed_expectation(&p("1")).unwrap(), l(&[(-1, 1, 1)]));
        assert_eq!(
            eng.ed_expectation(&p("12")).unwrap(),
            l(&[(-2, 1, 2), (-1, -1, 2)])
        );
        assert_eq!(
            eng.ed_expectation(&p("21")).unwrap(),
            l(&[(-3, 1, 4), (-1, -1, 4)])
        );
        assert!(matches!(
            eng.ed_expectation(&p("132")),
            Err(Error::Contains132(_))
        ));
    }

    #[test]
    fn size_bias_examples() {
        assert_eq!(size_bias(&LaurentPoly::one()), l(&[(-1, 1, 1)]));
        assert_eq!(
            size_bias(&l(&[(-1, 1, 1)])),
            l(&[(-3, 1, 2), (-2, 1, 1), (-1, -1, 2)])
        );
        // leading term a d^-m goes to (m/2) a d^-(m+2)
        for m in 2..8 {
            let f = l(&[(-m, 3, 7), (-1, 1, 1)]);
            let g = size_bias(&f);
            assert_eq!(g.min_exp(), Some(-m - 2));
            assert_eq!(g.leading().unwrap(), &(rat(3, 7) * rat(m as i64, 2)));
        }
    }

    #[test]
    fn shape_and_leading_coefficient() {
        let mut eng = ExpectationEngine::new();
        for k in 1..=6 {
            for sigma in avoiders_132(k) {
                let f = eng.ed_expectation(&sigma).unwrap();
                let pat = Pattern::new(sigma.clone()).unwrap();
                assert_eq!(f.inverse_degree(), Some(pat.lambda() as i32 - 1));
                assert!(f.max_exp().unwrap() < 0);
                let e = eng.leading_coeff(&sigma).unwrap();
                assert!(e > Rational::zero());
                assert_eq!(f.leading().unwrap(), &e);
            }
        }
        assert_eq!(leading_coeff(&p("12")).unwrap(), rat(1, 2));
        assert_eq!(leading_coeff(&p("321")).unwrap(), rat(1, 8));
    }

    #[test]
    fn increasing_closed_form() {
        // 2^{1-k} (d^{-1} - 1)^{k-1} d^{-1}
        let base = l(&[(-1, 1, 1), (0, -1, 1)]);
        let mut pow = LaurentPoly::one();
        for k in 1..=6usize {
            let expect = (&pow * &inverse_d()).scale(&rat(1, 1 << (k - 1)));
            assert_eq!(ed_expectation(&Permutation::identity(k)).unwrap(), expect);
            pow = &pow * &base;
        }
    }

    #[test]
    fn decreasing_leading_coefficient_is_scaled_catalan() {
        for k in 1..=7usize {
            let c = crate::catalan(k - 1);
            let expect = Rational::new(c.into(), num_bigint::BigInt::from(1u64 << (2 * k - 2)));
            assert_eq!(leading_coeff(&Permutation::decreasing(k)).unwrap(), expect);
            let a = asymptotic_constant(&Permutation::decreasing(k)).unwrap();
            let fact = (1..=k as i64).fold(int(1), |acc, i| acc * int(i));
            assert_eq!(
                a,
                SymbolicConstant::new(int(1) / fact, false, int(k as i64))
            );
        }
    }

    #[test]
    fn constants() {
        let a = asymptotic_constant(&p("12")).unwrap();
        assert_eq!(a.to_string(), "sqrt(pi)/2 * n^{3/2}");
        assert_eq!(
            asymptotic_constant(&p("213")).unwrap().to_string(),
            "sqrt(pi)/8 * n^{5/2}"
        );
        assert_eq!(
            asymptotic_constant(&p("123")).unwrap().to_string(),
            "1/2 * n^{2}"
        );
        assert_eq!(
            asymptotic_constant(&p("3214")).unwrap().to_string(),
            "sqrt(pi)/32 * n^{7/2}"
        );
        assert_eq!(
            asymptotic_constant(&p("3241")).unwrap().to_string(),
            "sqrt(pi)/64 * n^{7/2}"
        );
    }
}
