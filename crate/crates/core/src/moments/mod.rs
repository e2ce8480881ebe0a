//! Exact mixed moments `E_d prod X_s^{k_s}` and their asymptotic constants.
//!
//! Every factor is replaced by its subtree recursion, the product is
//! expanded into (left monomial, right monomial) pairs, and independence of
//! the two subtrees turns each pair into a product of lower-weight moments.
//! The two pairs that keep the whole monomial on one side contribute
//! `(1 - d) E_d M`, which leaves `d E_d M` equal to the remaining terms.

mod monomial;
mod tmom3;

pub use monomial::Monomial;
pub use tmom3::{tmom3_constant, tmom3_prefactor, tmom3_table, Family, MomentTable};

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::algebra::{PiAffine, SymbolicConstant};
use crate::error::{Error, Result};
use crate::expectation::{child_probability, inverse_d};
use crate::perm::{Pattern, Permutation};
use crate::{LaurentPoly, Rational};

type Split = BTreeMap<(Monomial, Monomial), u64>;

/// Memoized engine for `E_d M`; single-threaded per instance.
#[derive(Default)]
pub struct MomentEngine {
    memo: HashMap<Monomial, LaurentPoly>,
    splits: HashMap<Permutation, Vec<(Monomial, Monomial)>>,
}

impl MomentEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// The subtree recursion for one factor as (left, right) monomial pairs.
    fn factor_split(&mut self, sigma: &Permutation) -> Result<Vec<(Monomial, Monomial)>> {
        if let Some(v) = self.splits.get(sigma) {
            return Ok(v.clone());
        }
        let pat = Pattern::avoiding_132(sigma.clone())?;
        let mut terms = vec![
            (Monomial::single(sigma.clone()), Monomial::one()),
            (Monomial::one(), Monomial::single(sigma.clone())),
        ];
        for &q in pat.delta() {
            terms.push((
                Monomial::single(pat.prefix(q)),
                Monomial::single(pat.suffix(q)),
            ));
        }
        let m = pat.max_pos();
        // an empty side is the constant 1, which `Monomial::single` encodes
        let left = Monomial::from_factors([(pat.prefix(m - 1), 1)]);
        let right = Monomial::from_factors([(pat.suffix(m), 1)]);
        terms.push((left, right));
        self.splits.insert(sigma.clone(), terms.clone());
        Ok(terms)
    }

    fn expand(&mut self, m: &Monomial) -> Result<Split> {
        let mut acc: Split = BTreeMap::from([((Monomial::one(), Monomial::one()), 1)]);
        for sigma in m.expanded() {
            let split = self.factor_split(&sigma)?;
            let mut next = Split::new();
            for ((a, b), c) in &acc {
                for (l, r) in &split {
                    *next.entry((a.product(l), b.product(r))).or_insert(0) += c;
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// `E_d M` as a Laurent polynomial in `d`.
    pub fn ed_monomial(&mut self, m: &Monomial) -> Result<LaurentPoly> {
        if m.is_one() {
            return Ok(LaurentPoly::one());
        }
        if let Some(v) = self.memo.get(m) {
            return Ok(v.clone());
        }
        if let Some(s) = m.first_132() {
            return Err(Error::Contains132(s.to_string()));
        }
        let p = child_probability();
        let expansion = self.expand(m)?;
        let mut rest = LaurentPoly::zero();
        for ((a, b), c) in expansion {
            if (a == *m && b.is_one()) || (a.is_one() && b == *m) {
                if c != 1 {
                    return Err(Error::Consistency(format!(
                        "{m} appears {c} times on one side"
                    )));
                }
                continue;
            }
            let side = |eng: &mut Self, x: &Monomial| -> Result<LaurentPoly> {
                if x.is_one() {
                    Ok(LaurentPoly::one())
                } else {
                    Ok(&p * &eng.ed_monomial(x)?)
                }
            };
            let term = &side(self, &a)? * &side(self, &b)?;
            rest = rest + &term.scale(&Rational::from_integer(c.into()));
        }
        let result = &inverse_d() * &rest;
        let w = m.weight() as i32;
        if result.max_exp().is_some_and(|e| e >= 0) || result.inverse_degree() != Some(w - 1) {
            return Err(Error::Consistency(format!(
                "E_d {m} = {result} does not have degree {} in 1/d",
                w - 1
            )));
        }
        if result.leading().is_some_and(|c| *c <= Rational::zero()) {
            return Err(Error::Consistency(format!(
                "E_d {m} has a nonpositive leading term"
            )));
        }
        self.memo.insert(m.clone(), result.clone());
        Ok(result)
    }

    /// `E prod Lambda_s^{k_s}`, tagged with the growth exponent `W / 2` of
    /// the unscaled moment.
    pub fn asymptotic_mixed(&mut self, m: &Monomial) -> Result<SymbolicConstant> {
        if m.is_one() {
            return Ok(SymbolicConstant::rational(Rational::one()));
        }
        let f = self.ed_monomial(m)?;
        let lead = f.leading().expect("nonzero polynomial").clone();
        SymbolicConstant::singularity_transfer(&lead, m.weight() as u32 - 1)
    }

    /// `Var Lambda_s` exactly, as `a + b pi`.
    pub fn asymptotic_variance(&mut self, sigma: &Permutation) -> Result<PiAffine> {
        let m1 = self.asymptotic_mixed(&Monomial::single(sigma.clone()))?;
        let m2 = self.asymptotic_mixed(&Monomial::power(sigma.clone(), 2))?;
        Ok(&PiAffine::from_constant(&m2)? - &m1.product(&m1)?)
    }

    /// Normalized third central moment of `Lambda_s`.
    pub fn skewness(&mut self, sigma: &Permutation) -> Result<Skewness> {
        let var = self.asymptotic_variance(sigma)?;
        if var.a.is_zero() && var.b.is_zero() {
            return Ok(Skewness::Degenerate);
        }
        let mom = |eng: &mut Self, k: u32| -> Result<f64> {
            Ok(eng
                .asymptotic_mixed(&Monomial::power(sigma.clone(), k))?
                .to_f64())
        };
        let (m1, m2, m3) = (mom(self, 1)?, mom(self, 2)?, mom(self, 3)?);
        let central3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
        Ok(Skewness::Value(central3 / var.to_f64().powf(1.5)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Skewness {
    Value(f64),
    /// The limit is a constant.
    Degenerate,
}

pub fn ed_monomial(m: &Monomial) -> Result<LaurentPoly> {
    MomentEngine::new().ed_monomial(m)
}

pub fn asymptotic_mixed(m: &Monomial) -> Result<SymbolicConstant> {
    MomentEngine::new().asymptotic_mixed(m)
}

pub fn skewness(sigma: &Permutation) -> Result<Skewness> {
    MomentEngine::new().skewness(sigma)
}
