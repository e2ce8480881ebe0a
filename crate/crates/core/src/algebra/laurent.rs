use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Coeff;
use crate::error::{Error, Result};

/// Laurent polynomial `sum_e c_e d^e` with finitely many nonzero terms.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent<T> {
    terms: BTreeMap<i32, T>,
}

impl<T: Coeff> Default for Laurent<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coeff> Laurent<T> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * d^exp`.
    pub fn monomial(c: T, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, T)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exp: i32, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(exp, s);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> T {
        self.terms.get(&exp).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &T)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Degree as a polynomial in `1/d`, i.e. `-min_exp`.
    pub fn inverse_degree(&self) -> Option<i32> {
        self.min_exp().map(|e| -e)
    }

    /// Coefficient of the most negative power of `d`.
    pub fn leading(&self) -> Option<&T> {
        self.terms.values().next()
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, v)| (e, v.clone() * c.clone()))
                .collect(),
        }
    }

    /// Multiplication by `d^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, v)| (e + k, v.clone()))
                .collect(),
        }
    }

    /// Termwise `d/dd`.
    pub fn derivative(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|(&e, _)| e != 0).map(|(&e, c)| {
            let mut factor = T::zero();
            let step = if e > 0 { T::one() } else { -T::one() };
            for _ in 0..e.unsigned_abs() {
                factor = factor + step.clone();
            }
            (e - 1, c.clone() * factor)
        }))
    }

    pub fn eval(&self, x: &T) -> Result<T> {
        if x.is_zero() {
            if self.min_exp().is_some_and(|e| e < 0) {
                return Err(Error::DivisionByZero);
            }
            return Ok(self.coeff(0));
        }
        let inv = T::one() / x.clone();
        let mut total = T::zero();
        for (&e, c) in &self.terms {
            let base = if e < 0 { &inv } else { x };
            let mut p = T::one();
            for _ in 0..e.unsigned_abs() {
                p = p * base.clone();
            }
            total = total + c.clone() * p;
        }
        Ok(total)
    }

    /// Coefficient-wise conversion into another ring.
    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Laurent<U> {
        Laurent::from_terms(self.terms.iter().map(|(&e, c)| (e, f(c))))
    }
}

impl<T: Coeff + fmt::Display> Laurent<T> {
    /// Renders terms from the most negative power up, e.g.
    /// `1/2*d^-2 - 1/2*d^-1` with `sep = "*"`.
    pub fn format_with(&self, sep: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if e == 0 {
                out.push_str(&magnitude);
            } else if magnitude == "1" {
                out.push_str(&format!("d^{e}"));
            } else {
                out.push_str(&format!("{magnitude}{sep}d^{e}"));
            }
        }
        out
    }

    /// `{exponent: coefficient}` with both rendered as strings.
    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(e, c)| (e.to_string(), c.to_string()))
            .collect()
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for Laurent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("*"))
    }
}

impl<T: Coeff + fmt::Display> fmt::Debug for Laurent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({})", self.format_with("*"))
    }
}

impl<T: Coeff> Add for &Laurent<T> {
    type Output = Laurent<T>;
    fn add(self, rhs: &Laurent<T>) -> Laurent<T> {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl<T: Coeff> Sub for &Laurent<T> {
    type Output = Laurent<T>;
    fn sub(self, rhs: &Laurent<T>) -> Laurent<T> {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl<T: Coeff> Mul for &Laurent<T> {
    type Output = Laurent<T>;
    fn mul(self, rhs: &Laurent<T>) -> Laurent<T> {
        let mut out = Laurent::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, x.clone() * y.clone());
            }
        }
        out
    }
}

impl<T: Coeff> Neg for &Laurent<T> {
    type Output = Laurent<T>;
    fn neg(self) -> Laurent<T> {
        Laurent {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Coeff> $tr for Laurent<T> {
            type Output = Laurent<T>;
            fn $m(self, rhs: Laurent<T>) -> Laurent<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Coeff> $tr<&Laurent<T>> for Laurent<T> {
            type Output = Laurent<T>;
            fn $m(self, rhs: &Laurent<T>) -> Laurent<T> {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::Rational;
    use proptest::prelude::*;

    type L = Laurent<Rational>;

    fn l(terms: &[(i32, i64, i64)]) -> L {
        L::from_terms(terms.iter().map(|&(e, p, q)| (e, rat(p, q))))
    }

    #[test]
    fn examples() {
        let a = l(&[(-2, 1, 2), (-1, -1, 2)]);
        let b = l(&[(-1, 1, 2)]);
        assert_eq!(&a + &b, l(&[(-2, 1, 2)]));
        assert_eq!(l(&[(-1, 1, 1)]).derivative(), l(&[(-2, -1, 1)]));
        assert_eq!(&l(&[(-1, 1, 1)]) * &l(&[(-1, 1, 1)]), l(&[(-2, 1, 1)]));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn rendering() {
        let a = l(&[(-2, 1, 2), (-1, -1, 2)]);
        assert_eq!(a.to_string(), "1/2*d^-2 - 1/2*d^-1");
        assert_eq!(a.format_with(" "), "1/2 d^-2 - 1/2 d^-1");
        assert_eq!(l(&[(-3, -1, 1), (0, 2, 1)]).to_string(), "-d^-3 + 2");
        assert_eq!(L::zero().to_string(), "0");
        let json = a.to_json_map();
        assert_eq!(json["-2"], "1/2");
        assert_eq!(json["-1"], "-1/2");
    }

    #[test]
    fn eval_and_errors() {
        let a = l(&[(-2, 1, 2), (-1, -1, 2)]);
        assert_eq!(a.eval(&rat(1, 2)).unwrap(), rat(1, 1));
        assert_eq!(a.eval(&rat(0, 1)), Err(Error::DivisionByZero));
        assert_eq!(
            l(&[(0, 3, 1), (2, 1, 1)]).eval(&rat(0, 1)).unwrap(),
            rat(3, 1)
        );
        let f: Laurent<f64> = a.map(crate::algebra::to_f64);
        assert!((f.eval(&0.25).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn degree_queries() {
        let a = l(&[(-5, 1, 8), (-2, 1, 8)]);
        assert_eq!(a.min_exp(), Some(-5));
        assert_eq!(a.max_exp(), Some(-2));
        assert_eq!(a.inverse_degree(), Some(5));
        assert_eq!(a.leading(), Some(&rat(1, 8)));
        assert_eq!(a.shift(2).min_exp(), Some(-3));
    }

    fn arb_laurent() -> impl Strategy<Value = L> {
        proptest::collection::vec((-6i32..4, -9i64..10, 1i64..6), 0..6)
            .prop_map(|v| L::from_terms(v.into_iter().map(|(e, p, q)| (e, rat(p, q)))))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            // product rule
            prop_assert_eq!((&a * &b).derivative(), &(&a.derivative() * &b) + &(&a * &b.derivative()));
        }
    }
}
