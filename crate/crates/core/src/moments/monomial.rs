use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::{parse_pattern, Pattern, Permutation};

/// A product `prod_s X_s^{k_s}` of occurrence counts.
///
/// Factors are kept sorted by (length, word), so equal products compare and
/// hash equal. The empty monomial is the constant 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: BTreeMap<Permutation, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn single(sigma: Permutation) -> Self {
        Self::power(sigma, 1)
    }

    pub fn power(sigma: Permutation, k: u32) -> Self {
        let mut m = Self::one();
        m.multiply(sigma, k);
        m
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Permutation, u32)>) -> Self {
        let mut m = Self::one();
        for (s, k) in factors {
            m.multiply(s, k);
        }
        m
    }

    /// Multiplies in `X_s^k`. The empty pattern and `k = 0` are no-ops.
    pub fn multiply(&mut self, sigma: Permutation, k: u32) {
        if k == 0 || sigma.is_empty() {
            return;
        }
        *self.factors.entry(sigma).or_insert(0) += k;
    }

    pub fn product(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (s, &k) in &other.factors {
            out.multiply(s.clone(), k);
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Permutation, u32)> {
        self.factors.iter().map(|(s, &k)| (s, k))
    }

    /// Total number of factors counted with multiplicity.
    pub fn degree(&self) -> u32 {
        self.factors.values().sum()
    }

    /// `W = sum_s k_s * lambda(s)`.
    pub fn weight(&self) -> usize {
        self.factors
            .iter()
            .map(|(s, &k)| k as usize * Pattern::new(s.clone()).map_or(0, |p| p.lambda()))
            .sum()
    }

    /// The factors repeated by multiplicity, in canonical order.
    pub fn expanded(&self) -> Vec<Permutation> {
        self.factors
            .iter()
            .flat_map(|(s, &k)| std::iter::repeat_n(s.clone(), k as usize))
            .collect()
    }

    pub fn first_132(&self) -> Option<&Permutation> {
        self.factors.keys().find(|s| s.contains_132())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1()");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(s, &k)| {
                if k == 1 {
                    s.to_string()
                } else {
                    format!("{s}^{k}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

/// Grammar: `factor ('*' factor)*`, `factor = pattern ('^' power)?`, where a
/// pattern is written as for [`parse_pattern`]. Example: `12^2*213`.
impl FromStr for Monomial {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            text: text.to_string(),
            reason: reason.into(),
        };
        if text.trim().is_empty() {
            return Err(err("empty monomial"));
        }
        let mut m = Monomial::one();
        for factor in text.split('*') {
            let (pat, pow) = match factor.split_once('^') {
                Some((p, k)) => {
                    let k: u32 = k.trim().parse().map_err(|_| err("bad exponent"))?;
                    (p, k)
                }
                None => (factor, 1),
            };
            let sigma = parse_pattern(pat)?;
            if sigma.is_empty() {
                return Err(err("empty factor"));
            }
            m.multiply(sigma, pow);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_render() {
        let m: Monomial = "12^2*213".parse().unwrap();
        assert_eq!(m.degree(), 3);
        assert_eq!(m.weight(), 2 * 3 + 5);
        assert_eq!(m.to_string(), "12^2*213");
        let n: Monomial = "213 * 12 * 12".parse().unwrap();
        assert_eq!(m, n);
        assert_eq!(
            "4,2,1,3^2".parse::<Monomial>().unwrap(),
            Monomial::power(p("4213"), 2)
        );
        for bad in ["", "12^", "12^x", "*12", "112", "12^2*"] {
            assert!(bad.parse::<Monomial>().is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_order() {
        let a = Monomial::from_factors([(p("213"), 1), (p("1"), 2), (p("12"), 1)]);
        assert_eq!(a.to_string(), "1^2*12*213");
        assert_eq!(a.expanded(), vec![p("1"), p("1"), p("12"), p("213")]);
        let b = Monomial::single(p("12"))
            .product(&Monomial::from_factors([(p("213"), 1), (p("1"), 2)]));
        assert_eq!(a, b);
        assert!(Monomial::one().is_one());
        assert_eq!(Monomial::one().weight(), 0);
        assert_eq!(Monomial::power(p("12"), 0), Monomial::one());
    }
}
