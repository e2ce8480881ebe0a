//! Brute-force enumeration of every tree of a given size, with exact
//! moments and distributions of occurrence counts over the whole set.
//!
//! Counts default to the naive subsequence count on `tree_to_perm(T)`, so
//! this module is independent of the subtree recursion.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moments::Monomial;
use crate::perm::{occurrences_naive, Permutation};
use crate::tree::{tree_to_perm, OccurrenceCounter};
use crate::{catalan, BinaryTree, Rational};

pub const DEFAULT_CAP: usize = 12;

/// How occurrence counts are obtained for each enumerated tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CountMethod {
    /// Subsequence counting on the permutation of the tree.
    #[default]
    Naive,
    /// The subtree recursion.
    Recursive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    pub cap: usize,
    pub method: CountMethod,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            method: CountMethod::Naive,
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

/// All trees with `n` nodes: left-subtree size `0, 1, .., n-1` in turn,
/// each split enumerating left trees in the outer loop.
pub fn enumerate_trees(
    n: usize,
    cap: usize,
) -> Result<Box<dyn Iterator<Item = BinaryTree> + Send>> {
    check_cap(n, cap)?;
    Ok(trees(n))
}

fn trees(n: usize) -> Box<dyn Iterator<Item = BinaryTree> + Send> {
    if n == 0 {
        return Box::new(std::iter::once(BinaryTree::empty()));
    }
    Box::new((0..n).flat_map(move |i| trees_with_left_size(n, i)))
}

fn trees_with_left_size(n: usize, i: usize) -> Box<dyn Iterator<Item = BinaryTree> + Send> {
    Box::new(trees(i).flat_map(move |l| trees(n - 1 - i).map(move |r| BinaryTree::join(&l, &r))))
}

/// Folds `f(counts)` over all trees of size `n`, where `counts[j]` is the
/// number of occurrences of `patterns[j]`. Work is split by the size of the
/// root's left subtree; partial results are combined in split order.
fn fold_counts<A, F, M>(
    patterns: &[Permutation],
    n: usize,
    opts: ExactOptions,
    init: impl Fn() -> A + Sync,
    step: F,
    merge: M,
) -> Result<A>
where
    A: Send,
    F: Fn(&mut A, &[u64]) + Sync,
    M: Fn(A, A) -> A,
{
    check_cap(n, opts.cap)?;
    let counter = match opts.method {
        CountMethod::Naive => None,
        CountMethod::Recursive => {
            if let Some(s) = patterns.iter().find(|s| s.contains_132()) {
                return Err(Error::Contains132(s.to_string()));
            }
            Some(OccurrenceCounter::new(patterns)?)
        }
    };
    let index: Vec<usize> = match &counter {
        Some(c) => patterns
            .iter()
            .map(|s| c.index_of(s).expect("pattern is in its closure"))
            .collect(),
        None => Vec::new(),
    };
    let run = |tree: &BinaryTree, out: &mut Vec<u64>| {
        out.clear();
        match &counter {
            None => {
                let pi = tree_to_perm(tree);
                out.extend(patterns.iter().map(|s| occurrences_naive(s, &pi)));
            }
            Some(c) => {
                let all = c.count::<u64>(tree);
                out.extend(index.iter().map(|&j| all[j]));
            }
        }
    };
    let splits: Vec<Box<dyn Iterator<Item = BinaryTree> + Send>> = if n == 0 {
        vec![trees(0)]
    } else {
        (0..n).map(|i| trees_with_left_size(n, i)).collect()
    };
    let parts: Vec<A> = splits
        .into_par_iter()
        .map(|it| {
            let mut acc = init();
            let mut buf = Vec::with_capacity(patterns.len());
            for t in it {
                run(&t, &mut buf);
                step(&mut acc, &buf);
            }
            acc
        })
        .collect();
    let mut parts = parts.into_iter();
    let first = parts.next().unwrap_or_else(&init);
    Ok(parts.fold(first, merge))
}

fn catalan_rational(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(catalan(n)))
}

/// `E X_s(T_n)` exactly.
pub fn exact_mean(sigma: &Permutation, n: usize, opts: ExactOptions) -> Result<Rational> {
    exact_mixed_moment(&Monomial::single(sigma.clone()), n, opts)
}

/// `E prod_s X_s(T_n)^{k_s}` exactly.
pub fn exact_mixed_moment(m: &Monomial, n: usize, opts: ExactOptions) -> Result<Rational> {
    let pats: Vec<Permutation> = m.factors().map(|(s, _)| s.clone()).collect();
    let powers: Vec<u32> = m.factors().map(|(_, k)| k).collect();
    let total = fold_counts(
        &pats,
        n,
        opts,
        BigInt::zero,
        |acc, c| {
            let mut v = BigInt::from(1u8);
            for (x, &k) in c.iter().zip(&powers) {
                v *= BigInt::from(*x).pow(k);
            }
            *acc += v;
        },
        |a, b| a + b,
    )?;
    Ok(Rational::from_integer(total) / catalan_rational(n))
}

/// Exact `E X^j` for `j = 1..=max_power` of several patterns at once;
/// `result[s][j-1]` belongs to `patterns[s]`.
pub fn exact_power_moments(
    patterns: &[Permutation],
    n: usize,
    max_power: u32,
    opts: ExactOptions,
) -> Result<Vec<Vec<Rational>>> {
    let width = patterns.len();
    let p = max_power as usize;
    let totals = fold_counts(
        patterns,
        n,
        opts,
        || vec![BigInt::zero(); width * p],
        |acc, c| {
            for (s, &x) in c.iter().enumerate() {
                let x = BigInt::from(x);
                let mut v = x.clone();
                for j in 0..p {
                    acc[s * p + j] += &v;
                    v *= &x;
                }
            }
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    )?;
    let c = catalan_rational(n);
    Ok(totals
        .chunks(p.max(1))
        .take(width)
        .map(|row| {
            row.iter()
                .map(|t| Rational::from_integer(t.clone()) / &c)
                .collect()
        })
        .collect())
}

/// `Var X_s(T_n)` exactly.
pub fn exact_variance(sigma: &Permutation, n: usize, opts: ExactOptions) -> Result<Rational> {
    let m = exact_power_moments(std::slice::from_ref(sigma), n, 2, opts)?;
    let (m1, m2) = (&m[0][0], &m[0][1]);
    Ok(m2 - m1 * m1)
}

/// Histogram `count -> number of trees` of `X_s` over all trees of size `n`.
pub fn exact_distribution(
    sigma: &Permutation,
    n: usize,
    opts: ExactOptions,
) -> Result<BTreeMap<u64, u64>> {
    fold_counts(
        std::slice::from_ref(sigma),
        n,
        opts,
        BTreeMap::new,
        |acc, c| *acc.entry(c[0]).or_insert(0) += 1,
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        },
    )
}

/// A pair `sigma ≼ tau` (inversion sets nested) whose exact means are in the
/// opposite order for the listed sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderViolation {
    pub lower: Permutation,
    pub upper: Permutation,
    pub sizes: Vec<usize>,
}

/// Result of comparing exact means along the inversion-set order on the
/// 132-avoiders of length `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityReport {
    /// Ordered pairs of distinct comparable patterns.
    pub comparable_pairs: usize,
    pub violations: Vec<OrderViolation>,
}

/// Checks `E X_s(T_n) <= E X_t(T_n)` for every comparable `s ≼ t` of length
/// `k` and every `1 <= n <= n_max`.
pub fn monotonicity_check(
    k: usize,
    n_max: usize,
    opts: ExactOptions,
) -> Result<MonotonicityReport> {
    let pats = crate::perm::avoiders_132(k);
    let means: Vec<Vec<Rational>> = (1..=n_max)
        .map(|n| {
            exact_power_moments(&pats, n, 1, opts)
                .map(|m| m.into_iter().map(|r| r[0].clone()).collect())
        })
        .collect::<Result<_>>()?;
    let mut comparable_pairs = 0;
    let mut violations = Vec::new();
    for (a, s) in pats.iter().enumerate() {
        for (b, t) in pats.iter().enumerate() {
            if a == b || !crate::perm::inversion_order_leq(s, t)? {
                continue;
            }
            comparable_pairs += 1;
            let sizes: Vec<usize> = (1..=n_max)
                .filter(|&n| means[n - 1][a] > means[n - 1][b])
                .collect();
            if !sizes.is_empty() {
                violations.push(OrderViolation {
                    lower: s.clone(),
                    upper: t.clone(),
                    sizes,
                });
            }
        }
    }
    Ok(MonotonicityReport {
        comparable_pairs,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use crate::perm::avoiders_132;
    use num_traits::ToPrimitive;
    use std::collections::HashSet;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    const OPTS: ExactOptions = ExactOptions {
        cap: DEFAULT_CAP,
        method: CountMethod::Naive,
    };

    #[test]
    fn tree_counts_are_catalan() {
        for n in 0..=9 {
            let all: Vec<BinaryTree> = enumerate_trees(n, DEFAULT_CAP).unwrap().collect();
            assert_eq!(all.len(), catalan(n).to_usize().unwrap());
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all.iter().all(|t| t.len() == n));
        }
        assert!(matches!(
            enumerate_trees(13, 12),
            Err(Error::CapExceeded { n: 13, cap: 12 })
        ));
    }

    #[test]
    fn split_order() {
        // within each split there are C_i C_{n-1-i} trees, in increasing i
        let n = 6;
        let sizes: Vec<usize> = enumerate_trees(n, DEFAULT_CAP)
            .unwrap()
            .map(|t| t.split().unwrap().0.len())
            .collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        for i in 0..n {
            let c = sizes.iter().filter(|&&s| s == i).count();
            assert_eq!(c, (catalan(i) * catalan(n - 1 - i)).to_usize().unwrap());
        }
    }

    #[test]
    fn mean_examples() {
        assert_eq!(exact_mean(&p("12"), 2, OPTS).unwrap(), rat(1, 2));
        for n in 0..=8 {
            assert_eq!(exact_mean(&p("1"), n, OPTS).unwrap(), int(n as i64));
        }
        // totals C_n E X_12 for n = 2, 3, 4
        for (n, total) in [(2, 1), (3, 7), (4, 37)] {
            let mean = exact_mean(&p("12"), n, OPTS).unwrap();
            assert_eq!(mean * catalan_rational(n), int(total));
        }
        assert_eq!(exact_mean(&p("132"), 7, OPTS).unwrap(), int(0));
    }

    #[test]
    fn moment_and_distribution_examples() {
        assert_eq!(
            exact_mixed_moment(&"12^2".parse().unwrap(), 2, OPTS).unwrap(),
            rat(1, 2)
        );
        assert_eq!(
            exact_mixed_moment(&"1".parse().unwrap(), 6, OPTS).unwrap(),
            int(6)
        );
        let d = exact_distribution(&p("12"), 2, OPTS).unwrap();
        assert_eq!(d, BTreeMap::from([(0, 1), (1, 1)]));
        let d = exact_distribution(&p("132"), 6, OPTS).unwrap();
        assert_eq!(d, BTreeMap::from([(0, 132)]));
        for n in 0..=8 {
            let d = exact_distribution(&p("213"), n, OPTS).unwrap();
            assert_eq!(d.values().sum::<u64>(), catalan(n).to_u64().unwrap());
        }
    }

    #[test]
    fn variances_differ_at_five() {
        let a = exact_variance(&p("213"), 5, OPTS).unwrap();
        let b = exact_variance(&p("231"), 5, OPTS).unwrap();
        assert_ne!(a, b);
        assert_eq!(
            exact_variance(&p("231"), 5, OPTS).unwrap(),
            exact_variance(&p("312"), 5, OPTS).unwrap()
        );
    }

    #[test]
    fn methods_agree() {
        let rec = ExactOptions {
            method: CountMethod::Recursive,
            ..OPTS
        };
        let pats: Vec<Permutation> = (1..=4).flat_map(avoiders_132).collect();
        for n in [0, 1, 5, 8] {
            assert_eq!(
                exact_power_moments(&pats, n, 3, OPTS).unwrap(),
                exact_power_moments(&pats, n, 3, rec).unwrap()
            );
        }
        assert!(exact_mean(&p("132"), 3, rec).is_err());
    }

    #[test]
    fn three_means_coincide() {
        for n in 0..=9 {
            let m = exact_power_moments(&[p("213"), p("231"), p("312")], n, 1, OPTS).unwrap();
            assert_eq!(m[0][0], m[1][0]);
            assert_eq!(m[1][0], m[2][0]);
        }
    }

    #[test]
    fn means_are_bounded_by_extremes() {
        for k in 2..=4 {
            let pats = avoiders_132(k);
            for n in 0..=8 {
                let m = exact_power_moments(&pats, n, 1, OPTS).unwrap();
                let lo = &m[pats
                    .iter()
                    .position(|s| *s == Permutation::identity(k))
                    .unwrap()][0];
                let hi = &m[pats
                    .iter()
                    .position(|s| *s == Permutation::decreasing(k))
                    .unwrap()][0];
                for row in &m {
                    assert!(lo <= &row[0] && &row[0] <= hi);
                }
            }
        }
    }

    #[test]
    fn inversion_order_mostly_orders_means() {
        for k in 2..=3 {
            let r = monotonicity_check(k, 8, OPTS).unwrap();
            assert!(r.comparable_pairs > 0);
            assert!(r.violations.is_empty(), "{:?}", r.violations);
        }
        // one pair of length 4 goes the wrong way from n = 5 on
        let r = monotonicity_check(4, 8, OPTS).unwrap();
        assert_eq!(r.comparable_pairs, 54);
        assert_eq!(
            r.violations,
            vec![OrderViolation {
                lower: p("3214"),
                upper: p("4213"),
                sizes: vec![5, 6, 7, 8]
            }]
        );
        assert_eq!(exact_mean(&p("3214"), 5, OPTS).unwrap(), rat(8, 21));
        assert_eq!(exact_mean(&p("4213"), 5, OPTS).unwrap(), rat(5, 14));
    }
}
