//! Occurrence counts on trees by the subtree recursion
//!
//! `X_s = X_{s,L} + X_{s,R} + sum_{q in Δ} X_{s_1..s_q, L} X_{s_q+1..s_k, R}
//!        + X_{s_1..s_m-1, L} X_{s_m+1..s_k, R}`
//!
//! where an empty prefix or suffix in the last term counts as the constant 1.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use super::BinaryTree;
use crate::error::{Error, Result};
use crate::perm::{Pattern, Permutation};
use crate::Natural;

/// Smallest set of patterns containing `patterns` and closed under the
/// prefixes and suffixes referenced by the subtree recursion. Sorted by
/// length, then word.
pub fn subpattern_closure(patterns: &[Permutation]) -> Result<Vec<Pattern>> {
    let mut todo: Vec<Permutation> = patterns.to_vec();
    let mut seen: BTreeSet<Permutation> = BTreeSet::new();
    while let Some(sigma) = todo.pop() {
        if sigma.is_empty() {
            return Err(Error::InvalidArgument("empty pattern".into()));
        }
        if seen.contains(&sigma) {
            continue;
        }
        let pat = Pattern::avoiding_132(sigma.clone())?;
        for &q in pat.delta() {
            todo.push(pat.prefix(q));
            todo.push(pat.suffix(q));
        }
        let m = pat.max_pos();
        for part in [pat.prefix(m - 1), pat.suffix(m)] {
            if !part.is_empty() {
                todo.push(part);
            }
        }
        seen.insert(sigma);
    }
    seen.into_iter().map(Pattern::new).collect()
}

#[derive(Clone, Debug)]
struct Rule {
    splits: Vec<(usize, usize)>,
    // None stands for the empty prefix / suffix, i.e. the constant 1
    max_term: (Option<usize>, Option<usize>),
}

/// Compiled recursion for a closed set of patterns.
#[derive(Clone, Debug)]
pub struct OccurrenceCounter {
    patterns: Vec<Pattern>,
    rules: Vec<Rule>,
}

impl OccurrenceCounter {
    pub fn new(patterns: &[Permutation]) -> Result<Self> {
        let closure = subpattern_closure(patterns)?;
        let index: BTreeMap<Permutation, usize> = closure
            .iter()
            .enumerate()
            .map(|(i, p)| (p.perm().clone(), i))
            .collect();
        let idx = |p: &Permutation| -> Option<usize> {
            if p.is_empty() {
                None
            } else {
                Some(index[p])
            }
        };
        let rules = closure
            .iter()
            .map(|pat| {
                let splits = pat
                    .delta()
                    .iter()
                    .map(|&q| (index[&pat.prefix(q)], index[&pat.suffix(q)]))
                    .collect();
                let m = pat.max_pos();
                Rule {
                    splits,
                    max_term: (idx(&pat.prefix(m - 1)), idx(&pat.suffix(m))),
                }
            })
            .collect();
        Ok(Self {
            patterns: closure,
            rules,
        })
    }

    /// The closure, in the order used by [`OccurrenceCounter::count`].
    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn index_of(&self, sigma: &Permutation) -> Option<usize> {
        self.patterns.iter().position(|p| p.perm() == sigma)
    }

    /// Counts of every closure pattern in `tree`, in closure order.
    ///
    /// Any count type works as long as it can hold `C(n, k)` for the longest
    /// pattern; every intermediate value is bounded by a final count.
    pub fn count<C>(&self, tree: &BinaryTree) -> Vec<C>
    where
        C: Clone + Zero + One + Add<Output = C> + Mul<Output = C>,
    {
        fn get<'a, C>(side: Option<&'a [C]>, i: usize, zero: &'a C) -> &'a C {
            side.map_or(zero, |v| &v[i])
        }
        let width = self.patterns.len();
        let n = tree.len();
        if n == 0 {
            return vec![C::zero(); width];
        }
        let zero = C::zero();
        let one = C::one();
        let mut values: Vec<C> = vec![C::zero(); n * width];
        // children have larger preorder indices than their parents
        for node in (0..n).rev() {
            let (lo, rest) = values.split_at_mut((node + 1) * width);
            let here = &mut lo[node * width..];
            let l = tree
                .left(node)
                .map(|c| &rest[(c - node - 1) * width..(c - node) * width]);
            let r = tree
                .right(node)
                .map(|c| &rest[(c - node - 1) * width..(c - node) * width]);
            for (s, rule) in self.rules.iter().enumerate() {
                let mut x = get(l, s, &zero).clone() + get(r, s, &zero).clone();
                for &(a, b) in &rule.splits {
                    x = x + get(l, a, &zero).clone() * get(r, b, &zero).clone();
                }
                let (a, b) = rule.max_term;
                let fa = a.map_or(&one, |a| get(l, a, &zero));
                let fb = b.map_or(&one, |b| get(r, b, &zero));
                x = x + fa.clone() * fb.clone();
                here[s] = x;
            }
        }
        values.truncate(width);
        values
    }
}

/// `X_s(T)` for every `s` in the closure of `patterns`, as exact integers.
pub fn count_occurrences_tree(
    tree: &BinaryTree,
    patterns: &[Permutation],
) -> Result<BTreeMap<Permutation, Natural>> {
    let counter = OccurrenceCounter::new(patterns)?;
    let counts = counter.count::<Natural>(tree);
    Ok(counter
        .patterns
        .iter()
        .map(|p| p.perm().clone())
        .zip(counts)
        .collect())
}
