//! Permutations in one-line notation, patterns and occurrence counting.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `1..=n` in one-line notation. The empty word is allowed.
///
/// Permutations order by length first and then lexicographically, which is
/// the canonical order used for memo keys and monomials.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    pub fn new(word: Vec<u32>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            let v = v as usize;
            if v == 0 || v > n {
                return Err(Error::NotBijective(format!(
                    "value {v} out of range 1..={n} in {word:?}"
                )));
            }
            if seen[v] {
                return Err(Error::NotBijective(format!(
                    "repeated value {v} in {word:?}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self { word })
    }

    pub fn empty() -> Self {
        Self { word: Vec::new() }
    }

    /// `1 2 ... n`.
    pub fn identity(n: usize) -> Self {
        Self {
            word: (1..=n as u32).collect(),
        }
    }

    /// `n ... 2 1`.
    pub fn decreasing(n: usize) -> Self {
        Self {
            word: (1..=n as u32).rev().collect(),
        }
    }

    /// The permutation with the same relative order as `values`
    /// (which must be distinct).
    pub fn standardize(values: &[u32]) -> Self {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by_key(|&i| values[i]);
        let mut word = vec![0u32; values.len()];
        for (rank, &i) in idx.iter().enumerate() {
            word[i] = rank as u32 + 1;
        }
        Self { word }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.word
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.word
    }

    pub fn inverse(&self) -> Self {
        let mut word = vec![0u32; self.len()];
        for (i, &v) in self.word.iter().enumerate() {
            word[v as usize - 1] = i as u32 + 1;
        }
        Self { word }
    }

    pub fn reverse(&self) -> Self {
        Self {
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn complement(&self) -> Self {
        let n = self.len() as u32;
        Self {
            word: self.word.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    pub fn symmetry(&self, which: Symmetry) -> Self {
        match which {
            Symmetry::Inverse => self.inverse(),
            Symmetry::Reverse => self.reverse(),
            Symmetry::Complement => self.complement(),
        }
    }

    /// Whether the permutation contains an occurrence of 132, in linear time.
    pub fn contains_132(&self) -> bool {
        // Scan from the right; `third` is the largest value seen so far that
        // has a larger value to its left, i.e. the best candidate for the "2".
        let mut stack: Vec<u32> = Vec::new();
        let mut third = 0u32;
        for &a in self.word.iter().rev() {
            if a < third {
                return true;
            }
            while let Some(&top) = stack.last() {
                if a > top {
                    third = third.max(top);
                    stack.pop();
                } else {
                    break;
                }
            }
            stack.push(a);
        }
        false
    }

    /// Whether `self` avoids `pattern`.
    pub fn avoids(&self, pattern: &Permutation) -> bool {
        if pattern.len() == 3 && pattern.word == [1, 3, 2] {
            return !self.contains_132();
        }
        occurrences_naive(pattern, self) == 0
    }

    /// Set of inversions `(i, j)` (1-based, `i < j`, `w_i > w_j`).
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let w = &self.word;
        let mut out = Vec::new();
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    /// Index `m` (1-based) with `w_m = n`.
    pub fn max_position(&self) -> Option<usize> {
        self.word
            .iter()
            .position(|&v| v as usize == self.len())
            .map(|p| p + 1)
    }
}

impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        if self.len() <= 9 {
            for v in &self.word {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;
    fn try_from(word: Vec<u32>) -> Result<Self> {
        Self::new(word)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.word
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_pattern(s)
    }
}

/// Parses `"132"` (single digits, n ≤ 9) or `"4,2,1,3"` (comma separated).
/// `""` and `"()"` denote the empty permutation.
pub fn parse_pattern(text: &str) -> Result<Permutation> {
    let t = text.trim();
    let err = |reason: &str| Error::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    if t.is_empty() || t == "()" {
        return Ok(Permutation::empty());
    }
    let word: Vec<u32> = if t.contains(',') {
        t.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| err("expected an integer"))
            })
            .collect::<Result<_>>()?
    } else {
        t.chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d >= 1 => Ok(d),
                Some(_) => Err(err("digit 0 is out of range")),
                None => Err(err("expected digits 1-9")),
            })
            .collect::<Result<_>>()?
    };
    Permutation::new(word).map_err(|e| err(&e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Inverse,
    Reverse,
    Complement,
}

/// Number of subsequences of `text` with the same relative order as
/// `pattern`, by direct enumeration of index subsets. The empty pattern
/// occurs 0 times.
pub fn occurrences_naive(pattern: &Permutation, text: &Permutation) -> u64 {
    let k = pattern.len();
    let n = text.len();
    if k == 0 || k > n {
        return 0;
    }
    let mut chosen = Vec::with_capacity(k);
    extend_occurrence(pattern.as_slice(), text.as_slice(), &mut chosen, 0)
}

fn extend_occurrence(sigma: &[u32], pi: &[u32], chosen: &mut Vec<usize>, start: usize) -> u64 {
    let t = chosen.len();
    if t == sigma.len() {
        return 1;
    }
    let last = pi.len() - (sigma.len() - t);
    let mut total = 0;
    for i in start..=last {
        let consistent = chosen
            .iter()
            .enumerate()
            .all(|(s, &j)| (sigma[s] < sigma[t]) == (pi[j] < pi[i]));
        if consistent {
            chosen.push(i);
            total += extend_occurrence(sigma, pi, chosen, i + 1);
            chosen.pop();
        }
    }
    total
}

/// A pattern together with its descent statistics.
///
/// Positions are 1-based: `max_pos` is the `m` with `s_m = k`, and
/// `delta` holds the `q` in `1..k` with `min(s_1..s_q) > max(s_{q+1}..s_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    perm: Permutation,
    descents: usize,
    lambda: usize,
    max_pos: usize,
    delta: Vec<usize>,
}

impl Pattern {
    pub fn new(perm: Permutation) -> Result<Self> {
        let k = perm.len();
        if k == 0 {
            return Err(Error::InvalidArgument("pattern must be nonempty".into()));
        }
        let w = perm.as_slice();
        // the last index always counts as a descent
        let descents = 1 + w.windows(2).filter(|p| p[0] > p[1]).count();
        let max_pos = perm
            .max_position()
            .expect("nonempty permutation has a maximum");
        let mut prefix_min = vec![u32::MAX; k + 1];
        for q in 1..=k {
            prefix_min[q] = prefix_min[q - 1].min(w[q - 1]);
        }
        let mut suffix_max = vec![0u32; k + 1];
        for q in (0..k).rev() {
            suffix_max[q] = suffix_max[q + 1].max(w[q]);
        }
        let delta = (1..k).filter(|&q| prefix_min[q] > suffix_max[q]).collect();
        Ok(Self {
            perm,
            descents,
            lambda: k + descents,
            max_pos,
            delta,
        })
    }

    /// Like [`Pattern::new`], but rejects patterns containing 132.
    pub fn avoiding_132(perm: Permutation) -> Result<Self> {
        if perm.contains_132() {
            return Err(Error::Contains132(perm.to_string()));
        }
        Self::new(perm)
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn descents(&self) -> usize {
        self.descents
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn max_pos(&self) -> usize {
        self.max_pos
    }

    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    /// Standardized prefix `s_1 .. s_q`.
    pub fn prefix(&self, q: usize) -> Permutation {
        Permutation::standardize(&self.perm.as_slice()[..q])
    }

    /// Standardized suffix `s_{q+1} .. s_k`.
    pub fn suffix(&self, q: usize) -> Permutation {
        Permutation::standardize(&self.perm.as_slice()[q..])
    }
}

/// Statistics of `sigma`: descents, lambda, max position and the set Δ.
pub fn pattern_stats(sigma: &Permutation) -> Result<Pattern> {
    Pattern::new(sigma.clone())
}

/// `sigma ≼ other` in the inversion-set order: every inversion of `sigma`
/// is an inversion of `other`.
pub fn inversion_order_leq(sigma: &Permutation, other: &Permutation) -> Result<bool> {
    if sigma.len() != other.len() {
        return Err(Error::LengthMismatch(sigma.len(), other.len()));
    }
    let a = sigma.as_slice();
    let b = other.as_slice();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] > a[j] && b[i] < b[j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All permutations of length `n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<u32> = (1..=n as u32).collect();
    let mut out = vec![Permutation { word: cur.clone() }];
    while next_permutation(&mut cur) {
        out.push(Permutation { word: cur.clone() });
    }
    out
}

/// All 132-avoiding permutations of length `n` in lexicographic order.
pub fn avoiders_132(n: usize) -> Vec<Permutation> {
    all_permutations(n)
        .into_iter()
        .filter(|p| !p.contains_132())
        .collect()
}

fn next_permutation(w: &mut [u32]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("132").as_slice(), &[1, 3, 2]);
        assert_eq!(p("1").as_slice(), &[1]);
        assert_eq!(p("4,2,1,3").as_slice(), &[4, 2, 1, 3]);
        assert!(p("").is_empty());
        assert_eq!(
            p("10,9,8,7,6,5,4,3,2,1").to_string(),
            "10,9,8,7,6,5,4,3,2,1"
        );
    }

    #[test]
    fn parse_errors() {
        assert!("1a2".parse::<Permutation>().is_err());
        assert!("112".parse::<Permutation>().is_err());
        assert!("14".parse::<Permutation>().is_err());
        assert!("0".parse::<Permutation>().is_err());
        assert!("1,,2".parse::<Permutation>().is_err());
    }

    #[test]
    fn naive_examples() {
        assert_eq!(occurrences_naive(&p("12"), &p("123")), 3);
        assert_eq!(occurrences_naive(&p("21"), &Permutation::identity(7)), 0);
        // pairs of 213: (2,1) no, (2,3) yes, (1,3) yes
        assert_eq!(occurrences_naive(&p("12"), &p("213")), 2);
        assert_eq!(occurrences_naive(&Permutation::empty(), &p("213")), 0);
        assert_eq!(occurrences_naive(&p("12"), &Permutation::empty()), 0);
    }

    #[test]
    fn avoid_examples() {
        assert!(p("4213").avoids(&p("132")));
        assert!(!p("132").avoids(&p("132")));
        assert!(Permutation::empty().avoids(&p("12")));
    }

    #[test]
    fn contains_132_matches_naive() {
        for n in 0..=7 {
            for pi in all_permutations(n) {
                assert_eq!(
                    pi.contains_132(),
                    occurrences_naive(&p("132"), &pi) > 0,
                    "{pi}"
                );
            }
        }
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(p("231").inverse(), p("312"));
        assert_eq!(p("132").reverse(), p("231"));
        assert_eq!(p("132").complement(), p("312"));
    }

    #[test]
    fn stats_examples() {
        let s = pattern_stats(&p("231")).unwrap();
        assert_eq!((s.descents(), s.lambda(), s.max_pos()), (2, 5, 2));
        assert_eq!(s.delta(), &[2]);
        let s = pattern_stats(&p("312")).unwrap();
        assert_eq!((s.descents(), s.lambda(), s.max_pos()), (2, 5, 1));
        assert_eq!(s.delta(), &[1]);
        for k in 1..=7 {
            let s = pattern_stats(&Permutation::decreasing(k)).unwrap();
            assert_eq!(s.delta(), (1..k).collect::<Vec<_>>().as_slice());
            assert_eq!(s.lambda(), 2 * k);
            let s = pattern_stats(&Permutation::identity(k)).unwrap();
            assert!(s.delta().is_empty());
            assert_eq!(s.lambda(), k + 1);
        }
        assert!(pattern_stats(&Permutation::empty()).is_err());
        assert!(Pattern::avoiding_132(p("132")).is_err());
    }

    #[test]
    fn stats_invariants() {
        for k in 1..=6 {
            for sigma in avoiders_132(k) {
                let s = pattern_stats(&sigma).unwrap();
                let w = sigma.as_slice();
                assert!(s.descents() >= 1 && s.descents() <= k);
                assert!(s.lambda() > k && s.lambda() <= 2 * k);
                for &q in s.delta() {
                    assert!(w[q - 1] > w[q]);
                }
                if s.max_pos() < k {
                    assert!(s.delta().contains(&s.max_pos()));
                } else {
                    assert!(s.delta().is_empty());
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        for k in 1..=4 {
            for s in avoiders_132(k) {
                assert!(inversion_order_leq(&Permutation::identity(k), &s).unwrap());
                assert!(inversion_order_leq(&s, &Permutation::decreasing(k)).unwrap());
            }
        }
        assert!(!inversion_order_leq(&p("213"), &p("231")).unwrap());
        assert!(!inversion_order_leq(&p("231"), &p("213")).unwrap());
        assert!(inversion_order_leq(&p("12"), &p("123")).is_err());
    }

    #[test]
    fn order_is_partial_order() {
        for k in 1..=4 {
            let all = avoiders_132(k);
            let leq = |a: &Permutation, b: &Permutation| inversion_order_leq(a, b).unwrap();
            for a in &all {
                assert!(leq(a, a));
                for b in &all {
                    if a != b && leq(a, b) {
                        assert!(!leq(b, a));
                    }
                    for c in &all {
                        if leq(a, b) && leq(b, c) {
                            assert!(leq(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn occurrences_sum_to_binomial() {
        for n in 0..=7 {
            for pi in all_permutations(n) {
                for k in 1..=4.min(n) {
                    let total: u64 = all_permutations(k)
                        .iter()
                        .map(|s| occurrences_naive(s, &pi))
                        .sum();
                    assert_eq!(total, binom(n as u64, k as u64));
                }
            }
        }
    }

    #[test]
    fn twelve_identity() {
        let c = |s: &str, pi: &Permutation| occurrences_naive(&p(s), pi);
        for n in 0..=7 {
            for pi in all_permutations(n) {
                let lhs = (n as i64 - 2) * c("12", &pi) as i64;
                let rhs = 3 * c("123", &pi)
                    + 2 * c("132", &pi)
                    + 2 * c("213", &pi)
                    + c("231", &pi)
                    + c("312", &pi);
                assert_eq!(lhs, rhs as i64);
            }
        }
    }

    #[test]
    fn catalan_many_avoiders() {
        let counts: Vec<usize> = (0..=8).map(|n| avoiders_132(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132, 429, 1430]);
    }

    fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
        (0..=max).prop_flat_map(|n| {
            Just((1..=n as u32).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|w| Permutation::new(w).unwrap())
        })
    }

    proptest! {
        #[test]
        fn symmetries_preserve_counts(sigma in arb_perm(4), pi in arb_perm(9)) {
            let n = occurrences_naive(&sigma, &pi);
            prop_assert_eq!(occurrences_naive(&sigma.inverse(), &pi.inverse()), n);
            prop_assert_eq!(occurrences_naive(&sigma.reverse(), &pi.reverse()), n);
            prop_assert_eq!(occurrences_naive(&sigma.complement(), &pi.complement()), n);
        }

        #[test]
        fn standardize_is_order_isomorphic(pi in arb_perm(9)) {
            let shifted: Vec<u32> = pi.as_slice().iter().map(|v| 3 * v + 7).collect();
            prop_assert_eq!(Permutation::standardize(&shifted), pi);
        }
    }
}
