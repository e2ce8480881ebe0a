//! Uniform random binary trees and Monte Carlo estimates of scaled
//! occurrence counts.
//!
//! Replicate `r` of a run with seed `s` draws from ChaCha8 seeded with `s`
//! on stream `r`, so results do not depend on the number of threads.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expectation::ExpectationEngine;
use crate::perm::{all_permutations, Pattern, Permutation};
use crate::stats::ProductMoments;
use crate::tree::OccurrenceCounter;
use crate::{BinaryTree, Natural, SymbolicConstant};

/// Replicates per work unit; fixed so that merging order never changes.
const BLOCK: u64 = 256;

/// The generator for replicate `r` of a run seeded with `seed`.
pub fn replicate_rng(seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    rng
}

/// A uniformly random tree with `n` nodes, by Rémy's algorithm on full
/// binary trees with `n + 1` leaves followed by deleting the leaves.
pub fn sample_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BinaryTree {
    if n == 0 {
        return BinaryTree::empty();
    }
    const NONE: usize = usize::MAX;
    let total = 2 * n + 1;
    let mut left = vec![NONE; total];
    let mut right = vec![NONE; total];
    let mut parent = vec![NONE; total];
    let mut root = 0usize;
    let mut used = 1usize;
    for _ in 0..n {
        let x = rng.gen_range(0..used);
        let (y, leaf) = (used, used + 1);
        used += 2;
        let p = parent[x];
        if p == NONE {
            root = y;
        } else if left[p] == x {
            left[p] = y;
        } else {
            right[p] = y;
        }
        parent[y] = p;
        if rng.gen::<bool>() {
            left[y] = x;
            right[y] = leaf;
        } else {
            left[y] = leaf;
            right[y] = x;
        }
        parent[x] = y;
        parent[leaf] = y;
    }
    // internal nodes are exactly those with children
    let internal = |v: usize| left[v] != NONE;
    let keep = |c: usize| (c != NONE && internal(c)).then_some(c);
    let l: Vec<Option<usize>> = (0..total)
        .map(|v| if internal(v) { keep(left[v]) } else { None })
        .collect();
    let r: Vec<Option<usize>> = (0..total)
        .map(|v| if internal(v) { keep(right[v]) } else { None })
        .collect();
    BinaryTree::from_links(Some(root), &l, &r)
}

pub fn sample_tree_seeded(n: usize, seed: u64) -> BinaryTree {
    sample_tree(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Integer width needed for the counts of patterns up to length `k` in
/// trees with `n` nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Width {
    U64,
    U128,
    Big,
}

fn width_for(n: usize, k: usize) -> Width {
    let c = binomial_f64(n, k);
    if c < 1e18 {
        Width::U64
    } else if c < 1e37 {
        Width::U128
    } else {
        Width::Big
    }
}

/// Counts of `patterns` in `tree` as floats, using the narrowest integer
/// type that cannot overflow.
struct FloatCounter {
    counter: OccurrenceCounter,
    index: Vec<usize>,
    width: Width,
}

impl FloatCounter {
    fn new(patterns: &[Permutation], n: usize) -> Result<Self> {
        let counter = OccurrenceCounter::new(patterns)?;
        let index = patterns
            .iter()
            .map(|s| counter.index_of(s).expect("in closure"))
            .collect();
        let k = counter
            .patterns()
            .iter()
            .map(|p| p.len())
            .max()
            .unwrap_or(0);
        Ok(Self {
            counter,
            index,
            width: width_for(n, k),
        })
    }

    fn counts(&self, tree: &BinaryTree) -> Vec<f64> {
        match self.width {
            Width::U64 => {
                let c = self.counter.count::<u64>(tree);
                self.index.iter().map(|&i| c[i] as f64).collect()
            }
            Width::U128 => {
                let c = self.counter.count::<u128>(tree);
                self.index.iter().map(|&i| c[i] as f64).collect()
            }
            Width::Big => {
                let c = self.counter.count::<Natural>(tree);
                self.index
                    .iter()
                    .map(|&i| c[i].to_f64().unwrap_or(f64::INFINITY))
                    .collect()
            }
        }
    }
}

/// Folds `step(acc, rng_r)` over replicates `r = 0..reps` in fixed-size
/// blocks, then merges the block accumulators in replicate order.
pub(crate) fn run_blocks<A, I, S, M>(reps: u64, seed: u64, init: I, step: S, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, &mut ChaCha8Rng) + Sync,
    M: Fn(&mut A, &A),
{
    let blocks = reps.div_ceil(BLOCK);
    let parts: Vec<A> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            for r in b * BLOCK..((b + 1) * BLOCK).min(reps) {
                step(&mut acc, &mut replicate_rng(seed, r));
            }
            acc
        })
        .collect();
    let mut total = init();
    for p in &parts {
        merge(&mut total, p);
    }
    total
}

/// Product moments of the vectors `f(rng_r)`, `r = 0..reps`.
pub(crate) fn run_replicates<F>(width: usize, reps: u64, seed: u64, f: F) -> ProductMoments<f64>
where
    F: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    run_blocks(
        reps,
        seed,
        || ProductMoments::new(width),
        |acc, rng| acc.push(&f(rng)),
        |a, b| a.merge(b),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternSummary {
    pub lambda: usize,
    /// Mean of `X_s / n^{lambda/2}`.
    pub mean: f64,
    pub var: f64,
    /// Standard error of `mean`.
    pub se: f64,
    pub second_moment: f64,
    pub second_moment_se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEntry {
    pub a: String,
    pub b: String,
    /// Mean of the product of the two scaled counts.
    pub product_mean: f64,
    pub product_mean_se: f64,
    pub covariance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub n: usize,
    pub reps: u64,
    pub seed: u64,
    pub patterns: Vec<String>,
    pub per_pattern: BTreeMap<String, PatternSummary>,
    pub covariances: Vec<CovarianceEntry>,
}

impl SampleStats {
    fn from_moments(
        n: usize,
        reps: u64,
        seed: u64,
        pats: &[Pattern],
        acc: &ProductMoments<f64>,
    ) -> Self {
        let (names, per_pattern, covariances) = summarize(pats, acc);
        Self {
            n,
            reps,
            seed,
            patterns: names,
            per_pattern,
            covariances,
        }
    }

    pub fn pattern(&self, sigma: &str) -> Option<&PatternSummary> {
        self.per_pattern.get(sigma)
    }

    pub fn pair(&self, a: &str, b: &str) -> Option<&CovarianceEntry> {
        find_pair(&self.covariances, a, b)
    }
}

pub(crate) fn find_pair<'a>(
    cov: &'a [CovarianceEntry],
    a: &str,
    b: &str,
) -> Option<&'a CovarianceEntry> {
    cov.iter()
        .find(|c| (c.a == a && c.b == b) || (c.a == b && c.b == a))
}

type Summary = (
    Vec<String>,
    BTreeMap<String, PatternSummary>,
    Vec<CovarianceEntry>,
);

/// Names, per-pattern summaries and pairwise entries; column `i` of `acc`
/// belongs to `pats[i]`.
pub(crate) fn summarize(pats: &[Pattern], acc: &ProductMoments<f64>) -> Summary {
    let names: Vec<String> = pats.iter().map(|p| p.perm().to_string()).collect();
    let per_pattern = pats
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let s = PatternSummary {
                lambda: p.lambda(),
                mean: acc.mean(i),
                var: acc.variance(i),
                se: acc.mean_se(i),
                second_moment: acc.product_mean(i, i),
                second_moment_se: acc.product_mean_se(i, i),
            };
            (names[i].clone(), s)
        })
        .collect();
    let mut covariances = Vec::new();
    for i in 0..pats.len() {
        for j in i + 1..pats.len() {
            covariances.push(CovarianceEntry {
                a: names[i].clone(),
                b: names[j].clone(),
                product_mean: acc.product_mean(i, j),
                product_mean_se: acc.product_mean_se(i, j),
                covariance: acc.covariance(i, j),
            });
        }
    }
    (names, per_pattern, covariances)
}

/// Scaled statistics of `X_s(T_n) / n^{lambda(s)/2}` over `reps` trees.
pub fn sample_scaled_stats(
    n: usize,
    patterns: &[Permutation],
    reps: u64,
    seed: u64,
) -> Result<SampleStats> {
    if n == 0 || reps == 0 {
        return Err(Error::InvalidArgument("n and reps must be positive".into()));
    }
    if patterns.is_empty() {
        return Err(Error::InvalidArgument("no patterns given".into()));
    }
    let pats: Vec<Pattern> = patterns
        .iter()
        .map(|s| Pattern::avoiding_132(s.clone()))
        .collect::<Result<_>>()?;
    let counter = FloatCounter::new(patterns, n)?;
    let scale: Vec<f64> = pats
        .iter()
        .map(|p| (n as f64).powf(p.lambda() as f64 / 2.0))
        .collect();
    let acc = run_replicates(pats.len(), reps, seed, |rng| {
        let t = sample_tree(n, rng);
        counter
            .counts(&t)
            .iter()
            .zip(&scale)
            .map(|(c, s)| c / s)
            .collect()
    });
    Ok(SampleStats::from_moments(n, reps, seed, &pats, &acc))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub n: usize,
    pub k: usize,
    pub reps: u64,
    pub seed: u64,
    /// Mean of `n^{-(k-1/2)} (C(n,k) - X_{k..1})`.
    pub mean: f64,
    pub var: f64,
    pub se: f64,
    /// Sum of `A_s` over 132-avoiding `s` of length `k` with `k - 1` descents.
    pub target: String,
    pub target_value: f64,
}

/// Sum of the asymptotic constants of the 132-avoiders of length `k` with
/// exactly `k - 1` descents (last index included).
pub fn residual_target(k: usize) -> Result<SymbolicConstant> {
    let mut eng = ExpectationEngine::new();
    let mut total: Option<SymbolicConstant> = None;
    for s in all_permutations(k)
        .into_iter()
        .filter(|s| !s.contains_132())
    {
        if Pattern::new(s.clone())?.descents() + 1 != k {
            continue;
        }
        let a = eng.asymptotic_constant(&s)?;
        total = Some(match total {
            None => a,
            Some(t) => t.checked_add(&a)?,
        });
    }
    total.ok_or_else(|| Error::InvalidArgument(format!("no patterns of length {k}")))
}

/// Monte Carlo estimate of the scaled deficit `C(n,k) - X_{k..1}`.
pub fn residual_stat(n: usize, k: usize, reps: u64, seed: u64) -> Result<ResidualStats> {
    if k < 2 {
        return Err(Error::InvalidArgument("the residual needs k >= 2".into()));
    }
    if n < k || reps == 0 {
        return Err(Error::InvalidArgument("need n >= k and reps >= 1".into()));
    }
    let target = residual_target(k)?;
    let dec = Permutation::decreasing(k);
    let counter = OccurrenceCounter::new(std::slice::from_ref(&dec))?;
    let idx = counter.index_of(&dec).expect("in closure");
    let binom = (0..k).fold(Natural::from(1u8), |acc, i| {
        acc * Natural::from(n - i) / Natural::from(i + 1)
    });
    let scale = (n as f64).powf(k as f64 - 0.5);
    let acc = run_replicates(1, reps, seed, |rng| {
        let t = sample_tree(n, rng);
        let x = counter.count::<Natural>(&t).swap_remove(idx);
        let d = (&binom - x).to_f64().unwrap_or(f64::INFINITY);
        vec![d / scale]
    });
    Ok(ResidualStats {
        n,
        k,
        reps,
        seed,
        mean: acc.mean(0),
        var: acc.variance(0),
        se: acc.mean_se(0),
        target: target.to_string(),
        target_value: target.to_f64(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub n: usize,
    pub reps: u64,
    pub mean: f64,
    pub var: f64,
    pub se: f64,
}

/// Per tree, `X_12 / n^{3/2} - (2 X_213 + X_231 + X_312) / n^{5/2}`, which
/// vanishes in the limit.
pub fn area_decomposition_residual(n: usize, reps: u64, seed: u64) -> Result<ResidualSummary> {
    let pats: Vec<Permutation> = ["12", "213", "231", "312"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    let counter = FloatCounter::new(&pats, n)?;
    let nf = n as f64;
    let acc = run_replicates(1, reps, seed, |rng| {
        let c = counter.counts(&sample_tree(n, rng));
        vec![c[0] / nf.powf(1.5) - (2.0 * c[1] + c[2] + c[3]) / nf.powf(2.5)]
    });
    Ok(ResidualSummary {
        n,
        reps,
        mean: acc.mean(0),
        var: acc.variance(0),
        se: acc.mean_se(0),
    })
}
