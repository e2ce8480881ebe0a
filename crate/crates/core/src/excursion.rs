//! Discrete Brownian excursions and the limit functionals `Psi_s`.
//!
//! An excursion with `2m` steps lives on the grid `x_i = i / (2m)`,
//! `i = 0..=2m`. Single integrals are Riemann sums `h sum_i f(x_i)` and
//! double integrals over `x < y` are `h^2 sum_{i<j} f(x_i, x_j)`, with
//! `h = 1 / (2m)`. With this rule the decomposition
//! `Psi_12 = 2 Psi_213 + Psi_231 + Psi_312` holds exactly on the grid, and
//! reversing the excursion swaps `Psi_231` and `Psi_312` exactly.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Pattern, Permutation};
use crate::rmq::SparseTable;
use crate::sampler::{
    find_pair, run_blocks, run_replicates, sample_tree, summarize, CovarianceEntry, PatternSummary,
};
use crate::stats::{Compensated, ProductMoments};
use crate::tree::OccurrenceCounter;
use crate::HeightProfile;

/// Values of an excursion at the grid points `i / steps`, `i = 0..=steps`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteExcursion {
    values: Vec<f64>,
}

impl DiscreteExcursion {
    /// Fails unless the values start and end at 0 and are nonnegative.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument(
                "an excursion needs at least two grid points".into(),
            ));
        }
        if values[0] != 0.0 || *values.last().expect("nonempty") != 0.0 {
            return Err(Error::InvalidArgument(
                "an excursion starts and ends at 0".into(),
            ));
        }
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::InvalidArgument("an excursion is nonnegative".into()));
        }
        Ok(Self { values })
    }

    pub fn zero(steps: usize) -> Self {
        Self {
            values: vec![0.0; steps + 1],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of steps `2m`.
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn step_width(&self) -> f64 {
        1.0 / self.steps() as f64
    }

    /// `e(1 - x)`.
    pub fn reversed(&self) -> Self {
        Self {
            values: self.values.iter().rev().copied().collect(),
        }
    }

    /// `h sum_i e(x_i)^p`.
    pub fn power_integral(&self, p: u32) -> f64 {
        let s: Compensated<f64> = self.values.iter().map(|v| v.powi(p as i32)).collect();
        s.value() * self.step_width()
    }

    /// `sum_{i<j} min e[i..=j]`, by summing minima of all windows with a
    /// monotonic stack and removing the one-point windows.
    pub fn pair_min_sum(&self) -> f64 {
        let v = &self.values;
        let n = v.len();
        // previous index with a strictly smaller value, next with smaller or equal
        let mut prev = vec![-1i64; n];
        let mut next = vec![n as i64; n];
        let mut stack: Vec<usize> = Vec::with_capacity(n);
        for i in 0..n {
            while let Some(&top) = stack.last() {
                if v[top] >= v[i] {
                    next[top] = i as i64;
                    stack.pop();
                } else {
                    break;
                }
            }
            prev[i] = stack.last().map_or(-1, |&t| t as i64);
            stack.push(i);
        }
        let mut acc = Compensated::new();
        for i in 0..n {
            let windows = (i as i64 - prev[i]) as f64 * (next[i] - i as i64) as f64;
            acc.add(v[i] * (windows - 1.0));
        }
        acc.value()
    }

    /// Same as [`DiscreteExcursion::pair_min_sum`] by `O(m^2)` range-minimum
    /// queries; used as a cross-check.
    pub fn pair_min_sum_quadratic(&self) -> f64 {
        let table = SparseTable::new(&self.values);
        let n = self.values.len();
        let mut acc = Compensated::new();
        for i in 0..n {
            for j in i + 1..n {
                acc.add(table.min(i, j));
            }
        }
        acc.value()
    }

    fn weighted_sum(&self) -> f64 {
        let s: Compensated<f64> = self.values.iter().copied().collect();
        s.value()
    }

    /// `h^2 sum_{i<j} e(x_i)` and `h^2 sum_{i<j} e(x_j)`.
    fn endpoint_pair_sums(&self) -> (f64, f64) {
        let n = self.values.len();
        let mut left = Compensated::new();
        let mut right = Compensated::new();
        for (i, &v) in self.values.iter().enumerate() {
            left.add(v * (n - 1 - i) as f64);
            right.add(v * i as f64);
        }
        let h2 = self.step_width().powi(2);
        (left.value() * h2, right.value() * h2)
    }
}

/// A random walk excursion with `2m` steps, scaled by `1 / sqrt(2m)`: a
/// uniformly shuffled bridge of `m` up- and `m` down-steps, rotated to
/// start at its first minimum.
pub fn sample_excursion<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<DiscreteExcursion> {
    if m < 2 {
        return Err(Error::InvalidArgument("excursion needs m >= 2".into()));
    }
    let steps = 2 * m;
    let mut moves: Vec<i32> = (0..steps).map(|i| if i < m { 1 } else { -1 }).collect();
    moves.shuffle(rng);
    let mut walk = Vec::with_capacity(steps + 1);
    walk.push(0i32);
    for &s in &moves {
        walk.push(walk.last().expect("nonempty") + s);
    }
    let (start, low) = walk[..steps]
        .iter()
        .enumerate()
        .fold(
            (0, i32::MAX),
            |best, (i, &v)| {
                if v < best.1 {
                    (i, v)
                } else {
                    best
                }
            },
        );
    let scale = 1.0 / (steps as f64).sqrt();
    let values = (0..=steps)
        .map(|i| (walk[(start + i) % steps] - low) as f64 * scale)
        .collect();
    Ok(DiscreteExcursion { values })
}

/// Patterns with a closed-form excursion functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PsiPattern {
    /// `1 2 .. k`
    Increasing(usize),
    /// `k .. 2 1`
    Decreasing(usize),
    P213,
    P231,
    P312,
}

impl PsiPattern {
    pub fn from_permutation(sigma: &Permutation) -> Result<Self> {
        let k = sigma.len();
        if k == 0 {
            return Err(Error::Unsupported("()".into()));
        }
        if *sigma == Permutation::identity(k) {
            return Ok(PsiPattern::Increasing(k));
        }
        if *sigma == Permutation::decreasing(k) {
            return Ok(PsiPattern::Decreasing(k));
        }
        match sigma.to_string().as_str() {
            "213" => Ok(PsiPattern::P213),
            "231" => Ok(PsiPattern::P231),
            "312" => Ok(PsiPattern::P312),
            _ => Err(Error::Unsupported(sigma.to_string())),
        }
    }

    pub fn permutation(self) -> Permutation {
        match self {
            PsiPattern::Increasing(k) => Permutation::identity(k),
            PsiPattern::Decreasing(k) => Permutation::decreasing(k),
            PsiPattern::P213 => "213".parse().expect("valid"),
            PsiPattern::P231 => "231".parse().expect("valid"),
            PsiPattern::P312 => "312".parse().expect("valid"),
        }
    }
}

impl fmt::Display for PsiPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.permutation())
    }
}

impl FromStr for PsiPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_permutation(&s.parse()?)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `Psi_s(e)` evaluated on the grid.
pub fn psi(sigma: PsiPattern, e: &DiscreteExcursion) -> f64 {
    let h = e.step_width();
    let root2 = std::f64::consts::SQRT_2;
    match sigma {
        PsiPattern::Increasing(1) | PsiPattern::Decreasing(1) => 1.0,
        PsiPattern::Increasing(k) => {
            2f64.powf((k as f64 - 1.0) / 2.0) / factorial(k - 1) * e.power_integral(k as u32 - 1)
        }
        PsiPattern::Decreasing(k) => 1.0 / factorial(k),
        PsiPattern::P213 => root2 * h * h * e.pair_min_sum(),
        PsiPattern::P231 => root2 * (e.endpoint_pair_sums().0 - h * h * e.pair_min_sum()),
        PsiPattern::P312 => root2 * (e.endpoint_pair_sums().1 - h * h * e.pair_min_sum()),
    }
}

/// `Psi_12, Psi_213, Psi_231, Psi_312` sharing one pass over the minima.
pub fn psi_area_family(e: &DiscreteExcursion) -> [f64; 4] {
    let h = e.step_width();
    let root2 = std::f64::consts::SQRT_2;
    let mins = h * h * e.pair_min_sum();
    let (l, r) = e.endpoint_pair_sums();
    [
        root2 * h * e.weighted_sum(),
        root2 * mins,
        root2 * (l - mins),
        root2 * (r - mins),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcursionStats {
    pub m: usize,
    pub reps: u64,
    pub seed: u64,
    pub patterns: Vec<String>,
    pub per_pattern: std::collections::BTreeMap<String, PatternSummary>,
    pub covariances: Vec<CovarianceEntry>,
    /// Largest `|Psi_12 - 2 Psi_213 - Psi_231 - Psi_312|` over all samples.
    pub max_decomposition_error: f64,
    /// Fraction of samples with `|Psi_231 - Psi_312| > 0.01`.
    pub fraction_231_312_apart: f64,
}

impl ExcursionStats {
    pub fn pattern(&self, sigma: &str) -> Option<&PatternSummary> {
        self.per_pattern.get(sigma)
    }

    pub fn pair(&self, a: &str, b: &str) -> Option<&CovarianceEntry> {
        find_pair(&self.covariances, a, b)
    }
}

struct ExcursionAcc {
    moments: ProductMoments<f64>,
    max_error: f64,
    apart: u64,
}

/// Moments of `Psi_s` over `reps` independent excursions with `2m` steps.
pub fn sample_excursion_stats(
    m: usize,
    patterns: &[PsiPattern],
    reps: u64,
    seed: u64,
) -> Result<ExcursionStats> {
    if patterns.is_empty() || reps == 0 {
        return Err(Error::InvalidArgument(
            "need at least one pattern and one replicate".into(),
        ));
    }
    if m < 2 {
        return Err(Error::InvalidArgument("excursion needs m >= 2".into()));
    }
    let width = patterns.len();
    let acc = run_blocks(
        reps,
        seed,
        || ExcursionAcc {
            moments: ProductMoments::new(width),
            max_error: 0.0,
            apart: 0,
        },
        |acc, rng| {
            let e = sample_excursion(m, rng).expect("m checked above");
            let [a12, a213, a231, a312] = psi_area_family(&e);
            let row: Vec<f64> = patterns
                .iter()
                .map(|&s| match s {
                    PsiPattern::Increasing(2) => a12,
                    PsiPattern::P213 => a213,
                    PsiPattern::P231 => a231,
                    PsiPattern::P312 => a312,
                    other => psi(other, &e),
                })
                .collect();
            acc.moments.push(&row);
            acc.max_error = acc.max_error.max((a12 - 2.0 * a213 - a231 - a312).abs());
            if (a231 - a312).abs() > 0.01 {
                acc.apart += 1;
            }
        },
        |a, b| {
            a.moments.merge(&b.moments);
            a.max_error = a.max_error.max(b.max_error);
            a.apart += b.apart;
        },
    );
    let pats: Vec<Pattern> = patterns
        .iter()
        .map(|s| Pattern::new(s.permutation()))
        .collect::<Result<_>>()?;
    let (names, per_pattern, covariances) = summarize(&pats, &acc.moments);
    Ok(ExcursionStats {
        m,
        reps,
        seed,
        patterns: names,
        per_pattern,
        covariances,
        max_decomposition_error: acc.max_error,
        fraction_231_312_apart: acc.apart as f64 / reps as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub n: usize,
    pub reps: u64,
    pub seed: u64,
    /// Mean of `n^{-3/2} sum_i h_L(i)`.
    pub mean: f64,
    pub mean_se: f64,
    pub var: f64,
    pub var_se: f64,
    pub target_mean: f64,
    pub target_var: f64,
    /// `(mean - target_mean) / mean_se`.
    pub mean_z: f64,
    /// `(var - target_var) / var_se`.
    pub var_z: f64,
    /// Trees where `sum_i h_L(i)` differed from the occurrence count of 12.
    pub identity_failures: u64,
}

/// Samples trees, compares the scaled left-height sum with the area
/// functional `Psi_12`, and checks `sum_i h_L(i) = X_12` on every tree.
pub fn profile_convergence_check(n: usize, reps: u64, seed: u64) -> Result<ProfileReport> {
    if n == 0 || reps < 2 {
        return Err(Error::InvalidArgument("need n >= 1 and reps >= 2".into()));
    }
    let p12: Permutation = "12".parse()?;
    let counter = OccurrenceCounter::new(std::slice::from_ref(&p12))?;
    let idx = counter.index_of(&p12).expect("in closure");
    let scale = (n as f64).powf(1.5);
    let failures = std::sync::atomic::AtomicU64::new(0);
    let acc = run_replicates(2, reps, seed, |rng| {
        let t = sample_tree(n, rng);
        let sum = HeightProfile::new(&t).expect("n >= 1").left_height_sum();
        if counter.count::<u64>(&t)[idx] != sum {
            failures.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        }
        let x = sum as f64 / scale;
        vec![x, x * x]
    });
    let r = reps as f64;
    let mean = acc.mean(0);
    let var = acc.variance(0);
    // fourth central moment from raw moments E x^k, k <= 4
    let (m2, m3, m4) = (acc.mean(1), acc.product_mean(0, 1), acc.product_mean(1, 1));
    let mu4 = m4 - 4.0 * mean * m3 + 6.0 * mean * mean * m2 - 3.0 * mean.powi(4);
    let var_se = ((mu4 - var * var).max(0.0) / r).sqrt();
    let pi = std::f64::consts::PI;
    let target_mean = pi.sqrt() / 2.0;
    let target_var = (10.0 - 3.0 * pi) / 12.0;
    let mean_se = acc.mean_se(0);
    Ok(ProfileReport {
        n,
        reps,
        seed,
        mean,
        mean_se,
        var,
        var_se,
        target_mean,
        target_var,
        mean_z: (mean - target_mean) / mean_se,
        var_z: (var - target_var) / var_se,
        identity_failures: failures.into_inner(),
    })
}
