//! Cross-checks between independent engines.
//!
//! Each check compares two computations of the same quantity that share no
//! code beyond the permutation and tree primitives.

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::gf_coefficient;
use crate::enumerate::{exact_mean, exact_mixed_moment, ExactOptions};
use crate::error::Result;
use crate::expectation::ExpectationEngine;
use crate::moments::{tmom3_constant, Family, MomentEngine, Monomial};
use crate::perm::{avoiders_132, occurrences_naive, Permutation};
use crate::sampler::{replicate_rng, sample_tree};
use crate::tree::{count_occurrences_tree, tree_to_perm};
use crate::{catalan, Natural, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Longest pattern checked against enumeration.
    pub max_k: usize,
    /// Largest tree size enumerated.
    pub max_n: usize,
    /// Random trees used for the counting cross-check.
    pub random_trees: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_k: 4,
            max_n: 8,
            random_trees: 200,
            seed: 0,
        }
    }
}

fn check(name: &str, mismatches: Vec<String>, total: usize) -> CheckResult {
    let passed = mismatches.is_empty();
    let detail = if passed {
        format!("{total} cases agree")
    } else {
        format!(
            "{} of {total} cases differ; first: {}",
            mismatches.len(),
            mismatches[0]
        )
    };
    CheckResult {
        name: name.into(),
        passed,
        detail,
    }
}

fn catalan_rational(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(catalan(n)))
}

/// Runs every check; an `Err` means an engine refused its input.
pub fn run_verification(opts: VerifyOptions) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut ex = ExpectationEngine::new();
    let mut mom = MomentEngine::new();
    let exact = ExactOptions {
        cap: opts.max_n.max(1),
        ..ExactOptions::default()
    };

    // generating-function means against enumeration
    let mut bad = Vec::new();
    let mut total = 0;
    for k in 1..=opts.max_k {
        for sigma in avoiders_132(k) {
            let f = ex.ed_expectation(&sigma)?;
            for n in 1..=opts.max_n {
                total += 1;
                let gf = gf_coefficient(&f, n)? / catalan_rational(n);
                let direct = exact_mean(&sigma, n, exact)?;
                if gf != direct {
                    bad.push(format!("{sigma} at n = {n}: {gf} vs {direct}"));
                }
            }
        }
    }
    checks.push(check("expectation polynomial vs enumeration", bad, total));

    // leading coefficients from two recursions
    let mut bad = Vec::new();
    let mut total = 0;
    for k in 1..=opts.max_k + 2 {
        for sigma in avoiders_132(k) {
            total += 1;
            let f = ex.ed_expectation(&sigma)?;
            let e = ex.leading_coeff(&sigma)?;
            if f.leading() != Some(&e) {
                bad.push(format!("{sigma}: {:?} vs {e}", f.leading()));
            }
        }
    }
    checks.push(check("leading coefficient recursion", bad, total));

    // mixed second moments against enumeration
    let mut bad = Vec::new();
    let mut total = 0;
    let small: Vec<Permutation> = (1..=3.min(opts.max_k)).flat_map(avoiders_132).collect();
    for (i, a) in small.iter().enumerate() {
        for b in &small[i..] {
            let m = Monomial::single(a.clone()).product(&Monomial::single(b.clone()));
            let f = mom.ed_monomial(&m)?;
            for n in 1..=opts.max_n.min(7) {
                total += 1;
                let gf = gf_coefficient(&f, n)? / catalan_rational(n);
                let direct = exact_mixed_moment(&m, n, exact)?;
                if gf != direct {
                    bad.push(format!("{m} at n = {n}: {gf} vs {direct}"));
                }
            }
        }
    }
    checks.push(check("mixed moment polynomial vs enumeration", bad, total));

    // moment engine against the scalar recursions
    let mut bad = Vec::new();
    let mut total = 0;
    let p12: Permutation = "12".parse()?;
    for family in [Family::Alpha, Family::Beta, Family::Gamma] {
        let sigma: Permutation = family.pattern().parse()?;
        for k in 0..=2u32 {
            for l in 0..=3 - k {
                if k + l == 0 {
                    continue;
                }
                total += 1;
                let m = Monomial::power(sigma.clone(), k).product(&Monomial::power(p12.clone(), l));
                let a = mom.asymptotic_mixed(&m)?;
                let b = tmom3_constant(family, k as usize, l as usize)?;
                if a != b {
                    bad.push(format!("{family} ({k}, {l}): {a} vs {b}"));
                }
            }
        }
    }
    checks.push(check("moment engine vs scalar recursions", bad, total));

    // subtree recursion counts against naive counting
    let mut bad = Vec::new();
    let patterns: Vec<Permutation> = (1..=opts.max_k).flat_map(avoiders_132).collect();
    for r in 0..opts.random_trees {
        let mut rng = replicate_rng(opts.seed, r as u64);
        let n = rng.gen_range(1..=30);
        let t = sample_tree(n, &mut rng);
        let pi = tree_to_perm(&t);
        let counts = count_occurrences_tree(&t, &patterns)?;
        for sigma in &patterns {
            let naive = Natural::from(occurrences_naive(sigma, &pi));
            if counts[sigma] != naive {
                bad.push(format!("{sigma} in {pi}: {} vs {naive}", counts[sigma]));
            }
        }
    }
    checks.push(check(
        "tree counts vs naive counts",
        bad,
        opts.random_trees * patterns.len(),
    ));

    Ok(VerifyReport { checks })
}
