use num_bigint::BigInt;
use proptest::prelude::*;

use avoid132::algebra::{gf_coefficient, gf_from_ed};
use avoid132::enumerate::{exact_power_moments, ExactOptions};
use avoid132::expectation::ExpectationEngine;
use avoid132::perm::{all_permutations, avoiders_132};
use avoid132::sampler::sample_tree_seeded;
use avoid132::tree::{count_occurrences_tree, perm_to_tree, tree_to_perm};
use avoid132::{catalan, Natural, Pattern, Permutation, Rational};

const OPTS: ExactOptions = ExactOptions {
    cap: 12,
    method: avoid132::enumerate::CountMethod::Naive,
};

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn means(pats: &[Permutation], n: usize) -> Vec<Rational> {
    exact_power_moments(pats, n, 1, OPTS)
        .unwrap()
        .into_iter()
        .map(|r| r[0].clone())
        .collect()
}

#[test]
fn generating_functions_match_enumeration_at_ten() {
    let pats: Vec<Permutation> = (1..=4).flat_map(avoiders_132).collect();
    let exact = means(&pats, 10);
    let c10 = Rational::from_integer(BigInt::from(catalan(10)));
    let mut eng = ExpectationEngine::new();
    for (sigma, want) in pats.iter().zip(&exact) {
        let f = eng.ed_expectation(sigma).unwrap();
        assert_eq!(&(gf_coefficient(&f, 10).unwrap() / &c10), want, "{sigma}");
        assert_eq!(
            gf_from_ed(&f, 10).unwrap().coeff(10),
            gf_coefficient(&f, 10).unwrap()
        );
    }
}

#[test]
fn length_four_coincidences() {
    let groups = [
        vec!["2134", "2314", "2341", "3124", "3412", "4123"],
        vec!["3214", "3421", "4231", "4312"],
        vec!["3241", "4213"],
    ];
    for n in 1..=9 {
        for g in &groups {
            let pats: Vec<Permutation> = g.iter().map(|s| p(s)).collect();
            let m = means(&pats, n);
            assert!(m.windows(2).all(|w| w[0] == w[1]), "{g:?} at n = {n}");
        }
    }
}

#[test]
fn monotone_patterns_bound_the_mean() {
    let pats = avoiders_132(4);
    for n in 1..=9 {
        let m = means(&pats, n);
        let lo = &m[pats.iter().position(|s| *s == p("1234")).unwrap()];
        let hi = &m[pats.iter().position(|s| *s == p("4321")).unwrap()];
        assert!(m.iter().all(|x| lo <= x && x <= hi), "n = {n}");
    }
}

#[test]
fn expectation_shape_up_to_five() {
    let mut eng = ExpectationEngine::new();
    for k in 1..=5 {
        for sigma in avoiders_132(k) {
            let f = eng.ed_expectation(&sigma).unwrap();
            let lambda = Pattern::new(sigma.clone()).unwrap().lambda() as i32;
            assert!(f.max_exp().unwrap() < 0, "{sigma}");
            assert_eq!(f.inverse_degree(), Some(lambda - 1), "{sigma}");
        }
    }
}

#[test]
fn bijection_is_onto_catalan_many_trees() {
    for n in 0..=8 {
        let av = avoiders_132(n);
        assert_eq!(Natural::from(av.len()), catalan(n));
        let mut shapes: Vec<String> = av
            .iter()
            .map(|pi| perm_to_tree(pi).unwrap().to_parens())
            .collect();
        shapes.sort();
        shapes.dedup();
        assert_eq!(shapes.len(), av.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_trees_round_trip_and_sum_to_binomials(n in 1usize..40, seed in any::<u64>()) {
        let t = sample_tree_seeded(n, seed);
        let pi = tree_to_perm(&t);
        prop_assert!(!pi.contains_132());
        prop_assert_eq!(&perm_to_tree(&pi).unwrap(), &t);
        for k in 1..=4.min(n) {
            // patterns containing 132 never occur
            let av = avoiders_132(k);
            let counts = count_occurrences_tree(&t, &av).unwrap();
            let total: Natural = av.iter().map(|s| counts[s].clone()).sum();
            prop_assert!(all_permutations(k).iter().filter(|s| s.contains_132()).all(|s| pi.avoids(s)));
            let binom = (0..k).fold(Natural::from(1u8), |acc, i| acc * Natural::from(n - i) / Natural::from(i + 1));
            prop_assert_eq!(total, binom);
        }
    }
}
