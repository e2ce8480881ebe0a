use proptest::prelude::*;

use avoid132::algebra::int;
use avoid132::moments::{asymptotic_mixed, ed_monomial, tmom3_table, Family, MomentEngine};
use avoid132::perm::avoiders_132;
use avoid132::{Monomial, Permutation, SymbolicConstant};

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn small_patterns() -> Vec<Permutation> {
    (1..=3).flat_map(avoiders_132).collect()
}

/// Monomials of weight at most `max_weight` in patterns of length <= 3.
fn arb_monomial(max_weight: usize) -> impl Strategy<Value = Monomial> {
    let pats = small_patterns();
    proptest::collection::vec((0..pats.len(), 1u32..=2), 0..3).prop_filter_map(
        "weight",
        move |picks| {
            let m = picks.iter().fold(Monomial::one(), |m, &(i, k)| {
                m.product(&Monomial::power(pats[i].clone(), k))
            });
            (m.weight() <= max_weight).then_some(m)
        },
    )
}

fn inverse(m: &Monomial) -> Monomial {
    Monomial::from_factors(m.factors().map(|(s, k)| (s.inverse(), k)))
}

#[test]
fn gamma_table_is_shared_by_231_and_312() {
    let table = tmom3_table(Family::Gamma, 3, 3).unwrap();
    let mut eng = MomentEngine::new();
    for k in 0..=3u32 {
        for l in 0..=3u32 {
            if k + l == 0 || 5 * k + 3 * l > 15 {
                continue;
            }
            let want = table.moment(k as usize, l as usize).unwrap();
            for s in ["231", "312"] {
                let m = Monomial::power(p(s), k).product(&Monomial::power(p("12"), l));
                assert_eq!(eng.asymptotic_mixed(&m).unwrap(), want, "{s}^{k} 12^{l}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `Lambda_12 = 2 Lambda_213 + Lambda_231 + Lambda_312` survives
    /// multiplication by any other monomial.
    #[test]
    fn area_decomposition_against_any_monomial(m in arb_monomial(6)) {
        let term = |s: &str| asymptotic_mixed(&Monomial::single(p(s)).product(&m)).unwrap().value();
        let rhs = term("213").scale(&int(2)).checked_add(&term("231")).unwrap().checked_add(&term("312")).unwrap();
        prop_assert_eq!(term("12"), rhs);
    }

    #[test]
    fn mixed_constants_are_positive(m in arb_monomial(10)) {
        prop_assume!(!m.is_one());
        let c = asymptotic_mixed(&m).unwrap();
        prop_assert!(c.coeff > num_traits::Zero::zero());
        prop_assert_eq!(c.n_exponent, avoid132::algebra::rat(m.weight() as i64, 2));
    }

    /// Inverting the permutation maps 132-avoiders to 132-avoiders and
    /// occurrences of `s` to occurrences of `s^{-1}`.
    #[test]
    fn moments_are_invariant_under_inversion(m in arb_monomial(9)) {
        prop_assume!(!m.is_one());
        prop_assert_eq!(ed_monomial(&m).unwrap(), ed_monomial(&inverse(&m)).unwrap());
    }
}

#[test]
fn constant_patterns_have_degenerate_powers() {
    // X_{k..1} / n^k -> 1/k!, so every power is the power of the constant
    let mut eng = MomentEngine::new();
    for k in 1..=3usize {
        let one = eng
            .asymptotic_mixed(&Monomial::single(Permutation::decreasing(k)))
            .unwrap()
            .value();
        for j in 2..=3u32 {
            let got = eng
                .asymptotic_mixed(&Monomial::power(Permutation::decreasing(k), j))
                .unwrap()
                .value();
            let want = SymbolicConstant::rational(num_traits::pow(one.coeff.clone(), j as usize));
            assert_eq!(got, want, "k = {k}, j = {j}");
        }
    }
}
