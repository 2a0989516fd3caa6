use colorfact::asymptotics::ordered_colored_sieve;
use colorfact::counting::sequence;
use colorfact::enumeration::{enum_colored, Flags, DEFAULT_GUARD};
use colorfact::{
    colored_atmost, colored_by_parts, eval_by_signature, evaluate, factorize, generalized_moebius,
    squarefree_closed_form, ArithSeq, CountFamily, FactoredInteger, FamilyKind, Method, Moebius,
    Unordered,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn fam(kind: FamilyKind, l: i64, k: Option<u32>) -> CountFamily {
    CountFamily::new(kind, l, k).unwrap()
}

#[test]
fn recursion_is_exact_up_to_ten_thousand() {
    for n in 1..=10_000u64 {
        for l in 1..=3 {
            for family in [Unordered::Plain, Unordered::Distinct] {
                // The audited recursion errors on any non-zero remainder.
                let v = colored_atmost(n, l, family, Method::Recursion).unwrap();
                assert!(v >= BigInt::one(), "{family:?} l={l} n={n}");
            }
        }
    }
}

#[test]
fn part_counts_marginalize() {
    for n in 1..=300u64 {
        let omega = factorize(n).unwrap().big_omega();
        for l in 1..=3 {
            for family in [Unordered::Plain, Unordered::Distinct] {
                let total = colored_atmost(n, l, family, Method::Dirichlet).unwrap();
                let parts: BigInt = (0..=omega)
                    .map(|k| colored_by_parts(n, k, l, family, Method::Dirichlet).unwrap())
                    .sum();
                assert_eq!(total, parts, "{family:?} l={l} n={n}");
                let beyond = colored_by_parts(n, omega + 1, l, family, Method::Dirichlet).unwrap();
                assert!(beyond.is_zero());
            }
        }
    }
}

#[test]
fn moebius_methods_agree_and_invert() {
    for n in 1..=500u64 {
        for which in [Moebius::F, Moebius::G] {
            let vals: Vec<BigInt> = [Method::Dirichlet, Method::Recursion, Method::Closed]
                .into_iter()
                .map(|m| generalized_moebius(n, which, m).unwrap())
                .collect();
            assert!(
                vals.windows(2).all(|w| w[0] == w[1]),
                "{which:?} at {n}: {vals:?}"
            );
        }
    }
    let mu_f = sequence(&fam(FamilyKind::MuF, -1, None), None, 500).unwrap();
    let mu_g = sequence(&fam(FamilyKind::MuG, -1, None), None, 500).unwrap();
    let g = sequence(&fam(FamilyKind::B, 1, None), None, 500).unwrap();
    let f = sequence(&fam(FamilyKind::A, 1, None), None, 500).unwrap();
    assert!(mu_f.convolve(&g).unwrap().is_identity());
    assert!(mu_g.convolve(&f).unwrap().is_identity());
}

#[test]
fn squarefree_values_match_closed_form() {
    for n in 1..=2310u64 {
        let f = factorize(n).unwrap();
        if !f.is_squarefree() {
            continue;
        }
        for l in 1..=3 {
            let want = squarefree_closed_form(f.omega() as u64, l as u64);
            let a = colored_atmost(n, l, Unordered::Plain, Method::Dirichlet).unwrap();
            let b = colored_atmost(n, l, Unordered::Distinct, Method::Recursion).unwrap();
            assert_eq!(a, want, "A_{l}({n})");
            assert_eq!(b, want, "B_{l}({n})");
        }
    }
}

#[test]
fn signature_cache_matches_direct_evaluation() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let n = rng.gen_range(1..=5000u64);
        let l = rng.gen_range(1..=3i64);
        let kind = FamilyKind::ALL[rng.gen_range(0..FamilyKind::ALL.len())];
        let k = kind.needs_parts().then(|| rng.gen_range(0..6));
        let family = fam(kind, l, k);
        let f = factorize(n).unwrap();
        assert_eq!(
            eval_by_signature(&family, None, &f).unwrap(),
            evaluate(&family, &f, None).unwrap(),
            "{family} at {n}"
        );
    }
}

#[test]
fn sieve_matches_formula() {
    for l in 1..=3 {
        let sieve = ordered_colored_sieve(l, 2000).unwrap();
        let direct = sequence(&fam(FamilyKind::OrderedA, l as i64, None), None, 2000).unwrap();
        assert_eq!(sieve.as_slice(), direct.values(), "l = {l}");
    }
}

#[test]
fn enumeration_cardinality_matches_counts() {
    for n in 1..=120u64 {
        let f = factorize(n).unwrap();
        for l in 1..=2u32 {
            for bits in 0..8u8 {
                let flags = Flags {
                    ordered: bits & 1 != 0,
                    distinct: bits & 2 != 0,
                    exact: bits & 4 != 0,
                };
                let kind = match (flags.ordered, flags.distinct, flags.exact) {
                    (false, false, false) => FamilyKind::A,
                    (false, true, false) => FamilyKind::B,
                    (false, false, true) => FamilyKind::ExactA,
                    (false, true, true) => FamilyKind::ExactB,
                    (true, false, false) => FamilyKind::OrderedA,
                    (true, true, false) => FamilyKind::OrderedB,
                    (true, false, true) => FamilyKind::OrderedExactA,
                    (true, true, true) => FamilyKind::OrderedExactB,
                };
                let count = evaluate(&fam(kind, l as i64, None), &f, None).unwrap();
                let listed = if n == 1 && flags.exact {
                    0
                } else {
                    enum_colored(n, l, flags, DEFAULT_GUARD).unwrap().len()
                };
                assert_eq!(count, BigInt::from(listed), "{kind} l={l} n={n}");
            }
        }
    }
}

fn relabel(exps: &[u32], primes: &[u64]) -> Option<FactoredInteger> {
    let factors = exps.iter().zip(primes).map(|(&e, &p)| (p, e)).collect();
    let f = FactoredInteger::from_factors(factors).ok()?;
    (f.value() <= 1_000_000).then_some(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn values_depend_only_on_signature(
        exps in prop::collection::vec(1u32..4, 1..4),
        kind_idx in 0usize..FamilyKind::ALL.len(),
        l in 1i64..4,
    ) {
        let kind = FamilyKind::ALL[kind_idx];
        let family = fam(kind, l, kind.needs_parts().then_some(2));
        let a = relabel(&exps, &[2, 3, 5]);
        let b = relabel(&exps, &[7, 11, 13]);
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert_eq!(evaluate(&family, &a, None).unwrap(), evaluate(&family, &b, None).unwrap());
        }
    }

    #[test]
    fn ordered_dominates_unordered(n in 2u64..3000, l in 1i64..4) {
        let f = factorize(n).unwrap();
        let get = |k| evaluate(&fam(k, l, None), &f, None).unwrap();
        prop_assert!(get(FamilyKind::B) <= get(FamilyKind::A));
        prop_assert!(get(FamilyKind::A) <= get(FamilyKind::OrderedA));
        prop_assert!(get(FamilyKind::OrderedB) <= get(FamilyKind::OrderedA));
        prop_assert!(get(FamilyKind::ExactA) <= get(FamilyKind::A));
    }

    #[test]
    fn colored_counts_grow_with_l(n in 2u64..3000, l in 1i64..5) {
        let a = colored_atmost(n, l, Unordered::Plain, Method::Dirichlet).unwrap();
        let b = colored_atmost(n, l + 1, Unordered::Plain, Method::Dirichlet).unwrap();
        prop_assert!(a < b);
    }

    #[test]
    fn dense_inverse_of_c_is_ordered_count(l in 1i64..4) {
        let c = ArithSeq::from_fn(200, |n| if n == 1 { BigInt::one() } else { BigInt::from(-l) }).unwrap();
        let at = sequence(&fam(FamilyKind::OrderedA, l, None), Some(Method::Recursion), 200).unwrap();
        prop_assert_eq!(c.inverse().unwrap(), at);
    }
}
