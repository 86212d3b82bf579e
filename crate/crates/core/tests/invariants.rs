//! Cross-module properties: randomized and property-based checks that the
//! unit suites only cover for fixed instances.

mod common;

use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use strata_core::algebra::{language_image, transition_monoid};
use strata_core::automata::{Dfa, Regex};
use strata_core::basis::{reach_pairs, Basis, BasisKind, CompatibleMorphism};
use strata_core::bpol::bpol_imprint;
use strata_core::decide::{separation, Answer, Level};
use strata_core::oracles::{is_j_trivial, k_subword_separable, JStructure};
use strata_core::pol::{pol_saturate, WorkOrder};
use strata_core::rating::RatingMap;

use common::{ab, build_corpus, random_word, relaxed_budget, words_up_to};

fn regex_strategy(depth: u32) -> impl Strategy<Value = Regex> {
    let leaf = prop_oneof![
        4 => prop_oneof![Just('a'), Just('b')].prop_map(Regex::Literal),
        1 => Just(Regex::Epsilon),
        1 => Just(Regex::Empty),
    ];
    leaf.prop_recursive(depth, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Regex::union(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Regex::concat(a, b)),
            inner.prop_map(Regex::star),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_acceptance_agrees(r1 in regex_strategy(3), r2 in regex_strategy(3)) {
        let alphabet = ab();
        let d1 = Dfa::from_regex(&r1, &alphabet);
        let d2 = Dfa::from_regex(&r2, &alphabet);
        let union = d1.union(&d2).unwrap();
        for word in words_up_to(&alphabet, 6) {
            prop_assert_eq!(
                union.accepts(&word),
                d1.accepts(&word) || d2.accepts(&word),
                "word {:?}", word
            );
        }
    }

    #[test]
    fn minimization_is_idempotent_up_to_isomorphism(r in regex_strategy(3)) {
        let d = Dfa::from_regex(&r, &ab());
        prop_assert_eq!(&d, &d.minimized());
    }

    #[test]
    fn complement_is_involutive(r in regex_strategy(3)) {
        let d = Dfa::from_regex(&r, &ab());
        prop_assert!(d.equal(&d.complement().complement()).unwrap());
    }
}

#[test]
fn transition_monoid_recognizes_corpus_languages() {
    let corpus = build_corpus(7, 25, 30);
    let words = words_up_to(&ab(), 8);
    for lang in &corpus {
        for word in &words {
            assert_eq!(
                lang.dfa.accepts(word),
                lang.recognized.contains(word),
                "pattern {}, word {word:?}",
                lang.pattern
            );
        }
    }
}

#[test]
fn idempotent_power_is_an_idempotent_power() {
    let corpus = build_corpus(11, 25, 30);
    for lang in &corpus {
        let monoid = lang.recognized.morphism.target();
        for x in 0..monoid.size() {
            let h = monoid.idempotent_power(x);
            assert_eq!(monoid.mul(h, h), h);
            let mut power = x;
            let mut is_power = false;
            for _ in 0..=2 * monoid.size() {
                if power == h {
                    is_power = true;
                    break;
                }
                power = monoid.mul(power, x);
            }
            assert!(is_power, "pattern {}, element {x}", lang.pattern);
        }
    }
}

#[test]
fn language_image_distributes_over_union_randomly() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let alphabet = ab();
    let budget = relaxed_budget();
    for _ in 0..20 {
        let r1 = common::random_regex(&mut rng, &alphabet, 8);
        let r2 = common::random_regex(&mut rng, &alphabet, 8);
        let d1 = Dfa::from_regex(&r1, &alphabet);
        let d2 = Dfa::from_regex(&r2, &alphabet);
        let eta = match transition_monoid(&d1.union(&d2).unwrap(), &budget) {
            Ok(rec) => rec.morphism,
            Err(_) => continue,
        };
        let mut expected = language_image(&eta, &d1).unwrap();
        expected.extend(language_image(&eta, &d2).unwrap());
        assert_eq!(
            language_image(&eta, &d1.union(&d2).unwrap()).unwrap(),
            expected
        );
    }
}

#[test]
fn reach_pairs_matches_word_sampling_and_has_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let corpus = build_corpus(41, 10, 20);
    let budget = relaxed_budget();
    for kind in [BasisKind::St0, BasisKind::Dd0, BasisKind::At] {
        let basis = Basis::builtin(kind, &ab(), &budget).unwrap();
        for lang in corpus.iter().take(4) {
            let eta = &lang.recognized.morphism;
            let reach = reach_pairs(&basis, eta, &budget).unwrap();
            // Sampled words land in the reachable pair set.
            for _ in 0..200 {
                let w = random_word(&mut rng, &ab(), 10);
                assert!(reach.contains(basis.class_of_word(&w), eta.eval(&w)));
            }
            // Every class has a nonempty image.
            for class in 0..basis.class_count() {
                assert!(!reach.class_image(class).is_empty());
            }
            // Breadth-first enumeration finds a witness for every pair.
            let mut witnessed: BTreeSet<(usize, usize)> = BTreeSet::new();
            for w in words_up_to(&ab(), 8) {
                witnessed.insert((basis.class_of_word(&w), eta.eval(&w)));
            }
            assert_eq!(
                &witnessed,
                reach.pairs(),
                "basis {kind:?}, {}",
                lang.pattern
            );
        }
    }
}

#[test]
fn compatible_morphism_projections_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let corpus = build_corpus(61, 6, 20);
    let budget = relaxed_budget();
    for kind in [BasisKind::Dd0, BasisKind::At] {
        let basis = Basis::builtin(kind, &ab(), &budget).unwrap();
        for lang in &corpus {
            let eta = &lang.recognized.morphism;
            let alpha = CompatibleMorphism::new(eta, &basis, &budget).unwrap();
            for _ in 0..50 {
                let w = random_word(&mut rng, &ab(), 10);
                let s = alpha.morphism().eval(&w);
                assert_eq!(alpha.eta_of(s), eta.eval(&w));
                assert_eq!(alpha.class_of(s), basis.class_of_word(&w));
            }
        }
    }
}

#[test]
fn pol_trivial_pairs_hold_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let corpus = build_corpus(83, 8, 16);
    let budget = relaxed_budget();
    for lang in &corpus {
        let eta = lang.recognized.morphism.clone();
        let basis = Basis::builtin(BasisKind::St0, &ab(), &budget).unwrap();
        let alpha = CompatibleMorphism::new(&eta, &basis, &budget).unwrap();
        let rho = RatingMap::new(eta, &budget).unwrap();
        let run = pol_saturate(&alpha, &rho, &budget, WorkOrder::Fifo).unwrap();
        for _ in 0..200 {
            let w = random_word(&mut rng, &ab(), 10);
            assert!(run
                .imprint
                .member(alpha.morphism().eval(&w), rho.of_word(&w)));
        }
    }
}

#[test]
fn j_triviality_agrees_with_the_order_based_test() {
    // Second opinion: J-triviality == antisymmetry of the <=_J preorder.
    let corpus = build_corpus(97, 40, 30);
    for lang in &corpus {
        let monoid = lang.recognized.morphism.target();
        if monoid.size() > 6 {
            continue;
        }
        let j = JStructure::compute(monoid);
        let mut antisymmetric = true;
        for x in 0..monoid.size() {
            for y in 0..monoid.size() {
                if x != y && j.ideal(x).contains(&y) && j.ideal(y).contains(&x) {
                    antisymmetric = false;
                }
            }
        }
        assert_eq!(
            is_j_trivial(monoid),
            antisymmetric,
            "pattern {}",
            lang.pattern
        );
    }
}

#[test]
fn k_subword_separability_implies_st1_separability() {
    let corpus = build_corpus(101, 18, 12);
    let budget = relaxed_budget();
    let mut checked = 0;
    for i in 0..corpus.len() {
        for j in (i + 1)..corpus.len() {
            if checked >= 25 {
                return;
            }
            let (l1, l2) = (&corpus[i].dfa, &corpus[j].dfa);
            let separable_by_profiles =
                (1..=3).any(|k| k_subword_separable(l1, l2, k, &budget).unwrap_or(false));
            if !separable_by_profiles {
                continue;
            }
            checked += 1;
            let verdict = separation(l1, l2, Level::St1, &budget).unwrap();
            assert_eq!(
                verdict.answer,
                Answer::Separable,
                "{} vs {}",
                corpus[i].pattern,
                corpus[j].pattern
            );
        }
    }
}

#[test]
fn st_half_separation_agrees_with_the_closure_oracle() {
    // Independent check of the pointed half-level engine on asymmetric
    // pairs: separability by a shuffle ideal is upward-closure avoidance.
    let corpus = build_corpus(131, 20, 16);
    let budget = relaxed_budget();
    let mut checked = 0;
    for i in 0..corpus.len() {
        for j in 0..corpus.len() {
            if i == j || checked >= 60 {
                continue;
            }
            let (l1, l2) = (&corpus[i].dfa, &corpus[j].dfa);
            match strata_core::decide::JointRecognizer::new(&[l1, l2], &budget) {
                Ok(joint) if joint.rho.base_size() <= 24 => {}
                _ => continue,
            }
            checked += 1;
            let engine = separation(l1, l2, Level::StHalf, &budget).unwrap();
            let oracle = strata_core::oracles::shuffle_ideal_separable(l1, l2).unwrap();
            assert_eq!(
                engine.answer == Answer::Separable,
                oracle,
                "{} vs {}",
                corpus[i].pattern,
                corpus[j].pattern
            );
        }
    }
    assert!(checked >= 40);
}

#[test]
fn bpol_universal_imprint_refines_pol() {
    let corpus = build_corpus(113, 12, 16);
    let budget = relaxed_budget();
    for kind in [BasisKind::St0, BasisKind::Dd0] {
        let basis = Basis::builtin(kind, &ab(), &budget).unwrap();
        for lang in corpus.iter().take(6) {
            let eta = lang.recognized.morphism.clone();
            let rho = RatingMap::new(eta.clone(), &budget).unwrap();
            let alpha = CompatibleMorphism::new(&eta, &basis, &budget).unwrap();
            let pol = pol_saturate(&alpha, &rho, &budget, WorkOrder::Fifo).unwrap();
            let bpol = bpol_imprint(&basis, &rho, &budget, WorkOrder::Fifo).unwrap();
            assert!(
                bpol.imprint.universal().subset_of(&pol.imprint.universal()),
                "basis {kind:?}, pattern {}",
                lang.pattern
            );
        }
    }
}
