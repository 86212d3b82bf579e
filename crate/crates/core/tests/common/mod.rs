//! Shared corpus generation for the integration and acceptance suites.
//! Everything is seeded; two runs see the same corpus.
#![allow(dead_code)] // each test target uses its own subset of helpers

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use strata_core::algebra::{transition_monoid, RecognizedLanguage};
use strata_core::automata::{Alphabet, Dfa, Regex};
use strata_core::{Budget, Limits};

pub fn relaxed_budget() -> Budget {
    Budget::new(&Limits::relaxed())
}

pub fn ab() -> Alphabet {
    Alphabet::new("ab".chars()).unwrap()
}

/// Random regex with at most `max_size` AST nodes.
pub fn random_regex(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_size: usize) -> Regex {
    if max_size >= 3 && rng.random_bool(0.55) {
        let split = rng.random_range(1..=max_size - 2);
        let left = random_regex(rng, alphabet, split);
        let right = random_regex(rng, alphabet, max_size - 1 - split);
        return if rng.random_bool(0.45) {
            Regex::union(left, right)
        } else {
            Regex::concat(left, right)
        };
    }
    if max_size >= 2 && rng.random_bool(0.3) {
        return Regex::star(random_regex(rng, alphabet, max_size - 1));
    }
    match rng.random_range(0..8) {
        0 => Regex::Epsilon,
        1 => Regex::Empty,
        _ => Regex::Literal(alphabet.letters()[rng.random_range(0..alphabet.len())]),
    }
}

pub struct CorpusLanguage {
    pub pattern: String,
    pub dfa: Dfa,
    pub recognized: RecognizedLanguage,
}

impl CorpusLanguage {
    pub fn monoid_size(&self) -> usize {
        self.recognized.morphism.target().size()
    }
}

/// Deterministic corpus over {a, b}: distinct regular languages from random
/// regexes (AST size <= 8) whose transition monoid has at most
/// `max_monoid` elements.
pub fn build_corpus(seed: u64, count: usize, max_monoid: usize) -> Vec<CorpusLanguage> {
    let alphabet = ab();
    let budget = relaxed_budget();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus: Vec<CorpusLanguage> = Vec::new();
    let mut seen: Vec<Dfa> = Vec::new();
    let mut attempts = 0;
    while corpus.len() < count && attempts < 100_000 {
        attempts += 1;
        let regex = random_regex(&mut rng, &alphabet, 8);
        let dfa = Dfa::from_regex(&regex, &alphabet);
        if seen.contains(&dfa) {
            continue;
        }
        let recognized = match transition_monoid(&dfa, &budget) {
            Ok(rec) => rec,
            Err(_) => continue,
        };
        if recognized.morphism.target().size() > max_monoid {
            continue;
        }
        seen.push(dfa.clone());
        corpus.push(CorpusLanguage {
            pattern: regex.to_string(),
            dfa,
            recognized,
        });
    }
    assert!(
        corpus.len() >= count,
        "corpus generation exhausted after {attempts} attempts"
    );
    corpus
}

/// Random word of length <= max_len over the alphabet.
pub fn random_word(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| alphabet.letters()[rng.random_range(0..alphabet.len())])
        .collect()
}

/// All words of length <= max_len, shortest first.
pub fn words_up_to(alphabet: &Alphabet, max_len: usize) -> Vec<String> {
    let mut all = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &c in alphabet.letters() {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}
