//! Regular expressions, DFAs and Boolean language operations.
//!
//! Alphabets are explicit and ordered: every hierarchy level is
//! alphabet-relative, so two languages are only comparable when declared over
//! the same alphabet. All automata are complete (a sink is added where
//! needed) because the transition monoid construction requires total
//! transformations. Words are strings with one character per letter.

mod dfa;
mod regex;

pub use dfa::Dfa;
pub use regex::{parse_regex, Regex};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An ordered, duplicate-free list of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = char>) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        for (i, a) in letters.iter().enumerate() {
            if letters[..i].contains(a) {
                return Err(Error::InvalidAutomaton(format!("duplicate letter '{a}'")));
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn letter(&self, index: usize) -> char {
        self.letters[index]
    }

    pub fn index_of(&self, letter: char) -> Option<usize> {
        self.letters.iter().position(|&c| c == letter)
    }

    /// Letter indices of a word, or the first foreign character.
    pub fn word_indices(&self, word: &str) -> std::result::Result<Vec<usize>, char> {
        word.chars().map(|c| self.index_of(c).ok_or(c)).collect()
    }
}

impl std::fmt::Display for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.letters.iter().collect::<String>())
    }
}
