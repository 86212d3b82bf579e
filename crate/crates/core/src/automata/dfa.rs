//! Complete DFAs with canonical minimization and Boolean operations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Alphabet, Regex};
use crate::{Error, Result};

/// A complete deterministic automaton. States are `0..states`, the
/// transition function is total. Minimized automata are canonically
/// numbered (breadth-first from the initial state, letters in alphabet
/// order), so two minimal automata recognize the same language iff they
/// are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    states: usize,
    delta: Vec<Vec<usize>>,
    initial: usize,
    accepting: BTreeSet<usize>,
}

impl Dfa {
    /// Build from an explicit table, validating shape and ranges.
    pub fn new(
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        initial: usize,
        accepting: BTreeSet<usize>,
    ) -> Result<Self> {
        let states = delta.len();
        if states == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidAutomaton(format!(
                    "state {q} has {} transitions, alphabet has {} letters",
                    row.len(),
                    alphabet.len()
                )));
            }
            for (&target, letter) in row.iter().zip(alphabet.letters()) {
                if target >= states {
                    return Err(Error::InvalidAutomaton(format!(
                        "transition {q} --{letter}--> {target} is out of range"
                    )));
                }
            }
        }
        if initial >= states {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} is out of range"
            )));
        }
        if let Some(&q) = accepting.iter().find(|&&q| q >= states) {
            return Err(Error::InvalidAutomaton(format!(
                "accepting state {q} is out of range"
            )));
        }
        Ok(Dfa {
            alphabet,
            states,
            delta,
            initial,
            accepting,
        })
    }

    /// Minimal DFA of a regex, via Thompson construction, subset
    /// construction and minimization.
    pub fn from_regex(regex: &Regex, alphabet: &Alphabet) -> Dfa {
        Nfa::thompson(regex, alphabet).determinize().minimized()
    }

    /// Parse a pattern and build its minimal DFA.
    pub fn from_pattern(pattern: &str, alphabet: &Alphabet) -> Result<Dfa> {
        let regex = super::parse_regex(pattern, alphabet)?;
        Ok(Dfa::from_regex(&regex, alphabet))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn delta(&self, state: usize, letter: usize) -> usize {
        self.delta[state][letter]
    }

    /// Run the automaton. Panics if the word uses a letter outside the
    /// declared alphabet (words and automata must share their alphabet).
    pub fn accepts(&self, word: &str) -> bool {
        let mut q = self.initial;
        for c in word.chars() {
            let a = self
                .alphabet
                .index_of(c)
                .unwrap_or_else(|| panic!("letter '{c}' is not in the alphabet"));
            q = self.delta[q][a];
        }
        self.accepting.contains(&q)
    }

    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.states];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            if self.accepting.contains(&q) {
                return false;
            }
            for &next in &self.delta[q] {
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        true
    }

    pub fn complement(&self) -> Dfa {
        let accepting = (0..self.states)
            .filter(|q| !self.accepting.contains(q))
            .collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            states: self.states,
            delta: self.delta.clone(),
            initial: self.initial,
            accepting,
        }
        .minimized()
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x && y)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x || y)
    }

    /// Language equality: minimize both and compare canonical forms.
    pub fn equal(&self, other: &Dfa) -> Result<bool> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(self.minimized() == other.minimized())
    }

    /// Shortest accepted word, if any (breadth-first, letters in order).
    pub fn shortest_word(&self) -> Option<String> {
        let mut seen = vec![false; self.states];
        let mut queue = VecDeque::from([(self.initial, String::new())]);
        seen[self.initial] = true;
        while let Some((q, word)) = queue.pop_front() {
            if self.accepting.contains(&q) {
                return Some(word);
            }
            for (a, &next) in self.delta[q].iter().enumerate() {
                if !seen[next] {
                    seen[next] = true;
                    let mut w = word.clone();
                    w.push(self.alphabet.letter(a));
                    queue.push_back((next, w));
                }
            }
        }
        None
    }

    fn product(&self, other: &Dfa, keep: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let start = (self.initial, other.initial);
        index.insert(start, 0);
        order.push(start);
        let mut next = 0;
        while next < order.len() {
            let (p, q) = order[next];
            let mut row = Vec::with_capacity(self.alphabet.len());
            for a in 0..self.alphabet.len() {
                let target = (self.delta[p][a], other.delta[q][a]);
                let id = *index.entry(target).or_insert_with(|| {
                    order.push(target);
                    order.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
            next += 1;
        }
        let accepting = order
            .iter()
            .enumerate()
            .filter(|(_, &(p, q))| keep(self.accepting.contains(&p), other.accepting.contains(&q)))
            .map(|(i, _)| i)
            .collect();
        Ok(Dfa {
            alphabet: self.alphabet.clone(),
            states: order.len(),
            delta,
            initial: 0,
            accepting,
        }
        .minimized())
    }

    /// Minimize: trim unreachable states, merge language-equivalent ones,
    /// renumber canonically.
    pub fn minimized(&self) -> Dfa {
        // Reachable states.
        let mut reach = Vec::new();
        let mut seen = vec![false; self.states];
        seen[self.initial] = true;
        reach.push(self.initial);
        let mut i = 0;
        while i < reach.len() {
            let q = reach[i];
            for &next in &self.delta[q] {
                if !seen[next] {
                    seen[next] = true;
                    reach.push(next);
                }
            }
            i += 1;
        }

        // Moore partition refinement over reachable states.
        let mut class = vec![usize::MAX; self.states];
        for &q in &reach {
            class[q] = usize::from(self.accepting.contains(&q));
        }
        let mut count = 2.min(reach.len());
        loop {
            let mut sig_to_class: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let mut next_class = vec![usize::MAX; self.states];
            for &q in &reach {
                let mut sig = Vec::with_capacity(self.alphabet.len() + 1);
                sig.push(class[q]);
                for &t in &self.delta[q] {
                    sig.push(class[t]);
                }
                let fresh = sig_to_class.len();
                next_class[q] = *sig_to_class.entry(sig).or_insert(fresh);
            }
            let new_count = sig_to_class.len();
            class = next_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // Quotient automaton.
        let mut rep = vec![usize::MAX; count];
        for &q in &reach {
            if rep[class[q]] == usize::MAX {
                rep[class[q]] = q;
            }
        }
        let quotient_delta: Vec<Vec<usize>> = (0..count)
            .map(|c| self.delta[rep[c]].iter().map(|&t| class[t]).collect())
            .collect();

        // Canonical numbering: breadth-first from the initial class.
        let mut number = vec![usize::MAX; count];
        let mut order = Vec::with_capacity(count);
        number[class[self.initial]] = 0;
        order.push(class[self.initial]);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for &t in &quotient_delta[c] {
                if number[t] == usize::MAX {
                    number[t] = order.len();
                    order.push(t);
                }
            }
            i += 1;
        }
        let delta: Vec<Vec<usize>> = order
            .iter()
            .map(|&c| quotient_delta[c].iter().map(|&t| number[t]).collect())
            .collect();
        let accepting: BTreeSet<usize> = reach
            .iter()
            .filter(|q| self.accepting.contains(q))
            .map(|&q| number[class[q]])
            .collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            states: order.len(),
            delta,
            initial: 0,
            accepting,
        }
    }

    /// Minimal automaton of the upward closure of the language under the
    /// scattered subword order: reading a letter may also be ignored, which
    /// amounts to a self-loop on every letter at every state of an NFA copy.
    pub(crate) fn subword_closure(&self) -> Dfa {
        let mut nfa = Nfa::new(self.alphabet.clone(), self.states);
        nfa.initial = self.initial;
        for q in 0..self.states {
            for a in 0..self.alphabet.len() {
                nfa.add_edge(q, Some(a), self.delta[q][a]);
                nfa.add_edge(q, Some(a), q);
            }
        }
        nfa.accepting = self.accepting.iter().copied().collect();
        nfa.determinize().minimized()
    }
}

/// Nondeterministic automaton with epsilon moves; construction-internal.
struct Nfa {
    alphabet: Alphabet,
    /// edges[q] = list of (label, target); `None` labels are epsilon moves.
    edges: Vec<Vec<(Option<usize>, usize)>>,
    initial: usize,
    accepting: BTreeSet<usize>,
}

impl Nfa {
    fn new(alphabet: Alphabet, states: usize) -> Nfa {
        Nfa {
            alphabet,
            edges: vec![Vec::new(); states],
            initial: 0,
            accepting: BTreeSet::new(),
        }
    }

    fn fresh(&mut self) -> usize {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    fn add_edge(&mut self, from: usize, label: Option<usize>, to: usize) {
        self.edges[from].push((label, to));
    }

    fn thompson(regex: &Regex, alphabet: &Alphabet) -> Nfa {
        let mut nfa = Nfa::new(alphabet.clone(), 0);
        let (start, accept) = nfa.fragment(regex);
        nfa.initial = start;
        nfa.accepting.insert(accept);
        nfa
    }

    fn fragment(&mut self, regex: &Regex) -> (usize, usize) {
        match regex {
            Regex::Empty => (self.fresh(), self.fresh()),
            Regex::Epsilon => {
                let (s, f) = (self.fresh(), self.fresh());
                self.add_edge(s, None, f);
                (s, f)
            }
            Regex::Literal(c) => {
                let a = self
                    .alphabet
                    .index_of(*c)
                    .expect("literal letter is in the alphabet");
                let (s, f) = (self.fresh(), self.fresh());
                self.add_edge(s, Some(a), f);
                (s, f)
            }
            Regex::Union(l, r) => {
                let (ls, lf) = self.fragment(l);
                let (rs, rf) = self.fragment(r);
                let (s, f) = (self.fresh(), self.fresh());
                self.add_edge(s, None, ls);
                self.add_edge(s, None, rs);
                self.add_edge(lf, None, f);
                self.add_edge(rf, None, f);
                (s, f)
            }
            Regex::Concat(l, r) => {
                let (ls, lf) = self.fragment(l);
                let (rs, rf) = self.fragment(r);
                self.add_edge(lf, None, rs);
                (ls, rf)
            }
            Regex::Star(inner) => {
                let (is, iff) = self.fragment(inner);
                let (s, f) = (self.fresh(), self.fresh());
                self.add_edge(s, None, is);
                self.add_edge(s, None, f);
                self.add_edge(iff, None, is);
                self.add_edge(iff, None, f);
                (s, f)
            }
        }
    }

    fn eps_closure(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut closure = set.clone();
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &(label, to) in &self.edges[q] {
                if label.is_none() && closure.insert(to) {
                    stack.push(to);
                }
            }
        }
        closure
    }

    /// Subset construction; the empty subset acts as the completion sink.
    fn determinize(&self) -> Dfa {
        let letters = self.alphabet.len();
        let start = self.eps_closure(&BTreeSet::from([self.initial]));
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut order: Vec<BTreeSet<usize>> = Vec::new();
        index.insert(start.clone(), 0);
        order.push(start);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let current = order[i].clone();
            let mut row = Vec::with_capacity(letters);
            for a in 0..letters {
                let mut next = BTreeSet::new();
                for &q in &current {
                    for &(label, to) in &self.edges[q] {
                        if label == Some(a) {
                            next.insert(to);
                        }
                    }
                }
                let next = self.eps_closure(&next);
                let id = *index.entry(next.clone()).or_insert_with(|| {
                    order.push(next);
                    order.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let accepting = order
            .iter()
            .enumerate()
            .filter(|(_, set)| set.iter().any(|q| self.accepting.contains(q)))
            .map(|(i, _)| i)
            .collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            states: order.len(),
            delta,
            initial: 0,
            accepting,
        }
    }
}
