//! The rating layer: the finite idempotent semiring `R = 2^N`.
//!
//! `N` is the target of a recognizing morphism `η`; rating values are
//! subsets of `N` stored as 64-bit sets. Addition is union (so the
//! canonical order is set inclusion) and multiplication is the elementwise
//! product. The nice multiplicative rating map is `ρ(K) = η(K)`; it is
//! determined by the word images `ρ(w) = {η(w)}`.
//!
//! Downward-closed subsets of `R` are kept as antichains of maximal
//! elements: materializing downsets is the dominant memory cost, so it only
//! happens on demand.

use std::collections::BTreeSet;

use crate::algebra::{language_image, Morphism};
use crate::automata::Dfa;
use crate::{Budget, Result};

/// A subset of the rating base `N`, i.e. one element of `R = 2^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RatingValue(u64);

impl RatingValue {
    pub const EMPTY: RatingValue = RatingValue(0);

    pub fn singleton(element: usize) -> RatingValue {
        debug_assert!(element < 64);
        RatingValue(1 << element)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> RatingValue {
        elements.into_iter().fold(RatingValue::EMPTY, |acc, e| {
            acc.add(RatingValue::singleton(e))
        })
    }

    pub fn from_bits(bits: u64) -> RatingValue {
        RatingValue(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, element: usize) -> bool {
        self.0 & (1 << element) != 0
    }

    /// Addition of `R`: set union.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: RatingValue) -> RatingValue {
        RatingValue(self.0 | other.0)
    }

    pub fn intersection(self, other: RatingValue) -> RatingValue {
        RatingValue(self.0 & other.0)
    }

    pub fn meets(self, other: RatingValue) -> bool {
        self.0 & other.0 != 0
    }

    pub fn without(self, element: usize) -> RatingValue {
        RatingValue(self.0 & !(1 << element))
    }

    /// Elements of the set, ascending.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }
}

/// Canonical order of `R`: `r <= s` iff `r + s = s`, i.e. set inclusion.
pub fn leq(r: RatingValue, s: RatingValue) -> bool {
    r.0 | s.0 == s.0
}

/// The nice multiplicative rating map `ρ(K) = η(K)` for a morphism `η`.
#[derive(Debug, Clone)]
pub struct RatingMap {
    eta: Morphism,
}

impl RatingMap {
    pub fn new(eta: Morphism, budget: &Budget) -> Result<RatingMap> {
        budget.check_rating_base(eta.target().size())?;
        Ok(RatingMap { eta })
    }

    pub fn eta(&self) -> &Morphism {
        &self.eta
    }

    /// Size of the rating base `N` (the rating set is `2^N`).
    pub fn base_size(&self) -> usize {
        self.eta.target().size()
    }

    /// `0_R`, the empty set.
    pub fn zero(&self) -> RatingValue {
        RatingValue::EMPTY
    }

    /// `1_R = {1_N}` = `ρ(ε)`.
    pub fn one(&self) -> RatingValue {
        RatingValue::singleton(self.eta.target().identity())
    }

    /// The full set `N`, the top of the canonical order.
    pub fn top(&self) -> RatingValue {
        RatingValue(((1u128 << self.base_size()) - 1) as u64)
    }

    pub fn of_word(&self, word: &str) -> RatingValue {
        RatingValue::singleton(self.eta.eval(word))
    }

    pub fn of_letter(&self, letter: usize) -> RatingValue {
        RatingValue::singleton(self.eta.letter_image(letter))
    }

    /// `ρ(K)` for a regular language: the image `η(K)`.
    pub fn of_dfa(&self, dfa: &Dfa) -> Result<RatingValue> {
        Ok(RatingValue::from_elements(language_image(&self.eta, dfa)?))
    }

    /// Multiplication of `R`: the elementwise product.
    pub fn mul(&self, r: RatingValue, s: RatingValue) -> RatingValue {
        let monoid = self.eta.target();
        let mut out = RatingValue::EMPTY;
        for i in r.elements() {
            for j in s.elements() {
                out = out.add(RatingValue::singleton(monoid.mul(i, j)));
            }
        }
        out
    }

    pub fn is_mult_idempotent(&self, r: RatingValue) -> bool {
        self.mul(r, r) == r
    }

    /// `r^k` for the least `k >= 1` making it multiplicatively idempotent.
    pub fn mult_idempotent_power(&self, r: RatingValue) -> RatingValue {
        let mut power = r;
        let mut seen = BTreeSet::new();
        loop {
            if self.is_mult_idempotent(power) {
                return power;
            }
            if !seen.insert(power) {
                unreachable!("powers cycled without an idempotent");
            }
            power = self.mul(power, r);
        }
    }

    /// Labels (shortest witness words) of the elements of a value, sorted.
    pub fn value_labels(&self, r: RatingValue) -> Vec<String> {
        r.elements()
            .map(|e| self.eta.label(e).to_string())
            .collect()
    }
}

/// A downward-closed subset of `R`, stored as the antichain of its maximal
/// elements (sorted). Membership means membership in the downward closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Antichain {
    elems: Vec<RatingValue>,
}

impl Antichain {
    pub fn empty() -> Antichain {
        Antichain::default()
    }

    pub fn from_value(v: RatingValue) -> Antichain {
        Antichain { elems: vec![v] }
    }

    pub fn from_values<I: IntoIterator<Item = RatingValue>>(values: I) -> Antichain {
        let mut chain = Antichain::empty();
        for v in values {
            chain.insert(v);
        }
        chain
    }

    /// Maximal elements, sorted ascending by bit pattern.
    pub fn maximal(&self) -> &[RatingValue] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Membership in the represented downward-closed set.
    pub fn member(&self, v: RatingValue) -> bool {
        self.elems.iter().any(|&e| leq(v, e))
    }

    /// Insert a value; returns false if it was already a member.
    pub fn insert(&mut self, v: RatingValue) -> bool {
        if self.member(v) {
            return false;
        }
        self.elems.retain(|&e| !leq(e, v));
        let at = self.elems.partition_point(|&e| e < v);
        self.elems.insert(at, v);
        true
    }

    /// Union of downward-closed sets; returns true if this set grew.
    pub fn union_with(&mut self, other: &Antichain) -> bool {
        let mut changed = false;
        for &v in &other.elems {
            changed |= self.insert(v);
        }
        changed
    }

    /// `↓self ⊆ ↓other`.
    pub fn subset_of(&self, other: &Antichain) -> bool {
        self.elems.iter().all(|&v| other.member(v))
    }

    /// Product of downward-closed sets: `↓(A·B)` has the same downward
    /// closure as `↓A · ↓B`, so multiplying maxima pairwise suffices.
    pub fn mul(&self, other: &Antichain, rho: &RatingMap) -> Antichain {
        let mut out = Antichain::empty();
        for &x in &self.elems {
            for &y in &other.elems {
                out.insert(rho.mul(x, y));
            }
        }
        out
    }

    /// Intersection of downward-closed sets: pairwise meets of maxima.
    pub fn intersect(&self, other: &Antichain) -> Antichain {
        let mut out = Antichain::empty();
        for &x in &self.elems {
            for &y in &other.elems {
                out.insert(x.intersection(y));
            }
        }
        out
    }

    /// Explicit downward closure; exponential, test- and oracle-sized only.
    pub fn materialize(&self) -> BTreeSet<RatingValue> {
        let mut out = BTreeSet::new();
        for &v in &self.elems {
            // All subsets of v.
            let bits = v.bits();
            let mut sub = bits;
            loop {
                out.insert(RatingValue(sub));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & bits;
            }
        }
        out
    }
}

impl FromIterator<RatingValue> for Antichain {
    fn from_iter<I: IntoIterator<Item = RatingValue>>(iter: I) -> Antichain {
        Antichain::from_values(iter)
    }
}

/// Downward closure of a finite set of rating values.
pub fn downclose<I: IntoIterator<Item = RatingValue>>(values: I) -> Antichain {
    Antichain::from_values(values)
}

/// `ρ`-imprint of a cover: the downward closure of `{ρ(K) | K ∈ cover}`.
pub fn imprint(rho: &RatingMap, cover: &[Dfa]) -> Result<Antichain> {
    let mut out = Antichain::empty();
    for dfa in cover {
        out.insert(rho.of_dfa(dfa)?);
    }
    Ok(out)
}
