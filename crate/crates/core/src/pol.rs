//! Least-fixpoint computation of the pointed `Pol(C)`-optimal imprint.
//!
//! The imprint is the least subset of `M × R` containing the trivial pairs
//! `(α(w), ρ(w))`, downward closed in the rating component, closed under
//! pairwise products, and closed under the rule: for idempotent `e` in `M`
//! and idempotent `f` in `R` with `(e, f)` in the set, `(e, f·ρ(⌈e⌉)·f)` is
//! in the set. Trivial pairs for all words are generated from the empty-word
//! and letter seeds because both `α` and `ρ` are multiplicative.
//!
//! The closure rule is applied at the multiplicative idempotent power of
//! every processed rating value. This reaches the same least fixpoint as
//! scanning every idempotent below the antichains: any idempotent `f` below
//! a member `g` satisfies `f = f^k ≤ g^k` for all `k`, so the rule output
//! for `f` is dominated by the output for the idempotent power of `g`,
//! which itself is a member by closure under products.

use std::collections::VecDeque;

use crate::basis::CompatibleMorphism;
use crate::rating::{Antichain, RatingMap, RatingValue};
use crate::{Budget, Result};

/// Processing order of the fixpoint worklists. Least fixpoints are
/// order-independent; the shuffled order exists so tests can assert that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkOrder {
    Fifo,
    Shuffled(u64),
}

pub(crate) struct Worklist<T> {
    items: VecDeque<T>,
    rng: Option<u64>,
}

impl<T> Worklist<T> {
    pub(crate) fn new(order: WorkOrder) -> Self {
        Worklist {
            items: VecDeque::new(),
            rng: match order {
                WorkOrder::Fifo => None,
                WorkOrder::Shuffled(seed) => Some(seed | 1),
            },
        }
    }

    pub(crate) fn push(&mut self, item: T) {
        self.items.push_back(item);
    }

    pub(crate) fn pop(&mut self) -> Option<T> {
        match &mut self.rng {
            None => self.items.pop_front(),
            Some(state) => {
                if self.items.is_empty() {
                    return None;
                }
                // xorshift64
                *state ^= *state << 13;
                *state ^= *state >> 7;
                *state ^= *state << 17;
                let i = (*state as usize) % self.items.len();
                self.items.swap(0, i);
                self.items.pop_front()
            }
        }
    }
}

/// The pointed imprint: per element of `M`, a downward-closed set of rating
/// values (antichain-compressed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedImprint {
    per_element: Vec<Antichain>,
}

impl PointedImprint {
    pub fn element_count(&self) -> usize {
        self.per_element.len()
    }

    /// The downward-closed value set attached to an element.
    pub fn values(&self, element: usize) -> &Antichain {
        &self.per_element[element]
    }

    pub fn member(&self, element: usize, r: RatingValue) -> bool {
        self.per_element[element].member(r)
    }

    /// The universal imprint: the union over all elements.
    pub fn universal(&self) -> Antichain {
        let mut out = Antichain::empty();
        for chain in &self.per_element {
            out.union_with(chain);
        }
        out
    }

    /// Total number of maximal pairs (diagnostics).
    pub fn pair_count(&self) -> usize {
        self.per_element.iter().map(Antichain::len).sum()
    }
}

/// Result of a saturation run, with diagnostics.
#[derive(Debug, Clone)]
pub struct PolRun {
    pub imprint: PointedImprint,
    /// Number of processed work items.
    pub work_items: usize,
}

/// Compute the least `Pol(C)`-saturated subset of `M × R` for a
/// `C`-compatible morphism `α` and the nice multiplicative rating map `ρ`.
pub fn pol_saturate(
    alpha: &CompatibleMorphism,
    rho: &RatingMap,
    budget: &Budget,
    order: WorkOrder,
) -> Result<PolRun> {
    let monoid = alpha.morphism().target().clone();
    let size = monoid.size();
    budget.check_rating_base(rho.base_size())?;

    // ρ(⌈e⌉) per class, loop-invariant.
    let class_value: Vec<RatingValue> = (0..alpha.class_count())
        .map(|d| RatingValue::from_elements(alpha.class_image(d)))
        .collect();

    let mut state: Vec<Antichain> = vec![Antichain::empty(); size];
    let mut work: Worklist<(usize, RatingValue)> = Worklist::new(order);
    let mut inserted = 0usize;
    let mut processed = 0usize;

    macro_rules! insert {
        ($e:expr, $v:expr) => {{
            let e = $e;
            let v = $v;
            if state[e].insert(v) {
                inserted += 1;
                budget.check_frontier(inserted)?;
                work.push((e, v));
            }
        }};
    }

    // Seeds: the empty word and the letters.
    insert!(monoid.identity(), rho.one());
    for a in 0..alpha.morphism().alphabet().len() {
        insert!(alpha.morphism().letter_image(a), rho.of_letter(a));
    }

    while let Some((e, v)) = work.pop() {
        budget.check_wall()?;
        // Skip values pruned from the antichain since insertion: products
        // of the dominating value subsume theirs.
        if state[e].maximal().binary_search(&v).is_err() {
            continue;
        }
        processed += 1;
        for f in 0..size {
            let snapshot: Vec<RatingValue> = state[f].maximal().to_vec();
            for u in snapshot {
                insert!(monoid.mul(e, f), rho.mul(v, u));
                insert!(monoid.mul(f, e), rho.mul(u, v));
            }
        }
        if monoid.is_idempotent(e) {
            let h = rho.mult_idempotent_power(v);
            let closed = rho.mul(rho.mul(h, class_value[alpha.class_of(e)]), h);
            insert!(e, closed);
        }
    }

    Ok(PolRun {
        imprint: PointedImprint { per_element: state },
        work_items: processed,
    })
}
