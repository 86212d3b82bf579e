//! Greatest-fixpoint computation of the class-pointed `BPol(C)`-optimal
//! imprint over `(A*/~C) × R`.
//!
//! The outer loop starts from the full product and repeatedly keeps the
//! pairs `(D, r)` for which there are `r_1, ..., r_k` with
//! `r ≤ t = r_1 + ... + r_k` and `(D, r_i, {t})` in the auxiliary triple set
//! `R[S]` of the current `S`. The inner step builds `R[S]` as a least
//! fixpoint of triples `(D, q, U)` closed under componentwise multiplication
//! and, for triples of idempotents, the `S`-restricted closure
//! `(E, f, F·S(E)·F)`.
//!
//! Representation choices (both are load-bearing for size):
//!
//! * `U`-components are antichains standing for their downward closure; the
//!   extended-downset rule is never applied during generation and is folded
//!   into membership queries instead. The closure rule fires on triples
//!   whose represented downset is idempotent in the quotient (antichain
//!   product equality); results for exactly-idempotent subsets below are
//!   dominated through idempotent powers, which products already generate.
//!   This is an engineering reduction, not a restatement of the rules, so
//!   the test suite checks it against a literal enumeration
//!   ([`crate::oracles::NaiveRbpol`]) on small instances.
//! * Triples dominated per `(D, q)` bucket (same class and value, smaller
//!   downset) are pruned: every rule output from a dominated triple is
//!   below the output from its dominating triple.
//!
//! Membership of a query value `q` can only hold when `q` is a word image,
//! i.e. a singleton: every triple of `R[S]` has a word witness for its
//! first two components.

use crate::basis::{reach_pairs, Basis};
use crate::pol::{WorkOrder, Worklist};
use crate::rating::{Antichain, RatingMap, RatingValue};
use crate::{Budget, Result};

/// A downward-closed subset of `(A*/~C) × R`, per-class antichains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatSet {
    per_class: Vec<Antichain>,
}

impl SatSet {
    /// The full product `(A*/~C) × R`, the start of the greatest fixpoint.
    pub fn full(class_count: usize, rho: &RatingMap) -> SatSet {
        SatSet {
            per_class: vec![Antichain::from_value(rho.top()); class_count],
        }
    }

    /// Optional pre-trimmed start: per class `D`, only values below the sum
    /// of the `ρ`-images of words in `D`. The fixpoint from here equals the
    /// one from the full product (every surviving value is a sum of word
    /// images of its class), it just skips the first rounds of shrinking.
    pub fn reach_bounded(basis: &Basis, rho: &RatingMap, budget: &Budget) -> Result<SatSet> {
        let reach = reach_pairs(basis, rho.eta(), budget)?;
        Ok(SatSet {
            per_class: (0..basis.class_count())
                .map(|d| {
                    Antichain::from_value(RatingValue::from_elements(
                        reach.class_image(d).iter().copied(),
                    ))
                })
                .collect(),
        })
    }

    pub fn from_antichains(per_class: Vec<Antichain>) -> SatSet {
        SatSet { per_class }
    }

    pub fn class_count(&self) -> usize {
        self.per_class.len()
    }

    /// `S(D)`: the downward-closed value set of a class.
    pub fn values(&self, class: usize) -> &Antichain {
        &self.per_class[class]
    }

    pub fn member(&self, class: usize, r: RatingValue) -> bool {
        self.per_class[class].member(r)
    }

    pub fn subset_of(&self, other: &SatSet) -> bool {
        self.per_class
            .iter()
            .zip(&other.per_class)
            .all(|(mine, theirs)| mine.subset_of(theirs))
    }

    /// The universal imprint: the union over all classes.
    pub fn universal(&self) -> Antichain {
        let mut out = Antichain::empty();
        for chain in &self.per_class {
            out.union_with(chain);
        }
        out
    }

    /// Total number of maximal pairs (diagnostics).
    pub fn pair_count(&self) -> usize {
        self.per_class.iter().map(Antichain::len).sum()
    }
}

/// The generated fragment of `R[S]`: triples `(D, q, U)` with `q` a word
/// image (kept as the element index of its singleton) and `U` an antichain
/// standing for its downward closure.
#[derive(Debug, Clone)]
pub struct Frontier {
    /// `buckets[class][element]` holds pairwise ⊑-incomparable antichains.
    buckets: Vec<Vec<Vec<Antichain>>>,
    triples: usize,
}

impl Frontier {
    fn new(class_count: usize, base_size: usize) -> Frontier {
        Frontier {
            buckets: vec![vec![Vec::new(); base_size]; class_count],
            triples: 0,
        }
    }

    pub fn triple_count(&self) -> usize {
        self.triples
    }

    /// Is `(class, q, V)` in `R[S]` (with the extended-downset rule folded
    /// in)? True iff some generated triple `(class, q, U)` has `V ⊆ ↓U`.
    pub fn member(&self, class: usize, q: RatingValue, v: &[RatingValue]) -> bool {
        if q.len() != 1 {
            return false;
        }
        let n = q.elements().next().unwrap();
        self.buckets[class][n]
            .iter()
            .any(|u| v.iter().all(|&value| u.member(value)))
    }

    /// Elements `n` with at least one `(class, {n}, ·)` triple.
    pub fn support(&self, class: usize) -> RatingValue {
        RatingValue::from_elements(
            self.buckets[class]
                .iter()
                .enumerate()
                .filter(|(_, bucket)| !bucket.is_empty())
                .map(|(n, _)| n),
        )
    }

    /// Union of the downsets of all `(class, {n}, ·)` triples: the rating
    /// values `t` with `(class, {n}, {t})` in `R[S]`.
    pub fn upper_bounds(&self, class: usize, n: usize) -> Antichain {
        let mut out = Antichain::empty();
        for u in &self.buckets[class][n] {
            out.union_with(u);
        }
        out
    }

    fn insert(&mut self, class: usize, n: usize, u: Antichain) -> bool {
        let bucket = &mut self.buckets[class][n];
        if bucket.iter().any(|stored| u.subset_of(stored)) {
            return false;
        }
        let before = bucket.len();
        bucket.retain(|stored| !stored.subset_of(&u));
        self.triples -= before - bucket.len();
        bucket.push(u);
        self.triples += 1;
        true
    }

    fn contains_exact(&self, class: usize, n: usize, u: &Antichain) -> bool {
        self.buckets[class][n].iter().any(|stored| stored == u)
    }

    fn iter(&self) -> impl Iterator<Item = (usize, usize, &Antichain)> {
        self.buckets.iter().enumerate().flat_map(|(class, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(n, bucket)| bucket.iter().map(move |u| (class, n, u)))
        })
    }
}

/// Compute the generated fragment of `R[S]` for the current saturation set.
pub fn rbpol_frontier(
    s: &SatSet,
    basis: &Basis,
    rho: &RatingMap,
    budget: &Budget,
    order: WorkOrder,
) -> Result<Frontier> {
    let classes = basis.class_monoid().clone();
    let base = rho.eta().target().clone();
    let mut frontier = Frontier::new(classes.size(), base.size());
    let mut work: Worklist<(usize, usize, Antichain)> = Worklist::new(order);
    let mut inserted = 0usize;

    macro_rules! insert {
        ($d:expr, $n:expr, $u:expr) => {{
            let d = $d;
            let n = $n;
            let u = $u;
            if frontier.insert(d, n, u.clone()) {
                inserted += 1;
                budget.check_frontier(inserted)?;
                work.push((d, n, u));
            }
        }};
    }

    // Trivial seeds; every (⌈w⌉, ρ(w), {ρ(w)}) follows under multiplication.
    insert!(
        classes.identity(),
        base.identity(),
        Antichain::from_value(rho.one())
    );
    for a in 0..basis.alphabet().len() {
        insert!(
            basis.class_morphism().letter_image(a),
            rho.eta().letter_image(a),
            Antichain::from_value(rho.of_letter(a))
        );
    }

    let mut products: Vec<(usize, usize, Antichain)> = Vec::new();
    while let Some((d, n, u)) = work.pop() {
        budget.check_wall()?;
        if !frontier.contains_exact(d, n, &u) {
            continue; // pruned by a dominating triple
        }
        products.clear();
        for (d2, n2, u2) in frontier.iter() {
            products.push((classes.mul(d, d2), base.mul(n, n2), u.mul(u2, rho)));
            products.push((classes.mul(d2, d), base.mul(n2, n), u2.mul(&u, rho)));
        }
        // S-restricted closure on triples of idempotents.
        if classes.is_idempotent(d) && base.mul(n, n) == n && u.mul(&u, rho) == u {
            let closed = u.mul(s.values(d), rho).mul(&u, rho);
            products.push((d, n, closed));
        }
        for (d2, n2, u2) in products.drain(..) {
            insert!(d2, n2, u2);
        }
    }
    Ok(frontier)
}

/// One refinement step of the greatest fixpoint: keep `(D, r)` iff some
/// `t ≥ r` is a sum `r_1 + ... + r_k` with every `(D, r_i, {t})` in `R[S]`.
///
/// The `r_i` are word images, so `t` ranges over sums of elements of the
/// support of `D`; by idempotency of addition, a subset of candidates sums
/// to `t` iff the set of all candidates below `t` does. The set of good `t`
/// is downward closed, and its maxima are found by refining the support
/// downward along failing constraints.
pub fn saturation_step(
    s: &SatSet,
    basis: &Basis,
    rho: &RatingMap,
    budget: &Budget,
    order: WorkOrder,
) -> Result<(SatSet, usize)> {
    let frontier = rbpol_frontier(s, basis, rho, budget, order)?;
    let mut per_class = Vec::with_capacity(s.class_count());
    for class in 0..s.class_count() {
        let support = frontier.support(class);
        let bounds: Vec<Antichain> = (0..rho.base_size())
            .map(|n| frontier.upper_bounds(class, n))
            .collect();
        let good = maximal_good_values(support, &bounds, budget)?;
        per_class.push(s.values(class).intersect(&good));
    }
    Ok((SatSet { per_class }, frontier.triple_count()))
}

/// Maxima of `{t ≤ support : every n ∈ t has some u ≥ t in bounds[n]}`.
/// The predicate is downward closed: shrinking `t` only relaxes it.
fn maximal_good_values(
    support: RatingValue,
    bounds: &[Antichain],
    budget: &Budget,
) -> Result<Antichain> {
    let mut good = Antichain::empty();
    let mut visited = std::collections::BTreeSet::new();
    let mut stack = vec![support];
    while let Some(t) = stack.pop() {
        budget.check_wall()?;
        if !visited.insert(t) || good.member(t) {
            continue;
        }
        let failing = t.elements().find(|&n| !bounds[n].member(t));
        match failing {
            None => {
                good.insert(t);
            }
            Some(n) => {
                // Any good t' ≤ t either avoids n or fits under one of the
                // upper bounds available for n.
                stack.push(t.without(n));
                for &u in bounds[n].maximal() {
                    let meet = t.intersection(u);
                    debug_assert_ne!(meet, t);
                    stack.push(meet);
                }
            }
        }
    }
    Ok(good)
}

/// Per-iteration diagnostics of the outer fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BpolTraceEntry {
    /// Maximal pairs in the saturation set after the step.
    pub pairs: usize,
    /// Triples generated by the inner `R[S]` fixpoint of the step.
    pub frontier_triples: usize,
}

/// Result of the greatest-fixpoint computation, with diagnostics.
#[derive(Debug, Clone)]
pub struct BpolRun {
    pub imprint: SatSet,
    pub outer_iterations: usize,
    /// Triples of the last inner fixpoint (the certifying one).
    pub frontier_triples: usize,
    pub trace: Vec<BpolTraceEntry>,
}

/// Compute the greatest `BPol(C)`-saturated subset of `(A*/~C) × R`:
/// `P(D)` is the `BPol(C)`-optimal imprint on the class `D`.
pub fn bpol_imprint(
    basis: &Basis,
    rho: &RatingMap,
    budget: &Budget,
    order: WorkOrder,
) -> Result<BpolRun> {
    bpol_imprint_from(
        SatSet::full(basis.class_count(), rho),
        basis,
        rho,
        budget,
        order,
    )
}

/// The greatest fixpoint from an explicit start; used with
/// [`SatSet::reach_bounded`] as an opt-in speedup.
pub fn bpol_imprint_from(
    start: SatSet,
    basis: &Basis,
    rho: &RatingMap,
    budget: &Budget,
    order: WorkOrder,
) -> Result<BpolRun> {
    budget.check_rating_base(rho.base_size())?;
    // Every class of a basis has a witness word, hence a reachable pair.
    debug_assert!(
        (0..basis.class_count()).all(|d| !reach_pairs(basis, rho.eta(), budget)
            .unwrap()
            .class_image(d)
            .is_empty())
    );

    let mut current = start;
    let mut trace = Vec::new();
    let mut frontier_triples;
    loop {
        let (next, triples) = saturation_step(&current, basis, rho, budget, order)?;
        frontier_triples = triples;
        trace.push(BpolTraceEntry {
            pairs: next.pair_count(),
            frontier_triples: triples,
        });
        debug_assert!(next.subset_of(&current));
        let stable = next == current;
        current = next;
        if stable {
            break;
        }
    }
    Ok(BpolRun {
        imprint: current,
        outer_iterations: trace.len(),
        frontier_triples,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{transition_monoid, FiniteMonoid, Morphism};
    use crate::automata::{Alphabet, Dfa};
    use crate::basis::BasisKind;
    use crate::rating::leq;

    fn budget() -> Budget {
        Budget::default()
    }

    fn alphabet(s: &str) -> Alphabet {
        Alphabet::new(s.chars()).unwrap()
    }

    fn parity_rho() -> (Basis, RatingMap) {
        let a = alphabet("a");
        let z2 = FiniteMonoid::new(2, vec![0, 1, 1, 0], 0).unwrap();
        let eta = Morphism::from_parts(a.clone(), z2, vec![1], &budget()).unwrap();
        let basis = Basis::builtin(BasisKind::St0, &a, &budget()).unwrap();
        (basis, RatingMap::new(eta, &budget()).unwrap())
    }

    #[test]
    fn frontier_of_trivial_instance() {
        let a = alphabet("a");
        let basis = Basis::builtin(BasisKind::St0, &a, &budget()).unwrap();
        let rho = RatingMap::new(Morphism::trivial(a), &budget()).unwrap();
        let s = SatSet::full(1, &rho);
        let frontier = rbpol_frontier(&s, &basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
        assert_eq!(frontier.triple_count(), 1);
        assert!(frontier.member(0, rho.one(), &[rho.one()]));
        assert!(frontier.member(0, rho.one(), &[RatingValue::EMPTY, rho.one()]));
        // The empty V is below any triple with matching class and value.
        assert!(frontier.member(0, rho.one(), &[]));
    }

    #[test]
    fn frontier_of_parity_reaches_the_full_bound() {
        let (basis, rho) = parity_rho();
        let s = SatSet::full(1, &rho);
        let frontier = rbpol_frontier(&s, &basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
        let even = RatingValue::singleton(0);
        let odd = RatingValue::singleton(1);
        let both = RatingValue::from_elements([0, 1]);
        // S-restricted closure on (⋆, {0}, {{0}}) yields U with ↓U ∋ all
        // four subsets; multiplication transports it to the odd value.
        assert!(frontier.member(0, even, &[RatingValue::EMPTY, even, odd, both]));
        assert!(frontier.member(0, odd, &[RatingValue::EMPTY, even, odd, both]));
        // Non-singleton query values can never be word images.
        assert!(!frontier.member(0, both, &[both]));
    }

    #[test]
    fn frontier_against_empty_saturation_values() {
        // With S(⋆) = {∅}, the closure rule can only produce ∅ bounds, so
        // {0,1} is not dominated anywhere.
        let (basis, rho) = parity_rho();
        let s = SatSet::from_antichains(vec![Antichain::from_value(RatingValue::EMPTY)]);
        let frontier = rbpol_frontier(&s, &basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
        let even = RatingValue::singleton(0);
        let both = RatingValue::from_elements([0, 1]);
        assert!(frontier.member(0, even, &[even]));
        assert!(!frontier.member(0, even, &[both]));
    }

    #[test]
    fn saturation_step_keeps_parity_full() {
        let (basis, rho) = parity_rho();
        let s = SatSet::full(1, &rho);
        let (next, _) = saturation_step(&s, &basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
        // t = {0,1} is good: both singleton values have the full bound.
        assert_eq!(next, s);
        // Pairs with the empty value are always kept.
        assert!(next.member(0, RatingValue::EMPTY));
    }

    #[test]
    fn bpol_imprint_of_trivial_instance() {
        let a = alphabet("a");
        let basis = Basis::builtin(BasisKind::St0, &a, &budget()).unwrap();
        let rho = RatingMap::new(Morphism::trivial(a), &budget()).unwrap();
        let run = bpol_imprint(&basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
        assert_eq!(run.imprint.values(0).maximal(), &[rho.one()]);
        assert!(run.imprint.member(0, RatingValue::EMPTY));
        assert_eq!(run.outer_iterations, 1);
    }

    #[test]
    fn no_piecewise_testable_language_separates_parity() {
        let (basis, rho) = parity_rho();
        let run = bpol_imprint(&basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
        let both = RatingValue::from_elements([0, 1]);
        assert_eq!(run.imprint.values(0).maximal(), &[both]);
    }

    #[test]
    fn ab_star_monoid_keeps_a_mixing_value() {
        // The imprint for the (ab)* syntactic monoid over st0 must contain
        // a value mixing accepting and rejecting elements: (ab)* is not
        // piecewise testable.
        let ab = alphabet("ab");
        let dfa = Dfa::from_pattern("(ab)*", &ab).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        let basis = Basis::builtin(BasisKind::St0, &ab, &budget()).unwrap();
        let rho = RatingMap::new(rec.morphism, &budget()).unwrap();
        let run = bpol_imprint(&basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
        let accepting = RatingValue::from_elements(rec.accepting.iter().copied());
        let rejecting = rho
            .top()
            .intersection(RatingValue::from_bits(!accepting.bits()));
        let mixing = run
            .imprint
            .universal()
            .maximal()
            .iter()
            .any(|&t| t.meets(accepting) && t.meets(rejecting));
        assert!(mixing);
    }

    #[test]
    fn outer_iterations_decrease_strictly_until_stable() {
        let ab = alphabet("ab");
        let dfa = Dfa::from_pattern("(ab)*", &ab).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        let basis = Basis::builtin(BasisKind::At, &ab, &budget()).unwrap();
        let rho = RatingMap::new(rec.morphism, &budget()).unwrap();

        let mut sets = vec![SatSet::full(basis.class_count(), &rho)];
        loop {
            let (next, _) = saturation_step(
                sets.last().unwrap(),
                &basis,
                &rho,
                &budget(),
                WorkOrder::Fifo,
            )
            .unwrap();
            assert!(next.subset_of(sets.last().unwrap()));
            if &next == sets.last().unwrap() {
                break;
            }
            sets.push(next);
        }
        for window in sets.windows(2) {
            assert!(window[1].subset_of(&window[0]));
            assert_ne!(window[1], window[0]);
        }
    }

    #[test]
    fn trivial_pairs_survive_the_greatest_fixpoint() {
        let ab = alphabet("ab");
        let dfa = Dfa::from_pattern("(ab)*", &ab).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        let basis = Basis::builtin(BasisKind::At, &ab, &budget()).unwrap();
        let rho = RatingMap::new(rec.morphism.clone(), &budget()).unwrap();
        let run = bpol_imprint(&basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
        let mut layer = vec![String::new()];
        for _ in 0..=5 {
            for w in &layer {
                let class = basis.class_of_word(w);
                assert!(run.imprint.member(class, rho.of_word(w)), "word {w:?}");
            }
            layer = layer
                .iter()
                .flat_map(|w| {
                    ['a', 'b'].map(|c| {
                        let mut v = w.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
    }

    #[test]
    fn bpol_result_is_order_independent() {
        let ab = alphabet("ab");
        let dfa = Dfa::from_pattern("(ab)*", &ab).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        let basis = Basis::builtin(BasisKind::At, &ab, &budget()).unwrap();
        let rho = RatingMap::new(rec.morphism, &budget()).unwrap();
        let fifo = bpol_imprint(&basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
        for seed in [3u64, 99, 2024] {
            let shuffled =
                bpol_imprint(&basis, &rho, &budget(), WorkOrder::Shuffled(seed)).unwrap();
            assert_eq!(fifo.imprint, shuffled.imprint, "seed {seed}");
        }
    }

    #[test]
    fn classwise_downward_closure_is_exact() {
        let (basis, rho) = parity_rho();
        let run = bpol_imprint(&basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
        for class in 0..basis.class_count() {
            for &max in run.imprint.values(class).maximal() {
                for bits in 0..(1u64 << rho.base_size()) {
                    let r = RatingValue::from_bits(bits);
                    assert_eq!(
                        run.imprint.member(class, r) || !leq(r, max),
                        run.imprint.member(class, r)
                    );
                    if leq(r, max) {
                        assert!(run.imprint.member(class, r));
                    }
                }
            }
        }
    }

    #[test]
    fn pretrimmed_start_reaches_the_same_fixpoint() {
        let ab = alphabet("ab");
        for (pattern, kind) in [
            ("(ab)*", BasisKind::At),
            ("(ab)*", BasisKind::St0),
            ("(a|b)*a(a|b)*", BasisKind::Dd0),
        ] {
            let dfa = Dfa::from_pattern(pattern, &ab).unwrap();
            let rec = transition_monoid(&dfa, &budget()).unwrap();
            let basis = Basis::builtin(kind, &ab, &budget()).unwrap();
            let rho = RatingMap::new(rec.morphism, &budget()).unwrap();
            let full = bpol_imprint(&basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
            let start = SatSet::reach_bounded(&basis, &rho, &budget()).unwrap();
            let trimmed =
                bpol_imprint_from(start, &basis, &rho, &budget(), WorkOrder::Fifo).unwrap();
            assert_eq!(full.imprint, trimmed.imprint, "{pattern} over {kind:?}");
            assert!(trimmed.outer_iterations <= full.outer_iterations);
        }
    }

    #[test]
    fn frontier_guard_fails_loudly() {
        let ab = alphabet("ab");
        let dfa = Dfa::from_pattern("(ab)*", &ab).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        let basis = Basis::builtin(BasisKind::At, &ab, &budget()).unwrap();
        let rho = RatingMap::new(rec.morphism, &budget()).unwrap();
        let limits = crate::Limits {
            max_frontier: 5,
            ..crate::Limits::default()
        };
        let err = bpol_imprint(&basis, &rho, &Budget::new(&limits), WorkOrder::Fifo).unwrap_err();
        assert!(matches!(
            err,
            crate::Error::Limit {
                guard: "frontier size",
                ..
            }
        ));
    }
}
