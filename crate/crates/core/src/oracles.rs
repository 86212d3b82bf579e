//! Independent ground truth for the decision engines.
//!
//! Nothing here is a decision procedure for separation or covering; these
//! are classical special-case characterizations (J-trivial monoids for
//! piecewise testable languages, upward closure for shuffle ideals, subword
//! profiles for bounded piecewise testability) plus a literal enumeration of
//! the `R[S]` triple set used to validate the frontier representation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::algebra::FiniteMonoid;
use crate::automata::Dfa;
use crate::basis::{reach_pairs, Basis};
use crate::bpol::SatSet;
use crate::rating::{RatingMap, RatingValue};
use crate::{Budget, Error, Result};

/// Principal two-sided ideals `MxM` and the J-class partition they induce.
#[derive(Debug, Clone)]
pub struct JStructure {
    ideals: Vec<BTreeSet<usize>>,
    class_of: Vec<usize>,
}

impl JStructure {
    pub fn compute(m: &FiniteMonoid) -> JStructure {
        let size = m.size();
        let mut ideals = Vec::with_capacity(size);
        for x in 0..size {
            let mut ideal = BTreeSet::new();
            for a in 0..size {
                let ax = m.mul(a, x);
                for b in 0..size {
                    ideal.insert(m.mul(ax, b));
                }
            }
            ideals.push(ideal);
        }
        let mut class_of = vec![0usize; size];
        let mut seen: BTreeMap<&BTreeSet<usize>, usize> = BTreeMap::new();
        for x in 0..size {
            let fresh = seen.len();
            class_of[x] = *seen.entry(&ideals[x]).or_insert(fresh);
        }
        JStructure { ideals, class_of }
    }

    pub fn ideal(&self, x: usize) -> &BTreeSet<usize> {
        &self.ideals[x]
    }

    /// `x J y` iff `MxM = MyM`.
    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn class_count(&self) -> usize {
        self.class_of.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn is_j_trivial(&self) -> bool {
        self.class_count() == self.class_of.len()
    }
}

/// Simon's criterion: every J-class is a singleton.
pub fn is_j_trivial(m: &FiniteMonoid) -> bool {
    JStructure::compute(m).is_j_trivial()
}

/// Is the language equal to its upward closure under the scattered subword
/// order (i.e. a shuffle ideal)?
pub fn is_upward_closed(dfa: &Dfa) -> bool {
    dfa.subword_closure()
        .equal(dfa)
        .expect("closure shares the alphabet")
}

/// Separability by a shuffle ideal, decided by the classical closure
/// argument: the upward closure of L1 is the least shuffle ideal
/// containing it, so some shuffle ideal separates L1 from L2 iff that
/// closure misses L2. An independent check for the lowest half level.
pub fn shuffle_ideal_separable(l1: &Dfa, l2: &Dfa) -> Result<bool> {
    Ok(l1.subword_closure().intersect(l2)?.is_empty())
}

/// Profiles of scattered subwords up to length `k`. Two languages touching
/// disjoint profile sets are separated by a union of `~k`-classes, which is
/// piecewise testable.
pub fn k_subword_separable(l1: &Dfa, l2: &Dfa, k: usize, budget: &Budget) -> Result<bool> {
    if k > 6 {
        return Err(Error::OraclePrecondition(format!(
            "subword bound {k} exceeds the supported maximum 6"
        )));
    }
    if l1.alphabet() != l2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let p1 = reachable_profiles(l1, k, budget)?;
    let p2 = reachable_profiles(l2, k, budget)?;
    Ok(p1.is_disjoint(&p2))
}

/// The set of subwords of length <= k of a word, as sorted letter-index
/// sequences.
type Profile = BTreeSet<Vec<u8>>;

fn extend_profile(profile: &Profile, letter: u8, k: usize) -> Profile {
    let mut out = profile.clone();
    for word in profile {
        if word.len() < k {
            let mut longer = word.clone();
            longer.push(letter);
            out.insert(longer);
        }
    }
    out
}

/// Profile ids touched by the language: reachability over (state, profile).
fn reachable_profiles(dfa: &Dfa, k: usize, budget: &Budget) -> Result<BTreeSet<usize>> {
    let mut intern: BTreeMap<Profile, usize> = BTreeMap::new();
    let mut profiles: Vec<Profile> = Vec::new();
    let mut intern_profile = |p: Profile, profiles: &mut Vec<Profile>| -> usize {
        if let Some(&id) = intern.get(&p) {
            return id;
        }
        let id = profiles.len();
        intern.insert(p.clone(), id);
        profiles.push(p);
        id
    };

    let epsilon: Profile = BTreeSet::from([Vec::new()]);
    let start = intern_profile(epsilon, &mut profiles);
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::from([(dfa.initial(), start)]);
    let mut queue: VecDeque<(usize, usize)> = VecDeque::from([(dfa.initial(), start)]);
    let mut touched = BTreeSet::new();
    while let Some((q, pid)) = queue.pop_front() {
        budget.check_wall()?;
        if dfa.accepting().contains(&q) {
            touched.insert(pid);
        }
        for a in 0..dfa.alphabet().len() {
            let next_profile = extend_profile(&profiles[pid], a as u8, k);
            let next_id = intern_profile(next_profile, &mut profiles);
            budget.check_frontier(profiles.len())?;
            let next = (dfa.delta(q, a), next_id);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Ok(touched)
}

/// Literal enumeration of the `R[S]` triple set: all four rules, including
/// extended downset, over explicitly materialized subsets of `R`. Only
/// feasible for tiny rating bases; the guard enforces `|N| <= 3`.
#[derive(Debug)]
pub struct NaiveRbpol {
    /// Dense membership over (class, value bits, subset-of-R mask), indexed
    /// `(class * r_size + value) * 2^r_size + mask`. Bit `v` of a mask
    /// stands for the rating value with bit pattern `v`.
    present: Vec<bool>,
    r_size: usize,
    mask_count: usize,
}

impl NaiveRbpol {
    pub fn build(
        s: &SatSet,
        basis: &Basis,
        rho: &RatingMap,
        budget: &Budget,
    ) -> Result<NaiveRbpol> {
        let base = rho.base_size();
        if base > 3 {
            return Err(Error::OraclePrecondition(format!(
                "naive R[S] enumeration needs |N| <= 3, got {base}"
            )));
        }
        let r_size: usize = 1 << base;
        let mask_count: usize = 1 << r_size;
        let classes = basis.class_monoid().clone();
        let class_count = classes.size();

        // Multiplication tables for R values, for subsets of R, and the
        // materialized downward closure of every subset.
        let mut value_mul = vec![0usize; r_size * r_size];
        for u in 0..r_size {
            for v in 0..r_size {
                value_mul[u * r_size + v] = rho
                    .mul(
                        RatingValue::from_bits(u as u64),
                        RatingValue::from_bits(v as u64),
                    )
                    .bits() as usize;
            }
        }
        let mut set_mul = vec![0usize; mask_count * mask_count];
        for x in 0..mask_count {
            for y in 0..mask_count {
                let mut out = 0usize;
                for u in 0..r_size {
                    if x & (1 << u) == 0 {
                        continue;
                    }
                    for v in 0..r_size {
                        if y & (1 << v) != 0 {
                            out |= 1 << value_mul[u * r_size + v];
                        }
                    }
                }
                set_mul[x * mask_count + y] = out;
            }
        }
        let mut down_of = vec![0usize; mask_count];
        for (mask, slot) in down_of.iter_mut().enumerate() {
            let mut down = 0usize;
            for v in 0..r_size {
                for w in 0..r_size {
                    if mask & (1 << w) != 0 && v | w == w {
                        down |= 1 << v;
                    }
                }
            }
            *slot = down;
        }

        // S(D) as a subset-of-R mask per class (materialized downset).
        let s_mask: Vec<usize> = (0..s.class_count())
            .map(|d| {
                s.values(d)
                    .materialize()
                    .into_iter()
                    .fold(0usize, |m, v| m | (1 << v.bits()))
            })
            .collect();

        let mut present = vec![false; class_count * r_size * mask_count];
        let index = |c: usize, q: usize, u: usize| (c * r_size + q) * mask_count + u;

        // Trivial elements: (⌈w⌉, ρ(w), {ρ(w)}) for every word, i.e. for
        // every reachable (class, element) pair.
        let reach = reach_pairs(basis, rho.eta(), budget)?;
        for &(class, elem) in reach.pairs() {
            let q = RatingValue::singleton(elem).bits() as usize;
            present[index(class, q, 1 << q)] = true;
        }

        // Chaotic iteration over the remaining three rules.
        loop {
            budget.check_wall()?;
            let mut snapshot: Vec<(usize, usize, usize)> = Vec::new();
            for c in 0..class_count {
                for q in 0..r_size {
                    for u in 0..mask_count {
                        if present[index(c, q, u)] {
                            snapshot.push((c, q, u));
                        }
                    }
                }
            }
            let mut changed = false;
            let mut add = |present: &mut Vec<bool>, c: usize, q: usize, u: usize| {
                let i = index(c, q, u);
                if !present[i] {
                    present[i] = true;
                    changed = true;
                }
            };

            for &(c, q, u) in &snapshot {
                // Extended downset: all V ⊆ ↓U.
                let down = down_of[u];
                let mut sub = down;
                loop {
                    add(&mut present, c, q, sub);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & down;
                }
                // Multiplication with every triple.
                for &(d, r, v) in &snapshot {
                    add(
                        &mut present,
                        classes.mul(c, d),
                        value_mul[q * r_size + r],
                        set_mul[u * mask_count + v],
                    );
                }
                // S-restricted closure on idempotent triples.
                let q_idem = value_mul[q * r_size + q] == q;
                if classes.is_idempotent(c) && q_idem && set_mul[u * mask_count + u] == u {
                    let fs = set_mul[u * mask_count + s_mask[c]];
                    add(&mut present, c, q, set_mul[fs * mask_count + u]);
                }
            }
            if !changed {
                break;
            }
        }
        Ok(NaiveRbpol {
            present,
            r_size,
            mask_count,
        })
    }

    pub fn triple_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    /// Exact membership of `(class, q, V)` in the enumerated `R[S]`.
    pub fn member(&self, class: usize, q: RatingValue, v: &[RatingValue]) -> bool {
        let mask = v.iter().fold(0usize, |m, x| m | (1 << x.bits()));
        let q = q.bits() as usize;
        if q >= self.r_size {
            return false;
        }
        self.present[(class * self.r_size + q) * self.mask_count + mask]
    }
}

/// One-shot form of the naive membership check.
pub fn naive_rbpol_member(
    s: &SatSet,
    basis: &Basis,
    rho: &RatingMap,
    class: usize,
    q: RatingValue,
    v: &[RatingValue],
    budget: &Budget,
) -> Result<bool> {
    Ok(NaiveRbpol::build(s, basis, rho, budget)?.member(class, q, v))
}

/// Literal refinement step: keep `(D, r)` iff some explicit family
/// `r_1, ..., r_k` has `r <= t = r_1 + ... + r_k` and `(D, r_i, {t})` in
/// the enumerated `R[S]` for every `i`. Enumerates all nonempty subsets of
/// `R` as candidate families; `|N| <= 3` only.
pub fn naive_saturation_step(
    s: &SatSet,
    basis: &Basis,
    rho: &RatingMap,
    budget: &Budget,
) -> Result<SatSet> {
    let naive = NaiveRbpol::build(s, basis, rho, budget)?;
    let r_size: u64 = 1 << rho.base_size();
    let mut per_class = Vec::with_capacity(s.class_count());
    for class in 0..s.class_count() {
        let mut kept = crate::rating::Antichain::empty();
        for r_bits in 0..r_size {
            let r = RatingValue::from_bits(r_bits);
            if !s.member(class, r) {
                continue;
            }
            let mut satisfiable = false;
            'families: for family in 1u64..(1 << r_size) {
                let mut t = RatingValue::EMPTY;
                for v in 0..r_size {
                    if family & (1 << v) != 0 {
                        t = t.add(RatingValue::from_bits(v));
                    }
                }
                if !crate::rating::leq(r, t) {
                    continue;
                }
                for v in 0..r_size {
                    if family & (1 << v) != 0
                        && !naive.member(class, RatingValue::from_bits(v), &[t])
                    {
                        continue 'families;
                    }
                }
                satisfiable = true;
                break;
            }
            if satisfiable {
                kept.insert(r);
            }
        }
        per_class.push(kept);
    }
    Ok(SatSet::from_antichains(per_class))
}

/// Literal greatest fixpoint from the full product; the reference for
/// [`crate::bpol::bpol_imprint`] on tiny instances.
pub fn naive_bpol_imprint(basis: &Basis, rho: &RatingMap, budget: &Budget) -> Result<SatSet> {
    let mut current = SatSet::full(basis.class_count(), rho);
    loop {
        let next = naive_saturation_step(&current, basis, rho, budget)?;
        if next == current {
            return Ok(current);
        }
        current = next;
    }
}
