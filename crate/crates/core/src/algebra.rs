//! Finite monoids and morphisms from `A*`: the recognition layer.
//!
//! Monoids are dense multiplication tables over element indices; all
//! downstream fixpoints are table lookups. Every constructed morphism is
//! image-restricted: its target contains exactly the images of words (the
//! identity is the image of the empty word), so every element has a shortest
//! witness word, kept as its label.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, Dfa};
use crate::{Budget, Error, Result};

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<usize>,
    identity: usize,
}

impl FiniteMonoid {
    /// Build and validate (identity law and associativity).
    pub fn new(size: usize, table: Vec<usize>, identity: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidMonoid("no elements".into()));
        }
        if table.len() != size * size {
            return Err(Error::InvalidMonoid(format!(
                "table has {} entries, expected {}",
                table.len(),
                size * size
            )));
        }
        if identity >= size || table.iter().any(|&x| x >= size) {
            return Err(Error::InvalidMonoid("element index out of range".into()));
        }
        let m = FiniteMonoid {
            size,
            table,
            identity,
        };
        for x in 0..size {
            if m.mul(m.identity, x) != x || m.mul(x, m.identity) != x {
                return Err(Error::InvalidMonoid(format!(
                    "identity law fails at element {x}"
                )));
            }
        }
        for x in 0..size {
            for y in 0..size {
                let xy = m.mul(x, y);
                for z in 0..size {
                    if m.mul(xy, z) != m.mul(x, m.mul(y, z)) {
                        return Err(Error::InvalidMonoid(format!(
                            "associativity fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn trivial() -> Self {
        FiniteMonoid {
            size: 1,
            table: vec![0],
            identity: 0,
        }
    }

    /// Construction-internal: the caller guarantees the monoid laws.
    pub(crate) fn new_unchecked(size: usize, table: Vec<usize>, identity: usize) -> Self {
        debug_assert_eq!(table.len(), size * size);
        FiniteMonoid {
            size,
            table,
            identity,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    /// All elements `e` with `ee = e`.
    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&x| self.is_idempotent(x)).collect()
    }

    /// `x^k` for the least `k >= 1` such that `x^k` is idempotent.
    pub fn idempotent_power(&self, x: usize) -> usize {
        let mut power = x;
        for _ in 0..=2 * self.size {
            if self.is_idempotent(power) {
                return power;
            }
            power = self.mul(power, x);
        }
        unreachable!("every element of a finite monoid has an idempotent power")
    }
}

/// A morphism `A* -> N` given by letter images, together with shortest
/// witness words used as element labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Alphabet,
    target: FiniteMonoid,
    letter_image: Vec<usize>,
    labels: Vec<String>,
}

impl Morphism {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn target(&self) -> &FiniteMonoid {
        &self.target
    }

    pub fn letter_image(&self, letter: usize) -> usize {
        self.letter_image[letter]
    }

    pub fn label(&self, element: usize) -> &str {
        &self.labels[element]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Image of a word. Panics on letters outside the alphabet.
    pub fn eval(&self, word: &str) -> usize {
        word.chars().fold(self.target.identity(), |acc, c| {
            let a = self
                .alphabet
                .index_of(c)
                .unwrap_or_else(|| panic!("letter '{c}' is not in the alphabet"));
            self.target.mul(acc, self.letter_image[a])
        })
    }

    /// The morphism into the trivial monoid.
    pub fn trivial(alphabet: Alphabet) -> Morphism {
        let letter_image = vec![0; alphabet.len()];
        Morphism {
            alphabet,
            target: FiniteMonoid::trivial(),
            letter_image,
            labels: vec![String::new()],
        }
    }

    /// Build from raw parts, restricting the target to the image submonoid
    /// (elements reachable from the identity by letter products).
    pub fn from_parts(
        alphabet: Alphabet,
        target: FiniteMonoid,
        letter_image: Vec<usize>,
        budget: &Budget,
    ) -> Result<Morphism> {
        if letter_image.len() != alphabet.len() {
            return Err(Error::InvalidMonoid(format!(
                "{} letter images for {} letters",
                letter_image.len(),
                alphabet.len()
            )));
        }
        if letter_image.iter().any(|&x| x >= target.size()) {
            return Err(Error::InvalidMonoid("letter image out of range".into()));
        }
        // Breadth-first image restriction, shortest witnesses as labels.
        let mut keep: Vec<usize> = vec![target.identity()];
        let mut index: BTreeMap<usize, usize> = BTreeMap::from([(target.identity(), 0)]);
        let mut labels: Vec<String> = vec![String::new()];
        let mut i = 0;
        while i < keep.len() {
            let x = keep[i];
            for (a, &img) in letter_image.iter().enumerate() {
                let y = target.mul(x, img);
                if let std::collections::btree_map::Entry::Vacant(slot) = index.entry(y) {
                    slot.insert(keep.len());
                    let mut label = labels[i].clone();
                    label.push(alphabet.letter(a));
                    keep.push(y);
                    labels.push(label);
                    budget.check_monoid(keep.len())?;
                }
            }
            i += 1;
        }
        let size = keep.len();
        let mut table = vec![0usize; size * size];
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                table[i * size + j] = index[&target.mul(x, y)];
            }
        }
        let restricted = FiniteMonoid {
            size,
            table,
            identity: 0,
        };
        let letter_image = letter_image.iter().map(|x| index[x]).collect();
        Ok(Morphism {
            alphabet,
            target: restricted,
            letter_image,
            labels,
        })
    }

    /// Restriction of the target to the image submonoid.
    pub fn image_restricted(&self, budget: &Budget) -> Result<Morphism> {
        Morphism::from_parts(
            self.alphabet.clone(),
            self.target.clone(),
            self.letter_image.clone(),
            budget,
        )
    }

    /// JSON dump (monoid table, identity, letter images, labels).
    pub fn dump(&self) -> MonoidDump {
        let size = self.target.size();
        let table = (0..size)
            .map(|x| (0..size).map(|y| self.target.mul(x, y)).collect())
            .collect();
        let letters = self
            .alphabet
            .letters()
            .iter()
            .enumerate()
            .map(|(i, &c)| (c.to_string(), self.letter_image[i]))
            .collect();
        MonoidDump {
            size,
            table,
            identity: self.target.identity(),
            letters,
            labels: Some(self.labels.clone()),
        }
    }

    /// Load a morphism from its dump, validating the monoid laws and
    /// restricting to the image. The dump must provide an image for every
    /// letter of `alphabet`.
    pub fn from_dump(dump: &MonoidDump, alphabet: &Alphabet, budget: &Budget) -> Result<Morphism> {
        let table: Vec<usize> = dump.table.iter().flatten().copied().collect();
        let monoid = FiniteMonoid::new(dump.size, table, dump.identity)?;
        let mut letter_image = Vec::with_capacity(alphabet.len());
        for &c in alphabet.letters() {
            let img = dump
                .letters
                .get(&c.to_string())
                .ok_or_else(|| Error::InvalidMonoid(format!("no image for letter '{c}'")))?;
            letter_image.push(*img);
        }
        Morphism::from_parts(alphabet.clone(), monoid, letter_image, budget)
    }
}

/// Serialized form of a monoid or morphism (the `--dump` format).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonoidDump {
    pub size: usize,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub letters: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A morphism together with the accepting element subset; denotes the
/// language of words whose image lies in the subset.
#[derive(Debug, Clone)]
pub struct RecognizedLanguage {
    pub morphism: Morphism,
    pub accepting: BTreeSet<usize>,
}

impl RecognizedLanguage {
    pub fn contains(&self, word: &str) -> bool {
        self.accepting.contains(&self.morphism.eval(word))
    }
}

/// Transition monoid of a complete DFA: the distinct state transformations
/// generated by the letters, plus the identity transformation. The returned
/// morphism recognizes the automaton's language via the accepting subset.
pub fn transition_monoid(dfa: &Dfa, budget: &Budget) -> Result<RecognizedLanguage> {
    let states = dfa.state_count();
    let letters = dfa.alphabet().len();
    let identity: Vec<usize> = (0..states).collect();
    let letter_maps: Vec<Vec<usize>> = (0..letters)
        .map(|a| (0..states).map(|q| dfa.delta(q, a)).collect())
        .collect();

    let mut elements: Vec<Vec<usize>> = vec![identity.clone()];
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::from([(identity, 0)]);
    let mut labels: Vec<String> = vec![String::new()];
    let mut i = 0;
    while i < elements.len() {
        for (a, letter_map) in letter_maps.iter().enumerate() {
            let composed: Vec<usize> = elements[i].iter().map(|&q| letter_map[q]).collect();
            if !index.contains_key(&composed) {
                index.insert(composed.clone(), elements.len());
                let mut label = labels[i].clone();
                label.push(dfa.alphabet().letter(a));
                elements.push(composed);
                labels.push(label);
                budget.check_monoid(elements.len())?;
            }
        }
        i += 1;
    }

    let size = elements.len();
    let mut table = vec![0usize; size * size];
    for (x, tx) in elements.iter().enumerate() {
        for (y, ty) in elements.iter().enumerate() {
            let composed: Vec<usize> = tx.iter().map(|&q| ty[q]).collect();
            table[x * size + y] = index[&composed];
        }
    }
    let letter_image = (0..letters).map(|a| index[&letter_maps[a]]).collect();
    let accepting = elements
        .iter()
        .enumerate()
        .filter(|(_, t)| dfa.accepting().contains(&t[dfa.initial()]))
        .map(|(x, _)| x)
        .collect();
    Ok(RecognizedLanguage {
        morphism: Morphism {
            alphabet: dfa.alphabet().clone(),
            target: FiniteMonoid {
                size,
                table,
                identity: 0,
            },
            letter_image,
            labels,
        },
        accepting,
    })
}

/// Image-restricted product of several morphisms over the same alphabet.
/// Returns the product morphism and, per factor, the projection from
/// product elements to factor elements.
pub fn joint_morphism(
    factors: &[&Morphism],
    budget: &Budget,
) -> Result<(Morphism, Vec<Vec<usize>>)> {
    assert!(!factors.is_empty(), "need at least one factor");
    let alphabet = factors[0].alphabet().clone();
    if factors.iter().any(|m| m.alphabet() != &alphabet) {
        return Err(Error::AlphabetMismatch);
    }

    let identity: Vec<usize> = factors.iter().map(|m| m.target().identity()).collect();
    let mut elements: Vec<Vec<usize>> = vec![identity.clone()];
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::from([(identity, 0)]);
    let mut labels: Vec<String> = vec![String::new()];
    let mut i = 0;
    while i < elements.len() {
        for a in 0..alphabet.len() {
            let tuple: Vec<usize> = factors
                .iter()
                .enumerate()
                .map(|(k, m)| m.target().mul(elements[i][k], m.letter_image(a)))
                .collect();
            if !index.contains_key(&tuple) {
                index.insert(tuple.clone(), elements.len());
                let mut label = labels[i].clone();
                label.push(alphabet.letter(a));
                elements.push(tuple);
                labels.push(label);
                budget.check_monoid(elements.len())?;
            }
        }
        i += 1;
    }

    let size = elements.len();
    let mut table = vec![0usize; size * size];
    for (x, tx) in elements.iter().enumerate() {
        for (y, ty) in elements.iter().enumerate() {
            let tuple: Vec<usize> = factors
                .iter()
                .enumerate()
                .map(|(k, m)| m.target().mul(tx[k], ty[k]))
                .collect();
            table[x * size + y] = *index
                .get(&tuple)
                .expect("image submonoid is closed under products");
        }
    }
    let letter_image = (0..alphabet.len())
        .map(|a| {
            let tuple: Vec<usize> = factors.iter().map(|m| m.letter_image(a)).collect();
            index[&tuple]
        })
        .collect();
    let projections = (0..factors.len())
        .map(|k| elements.iter().map(|tuple| tuple[k]).collect())
        .collect();
    Ok((
        Morphism {
            alphabet,
            target: FiniteMonoid {
                size,
                table,
                identity: 0,
            },
            letter_image,
            labels,
        },
        projections,
    ))
}

/// Image-restricted product of two morphisms.
pub fn product(
    m1: &Morphism,
    m2: &Morphism,
    budget: &Budget,
) -> Result<(Morphism, Vec<(usize, usize)>)> {
    let (morphism, projections) = joint_morphism(&[m1, m2], budget)?;
    let pairs = projections[0]
        .iter()
        .zip(&projections[1])
        .map(|(&x, &y)| (x, y))
        .collect();
    Ok((morphism, pairs))
}

/// `{ m(w) | w in L(dfa) }`, by reachability in the product of the automaton
/// with the right Cayley action of the monoid.
pub fn language_image(m: &Morphism, dfa: &Dfa) -> Result<BTreeSet<usize>> {
    if m.alphabet() != dfa.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let monoid = m.target();
    let mut seen = vec![false; dfa.state_count() * monoid.size()];
    let key = |q: usize, x: usize| q * monoid.size() + x;
    let mut queue = VecDeque::from([(dfa.initial(), monoid.identity())]);
    seen[key(dfa.initial(), monoid.identity())] = true;
    let mut image = BTreeSet::new();
    while let Some((q, x)) = queue.pop_front() {
        if dfa.accepting().contains(&q) {
            image.insert(x);
        }
        for a in 0..dfa.alphabet().len() {
            let next = (dfa.delta(q, a), monoid.mul(x, m.letter_image(a)));
            if !seen[key(next.0, next.1)] {
                seen[key(next.0, next.1)] = true;
                queue.push_back(next);
            }
        }
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::new("ab".chars()).unwrap()
    }

    fn a() -> Alphabet {
        Alphabet::new("a".chars()).unwrap()
    }

    fn budget() -> Budget {
        Budget::default()
    }

    /// Z2 as a morphism over {a}: word parity.
    fn parity() -> Morphism {
        let z2 = FiniteMonoid::new(2, vec![0, 1, 1, 0], 0).unwrap();
        Morphism::from_parts(a(), z2, vec![1], &budget()).unwrap()
    }

    #[test]
    fn monoid_validation_catches_broken_tables() {
        // Identity law violated.
        assert!(FiniteMonoid::new(2, vec![0, 1, 1, 1], 1).is_err());
        // Non-associative: x*x = identity-like flip on 3 elements.
        assert!(FiniteMonoid::new(3, vec![0, 1, 2, 1, 2, 2, 2, 2, 1], 0).is_err());
        assert!(FiniteMonoid::new(2, vec![0, 1, 1], 0).is_err());
    }

    #[test]
    fn transition_monoid_of_ab_star_has_six_elements() {
        let dfa = Dfa::from_pattern("(ab)*", &ab()).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        let m = rec.morphism.target();
        assert_eq!(m.size(), 6);
        // aa = bb, and that element is absorbing (the zero).
        let ia = rec.morphism.eval("aa");
        let ib = rec.morphism.eval("bb");
        assert_eq!(ia, ib);
        for x in 0..m.size() {
            assert_eq!(m.mul(ia, x), ia);
            assert_eq!(m.mul(x, ia), ia);
        }
        // Labels are shortest witnesses.
        let labels: Vec<&str> = (0..m.size()).map(|x| rec.morphism.label(x)).collect();
        assert_eq!(labels, vec!["", "a", "b", "aa", "ab", "ba"]);
    }

    #[test]
    fn transition_monoid_of_full_language_is_trivial() {
        let dfa = Dfa::from_pattern("(a|b)*", &ab()).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        assert_eq!(rec.morphism.target().size(), 1);
        assert_eq!(rec.accepting.len(), 1);
    }

    #[test]
    fn transition_monoid_of_even_length_is_z2() {
        let dfa = Dfa::from_pattern("(aa)*", &a()).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        let m = rec.morphism.target();
        assert_eq!(m.size(), 2);
        let x = rec.morphism.eval("a");
        assert_eq!(m.mul(x, x), m.identity());
    }

    #[test]
    fn transition_monoid_recognizes_the_language() {
        for pattern in ["(ab)*", "a(a|b)*b", "(a|b)*a(a|b)*", "b*ab*"] {
            let dfa = Dfa::from_pattern(pattern, &ab()).unwrap();
            let rec = transition_monoid(&dfa, &budget()).unwrap();
            let mut layer = vec![String::new()];
            for _ in 0..=8 {
                for w in &layer {
                    assert_eq!(
                        dfa.accepts(w),
                        rec.contains(w),
                        "pattern {pattern}, word {w:?}"
                    );
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
    }

    #[test]
    fn monoid_size_guard_fails_loudly() {
        let limits = crate::Limits {
            max_monoid: 3,
            ..crate::Limits::default()
        };
        let dfa = Dfa::from_pattern("(ab)*", &ab()).unwrap();
        let err = transition_monoid(&dfa, &Budget::new(&limits)).unwrap_err();
        assert!(matches!(
            err,
            Error::Limit {
                guard: "monoid size",
                ..
            }
        ));
    }

    #[test]
    fn product_with_trivial_is_isomorphic() {
        let m = parity();
        let t = Morphism::trivial(a());
        let (p, pairs) = product(&t, &m, &budget()).unwrap();
        assert_eq!(p.target().size(), m.target().size());
        // Projections commute with letter images.
        for (i, &(x, y)) in pairs.iter().enumerate() {
            assert_eq!(x, 0);
            assert_eq!(y, i); // same BFS order as the right factor
        }
    }

    #[test]
    fn product_of_parity_and_nonempty_flag_has_three_elements() {
        // dd0-style class morphism over {a}: 1 and an absorbing p.
        let two = FiniteMonoid::new(2, vec![0, 1, 1, 1], 0).unwrap();
        let dd0 = Morphism::from_parts(a(), two, vec![1], &budget()).unwrap();
        let (p, pairs) = product(&parity(), &dd0, &budget()).unwrap();
        assert_eq!(p.target().size(), 3);
        let set: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
        assert_eq!(set, BTreeSet::from([(0, 0), (1, 1), (0, 1)]));
    }

    #[test]
    fn product_size_is_bounded_by_square() {
        let m = parity();
        let (p, _) = product(&m, &m, &budget()).unwrap();
        assert!(p.target().size() <= m.target().size() * m.target().size());
        assert!(p.target().size() >= m.target().size());
        // Diagonal product collapses to the factor.
        assert_eq!(p.target().size(), m.target().size());
    }

    #[test]
    fn idempotent_powers() {
        let m = parity();
        let z2 = m.target();
        assert_eq!(z2.idempotent_power(z2.identity()), z2.identity());
        assert_eq!(z2.idempotent_power(1), 0); // a^2 = 1
        assert_eq!(z2.idempotents(), vec![0]);

        let dfa = Dfa::from_pattern("(ab)*", &ab()).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        let m = rec.morphism.target();
        let ea = rec.morphism.eval("a");
        let zero = rec.morphism.eval("aa");
        assert_eq!(m.idempotent_power(ea), zero);
        let idems: BTreeSet<usize> = m.idempotents().into_iter().collect();
        let expected = BTreeSet::from([
            m.identity(),
            rec.morphism.eval("ab"),
            rec.morphism.eval("ba"),
            zero,
        ]);
        assert_eq!(idems, expected);
    }

    #[test]
    fn language_image_examples() {
        let m = parity();
        let empty = Dfa::from_pattern("~", &a()).unwrap();
        assert!(language_image(&m, &empty).unwrap().is_empty());

        let even = Dfa::from_pattern("(aa)*", &a()).unwrap();
        assert_eq!(language_image(&m, &even).unwrap(), BTreeSet::from([0]));

        let dfa = Dfa::from_pattern("(ab)*", &ab()).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        let full = Dfa::from_pattern("(a|b)*", &ab()).unwrap();
        let image = language_image(&rec.morphism, &full).unwrap();
        assert_eq!(image.len(), 6);
    }

    #[test]
    fn language_image_distributes_over_union() {
        let m = parity();
        let d1 = Dfa::from_pattern("(aa)*", &a()).unwrap();
        let d2 = Dfa::from_pattern("a(aa)*", &a()).unwrap();
        let union = d1.union(&d2).unwrap();
        let mut expected = language_image(&m, &d1).unwrap();
        expected.extend(language_image(&m, &d2).unwrap());
        assert_eq!(language_image(&m, &union).unwrap(), expected);
    }

    #[test]
    fn morphism_dump_round_trips() {
        let dfa = Dfa::from_pattern("(ab)*", &ab()).unwrap();
        let rec = transition_monoid(&dfa, &budget()).unwrap();
        let dump = rec.morphism.dump();
        let loaded = Morphism::from_dump(&dump, &ab(), &budget()).unwrap();
        assert_eq!(loaded, rec.morphism);
    }
}
