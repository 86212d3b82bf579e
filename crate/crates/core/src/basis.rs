//! Bases of concatenation hierarchies: finite quotienting Boolean algebras.
//!
//! A basis is represented by a surjective class morphism `c: A* -> M_C`
//! whose kernel is a finite-index congruence; the Boolean algebra itself is
//! implicit as "unions of classes". Built-ins:
//!
//! * `st0`: the trivial congruence (classes `{A*}`),
//! * `dd0`: empty word vs. nonempty words (classes `{ε}` and `A+`),
//! * `at`: alphabet testability (`c(w)` is the set of letters of `w`).
//!
//! User-defined bases come in only through [`Basis::from_morphism`], which
//! guarantees the quotienting-Boolean-algebra axioms by construction.

use std::collections::BTreeSet;

use crate::algebra::{joint_morphism, FiniteMonoid, Morphism};
use crate::automata::Alphabet;
use crate::{Budget, Error, Result};

/// Built-in basis selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    St0,
    Dd0,
    At,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::St0 => "st0",
            BasisKind::Dd0 => "dd0",
            BasisKind::At => "at",
        }
    }

    pub fn parse(name: &str) -> Result<BasisKind> {
        match name {
            "st0" => Ok(BasisKind::St0),
            "dd0" => Ok(BasisKind::Dd0),
            "at" => Ok(BasisKind::At),
            other => Err(Error::UnknownBasis(other.to_string())),
        }
    }
}

/// A finite quotienting Boolean algebra, given by its class morphism. Every
/// class has a nonempty preimage, witnessed by the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    name: String,
    class_morphism: Morphism,
}

impl Basis {
    pub fn builtin(kind: BasisKind, alphabet: &Alphabet, budget: &Budget) -> Result<Basis> {
        let class_morphism = match kind {
            BasisKind::St0 => Morphism::trivial(alphabet.clone()),
            BasisKind::Dd0 => {
                // {1, p} with p absorbing; every letter maps to p.
                let table = vec![0, 1, 1, 1];
                let monoid = FiniteMonoid::new_unchecked(2, table, 0);
                let images = vec![1; alphabet.len()];
                Morphism::from_parts(alphabet.clone(), monoid, images, budget)?
            }
            BasisKind::At => {
                // (2^A, ∪): element = set of letters, encoded as a bitmask.
                let size = 1usize << alphabet.len();
                budget.check_monoid(size)?;
                let mut table = Vec::with_capacity(size * size);
                for x in 0..size {
                    for y in 0..size {
                        table.push(x | y);
                    }
                }
                let monoid = FiniteMonoid::new_unchecked(size, table, 0);
                let images = (0..alphabet.len()).map(|a| 1usize << a).collect();
                Morphism::from_parts(alphabet.clone(), monoid, images, budget)?
            }
        };
        Ok(Basis {
            name: kind.name().to_string(),
            class_morphism,
        })
    }

    /// Basis whose classes are the image-restricted elements of `m`'s
    /// target: the unions of classes of any finite-index congruence form a
    /// finite quotienting Boolean algebra.
    pub fn from_morphism(name: impl Into<String>, m: &Morphism, budget: &Budget) -> Result<Basis> {
        Ok(Basis {
            name: name.into(),
            class_morphism: m.image_restricted(budget)?,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.class_morphism.alphabet()
    }

    pub fn class_morphism(&self) -> &Morphism {
        &self.class_morphism
    }

    pub fn class_count(&self) -> usize {
        self.class_morphism.target().size()
    }

    /// The class monoid `M_C = A*/~C`.
    pub fn class_monoid(&self) -> &FiniteMonoid {
        self.class_morphism.target()
    }

    pub fn class_of_word(&self, word: &str) -> usize {
        self.class_morphism.eval(word)
    }

    /// Shortest witness word of a class.
    pub fn class_label(&self, class: usize) -> &str {
        self.class_morphism.label(class)
    }
}

/// The image of the product morphism `c × η`: all pairs `(c(w), η(w))`,
/// with the per-class projection `class_image(D) = η(D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachPairs {
    pairs: BTreeSet<(usize, usize)>,
    per_class: Vec<BTreeSet<usize>>,
}

impl ReachPairs {
    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, class: usize, element: usize) -> bool {
        self.pairs.contains(&(class, element))
    }

    /// `η(D)` for a class `D`; nonempty for every class of the basis.
    pub fn class_image(&self, class: usize) -> &BTreeSet<usize> {
        &self.per_class[class]
    }
}

/// Compute the reachable `(class, element)` pairs of `c × η` by closure
/// from `(c(ε), η(ε))` and the letter pairs under componentwise product.
pub fn reach_pairs(basis: &Basis, eta: &Morphism, budget: &Budget) -> Result<ReachPairs> {
    let (_, projections) = joint_morphism(&[basis.class_morphism(), eta], budget)?;
    let mut pairs = BTreeSet::new();
    let mut per_class = vec![BTreeSet::new(); basis.class_count()];
    for (&class, &elem) in projections[0].iter().zip(&projections[1]) {
        pairs.insert((class, elem));
        per_class[class].insert(elem);
    }
    Ok(ReachPairs { pairs, per_class })
}

/// A `C`-compatible morphism: the image-restricted product `η × c`. Every
/// element carries its `~C`-class (second projection) and its `η`-image
/// (first projection); it recognizes every language `η` recognizes.
#[derive(Debug, Clone)]
pub struct CompatibleMorphism {
    morphism: Morphism,
    eta_of: Vec<usize>,
    class_of: Vec<usize>,
    class_count: usize,
}

impl CompatibleMorphism {
    pub fn new(eta: &Morphism, basis: &Basis, budget: &Budget) -> Result<CompatibleMorphism> {
        let (morphism, projections) = joint_morphism(&[eta, basis.class_morphism()], budget)?;
        let [eta_of, class_of] = <[Vec<usize>; 2]>::try_from(projections).unwrap();
        Ok(CompatibleMorphism {
            morphism,
            eta_of,
            class_of,
            class_count: basis.class_count(),
        })
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn size(&self) -> usize {
        self.morphism.target().size()
    }

    /// First projection: the `η`-image of an element.
    pub fn eta_of(&self, element: usize) -> usize {
        self.eta_of[element]
    }

    /// Second projection: the `~C`-class of an element.
    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// `η(D)` for a class `D`, read off the element list (the element set of
    /// the compatible morphism is exactly the reachable pair set).
    pub fn class_image(&self, class: usize) -> BTreeSet<usize> {
        self.eta_of
            .iter()
            .zip(&self.class_of)
            .filter(|&(_, &d)| d == class)
            .map(|(&n, _)| n)
            .collect()
    }
}
