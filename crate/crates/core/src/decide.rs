//! Query layer: reduce separation, covering and membership to imprint
//! computations and assemble verdicts.
//!
//! For a pair (L1, L2), a joint recognizing morphism `η` is built as the
//! image-restricted product of the transition monoids, with accepting
//! element sets F1, F2, and `ρ(K) = η(K)` rates covers.
//!
//! * Boolean levels (`BPol`): L1 is separable from L2 iff no value `T` of
//!   the optimal universal imprint meets both F1 and F2. If such a `T`
//!   exists, every universal cover has a piece meeting both languages; if
//!   none does, the pieces of an optimal universal cover that meet L1 form
//!   a separator (the level is closed under union, and complements of
//!   partial covers stay in the class).
//! * Half levels (`Pol`): with the `C`-compatible morphism `α = η × c`,
//!   L1 is separable from L2 iff the pointed imprint has no pair `(s, T)`
//!   with the `η`-projection of `s` accepting for L1 and `T` meeting F2.
//!   L1 is the union of the `α⁻¹(s)` over those `s`, so its optimal
//!   imprint is the union of their value sets.
//!
//! Covering generalizes the Boolean test: a pair is uncoverable iff some
//! imprint value meets every accepting set. Membership is separation from
//! the complement.

use serde::Serialize;

use crate::algebra::{joint_morphism, transition_monoid, Morphism};
use crate::automata::Dfa;
use crate::basis::{Basis, BasisKind, CompatibleMorphism};
use crate::bpol::{bpol_imprint, BpolTraceEntry};
use crate::pol::{pol_saturate, WorkOrder};
use crate::rating::{RatingMap, RatingValue};
use crate::{Budget, Error, Result};

/// The decidable levels: Straubing-Thérien 1/2, 1 and 2, dot-depth 1/2 and
/// 1, plus Pol of the alphabet-testable languages (the half level below
/// ST level 2 in its hierarchy). ST level 2 runs over the
/// alphabet-testable basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    StHalf,
    St1,
    PolAt,
    St2,
    DdHalf,
    Dd1,
}

impl Level {
    pub const ALL: [Level; 6] = [
        Level::StHalf,
        Level::St1,
        Level::PolAt,
        Level::St2,
        Level::DdHalf,
        Level::Dd1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Level::StHalf => "st_half",
            Level::St1 => "st1",
            Level::PolAt => "pol_at",
            Level::St2 => "st2",
            Level::DdHalf => "dd_half",
            Level::Dd1 => "dd1",
        }
    }

    pub fn parse(name: &str) -> Result<Level> {
        match name {
            "st_half" | "st1/2" | "sthalf" => Ok(Level::StHalf),
            "st1" => Ok(Level::St1),
            "pol_at" | "polat" => Ok(Level::PolAt),
            "st2" => Ok(Level::St2),
            "dd_half" | "dd1/2" | "ddhalf" => Ok(Level::DdHalf),
            "dd1" => Ok(Level::Dd1),
            other => Err(Error::UnknownLevel(other.to_string())),
        }
    }

    pub fn basis_kind(self) -> BasisKind {
        match self {
            Level::StHalf | Level::St1 => BasisKind::St0,
            Level::PolAt | Level::St2 => BasisKind::At,
            Level::DdHalf | Level::Dd1 => BasisKind::Dd0,
        }
    }

    /// Full levels are Boolean algebras (closed under complement); half
    /// levels are not.
    pub fn is_boolean(self) -> bool {
        matches!(self, Level::St1 | Level::St2 | Level::Dd1)
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Answer {
    Separable,
    Inseparable,
    Coverable,
    Uncoverable,
    Member,
    NonMember,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Separable => "Separable",
            Answer::Inseparable => "Inseparable",
            Answer::Coverable => "Coverable",
            Answer::Uncoverable => "Uncoverable",
            Answer::Member => "Member",
            Answer::NonMember => "NonMember",
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Answer::Separable | Answer::Coverable | Answer::Member)
    }
}

/// A witnessing imprint value for negative verdicts: it meets every
/// relevant accepting set. Labels are the shortest witness words of its
/// elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadValue {
    pub elements: Vec<usize>,
    pub labels: Vec<String>,
}

impl BadValue {
    fn new(rho: &RatingMap, value: RatingValue) -> BadValue {
        BadValue {
            elements: value.elements().collect(),
            labels: rho.value_labels(value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sizes {
    /// Size of the monoid driving the saturation (for half levels this is
    /// the compatible product, for full levels the rating base itself).
    pub monoid: usize,
    /// Size of the rating base `N` (the rating set is `2^N`).
    pub rating_base: usize,
    /// Number of `~C`-classes of the level's basis.
    pub classes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Iterations {
    /// Outer (greatest-fixpoint) iterations; 1 for least fixpoints.
    pub outer: usize,
    /// Work items of the last inner fixpoint.
    pub frontier: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_value: Option<BadValue>,
    pub sizes: Sizes,
    pub iterations: Iterations,
    /// Outer-iteration sizes of the greatest fixpoint (empty for half
    /// levels); diagnostics only, not part of the report payload.
    #[serde(skip)]
    pub trace: Vec<BpolTraceEntry>,
}

/// Joint recognizer of a family of languages: one morphism, one accepting
/// element set per language.
pub struct JointRecognizer {
    pub rho: RatingMap,
    pub accepting: Vec<RatingValue>,
}

impl JointRecognizer {
    pub fn new(languages: &[&Dfa], budget: &Budget) -> Result<JointRecognizer> {
        assert!(!languages.is_empty());
        let alphabet = languages[0].alphabet();
        if languages.iter().any(|l| l.alphabet() != alphabet) {
            return Err(Error::AlphabetMismatch);
        }
        let recognized: Vec<_> = languages
            .iter()
            .map(|l| transition_monoid(l, budget))
            .collect::<Result<_>>()?;
        let morphisms: Vec<&Morphism> = recognized.iter().map(|r| &r.morphism).collect();
        let (eta, projections) = joint_morphism(&morphisms, budget)?;
        let accepting = recognized
            .iter()
            .zip(&projections)
            .map(|(rec, proj)| {
                RatingValue::from_elements(
                    proj.iter()
                        .enumerate()
                        .filter(|(_, x)| rec.accepting.contains(x))
                        .map(|(i, _)| i),
                )
            })
            .collect();
        let rho = RatingMap::new(eta, budget)?;
        Ok(JointRecognizer { rho, accepting })
    }
}

/// Is L1 separable from L2 by a language of the level? Checks the overlap
/// precondition first (overlapping inputs are never separable), then runs
/// the level's imprint engine.
pub fn separation(l1: &Dfa, l2: &Dfa, level: Level, budget: &Budget) -> Result<Verdict> {
    let joint = JointRecognizer::new(&[l1, l2], budget)?;
    let basis = Basis::builtin(level.basis_kind(), l1.alphabet(), budget)?;
    separation_with(l1, l2, &joint, &basis, level.is_boolean(), budget)
}

/// [`separation`] over an explicit basis (e.g. a user-supplied congruence);
/// `boolean` picks the engine: the Boolean-closure one or the half-level
/// pointed one.
pub fn separation_with(
    l1: &Dfa,
    l2: &Dfa,
    joint: &JointRecognizer,
    basis: &Basis,
    boolean: bool,
    budget: &Budget,
) -> Result<Verdict> {
    if let Some(witness) = l1.intersect(l2)?.shortest_word() {
        let value = joint.rho.of_word(&witness);
        return Ok(Verdict {
            answer: Answer::Inseparable,
            bad_value: Some(BadValue::new(&joint.rho, value)),
            sizes: Sizes {
                monoid: joint.rho.base_size(),
                rating_base: joint.rho.base_size(),
                classes: basis.class_count(),
            },
            iterations: Iterations {
                outer: 0,
                frontier: 0,
            },
            trace: Vec::new(),
        });
    }
    separation_engine_with(joint, basis, boolean, budget)
}

/// The imprint engine behind [`separation`], without the overlap shortcut.
/// Exposed so tests can check that the engines agree with the precondition.
pub fn separation_engine(
    joint: &JointRecognizer,
    level: Level,
    budget: &Budget,
) -> Result<Verdict> {
    let basis = Basis::builtin(level.basis_kind(), joint.rho.eta().alphabet(), budget)?;
    separation_engine_with(joint, &basis, level.is_boolean(), budget)
}

/// Engine core shared by all separation entry points.
pub fn separation_engine_with(
    joint: &JointRecognizer,
    basis: &Basis,
    boolean: bool,
    budget: &Budget,
) -> Result<Verdict> {
    let [f1, f2] = [joint.accepting[0], joint.accepting[1]];
    let rho = &joint.rho;

    if boolean {
        let run = bpol_imprint(basis, rho, budget, WorkOrder::Fifo)?;
        let universal = run.imprint.universal();
        let bad = universal
            .maximal()
            .iter()
            .find(|&&t| t.meets(f1) && t.meets(f2))
            .copied();
        Ok(Verdict {
            answer: if bad.is_some() {
                Answer::Inseparable
            } else {
                Answer::Separable
            },
            bad_value: bad.map(|t| BadValue::new(rho, t)),
            sizes: Sizes {
                monoid: rho.base_size(),
                rating_base: rho.base_size(),
                classes: basis.class_count(),
            },
            iterations: Iterations {
                outer: run.outer_iterations,
                frontier: run.frontier_triples,
            },
            trace: run.trace,
        })
    } else {
        let alpha = CompatibleMorphism::new(rho.eta(), basis, budget)?;
        let run = pol_saturate(&alpha, rho, budget, WorkOrder::Fifo)?;
        let mut bad = None;
        'outer: for s in 0..alpha.size() {
            if !f1.contains(alpha.eta_of(s)) {
                continue;
            }
            for &t in run.imprint.values(s).maximal() {
                if t.meets(f2) {
                    bad = Some(t);
                    break 'outer;
                }
            }
        }
        Ok(Verdict {
            answer: if bad.is_some() {
                Answer::Inseparable
            } else {
                Answer::Separable
            },
            bad_value: bad.map(|t| BadValue::new(rho, t)),
            sizes: Sizes {
                monoid: alpha.size(),
                rating_base: rho.base_size(),
                classes: basis.class_count(),
            },
            iterations: Iterations {
                outer: 1,
                frontier: run.work_items,
            },
            trace: Vec::new(),
        })
    }
}

/// Does `l0` admit a cover by languages of the level in which every piece
/// misses some member of `langs`? Only Boolean levels are supported: the
/// reduction through universal covers needs closure under complement.
pub fn covering(l0: &Dfa, langs: &[Dfa], level: Level, budget: &Budget) -> Result<Verdict> {
    if !level.is_boolean() {
        return Err(Error::CoveringNeedsBooleanLevel(level.name().to_string()));
    }
    let mut languages: Vec<&Dfa> = vec![l0];
    languages.extend(langs.iter());
    let joint = JointRecognizer::new(&languages, budget)?;
    let basis = Basis::builtin(level.basis_kind(), l0.alphabet(), budget)?;
    covering_with(&joint, &basis, budget)
}

/// [`covering`] over an explicit basis; the engine is always the Boolean
/// one (Pol-level covering is rejected upstream, not approximated).
pub fn covering_with(joint: &JointRecognizer, basis: &Basis, budget: &Budget) -> Result<Verdict> {
    let rho = &joint.rho;
    let run = bpol_imprint(basis, rho, budget, WorkOrder::Fifo)?;
    let universal = run.imprint.universal();
    let bad = universal
        .maximal()
        .iter()
        .find(|&&t| joint.accepting.iter().all(|&f| t.meets(f)))
        .copied();
    Ok(Verdict {
        answer: if bad.is_some() {
            Answer::Uncoverable
        } else {
            Answer::Coverable
        },
        bad_value: bad.map(|t| BadValue::new(rho, t)),
        sizes: Sizes {
            monoid: rho.base_size(),
            rating_base: rho.base_size(),
            classes: basis.class_count(),
        },
        iterations: Iterations {
            outer: run.outer_iterations,
            frontier: run.frontier_triples,
        },
        trace: run.trace,
    })
}

/// Membership: a language is in the level iff it is separable from its
/// complement.
pub fn membership(l: &Dfa, level: Level, budget: &Budget) -> Result<Verdict> {
    let mut verdict = separation(l, &l.complement(), level, budget)?;
    verdict.answer = match verdict.answer {
        Answer::Separable => Answer::Member,
        Answer::Inseparable => Answer::NonMember,
        other => other,
    };
    Ok(verdict)
}
