//! Deciding separation, covering and membership for the low levels of
//! concatenation hierarchies of regular languages (Straubing-Thérien levels
//! 1/2, 1 and 2, dot-depth 1/2 and 1).
//!
//! The decision procedures reduce every query to the computation of an
//! optimal imprint over a finite idempotent semiring `2^N`, where `N` is a
//! monoid recognizing the input languages. Two fixpoint engines do the work:
//!
//! * [`pol::pol_saturate`] computes the pointed `Pol(C)`-optimal imprint as a
//!   least fixpoint (half levels),
//! * [`bpol::bpol_imprint`] computes the class-pointed `BPol(C)`-optimal
//!   imprint as a greatest fixpoint whose inner step is itself a least
//!   fixpoint (full levels).
//!
//! [`decide`] wires both engines to a small registry of hierarchy levels and
//! [`oracles`] provides independent ground truth (Simon's theorem, shuffle
//! ideals, subword profiles) used by the test suite.

pub mod algebra;
pub mod automata;
pub mod basis;
pub mod bpol;
pub mod decide;
mod error;
pub mod limits;
pub mod oracles;
pub mod pol;
pub mod rating;

pub use error::Error;
pub use limits::{Budget, Limits};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
