//! Exact evaluation of graph-encoded tensor expressions over finite-dimensional
//! cyclic Hodge dGBV algebras ("cH-algebras").
//!
//! The crate is layered bottom-up:
//!
//! * [`graded`]: exact rationals, Z2 parities, Koszul signs, operators, and the
//!   commutative polynomial ring in the formal variables `T_{n,i}`.
//! * [`algebra`]: the cH-algebra data, its derived operators (`G_+`, `Π_0`,
//!   `Π_4`, `J`, the scalar product) and an exhaustive axiom checker.
//! * [`graph`]: marked graphs, vertex profiles, canonical forms and
//!   automorphism counting.
//! * [`contraction`]: the evaluation map from a marked graph to a polynomial,
//!   together with an independent brute-force oracle.
//! * [`potentials`]: enumeration of the graph classes that make up the genus
//!   expanded potentials with one-point descendants, and the closed-form KdV
//!   series for the one-dimensional algebra.
//! * [`verifier`]: WDVV, the constant relation, string, dilaton and the
//!   topological recursion relations in genus 0, 1 and 2, checked as exact
//!   polynomial identities.

pub mod algebra;
pub mod contraction;
pub mod error;
pub mod graded;
pub mod graph;
pub mod potentials;
pub mod verifier;

pub use error::{Error, Result};
