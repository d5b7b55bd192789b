//! Exact combinatorial machinery for free-group automorphisms and finite topology.
//!
//! The crate is organised around three layers:
//!
//! * words and automorphisms of a free group `F_n` ([`freegroup`], [`autos`]),
//!   with the Whitehead generator calculus and semantic verification of the
//!   classical presentations of `Aut(F_n)` and its prefix stabilizers
//!   ([`presentations`]);
//! * orbit minimization of word tuples under Whitehead automorphisms, the
//!   minimal level graph, stabilizer presentations, and the derived
//!   partial-basis decision and basis-extension procedures ([`whitehead`]);
//! * finite simplicial complexes and posets with exact integer homology
//!   ([`topology`]), spherical-map checking with a constructive top-homology
//!   basis ([`quillen`]), and bounded truncations of the partial-basis
//!   complex with free-factor arithmetic ([`pbcomplex`]).
//!
//! Everything is exact: homology is computed over arbitrary-precision
//! integers via Smith normal form, and every certificate (invertibility,
//! basis extension, unimodular change of basis) can be re-checked by direct
//! evaluation.

pub mod autos;
pub mod error;
pub mod freegroup;
pub mod pbcomplex;
pub mod presentations;
pub mod quillen;
pub mod topology;
pub mod whitehead;
pub mod zmatrix;

pub use error::Error;

/// Version string embedded in every JSON report.
pub const VERSION: &str = concat!("pbcx ", env!("CARGO_PKG_VERSION"));
