//! Computations with simply connected abelian locally Nash groups.
//!
//! * [`lattice`]: discrete subgroups of ℂⁿ (n ≤ 2) and their integer algebra.
//! * [`weierstrass`]: σ, ζ, ℘, ℘′ over lattices of ℂ and their identities.
//! * [`structures`]: the one- and two-dimensional model structures, their
//!   period groups and ℤ-ranks.
//! * [`relations`]: numerical detection of polynomial relations, including
//!   algebraic addition theorems.
//! * [`classify`]: canonical forms and isomorphism verdicts.

pub mod classify;
pub mod lattice;
pub mod parse;
pub mod relations;
pub mod report;
pub mod structures;
pub mod weierstrass;

pub use num_complex::Complex64;
