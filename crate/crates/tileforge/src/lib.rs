//! tileforge: translational tiling equations over explicit finitely generated
//! abelian groups, a chain of reduction passes between constraint languages
//! (local Boolean constraints, linear Boolean systems, Hamming-cube functional
//! equations, functional equations, tiling systems, single stacked tiling
//! equations), and the oracles used to check every stage: an exact-cover SAT
//! backend, one-dimensional periodization, finite-abelian Fourier analysis,
//! and Monte-Carlo cover checks for the permutation-group encodings.
//!
//! The crate is organized to mirror that chain:
//!
//! * [`groups`] — explicit groups, elements, finite/periodic/symbolic sets;
//! * [`tiling`] — tiling equations and systems, exact-cover verification on
//!   toruses and windows, periodization, fiber swapping, Fourier machinery;
//! * [`solver`] — CNF encoding, a complete backtracking SAT solver, solution
//!   enumeration, DIMACS export, and the dual semi-decision search;
//! * [`reduct`] — the reduction passes, each a value-to-value transformation
//!   with solution maps in both directions;
//! * [`nonab`] — permutations of `Z_4^2` in additive notation and sampled
//!   exact-cover verification of the nonabelian encodings;
//! * [`cli`] — file formats and the subcommand front end.
//!
//! Runnable walkthroughs for each capability live under `examples/`.

pub mod cli;
pub mod error;
pub mod groups;
pub mod nonab;
pub mod reduct;
pub mod solver;
pub mod tiling;

pub use error::{Error, Result};
