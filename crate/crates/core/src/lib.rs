//! Universal-group entropy toolkit.
//!
//! Trace-form entropies `S[p] = k_B Σ p_i G(ln 1/p_i)` are generated by a
//! group exponential `G`; the composition rule of independent systems is the
//! formal group law `Φ(x,y) = G(F(x) + F(y))` with `F` the compositional
//! inverse of `G`. The crate provides
//!
//! - [`series`]: exact/floating truncated power series, composition, reversion;
//! - [`formal_group`]: group-law construction and exact axiom verification;
//! - [`entropy`]: a catalog of entropies, evaluation and expansions, and the
//!   incomplete-gamma machinery behind `S_{c,d}`;
//! - [`axioms`]: property checkers for the Shannon-Khinchin axioms,
//!   composability and concavity;
//! - [`thermo`]: occupation laws, microcanonical entropy, MaxEnt solutions;
//! - [`cli`]: the batch command-line front end.

// `!(x > 0.0)` is the idiom used throughout to reject NaN alongside bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
pub mod cli;
pub mod coeff;
pub mod entropy;
pub mod formal_group;
pub mod numeric;
pub mod series;
pub mod thermo;

pub use coeff::{Coefficient, Param};
pub use entropy::{Distribution, EntropyKind, EntropySpec};
pub use formal_group::{BivariateTruncated, GroupLaw};
pub use series::{ExactSeries, FloatSeries, TruncatedSeries};
