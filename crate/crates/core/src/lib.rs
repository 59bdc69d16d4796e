//! Point sets with small difference sets and strong local properties.
//!
//! The sets are projections of the hypercube `{0,1}^n` onto a line along
//! rationally independent generators. Every element is modelled exactly as
//! a 0/1 coefficient vector whose base-3 value stands in for the real number,
//! so every difference-set count in this crate is integer-exact.
//!
//! The crate is organised around the things you can do with such a set:
//!
//! - [`construction`]: build `P_n`, truncations and comparison baselines.
//! - [`diffset`]: count `|A - A|`, `|A - B|`, positive differences and profiles.
//! - [`verifier`]: check that every `k`-subset spans at least `k^{log2 3}`
//!   differences (exhaustively or by branch-and-bound) and instrument the
//!   inductive proof of that bound node by node.
//! - [`prover`]: interval-arithmetic certificates for the analytic
//!   inequalities the induction relies on.
//! - [`cli`]: the `diffset` command-line front end.

pub mod cli;
pub mod construction;
pub mod diffset;
mod error;
pub mod interval;
pub mod io;
pub mod model;
pub mod powers;
pub mod prover;
pub mod verifier;

pub use construction::{
    build_baseline, build_pn, build_truncated, BaselineKind, GroundSet, IntegerSet, PointSet,
};
pub use diffset::{cross_diff_count, diff_count, diff_profile, distance_count};
pub use error::{Error, Result};
pub use interval::Interval;
pub use model::{
    difference, embed_base3, threshold_holds, CoefficientVector, DifferenceVector, ExactExponent,
    SubsetMask,
};
