//! Exact and numerical machinery for lattice Bernoulli rational functions,
//! their N-smoothings (higher Dedekind sums), and the multiplicative
//! counterpart built from multiple elliptic gamma products.
//!
//! Everything under [`exact`], [`forms`], [`bernoulli`], [`smoothing`],
//! [`cyclotomic`], [`dedekind`] and the combinatorial part of [`cones`] is
//! exact rational / integer arithmetic.  Floating point only enters through
//! [`gamma`] (infinite products) and the residual checks that compare the two
//! worlds.

pub mod bernoulli;
pub mod cohomology;
pub mod cones;
pub mod cyclotomic;
pub mod dedekind;
pub mod error;
pub mod exact;
pub mod forms;
pub mod fuzz;
pub mod gamma;
pub mod rat;
pub mod smoothing;

pub use error::{Error, Result};
pub use rat::{Int, Rat};
