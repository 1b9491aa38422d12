//! Exact integer / rational linear algebra and Fourier–Motzkin elimination.

pub mod fm;
pub mod linalg;

pub use fm::{fm_feasible, Constraint, IneqSystem, Rel};
pub use linalg::{
    adjugate, det_int, det_rat, hnf_solve, primitive_part, rank_int, rank_rat, LinearSolution,
};
