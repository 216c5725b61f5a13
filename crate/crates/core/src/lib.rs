//! Brouwer degree, fixed-point indices and isolating-block boundary analysis
//! for smooth vector fields on ℝⁿ.

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod block;
pub mod cli;
pub mod cubical;
pub mod degree;
pub mod field;
pub mod flow;
pub mod verify;
