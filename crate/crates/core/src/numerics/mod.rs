//! Dense linear solvers, fixed-point iteration and the error function.

mod matrix;
mod solve;
mod special;

pub use matrix::{inf_norm, Matrix};
pub use solve::{
    lu_solve, neumann_solve, SolveMethod, SolveReport, DEFAULT_MAX_ITER, DEFAULT_TOL,
    DIRECT_RESIDUAL, SINGULAR_PIVOT,
};
pub use special::{argerf, erf, erfc};
