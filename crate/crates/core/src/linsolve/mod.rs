//! Linear solvers: Thomas line solves, preconditioned CG, and the implicit
//! velocity systems used by the time steppers.

mod cg;
mod coupled;
mod helmholtz;
mod tridiag;

pub use cg::pcg;
pub use coupled::{coupled_graddiv_solve, VectorTrace};
pub use helmholtz::{
    factored_solve_line_sweep, helmholtz_solve, line_sweep_with_bc, Helmholtz, HelmholtzSystem, LinePreconditioner,
    OwnTerm, Precond, Trace,
};
pub use tridiag::{thomas_solve, Tridiag, TridiagFactor};

use crate::mac::GridError;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// Relative residual `‖b − Ax‖ / ‖b‖` at exit.
    pub final_residual: f64,
    pub converged: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("singular tridiagonal system: pivot {pivot:e} at row {row}")]
    Singular { row: usize, pivot: f64 },
    #[error("iterative solve did not converge: {} iterations, residual {:e}", .0.iterations, .0.final_residual)]
    NotConverged(SolveStats),
    #[error("invalid solver input: {0}")]
    Param(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    Jacobi,
    Line,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Relative residual tolerance.
    pub tol: f64,
    /// Iteration cap; `None` uses `cap_factor · n^(1/dim)`.
    pub max_iter: Option<usize>,
    pub cap_factor: usize,
    pub preconditioner: Preconditioner,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: None, cap_factor: 10, preconditioner: Preconditioner::Line }
    }
}

impl SolverOptions {
    pub fn max_iter_for(&self, n_dofs: usize, dim: usize) -> usize {
        self.max_iter.unwrap_or_else(|| {
            let side = (n_dofs.max(1) as f64).powf(1.0 / dim as f64).ceil() as usize;
            (self.cap_factor * side).max(50)
        })
    }
}
