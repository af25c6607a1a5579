//! Artificial-compressibility time stepping for the incompressible
//! Stokes and Navier–Stokes equations on uniform MAC grids.
//!
//! The crate is organised bottom-up:
//!
//! * [`mac`] – staggered storage and the discrete operators,
//! * [`linsolve`] – tridiagonal line solves and conjugate-gradient solvers,
//! * [`schemes`] – the time steppers and their energy functionals,
//! * [`manufactured`] – analytic benchmark solutions and forcing,
//! * [`harness`] – convergence and stability studies, CSV and snapshots.

pub mod harness;
pub mod linsolve;
pub mod mac;
pub mod manufactured;
pub mod schemes;
