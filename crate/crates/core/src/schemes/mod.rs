//! Artificial-compressibility time steppers and their energy functionals.
//!
//! Every stepper advances a [`SimState`] by one `dt`. Velocity components
//! are solved one at a time through scalar Helmholtz problems except for
//! the coupled baselines (`ac1`, `defect*_coupled`), which solve the full
//! grad-div system.

mod config;
mod defect;
mod dirsplit;
mod energy;
mod first_order;
mod kernels;
mod state;

pub use config::{CrossCorrection, SchemeConfig, SchemeId};
pub use energy::{energy, lemma_identity, EnergyBreakdown};
pub use state::SimState;

pub use defect::{step_defect, step_defect2_coupled, step_defect2_split, step_defect3_coupled, step_defect3_split};
pub use dirsplit::{step_dirsplit1, step_dirsplit_defect2};
pub use first_order::{
    step_ac1, step_bdf2_bootstrap, step_gs2d, step_gs3d, step_gs3d_modified, step_jacobi2d,
    step_jacobi_nd,
};

use crate::linsolve::SolveError;
use crate::mac::GridError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("linear solve failed at step {step}: {source}")]
    Solver { step: usize, source: SolveError },
    #[error("non-finite values after step {step}")]
    Diverged { step: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Forcing and Dirichlet data of a flow problem.
pub trait Problem: Sync {
    /// Component `k` of the body force at `x`, time `t`.
    fn forcing(&self, k: usize, x: [f64; 3], t: f64) -> f64;
    /// Component `k` of the boundary velocity at `x`, time `t`.
    fn boundary(&self, k: usize, x: [f64; 3], t: f64) -> f64;
}

/// Zero forcing and no-slip walls.
#[derive(Clone, Copy, Debug, Default)]
pub struct Unforced;

impl Problem for Unforced {
    fn forcing(&self, _: usize, _: [f64; 3], _: f64) -> f64 {
        0.0
    }
    fn boundary(&self, _: usize, _: [f64; 3], _: f64) -> f64 {
        0.0
    }
}

/// Advances `state` by one step of the configured scheme.
pub fn step(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    match cfg.scheme {
        SchemeId::Ac1 => step_ac1(state, cfg, problem),
        SchemeId::Gs2d => step_gs2d(state, cfg, problem),
        SchemeId::Jacobi2d => step_jacobi2d(state, cfg, problem),
        SchemeId::JacobiNd => step_jacobi_nd(state, cfg, problem),
        SchemeId::Gs3d => step_gs3d(state, cfg, problem),
        SchemeId::Gs3dModified => step_gs3d_modified(state, cfg, problem),
        SchemeId::Dirsplit1 => step_dirsplit1(state, cfg, problem),
        SchemeId::DirsplitDefect2 => step_dirsplit_defect2(state, cfg, problem),
        SchemeId::Bdf2Bootstrap => step_bdf2_bootstrap(state, cfg, problem),
        SchemeId::Defect3Coupled => step_defect3_coupled(state, cfg, problem),
        SchemeId::Defect3Split => step_defect3_split(state, cfg, problem),
        SchemeId::Defect2Coupled => step_defect2_coupled(state, cfg, problem),
        SchemeId::Defect2Split => step_defect2_split(state, cfg, problem),
    }
}
