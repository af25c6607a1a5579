//! First-order grad-div splittings, the coupled first-order scheme and the
//! BDF2 bootstrap built on the Gauss-Seidel splitting.

use super::kernels::{finite_or_diverged, pressure_update, Ctx, Sweep};
use super::{Problem, SchemeConfig, SchemeError, SchemeId, SimState};
use crate::mac::{Varpi, VelocityField};

fn check_scheme(cfg: &SchemeConfig, ids: &[SchemeId]) -> Result<(), SchemeError> {
    if ids.contains(&cfg.scheme) {
        Ok(())
    } else {
        Err(SchemeError::Config(format!("stepper called with scheme {}", cfg.scheme)))
    }
}

/// Shifts the main history and installs the new level.
fn advance(state: &mut SimState, u: VelocityField, p: crate::mac::ScalarField) {
    state.u_prev = std::mem::replace(&mut state.u_now, u);
    state.p_prev = std::mem::replace(&mut state.p_now, p);
    state.n += 1;
}

/// `uⁿ + dt(fⁿ⁺¹ − ∇q − B(uⁿ))` pieces: returns `f − ∇q − nl`.
fn explicit_rhs(ctx: &Ctx<'_>, t_new: f64, q: &crate::mac::ScalarField, nl: &VelocityField) -> Result<VelocityField, SchemeError> {
    let mut r = ctx.forcing(t_new);
    r.axpy(-1.0, &ctx.grad_p(q)?);
    r.axpy(-1.0, nl);
    Ok(r)
}

/// First-order artificial compressibility:
/// `(I − dtνΔ − dt∇(ϖ div))uⁿ⁺¹ = uⁿ + dt(fⁿ⁺¹ − ∇pⁿ)`, `pⁿ⁺¹ = pⁿ − χ div uⁿ⁺¹`.
pub fn step_ac1(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check_scheme(cfg, &[SchemeId::Ac1])?;
    let ctx = Ctx::new(state, cfg, problem)?;
    let t1 = state.time() + ctx.dt;
    let nl = ctx.nl(&state.u_now)?;
    let mut rhs = explicit_rhs(&ctx, t1, &state.p_now, &nl)?;
    rhs.scale(ctx.dt);
    rhs.axpy(1.0, &state.u_now);
    let trace = |k: usize, x: [f64; 3]| problem.boundary(k, x, t1);
    let u = ctx.coupled_solve(&rhs, &trace, Some(&state.u_now))?;
    let p = pressure_update(&state.p_now, &u, &Varpi::Const(cfg.chi), 1.0)?;
    advance(state, u, p);
    finite_or_diverged(state, ctx.step)
}

struct Split {
    implicit_own: [f64; 3],
    explicit_own: [f64; 3],
    jacobi: bool,
    lagged: &'static [(usize, usize)],
}

fn split_step(state: &mut SimState, ctx: &Ctx<'_>, split: Split) -> Result<(), SchemeError> {
    let t1 = state.time() + ctx.dt;
    let nl = ctx.nl(&state.u_now)?;
    let rhs = explicit_rhs(ctx, t1, &state.p_now, &nl)?;
    let sweep = Sweep {
        alpha: 1.0,
        base: &state.u_now,
        rhs: &rhs,
        upper: &state.u_now,
        implicit_own: split.implicit_own,
        explicit_own: split.explicit_own,
        jacobi: split.jacobi,
        lagged: split.lagged,
    };
    let problem = ctx.problem;
    let trace = |k: usize, x: [f64; 3]| problem.boundary(k, x, t1);
    let u = sweep.run(ctx, &trace, Some(&state.u_now))?;
    let p = pressure_update(&state.p_now, &u, &ctx.varpi, 1.0)?;
    advance(state, u, p);
    finite_or_diverged(state, ctx.step)
}

const GS: Split = Split { implicit_own: [1.0; 3], explicit_own: [0.0; 3], jacobi: false, lagged: &[] };

/// Gauss-Seidel grad-div splitting in 2D.
pub fn step_gs2d(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check_scheme(cfg, &[SchemeId::Gs2d])?;
    let ctx = Ctx::new(state, cfg, problem)?;
    split_step(state, &ctx, GS)
}

/// Gauss-Seidel grad-div splitting in 3D; row 3 differentiates in `z`.
pub fn step_gs3d(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check_scheme(cfg, &[SchemeId::Gs3d])?;
    let ctx = Ctx::new(state, cfg, problem)?;
    split_step(state, &ctx, GS)
}

/// Jacobi splitting in 2D: `∇(ϖ div uⁿ)` plus implicit own-direction increments.
pub fn step_jacobi2d(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check_scheme(cfg, &[SchemeId::Jacobi2d])?;
    let ctx = Ctx::new(state, cfg, problem)?;
    split_step(state, &ctx, Split { implicit_own: [1.0; 3], explicit_own: [0.0; 3], jacobi: true, lagged: &[] })
}

/// Jacobi splitting with own-direction increments weighted by `d`.
pub fn step_jacobi_nd(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check_scheme(cfg, &[SchemeId::JacobiNd])?;
    let ctx = Ctx::new(state, cfg, problem)?;
    let d = cfg.dim as f64;
    split_step(state, &ctx, Split { implicit_own: [d; 3], explicit_own: [d - 1.0; 3], jacobi: true, lagged: &[] })
}

/// Gauss-Seidel in 3D with the own-direction terms `∂_y(ϖ∂_y(2u₂ⁿ⁺¹ − u₂ⁿ))`
/// and `∂_z(ϖ∂_z(2u₃ⁿ⁺¹ − u₃ⁿ))`; row 3 reads `u₂ⁿ`.
pub fn step_gs3d_modified(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check_scheme(cfg, &[SchemeId::Gs3dModified])?;
    let ctx = Ctx::new(state, cfg, problem)?;
    split_step(
        state,
        &ctx,
        Split { implicit_own: [1.0, 2.0, 2.0], explicit_own: [0.0, 1.0, 1.0], jacobi: false, lagged: &[(2, 1)] },
    )
}

/// BDF2 bootstrap: a Gauss-Seidel step for the predictor `(ũ, p̃)` followed
/// by a BDF2 step whose pressure carries the predictor's increment.
pub fn step_bdf2_bootstrap(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check_scheme(cfg, &[SchemeId::Bdf2Bootstrap])?;
    let ctx = Ctx::new(state, cfg, problem)?;
    let dt = ctx.dt;
    let t1 = state.time() + dt;
    let trace = |k: usize, x: [f64; 3]| problem.boundary(k, x, t1);

    // predictor
    let nl_t = ctx.nl(&state.tilde_u_now)?;
    let rhs_t = explicit_rhs(&ctx, t1, &state.tilde_p_now, &nl_t)?;
    let ut = Sweep {
        alpha: 1.0,
        base: &state.tilde_u_now,
        rhs: &rhs_t,
        upper: &state.tilde_u_now,
        implicit_own: [1.0; 3],
        explicit_own: [0.0; 3],
        jacobi: false,
        lagged: &[],
    }
    .run(&ctx, &trace, Some(&state.tilde_u_now))?;
    let pt = pressure_update(&state.tilde_p_now, &ut, &ctx.varpi, 1.0)?;

    // corrector
    let mut q = state.p_now.clone();
    q.axpy(1.0, &pt);
    q.axpy(-1.0, &state.tilde_p_now);
    let mut nl = ctx.nl(&state.u_now)?;
    nl.scale(2.0);
    nl.axpy(-1.0, &ctx.nl(&state.u_prev)?);
    let rhs = explicit_rhs(&ctx, t1, &q, &nl)?;
    let base = VelocityField::lincomb(2.0, &state.u_now, -0.5, &state.u_prev);
    let upper = VelocityField::lincomb(2.0, &state.u_now, -1.0, &state.u_prev);
    let u = Sweep {
        alpha: 1.5,
        base: &base,
        rhs: &rhs,
        upper: &upper,
        implicit_own: [1.0; 3],
        explicit_own: [0.0; 3],
        jacobi: false,
        lagged: &[],
    }
    .run(&ctx, &trace, Some(&upper))?;
    let p = pressure_update(&q, &u, &ctx.varpi, 1.0)?;

    state.tilde_u_prev = std::mem::replace(&mut state.tilde_u_now, ut);
    state.tilde_p_prev = std::mem::replace(&mut state.tilde_p_now, pt);
    advance(state, u, p);
    finite_or_diverged(state, ctx.step)
}
