//! Factored direction-splitting schemes (2D, constant `ϖ`).
//!
//! Component `k` is advanced through
//! `(I − dt/2 (ν+ϖ)∂_kk)(I − dt/2 ν∂_oo) w = r`, `uₖⁿ⁺¹ = uₖⁿ + dt·w`,
//! each factor inverted by tridiagonal solves along grid lines.

use super::kernels::{finite_or_diverged, pressure_update, Ctx};
use super::{Problem, SchemeConfig, SchemeError, SchemeId, SimState};
use crate::linsolve::line_sweep_with_bc;
use crate::mac::{apply_dirichlet, div_kappa_grad, ScalarField, VelocityField};

/// Inputs of one factored step.
struct Factored<'s> {
    u_now: &'s VelocityField,
    p_half: &'s ScalarField,
    nl: &'s VelocityField,
    /// Argument `a` of the explicit cross term `∂_x(ϖ∂_y a)` in row 1.
    cross_arg: &'s ScalarField,
}

fn factored_step(ctx: &Ctx<'_>, t_n: f64, inp: &Factored<'_>) -> Result<VelocityField, SchemeError> {
    let dt = ctx.dt;
    let nu = ctx.nu;
    let varpi = ctx.varpi.constant().ok_or_else(|| SchemeError::Config("direction splitting needs constant varpi".into()))?;
    let t1 = t_n + dt;
    let problem = ctx.problem;
    let f = ctx.forcing(t_n + 0.5 * dt);
    let gp = ctx.grad_p(inp.p_half)?;
    let mut out = VelocityField::zeros(&ctx.grid);
    for k in 0..2 {
        let o = 1 - k;
        let mut kappa = [0.0; 2];
        kappa[k] = nu + varpi;
        kappa[o] = nu;
        let uk = inp.u_now.comp(k);
        let mut r = f.comp(k).clone();
        r.axpy(-1.0, gp.comp(k));
        r.axpy(-1.0, inp.nl.comp(k));
        r.axpy(1.0, &div_kappa_grad(uk, &kappa)?);
        if k == 0 {
            r.axpy(1.0, &ctx.cross(0, 1, inp.cross_arg)?);
        } else {
            let s = ScalarField::lincomb(0.5, out.comp(0), 0.5, inp.u_now.comp(0));
            r.axpy(1.0, &ctx.cross(1, 0, &s)?);
        }
        // boundary data of w and of the intermediate z = (I − dt/2 ν∂_oo) w
        let mut wb = ScalarField::zeros(&ctx.grid, uk.location());
        apply_dirichlet(&mut wb, |x| (problem.boundary(k, x, t1) - problem.boundary(k, x, t_n)) / dt);
        let mut lo = [0.0; 2];
        lo[o] = nu;
        let dww = div_kappa_grad(&wb, &lo)?;
        let mut zb = wb.clone();
        let mut walls = Vec::new();
        zb.for_each_owned(|idx, off| {
            if zb.on_wall(idx) {
                walls.push(off);
            }
        });
        for off in walls {
            zb.data_mut()[off] -= 0.5 * dt * dww.data()[off];
        }
        let z = line_sweep_with_bc(k, 1.0, 0.5 * dt * (nu + varpi), &r, &zb).map_err(|e| ctx.solver_err(e))?;
        let w = line_sweep_with_bc(o, 1.0, 0.5 * dt * nu, &z, &wb).map_err(|e| ctx.solver_err(e))?;
        let mut unew = uk.clone();
        unew.axpy(dt, &w);
        apply_dirichlet(&mut unew, |x| problem.boundary(k, x, t1));
        out.set_comp(k, unew);
    }
    Ok(out)
}

fn check(cfg: &SchemeConfig, id: SchemeId) -> Result<(), SchemeError> {
    if cfg.scheme != id {
        return Err(SchemeError::Config(format!("stepper called with scheme {}", cfg.scheme)));
    }
    Ok(())
}

fn integer_pressure(state: &mut SimState) {
    state.p_prev = std::mem::replace(
        &mut state.p_now,
        ScalarField::lincomb(1.5, &state.p_half, -0.5, &state.p_half_prev),
    );
}

/// Direction-splitting step; pressure at half levels,
/// `p^{n+1/2} = p^{n−1/2} − (ϖ/2) div(uⁿ⁺¹ + uⁿ)`.
pub fn step_dirsplit1(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check(cfg, SchemeId::Dirsplit1)?;
    let ctx = Ctx::new(state, cfg, problem)?;
    let t_n = state.time();
    let nl = ctx.nl(&state.u_now)?;
    let a = ScalarField::lincomb(0.5, state.u_now.comp(1), 0.5, state.u_prev.comp(1));
    let u = factored_step(&ctx, t_n, &Factored { u_now: &state.u_now, p_half: &state.p_half, nl: &nl, cross_arg: &a })?;
    let sum = VelocityField::lincomb(1.0, &u, 1.0, &state.u_now);
    let p = pressure_update(&state.p_half, &sum, &ctx.varpi, 0.5)?;
    state.p_half_prev = std::mem::replace(&mut state.p_half, p);
    state.u_prev = std::mem::replace(&mut state.u_now, u);
    state.n += 1;
    integer_pressure(state);
    finite_or_diverged(state, ctx.step)
}

/// Second-order defect correction of [`step_dirsplit1`]: a predictor step
/// for `(ũ, p̃)`, then a corrector whose cross term sees the predictor's
/// increment and whose pressure carries `p̃^{n+1/2} − p̃^{n−1/2}`.
pub fn step_dirsplit_defect2(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check(cfg, SchemeId::DirsplitDefect2)?;
    let ctx = Ctx::new(state, cfg, problem)?;
    let t_n = state.time();

    let nl_t = ctx.nl(&state.u_now)?;
    let a_t = ScalarField::lincomb(0.5, state.tilde_u_now.comp(1), 0.5, state.tilde_u_prev.comp(1));
    let ut = factored_step(
        &ctx,
        t_n,
        &Factored { u_now: &state.tilde_u_now, p_half: &state.tilde_p_now, nl: &nl_t, cross_arg: &a_t },
    )?;
    let sum_t = VelocityField::lincomb(1.0, &ut, 1.0, &state.tilde_u_now);
    let pt = pressure_update(&state.tilde_p_now, &sum_t, &ctx.varpi, 0.5)?;

    let nl = if cfg.nonlinear {
        ctx.nl(&VelocityField::lincomb(0.5, &ut, 0.5, &state.u_now))?
    } else {
        VelocityField::zeros(&ctx.grid)
    };
    let mut a = ScalarField::lincomb(0.5, state.u_now.comp(1), 0.5, state.u_prev.comp(1));
    a.axpy(1.0, ut.comp(1));
    a.axpy(-1.0, state.tilde_u_now.comp(1));
    let u = factored_step(&ctx, t_n, &Factored { u_now: &state.u_now, p_half: &state.p_half, nl: &nl, cross_arg: &a })?;
    let mut q = state.p_half.clone();
    q.axpy(1.0, &pt);
    q.axpy(-1.0, &state.tilde_p_now);
    let sum = VelocityField::lincomb(1.0, &u, 1.0, &state.u_now);
    let p = pressure_update(&q, &sum, &ctx.varpi, 0.5)?;

    state.tilde_u_prev = std::mem::replace(&mut state.tilde_u_now, ut);
    state.tilde_p_prev = std::mem::replace(&mut state.tilde_p_now, pt);
    state.p_half_prev = std::mem::replace(&mut state.p_half, p);
    state.u_prev = std::mem::replace(&mut state.u_now, u);
    state.n += 1;
    integer_pressure(state);
    finite_or_diverged(state, ctx.step)
}
