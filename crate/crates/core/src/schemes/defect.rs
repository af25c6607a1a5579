//! Defect-correction schemes of order two and three.
//!
//! Step `n` runs stage 0 to level `n+1`, stage 1 to level `n` (for `n ≥ 1`)
//! and stage 2 to level `n−1` (for `n ≥ 2`). The composite
//! `u₀ + τu₁ + τ²u₂` is therefore available two levels behind stage 0.

use super::kernels::{finite_or_diverged, pressure_update, Ctx, Sweep};
use super::{CrossCorrection, Problem, SchemeConfig, SchemeError, SchemeId, SimState};
use crate::mac::{ScalarField, Varpi, VelocityField};

/// One backward-Euler stage `(u − u_old)/dt + Au − ϖ∇div u [+ C△(u − u_old)] + ∇q = s`.
fn stage_solve(
    ctx: &Ctx<'_>,
    coupled: bool,
    u_old: &VelocityField,
    q: &ScalarField,
    s: &VelocityField,
    trace: &dyn Fn(usize, [f64; 3]) -> f64,
) -> Result<(VelocityField, ScalarField), SchemeError> {
    let mut r = s.clone();
    r.axpy(-1.0, &ctx.grad_p(q)?);
    if coupled {
        let mut rhs = u_old.clone();
        rhs.axpy(ctx.dt, &r);
        let u = ctx.coupled_solve(&rhs, trace, Some(u_old))?;
        let p = pressure_update(q, &u, &Varpi::Const(ctx.cfg.chi), 1.0)?;
        Ok((u, p))
    } else {
        let u = Sweep {
            alpha: 1.0,
            base: u_old,
            rhs: &r,
            upper: u_old,
            implicit_own: [1.0; 3],
            explicit_own: [0.0; 3],
            jacobi: false,
            lagged: &[],
        }
        .run(ctx, trace, Some(u_old))?;
        let p = pressure_update(q, &u, &ctx.varpi, 1.0)?;
        Ok((u, p))
    }
}

fn diff(a: &VelocityField, b: &VelocityField, dt: f64) -> VelocityField {
    VelocityField::lincomb(1.0 / dt, a, -1.0 / dt, b)
}

fn diff_s(a: &ScalarField, b: &ScalarField, dt: f64) -> ScalarField {
    ScalarField::lincomb(1.0 / dt, a, -1.0 / dt, b)
}

/// Adds the split-scheme mixed-derivative corrections to a stage source:
/// `C△ d` (divided difference of the previous stage) and `C△ inc` (its
/// lagged increment), as selected by the configuration.
fn add_cross_corrections(
    ctx: &Ctx<'_>,
    s: &mut VelocityField,
    d: &VelocityField,
    inc: &VelocityField,
) -> Result<(), SchemeError> {
    let mode = ctx.cfg.cross_correction;
    if matches!(mode, CrossCorrection::Both | CrossCorrection::DividedDifference | CrossCorrection::Centered) {
        s.axpy(1.0, &ctx.c_upper(d)?);
    }
    if matches!(mode, CrossCorrection::Both | CrossCorrection::LaggedOnly) {
        s.axpy(1.0, &ctx.c_upper(inc)?);
    }
    if mode == CrossCorrection::LaggedDivided {
        s.axpy(1.0 / ctx.dt, &ctx.c_upper(inc)?);
    }
    Ok(())
}

/// Advances a defect-correction scheme by one step.
///
/// `coupled` selects the implicit grad-div baseline (`χ` in the pressure law)
/// over the split one; `order` is 2 or 3.
pub fn step_defect(
    state: &mut SimState,
    cfg: &SchemeConfig,
    problem: &dyn Problem,
    coupled: bool,
    order: usize,
) -> Result<(), SchemeError> {
    if !(order == 2 || order == 3) {
        return Err(SchemeError::Config(format!("defect order must be 2 or 3, got {order}")));
    }
    let ctx = Ctx::new(state, cfg, problem)?;
    let dt = ctx.dt;
    let n = state.n;
    let t1 = state.time() + dt;
    let zero = |_: usize, _: [f64; 3]| 0.0;
    let g1 = |k: usize, x: [f64; 3]| problem.boundary(k, x, t1);

    // stage 0
    let mut s0 = ctx.forcing(t1);
    s0.axpy(-1.0, &ctx.nl(&state.u0[0])?);
    let (u0_new, p0_new) = stage_solve(&ctx, coupled, &state.u0[0], &state.p0[0], &s0, &g1)?;
    let du0_new = diff(&u0_new, &state.u0[0], dt);
    let dp0_new = diff_s(&p0_new, &state.p0[0], dt);
    let d2u0_new = if n >= 1 { diff(&du0_new, &state.du0, dt) } else { VelocityField::zeros(&ctx.grid) };
    let d3u0_new = if n >= 2 { diff(&d2u0_new, &state.d2u0, dt) } else { VelocityField::zeros(&ctx.grid) };

    // stage 1 → level n
    let (u1_new, p1_new, du1_new, dp1_new) = if n >= 1 {
        let mut s1 = d2u0_new.clone();
        s1.scale(-0.5);
        if cfg.nonlinear {
            let mut arg = state.u0[0].clone();
            arg.axpy(dt, &state.u1[0]);
            let mut dnl = ctx.nl(&arg)?;
            dnl.axpy(-1.0, &ctx.nl(&state.u0[1])?);
            s1.axpy(-1.0 / dt, &dnl);
        }
        if !coupled {
            let inc = VelocityField::lincomb(1.0, &state.u0[0], -1.0, &state.u0[1]);
            add_cross_corrections(&ctx, &mut s1, &du0_new, &inc)?;
        }
        let mut q = state.p1[0].clone();
        q.axpy(1.0, &state.dp0);
        let (u, p) = stage_solve(&ctx, coupled, &state.u1[0], &q, &s1, &zero)?;
        let du = diff(&u, &state.u1[0], dt);
        let dp = diff_s(&p, &state.p1[0], dt);
        (u, p, du, dp)
    } else {
        let z = VelocityField::zeros(&ctx.grid);
        (z.clone(), ScalarField::zeros(&ctx.grid, crate::mac::Location::Cell), z, ScalarField::zeros(&ctx.grid, crate::mac::Location::Cell))
    };

    // stage 2 → level n−1
    let mut d2u1_new = state.d2u1.clone();
    let (u2_new, p2_new) = if order == 3 && n >= 2 {
        d2u1_new = diff(&du1_new, &state.du1, dt);
        let mut s2 = d2u1_new.clone();
        s2.scale(-0.5);
        s2.axpy(1.0 / 6.0, &d3u0_new);
        if cfg.nonlinear {
            let mut a2 = state.u0[1].clone();
            a2.axpy(dt, &state.u1[0]);
            a2.axpy(dt * dt, &state.u2);
            let mut a1 = state.u0[1].clone();
            a1.axpy(dt, &state.u1[1]);
            let mut dnl = ctx.nl(&a2)?;
            dnl.axpy(-1.0, &ctx.nl(&a1)?);
            s2.axpy(-1.0 / (dt * dt), &dnl);
        }
        if !coupled {
            let inc = VelocityField::lincomb(1.0, &state.u1[0], -1.0, &state.u1[1]);
            add_cross_corrections(&ctx, &mut s2, &du1_new, &inc)?;
            if cfg.cross_correction == CrossCorrection::Centered {
                s2.axpy(-1.0, &ctx.c_upper(&d2u0_new)?);
            }
        }
        let mut q = state.p2.clone();
        q.axpy(1.0, &state.dp1);
        stage_solve(&ctx, coupled, &state.u2, &q, &s2, &zero)?
    } else {
        (state.u2.clone(), state.p2.clone())
    };

    // shift histories
    state.u0.rotate_right(1);
    state.u0[0] = u0_new;
    state.p0.rotate_right(1);
    state.p0[0] = p0_new;
    state.du0_prev = std::mem::replace(&mut state.du0, du0_new);
    state.d2u0_prev = std::mem::replace(&mut state.d2u0, d2u0_new);
    state.d3u0 = d3u0_new;
    state.dp0 = dp0_new;
    state.u1.rotate_right(1);
    state.u1[0] = u1_new;
    state.p1.rotate_right(1);
    state.p1[0] = p1_new;
    state.du1_prev = std::mem::replace(&mut state.du1, du1_new);
    state.dp1 = dp1_new;
    state.d2u1 = d2u1_new;
    state.u2 = u2_new;
    state.p2 = p2_new;
    state.n += 1;
    let (u, p, _) = state.solution(cfg.scheme);
    state.u_prev = std::mem::replace(&mut state.u_now, u);
    state.p_prev = std::mem::replace(&mut state.p_now, p);
    finite_or_diverged(state, ctx.step)
}

fn check(cfg: &SchemeConfig, id: SchemeId) -> Result<(), SchemeError> {
    if cfg.scheme != id {
        return Err(SchemeError::Config(format!("stepper called with scheme {}", cfg.scheme)));
    }
    Ok(())
}

pub fn step_defect3_coupled(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check(cfg, SchemeId::Defect3Coupled)?;
    step_defect(state, cfg, problem, true, 3)
}

pub fn step_defect3_split(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check(cfg, SchemeId::Defect3Split)?;
    step_defect(state, cfg, problem, false, 3)
}

pub fn step_defect2_coupled(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check(cfg, SchemeId::Defect2Coupled)?;
    step_defect(state, cfg, problem, true, 2)
}

pub fn step_defect2_split(state: &mut SimState, cfg: &SchemeConfig, problem: &dyn Problem) -> Result<(), SchemeError> {
    check(cfg, SchemeId::Defect2Split)?;
    step_defect(state, cfg, problem, false, 2)
}
