//! Building blocks shared by the steppers.

use super::{Problem, SchemeConfig, SchemeError, SimState};
use crate::linsolve::{
    coupled_graddiv_solve, Helmholtz, HelmholtzSystem, OwnTerm, SolveError,
};
use crate::mac::{
    advect, divergence, fill_zero_gradient, gradient,
    mixed_derivative, own_diffusion, weight_cells, MacGrid, ScalarField, VelocityField, Varpi,
};

pub(crate) struct Ctx<'a> {
    pub grid: MacGrid,
    pub cfg: &'a SchemeConfig,
    pub varpi: Varpi,
    pub problem: &'a dyn Problem,
    pub dim: usize,
    pub dt: f64,
    pub nu: f64,
    /// Index of the step being taken (for error reports).
    pub step: usize,
}

impl<'a> Ctx<'a> {
    pub fn new(state: &SimState, cfg: &'a SchemeConfig, problem: &'a dyn Problem) -> Result<Self, SchemeError> {
        cfg.validate(&state.grid)?;
        if (state.dt - cfg.dt).abs() > 1e-15 * cfg.dt {
            return Err(SchemeError::Config("state and config disagree on dt".into()));
        }
        Ok(Self {
            grid: state.grid.clone(),
            cfg,
            varpi: cfg.varpi(),
            problem,
            dim: cfg.dim,
            dt: cfg.dt,
            nu: cfg.nu,
            step: state.n,
        })
    }

    pub fn solver_err(&self, e: SolveError) -> SchemeError {
        SchemeError::Solver { step: self.step, source: e }
    }

    /// Forcing sampled on the faces at time `t`.
    pub fn forcing(&self, t: f64) -> VelocityField {
        let p = self.problem;
        VelocityField::from_fn(&self.grid, |k, x| p.forcing(k, x, t))
    }

    /// `∂_i(ϖ ∂_j v)` with `v` on faces normal to `j`.
    pub fn cross(&self, i: usize, j: usize, v: &ScalarField) -> Result<ScalarField, SchemeError> {
        Ok(mixed_derivative(j, i, v, &self.varpi)?)
    }

    /// `∂_i(ϖ ∂_i v)` with `v` on faces normal to `i`.
    pub fn own(&self, i: usize, v: &ScalarField) -> Result<ScalarField, SchemeError> {
        Ok(own_diffusion(i, v, &self.varpi)?)
    }

    /// `C△ v`: row `i` is `Σ_{j>i} ∂_i(ϖ ∂_j v_j)`.
    pub fn c_upper(&self, v: &VelocityField) -> Result<VelocityField, SchemeError> {
        let mut out = VelocityField::zeros(&self.grid);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let c = self.cross(i, j, v.comp(j))?;
                out.comp_mut(i).axpy(1.0, &c);
            }
        }
        Ok(out)
    }

    /// Pressure gradient with zero-gradient ghosts.
    pub fn grad_p(&self, p: &ScalarField) -> Result<VelocityField, SchemeError> {
        let mut q = p.clone();
        fill_zero_gradient(&mut q);
        Ok(gradient(&q)?)
    }

    /// Explicit nonlinear term, zero when the configuration is linear.
    pub fn nl(&self, u: &VelocityField) -> Result<VelocityField, SchemeError> {
        if self.cfg.nonlinear {
            Ok(advect(u)?)
        } else {
            Ok(VelocityField::zeros(&self.grid))
        }
    }

    /// Solves `α v − dt(ν Δv + c ∂_k(ϖ ∂_k v)) = rhs` for component `k`.
    pub fn component_solve(
        &self,
        k: usize,
        alpha: f64,
        own_factor: f64,
        rhs: &ScalarField,
        trace: &dyn Fn([f64; 3]) -> f64,
        guess: Option<&ScalarField>,
    ) -> Result<ScalarField, SchemeError> {
        let kappa = vec![self.nu; self.dim];
        let mut op = Helmholtz::new(alpha, self.dt, &kappa);
        if own_factor != 0.0 {
            op = op.with_own(OwnTerm { axis: k, factor: own_factor, varpi: &self.varpi });
        }
        let sys = HelmholtzSystem::new(&op, rhs).map_err(|e| self.solver_err(e))?;
        let (v, _) = sys.solve(rhs, trace, guess, &self.cfg.solver).map_err(|e| self.solver_err(e))?;
        Ok(v)
    }

    /// Solves `(I − dt ν Δ − dt ∇(ϖ div ·)) u = rhs` for all components.
    pub fn coupled_solve(
        &self,
        rhs: &VelocityField,
        trace: &dyn Fn(usize, [f64; 3]) -> f64,
        guess: Option<&VelocityField>,
    ) -> Result<VelocityField, SchemeError> {
        let (u, _) = coupled_graddiv_solve(self.dt * self.nu, &self.varpi, self.dt, rhs, trace, guess, &self.cfg.solver)
            .map_err(|e| self.solver_err(e))?;
        Ok(u)
    }
}

/// Row structure of a Gauss-Seidel or Jacobi component sweep:
///
/// `α u_i − dt(νΔ + c_i ∂_i ϖ ∂_i) u_i = base_i + dt(rhs_i + Σ_{j<i} ∂_i(ϖ∂_j w_j)
///   + Σ_{j>i} ∂_i(ϖ∂_j upper_j) − e_i ∂_i(ϖ∂_i upper_i))`
///
/// where `w_j` is the new value (Gauss-Seidel) or `upper_j` (Jacobi).
pub(crate) struct Sweep<'s> {
    pub alpha: f64,
    pub base: &'s VelocityField,
    pub rhs: &'s VelocityField,
    pub upper: &'s VelocityField,
    pub implicit_own: [f64; 3],
    pub explicit_own: [f64; 3],
    pub jacobi: bool,
    /// `(i, j)` pairs with `j < i` that still read `upper_j`.
    pub lagged: &'s [(usize, usize)],
}

impl Sweep<'_> {
    pub fn run(
        &self,
        ctx: &Ctx<'_>,
        trace: &dyn Fn(usize, [f64; 3]) -> f64,
        guess: Option<&VelocityField>,
    ) -> Result<VelocityField, SchemeError> {
        let mut out = VelocityField::zeros(&ctx.grid);
        for i in 0..ctx.dim {
            let mut r = self.rhs.comp(i).clone();
            for j in 0..ctx.dim {
                if j == i {
                    continue;
                }
                let fresh = j < i && !self.jacobi && !self.lagged.contains(&(i, j));
                let src = if fresh { out.comp(j) } else { self.upper.comp(j) };
                r.axpy(1.0, &ctx.cross(i, j, src)?);
            }
            if self.explicit_own[i] != 0.0 {
                r.axpy(-self.explicit_own[i], &ctx.own(i, self.upper.comp(i))?);
            }
            let mut b = self.base.comp(i).clone();
            b.axpy(ctx.dt, &r);
            let tr = |x: [f64; 3]| trace(i, x);
            let v = ctx.component_solve(i, self.alpha, self.implicit_own[i], &b, &tr, guess.map(|g| g.comp(i)))?;
            out.set_comp(i, v);
        }
        Ok(out)
    }
}

/// `q − ϖ·div u`, the algebraic pressure law, with ghosts filled.
pub(crate) fn pressure_update(q: &ScalarField, u: &VelocityField, coeff: &Varpi, scale: f64) -> Result<ScalarField, SchemeError> {
    let d = weight_cells(&divergence(u)?, coeff);
    let mut p = q.clone();
    p.axpy(-scale, &d);
    fill_zero_gradient(&mut p);
    Ok(p)
}

pub(crate) fn finite_or_diverged(state: &SimState, step: usize) -> Result<(), SchemeError> {
    if state.is_finite() {
        Ok(())
    } else {
        Err(SchemeError::Diverged { step })
    }
}
