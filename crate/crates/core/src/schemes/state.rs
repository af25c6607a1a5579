use super::{SchemeConfig, SchemeError, SchemeId};
use crate::mac::{
    apply_dirichlet_vec, fill_zero_gradient, Location, MacGrid, ScalarField, VelocityField,
};

/// Solution levels and auxiliary sequences of a run.
///
/// Level conventions (after `n` completed steps, `t = n·dt`):
/// * `u_now`, `u_prev`: `uⁿ`, `uⁿ⁻¹`; `p_now`, `p_prev`: `pⁿ`, `pⁿ⁻¹`.
/// * `p_half`, `p_half_prev`: `p^{n−1/2}`, `p^{n−3/2}` (half-step schemes).
/// * `tilde_*`: the first-order predictor sequence of the bootstrap and
///   direction-splitting defect schemes (`tilde_p*` at half levels for the
///   latter).
/// * Defect stages: `u0[0..3] = u₀ⁿ, u₀ⁿ⁻¹, u₀ⁿ⁻²`; `u1[0..2] = u₁ⁿ⁻¹, u₁ⁿ⁻²`;
///   `u2 = u₂ⁿ⁻²`, and the same for pressures. `du0`, `d2u0`, `d3u0` hold the
///   newest divided differences of stage 0 (index `n`), `*_prev` the ones
///   before; `du1`, `d2u1` those of stage 1 (index `n−1`).
#[derive(Clone, Debug)]
pub struct SimState {
    pub grid: MacGrid,
    pub n: usize,
    pub dt: f64,
    pub u_now: VelocityField,
    pub u_prev: VelocityField,
    pub p_now: ScalarField,
    pub p_prev: ScalarField,
    pub p_half: ScalarField,
    pub p_half_prev: ScalarField,
    pub tilde_u_now: VelocityField,
    pub tilde_u_prev: VelocityField,
    pub tilde_p_now: ScalarField,
    pub tilde_p_prev: ScalarField,
    pub u0: Vec<VelocityField>,
    pub u1: Vec<VelocityField>,
    pub u2: VelocityField,
    pub p0: Vec<ScalarField>,
    pub p1: Vec<ScalarField>,
    pub p2: ScalarField,
    pub du0: VelocityField,
    pub du0_prev: VelocityField,
    pub d2u0: VelocityField,
    pub d2u0_prev: VelocityField,
    pub d3u0: VelocityField,
    pub du1: VelocityField,
    pub du1_prev: VelocityField,
    pub d2u1: VelocityField,
    pub dp0: ScalarField,
    pub dp1: ScalarField,
}

impl SimState {
    /// All-zero state at `t = 0`.
    pub fn zeros(grid: &MacGrid, dt: f64) -> Self {
        let v = VelocityField::zeros(grid);
        let s = ScalarField::zeros(grid, Location::Cell);
        Self {
            grid: grid.clone(),
            n: 0,
            dt,
            u_now: v.clone(),
            u_prev: v.clone(),
            p_now: s.clone(),
            p_prev: s.clone(),
            p_half: s.clone(),
            p_half_prev: s.clone(),
            tilde_u_now: v.clone(),
            tilde_u_prev: v.clone(),
            tilde_p_now: s.clone(),
            tilde_p_prev: s.clone(),
            u0: vec![v.clone(), v.clone(), v.clone()],
            u1: vec![v.clone(), v.clone()],
            u2: v.clone(),
            p0: vec![s.clone(), s.clone(), s.clone()],
            p1: vec![s.clone(), s.clone()],
            p2: s.clone(),
            du0: v.clone(),
            du0_prev: v.clone(),
            d2u0: v.clone(),
            d2u0_prev: v.clone(),
            d3u0: v.clone(),
            du1: v.clone(),
            du1_prev: v.clone(),
            d2u1: v,
            dp0: s.clone(),
            dp1: s,
        }
    }

    /// State seeded from given fields, used as every history level.
    ///
    /// This is the setting of the stability estimates: `ū₂⁰ = u₂⁰` and
    /// `p^{−1/2} = p⁰`.
    pub fn from_fields(
        cfg: &SchemeConfig,
        u: VelocityField,
        p: ScalarField,
    ) -> Result<Self, SchemeError> {
        let grid = u.grid().clone();
        cfg.validate(&grid)?;
        if p.grid() != &grid || p.location() != Location::Cell {
            return Err(SchemeError::Config("pressure must be a cell field on the velocity grid".into()));
        }
        let mut p = p;
        fill_zero_gradient(&mut p);
        let mut s = Self::zeros(&grid, cfg.dt);
        s.u_now = u.clone();
        s.u_prev = u.clone();
        s.tilde_u_now = u.clone();
        s.tilde_u_prev = u.clone();
        s.u0 = vec![u.clone(), u.clone(), u];
        for f in [
            &mut s.p_now,
            &mut s.p_prev,
            &mut s.p_half,
            &mut s.p_half_prev,
            &mut s.tilde_p_now,
            &mut s.tilde_p_prev,
        ] {
            *f = p.clone();
        }
        s.p0 = vec![p.clone(), p.clone(), p];
        Ok(s)
    }

    /// State seeded from an exact solution at the times each scheme needs:
    /// `u(0)`, `u(−dt)`, `p(0)`, `p(−dt/2)`, `p(−3dt/2)`. Correction stages
    /// start at zero.
    pub fn from_exact(
        cfg: &SchemeConfig,
        grid: &MacGrid,
        u: &dyn Fn(usize, [f64; 3], f64) -> f64,
        p: &dyn Fn([f64; 3], f64) -> f64,
    ) -> Result<Self, SchemeError> {
        cfg.validate(grid)?;
        let dt = cfg.dt;
        let vel = |t: f64| {
            let mut f = VelocityField::from_fn(grid, |k, x| u(k, x, t));
            apply_dirichlet_vec(&mut f, |k, x| u(k, x, t));
            f
        };
        let pre = |t: f64| {
            let mut f = ScalarField::from_fn(grid, Location::Cell, |x| p(x, t));
            fill_zero_gradient(&mut f);
            f
        };
        let mut s = Self::zeros(grid, dt);
        s.u_now = vel(0.0);
        s.u_prev = vel(-dt);
        s.p_now = pre(0.0);
        s.p_prev = pre(-dt);
        if cfg.scheme.half_step_pressure() {
            s.p_half = pre(-0.5 * dt);
            s.p_half_prev = pre(-1.5 * dt);
        }
        s.tilde_u_now = s.u_now.clone();
        s.tilde_u_prev = s.u_prev.clone();
        if cfg.scheme.half_step_pressure() {
            s.tilde_p_now = s.p_half.clone();
            s.tilde_p_prev = s.p_half_prev.clone();
        } else {
            s.tilde_p_now = s.p_now.clone();
            s.tilde_p_prev = s.p_prev.clone();
        }
        s.u0 = vec![s.u_now.clone(), s.u_prev.clone(), vel(-2.0 * dt)];
        s.p0 = vec![s.p_now.clone(), s.p_prev.clone(), pre(-2.0 * dt)];
        Ok(s)
    }

    /// Time of the newest level.
    pub fn time(&self) -> f64 {
        self.n as f64 * self.dt
    }

    /// The reportable velocity, pressure and their time.
    ///
    /// Half-step pressures are extrapolated to the integer level; defect
    /// schemes report their composite at the lagged level.
    pub fn solution(&self, scheme: SchemeId) -> (VelocityField, ScalarField, f64) {
        let tau = self.dt;
        match scheme {
            SchemeId::Dirsplit1 => {
                let p = ScalarField::lincomb(1.5, &self.p_half, -0.5, &self.p_half_prev);
                (self.u_now.clone(), p, self.time())
            }
            SchemeId::DirsplitDefect2 => {
                let mut p = ScalarField::lincomb(1.5, &self.p_half, -0.5, &self.p_half_prev);
                p.axpy(-1.0, &self.tilde_p_now);
                p.axpy(1.0, &self.tilde_p_prev);
                (self.u_now.clone(), p, self.time())
            }
            SchemeId::Defect3Coupled | SchemeId::Defect3Split => {
                let mut u = self.u0[2].clone();
                u.axpy(tau, &self.u1[1]);
                u.axpy(tau * tau, &self.u2);
                let mut p = self.p0[2].clone();
                p.axpy(tau, &self.p1[1]);
                p.axpy(tau * tau, &self.p2);
                (u, p, self.time() - 2.0 * tau)
            }
            SchemeId::Defect2Coupled | SchemeId::Defect2Split => {
                let mut u = self.u0[1].clone();
                u.axpy(tau, &self.u1[0]);
                let mut p = self.p0[1].clone();
                p.axpy(tau, &self.p1[0]);
                (u, p, self.time() - tau)
            }
            _ => (self.u_now.clone(), self.p_now.clone(), self.time()),
        }
    }

    /// Stage-0 solution of a defect scheme at its newest level.
    pub fn stage0(&self) -> (&VelocityField, &ScalarField) {
        (&self.u0[0], &self.p0[0])
    }

    pub fn is_finite(&self) -> bool {
        self.u_now.is_finite()
            && self.p_now.is_finite()
            && self.p_half.is_finite()
            && self.tilde_u_now.is_finite()
            && self.u0.iter().all(|f| f.is_finite())
            && self.u1.iter().all(|f| f.is_finite())
            && self.u2.is_finite()
            && self.p0.iter().all(|f| f.is_finite())
    }
}
