//! One step of each stepper against a monolithic dense solve of the same
//! step equations.

use super::dense::{max_abs, Dense, Trace};
use artcomp::mac::{apply_dirichlet_vec, fill_zero_gradient, Location, MacGrid, ScalarField, VelocityField};
use artcomp::manufactured::{AnalyticCase, CaseId, ManufacturedProblem};
use artcomp::schemes::{step, Problem, SchemeConfig, SchemeId, SimState};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Manufactured forcing with no-slip walls, for the factored schemes.
struct NoSlip(ManufacturedProblem);

impl Problem for NoSlip {
    fn forcing(&self, k: usize, x: [f64; 3], t: f64) -> f64 {
        self.0.forcing(k, x, t)
    }
    fn boundary(&self, _: usize, _: [f64; 3], _: f64) -> f64 {
        0.0
    }
}

fn random_vel(grid: &MacGrid, rng: &mut ChaCha8Rng, trace: impl Fn(usize, [f64; 3]) -> f64) -> VelocityField {
    let mut u = VelocityField::zeros(grid);
    for k in 0..grid.dim() {
        let c = u.comp_mut(k);
        let vals: Vec<f64> = (0..c.owned_values().len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        c.set_owned_values(&vals).unwrap();
    }
    apply_dirichlet_vec(&mut u, trace);
    u
}

fn random_cell(grid: &MacGrid, rng: &mut ChaCha8Rng) -> ScalarField {
    let mut p = ScalarField::zeros(grid, Location::Cell);
    let vals: Vec<f64> = (0..grid.num_cells()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    p.set_owned_values(&vals).unwrap();
    fill_zero_gradient(&mut p);
    p
}

/// Largest deviation between the library step and the dense oracle over
/// every field the step produces.
#[derive(Debug)]
pub struct OracleReport {
    pub scheme: SchemeId,
    pub dim: usize,
    pub fields: Vec<(&'static str, f64)>,
}

impl OracleReport {
    pub fn max_error(&self) -> f64 {
        self.fields.iter().map(|f| f.1).fold(0.0, f64::max)
    }
}

struct Ops<'a> {
    d: &'a Dense,
    dt: f64,
    nu: f64,
    varpi: DVector<f64>,
}

impl Ops<'_> {
    fn eye(&self) -> DMatrix<f64> {
        DMatrix::identity(self.d.nvel, self.d.nvel)
    }

    /// `α x − dt(νΔ + Σ c_i ∂_i ϖ ∂_i + implicit cross) x
    ///   = base + dt(rhs + explicit cross(upper) − Σ e_i ∂_i ϖ ∂_i upper)`.
    #[allow(clippy::too_many_arguments)]
    fn split(
        &self,
        alpha: f64,
        base: &DVector<f64>,
        rhs: &DVector<f64>,
        upper: &DVector<f64>,
        c: [f64; 3],
        e: [f64; 3],
        fresh: &dyn Fn(usize, usize) -> bool,
        g: Trace<'_>,
    ) -> DVector<f64> {
        let d = self.d;
        let (lap, lc) = d.diffusion([self.nu; 3], g);
        let mut a = self.eye() * alpha - lap * self.dt;
        let mut b = base + (rhs + lc) * self.dt;
        for i in 0..d.dim {
            let own = d.graddiv_block(i, i, &self.varpi);
            a -= &own * (c[i] * self.dt);
            b -= &own * upper * (e[i] * self.dt);
            for j in 0..d.dim {
                if i == j {
                    continue;
                }
                let cross = d.graddiv_block(i, j, &self.varpi);
                if fresh(i, j) {
                    a -= cross * self.dt;
                } else {
                    b += cross * upper * self.dt;
                }
            }
        }
        d.solve_with_walls(a, b, &d.wall_values(g))
    }

    fn gs(&self, base: &DVector<f64>, rhs: &DVector<f64>, g: Trace<'_>) -> DVector<f64> {
        self.split(1.0, base, rhs, base, [1.0; 3], [0.0; 3], &|i, j| j < i, g)
    }

    /// `(I − dtνΔ − dt∇(ϖ div)) x = base + dt·rhs`.
    fn coupled(&self, base: &DVector<f64>, rhs: &DVector<f64>, g: Trace<'_>) -> DVector<f64> {
        let d = self.d;
        let (lap, lc) = d.diffusion([self.nu; 3], g);
        let a = self.eye() - lap * self.dt - d.graddiv(&self.varpi) * self.dt;
        let b = base + (rhs + lc) * self.dt;
        d.solve_with_walls(a, b, &d.wall_values(g))
    }

    fn pressure(&self, q: &DVector<f64>, u: &DVector<f64>, coeff: &DVector<f64>, scale: f64) -> DVector<f64> {
        q - (self.d.div() * u).component_mul(coeff) * scale
    }

    /// Factored direction-splitting step for no-slip data; `cross_arg` feeds
    /// row 1's explicit `∂_x(ϖ∂_y ·)`, row 2 sees the average of old and new `u_x`.
    fn factored(
        &self,
        u: &DVector<f64>,
        p_half: &DVector<f64>,
        f_mid: &DVector<f64>,
        cross_arg: &DVector<f64>,
    ) -> DVector<f64> {
        let d = self.d;
        let zero = |_: usize, _: [f64; 3]| 0.0;
        let w0 = self.varpi[0];
        let mut a = DMatrix::zeros(d.nvel, d.nvel);
        let mut b = f_mid - d.grad() * p_half;
        for k in 0..2 {
            let o = 1 - k;
            let pk = d.unknown_rows(&[k]);
            let mut kk = [0.0; 3];
            kk[k] = self.nu + w0;
            let mut ko = [0.0; 3];
            ko[o] = self.nu;
            let dk = d.diffusion(kk, &zero).0;
            let dko = d.diffusion(ko, &zero).0;
            let full = &dk + &dko;
            let m = (self.eye() - dk * (0.5 * self.dt)) * (self.eye() - dko * (0.5 * self.dt));
            a += &pk * m;
            b += &pk * full * u;
        }
        let p0 = d.unknown_rows(&[0]);
        let p1 = d.unknown_rows(&[1]);
        b += &p0 * d.graddiv_block(0, 1, &self.varpi) * cross_arg;
        let c10 = &p1 * d.graddiv_block(1, 0, &self.varpi);
        b += &c10 * u;
        a -= c10 * (0.5 * self.dt);
        let w = d.solve_with_walls(a, b, &DVector::zeros(d.nvel));
        u + w * self.dt
    }
}

/// Runs one step of `scheme` from a random state and compares with the oracle.
pub fn check_step(scheme: SchemeId, dim: usize, seed: u64) -> OracleReport {
    let n = if dim == 2 { 8 } else { 6 };
    let grid = MacGrid::unit(dim, n).unwrap();
    let dt = 0.1;
    let mut cfg = SchemeConfig::new(scheme, dim, dt, 0.05);
    cfg.lambda = 0.5;
    cfg.chi = 1.3;
    cfg.solver.tol = 1e-13;
    cfg.solver.max_iter = Some(5000);
    let case = AnalyticCase::new(if dim == 2 { CaseId::Mms2d } else { CaseId::Mms3d });
    let mp = ManufacturedProblem { case, nu: cfg.nu, nonlinear: false };
    let no_slip = NoSlip(mp);
    let problem: &dyn Problem = if scheme.half_step_pressure() { &no_slip } else { &mp };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps_done = if scheme.is_defect() { 2 } else { 1 };
    let t_n = steps_done as f64 * dt;
    let tr = |t: f64| move |k: usize, x: [f64; 3]| problem.boundary(k, x, t);
    let zero = |_: usize, _: [f64; 3]| 0.0;

    let mut s = SimState::zeros(&grid, dt);
    s.n = steps_done;
    s.u_now = random_vel(&grid, &mut rng, tr(t_n));
    s.u_prev = random_vel(&grid, &mut rng, tr(t_n - dt));
    s.tilde_u_now = random_vel(&grid, &mut rng, tr(t_n));
    s.tilde_u_prev = random_vel(&grid, &mut rng, tr(t_n - dt));
    s.p_now = random_cell(&grid, &mut rng);
    s.p_half = random_cell(&grid, &mut rng);
    s.p_half_prev = random_cell(&grid, &mut rng);
    s.tilde_p_now = random_cell(&grid, &mut rng);
    s.tilde_p_prev = random_cell(&grid, &mut rng);
    s.u0 = (0..3).map(|l| random_vel(&grid, &mut rng, tr(t_n - l as f64 * dt))).collect();
    s.p0 = (0..3).map(|_| random_cell(&grid, &mut rng)).collect();
    s.u1 = (0..2).map(|_| random_vel(&grid, &mut rng, zero)).collect();
    s.p1 = (0..2).map(|_| random_cell(&grid, &mut rng)).collect();
    s.u2 = random_vel(&grid, &mut rng, zero);
    s.p2 = random_cell(&grid, &mut rng);
    s.du0 = random_vel(&grid, &mut rng, zero);
    s.d2u0 = random_vel(&grid, &mut rng, zero);
    s.du1 = random_vel(&grid, &mut rng, zero);
    s.dp0 = random_cell(&grid, &mut rng);
    s.dp1 = random_cell(&grid, &mut rng);

    let d = Dense::new(&grid);
    let varpi = DVector::from_element(d.ncell, cfg.lambda + cfg.chi);
    let chi = DVector::from_element(d.ncell, cfg.chi);
    let ops = Ops { d: &d, dt, nu: cfg.nu, varpi: varpi.clone() };
    let t1 = t_n + dt;
    let g1 = tr(t1);
    let force = |t: f64| d.sample(|k, x| problem.forcing(k, x, t));
    let grad = d.grad();
    let v = |f: &VelocityField| d.vel(f);
    let c = |f: &ScalarField| d.cell(f);

    let mut after = s.clone();
    step(&mut after, &cfg, problem).expect("library step failed");

    let mut fields = Vec::new();
    let mut cmp = |name: &'static str, want: DVector<f64>, got: DVector<f64>| {
        fields.push((name, max_abs(&(want - got))));
    };

    let split_scheme = |c_own: [f64; 3], e_own: [f64; 3], fresh: &dyn Fn(usize, usize) -> bool, jacobi: bool| {
        let un = v(&s.u_now);
        let rhs = force(t1) - &grad * c(&s.p_now);
        let fr = |i: usize, j: usize| !jacobi && fresh(i, j);
        let u = ops.split(1.0, &un, &rhs, &un, c_own, e_own, &fr, &g1);
        let p = ops.pressure(&c(&s.p_now), &u, &varpi, 1.0);
        (u, p)
    };

    match scheme {
        SchemeId::Ac1 => {
            let rhs = force(t1) - &grad * c(&s.p_now);
            let u = ops.coupled(&v(&s.u_now), &rhs, &g1);
            let p = ops.pressure(&c(&s.p_now), &u, &chi, 1.0);
            cmp("u", u, v(&after.u_now));
            cmp("p", p, c(&after.p_now));
        }
        SchemeId::Gs2d | SchemeId::Gs3d | SchemeId::Jacobi2d | SchemeId::JacobiNd | SchemeId::Gs3dModified => {
            let dd = dim as f64;
            let (co, eo, jac): ([f64; 3], [f64; 3], bool) = match scheme {
                SchemeId::Jacobi2d => ([1.0; 3], [0.0; 3], true),
                SchemeId::JacobiNd => ([dd; 3], [dd - 1.0; 3], true),
                SchemeId::Gs3dModified => ([1.0, 2.0, 2.0], [0.0, 1.0, 1.0], false),
                _ => ([1.0; 3], [0.0; 3], false),
            };
            let modified = scheme == SchemeId::Gs3dModified;
            let fresh = move |i: usize, j: usize| j < i && !(modified && i == 2 && j == 1);
            let (u, p) = split_scheme(co, eo, &fresh, jac);
            cmp("u", u, v(&after.u_now));
            cmp("p", p, c(&after.p_now));
        }
        SchemeId::Bdf2Bootstrap => {
            let ut0 = v(&s.tilde_u_now);
            let ut = ops.gs(&ut0, &(force(t1) - &grad * c(&s.tilde_p_now)), &g1);
            let pt = ops.pressure(&c(&s.tilde_p_now), &ut, &varpi, 1.0);
            let q = c(&s.p_now) + &pt - c(&s.tilde_p_now);
            let (un, up) = (v(&s.u_now), v(&s.u_prev));
            let base = &un * 2.0 - &up * 0.5;
            let upper = &un * 2.0 - &up;
            let rhs = force(t1) - &grad * &q;
            let u = ops.split(1.5, &base, &rhs, &upper, [1.0; 3], [0.0; 3], &|i, j| j < i, &g1);
            let p = ops.pressure(&q, &u, &varpi, 1.0);
            cmp("tilde_u", ut, v(&after.tilde_u_now));
            cmp("tilde_p", pt, c(&after.tilde_p_now));
            cmp("u", u, v(&after.u_now));
            cmp("p", p, c(&after.p_now));
        }
        SchemeId::Dirsplit1 => {
            let (un, up) = (v(&s.u_now), v(&s.u_prev));
            let f_mid = force(t_n + 0.5 * dt);
            let u = ops.factored(&un, &c(&s.p_half), &f_mid, &((&un + &up) * 0.5));
            let ph = ops.pressure(&c(&s.p_half), &(&u + &un), &varpi, 0.5);
            let p = &ph * 1.5 - c(&s.p_half) * 0.5;
            cmp("u", u, v(&after.u_now));
            cmp("p_half", ph, c(&after.p_half));
            cmp("p", p, c(&after.p_now));
        }
        SchemeId::DirsplitDefect2 => {
            let f_mid = force(t_n + 0.5 * dt);
            let (tn, tp) = (v(&s.tilde_u_now), v(&s.tilde_u_prev));
            let ut = ops.factored(&tn, &c(&s.tilde_p_now), &f_mid, &((&tn + &tp) * 0.5));
            let pt = ops.pressure(&c(&s.tilde_p_now), &(&ut + &tn), &varpi, 0.5);
            let (un, up) = (v(&s.u_now), v(&s.u_prev));
            let arg = (&un + &up) * 0.5 + &ut - &tn;
            let u = ops.factored(&un, &c(&s.p_half), &f_mid, &arg);
            let q = c(&s.p_half) + &pt - c(&s.tilde_p_now);
            let ph = ops.pressure(&q, &(&u + &un), &varpi, 0.5);
            cmp("tilde_u", ut, v(&after.tilde_u_now));
            cmp("tilde_p", pt, c(&after.tilde_p_now));
            cmp("u", u, v(&after.u_now));
            cmp("p_half", ph, c(&after.p_half));
        }
        SchemeId::Defect3Coupled | SchemeId::Defect3Split | SchemeId::Defect2Coupled | SchemeId::Defect2Split => {
            let coupled = matches!(scheme, SchemeId::Defect3Coupled | SchemeId::Defect2Coupled);
            let third = matches!(scheme, SchemeId::Defect3Coupled | SchemeId::Defect3Split);
            let coeff = if coupled { &chi } else { &varpi };
            let stage = |base: &DVector<f64>, q: &DVector<f64>, src: &DVector<f64>, g: Trace<'_>| {
                let rhs = src - &grad * q;
                let u = if coupled { ops.coupled(base, &rhs, g) } else { ops.gs(base, &rhs, g) };
                let p = ops.pressure(q, &u, coeff, 1.0);
                (u, p)
            };
            let cu = d.c_upper(&varpi);
            let u00 = v(&s.u0[0]);
            let (u0, p0) = stage(&u00, &c(&s.p0[0]), &force(t1), &g1);
            let du0 = (&u0 - &u00) / dt;
            let d2u0 = (&du0 - v(&s.du0)) / dt;
            let d3u0 = (&d2u0 - v(&s.d2u0)) / dt;
            let mut s1 = &d2u0 * -0.5;
            if !coupled {
                s1 += &cu * (&u00 - v(&s.u0[1])) / dt;
            }
            let u10 = v(&s.u1[0]);
            let (u1, p1) = stage(&u10, &(c(&s.p1[0]) + c(&s.dp0)), &s1, &zero);
            cmp("u0", u0, v(&after.u0[0]));
            cmp("p0", p0, c(&after.p0[0]));
            if third {
                let du1 = (&u1 - &u10) / dt;
                let mut s2 = (&du1 - v(&s.du1)) / dt * -0.5 + &d3u0 / 6.0;
                if !coupled {
                    s2 += &cu * (&u10 - v(&s.u1[1])) / dt;
                }
                let (u2, p2) = stage(&v(&s.u2), &(c(&s.p2) + c(&s.dp1)), &s2, &zero);
                cmp("u2", u2, v(&after.u2));
                cmp("p2", p2, c(&after.p2));
            }
            cmp("u1", u1, v(&after.u1[0]));
            cmp("p1", p1, c(&after.p1[0]));
        }
    }
    OracleReport { scheme, dim, fields }
}

/// Every (scheme, dimension) pair the oracle covers.
pub fn all_cases() -> Vec<(SchemeId, usize)> {
    use SchemeId::*;
    let mut out = Vec::new();
    for s in [Ac1, Gs2d, Jacobi2d, JacobiNd, Gs3d, Gs3dModified, Dirsplit1, DirsplitDefect2, Bdf2Bootstrap, Defect3Coupled, Defect3Split, Defect2Coupled, Defect2Split] {
        for dim in [2, 3] {
            if s.supports_dim(dim) {
                out.push((s, dim));
            }
        }
    }
    out
}
