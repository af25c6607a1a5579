//! The algebraic pressure update of every scheme, evaluated with the dense
//! divergence matrix on the states before and after a step.

use super::dense::{max_abs, Dense};
use artcomp::manufactured::{AnalyticCase, CaseId, ManufacturedProblem};
use artcomp::schemes::{step, SchemeConfig, SchemeId, SimState};
use nalgebra::DVector;
use artcomp::mac::{ScalarField, VelocityField};

struct Law<'a> {
    d: &'a Dense,
    coeff: DVector<f64>,
}

impl Law<'_> {
    fn div(&self, u: &VelocityField) -> DVector<f64> {
        self.d.div() * self.d.vel(u)
    }

    /// `p_new − (q − scale·c·div u)` per cell.
    fn residual(&self, p_new: &ScalarField, q: DVector<f64>, u: DVector<f64>, scale: f64) -> f64 {
        let r = self.d.cell(p_new) - q + (self.coeff.component_mul(&u)) * scale;
        max_abs(&r) / (1.0 + max_abs(&self.d.cell(p_new)))
    }
}

fn coeff_cells(d: &Dense, cfg: &SchemeConfig, chi_only: bool) -> DVector<f64> {
    if chi_only {
        return DVector::from_element(d.ncell, cfg.chi);
    }
    match &cfg.lambda_field {
        Some(l) => d.cell(l).add_scalar(cfg.chi),
        None => DVector::from_element(d.ncell, cfg.lambda + cfg.chi),
    }
}

/// Largest relative pressure-law residual of the step `before → after`.
pub fn pressure_law_residual(cfg: &SchemeConfig, before: &SimState, after: &SimState) -> f64 {
    let d = Dense::new(&before.grid);
    let id = cfg.scheme;
    let coupled = matches!(id, SchemeId::Ac1 | SchemeId::Defect2Coupled | SchemeId::Defect3Coupled);
    let law = Law { coeff: coeff_cells(&d, cfg, coupled), d: &d };
    let c = |p: &ScalarField| d.cell(p);
    match id {
        SchemeId::Ac1
        | SchemeId::Gs2d
        | SchemeId::Jacobi2d
        | SchemeId::JacobiNd
        | SchemeId::Gs3d
        | SchemeId::Gs3dModified => law.residual(&after.p_now, c(&before.p_now), law.div(&after.u_now), 1.0),
        SchemeId::Dirsplit1 => {
            let s = law.div(&after.u_now) + law.div(&before.u_now);
            law.residual(&after.p_half, c(&before.p_half), s, 0.5)
        }
        SchemeId::DirsplitDefect2 => {
            let st = law.div(&after.tilde_u_now) + law.div(&before.tilde_u_now);
            let a = law.residual(&after.tilde_p_now, c(&before.tilde_p_now), st, 0.5);
            let q = c(&before.p_half) + c(&after.tilde_p_now) - c(&before.tilde_p_now);
            let s = law.div(&after.u_now) + law.div(&before.u_now);
            a.max(law.residual(&after.p_half, q, s, 0.5))
        }
        SchemeId::Bdf2Bootstrap => {
            let a = law.residual(&after.tilde_p_now, c(&before.tilde_p_now), law.div(&after.tilde_u_now), 1.0);
            let q = c(&before.p_now) + c(&after.tilde_p_now) - c(&before.tilde_p_now);
            a.max(law.residual(&after.p_now, q, law.div(&after.u_now), 1.0))
        }
        SchemeId::Defect2Coupled | SchemeId::Defect2Split | SchemeId::Defect3Coupled | SchemeId::Defect3Split => {
            let mut r = law.residual(&after.p0[0], c(&before.p0[0]), law.div(&after.u0[0]), 1.0);
            if before.n >= 1 {
                let q = c(&before.p1[0]) + c(&before.dp0);
                r = r.max(law.residual(&after.p1[0], q, law.div(&after.u1[0]), 1.0));
            }
            if id.nominal_order() == 3 && before.n >= 2 {
                let q = c(&before.p2) + c(&before.dp1);
                r = r.max(law.residual(&after.p2, q, law.div(&after.u2), 1.0));
            }
            r
        }
    }
}

/// Worst pressure-law residual over `steps` manufactured steps.
pub fn run_with_law_checks(scheme: SchemeId, dim: usize, nonlinear: bool, steps: usize) -> f64 {
    let case_id = if dim == 2 { CaseId::Mms2d } else { CaseId::Mms3d };
    let case = AnalyticCase::new(case_id);
    let n = if dim == 2 { 12 } else { 6 };
    let grid = artcomp::mac::MacGrid::unit(dim, n).unwrap();
    let mut cfg = SchemeConfig::new(scheme, dim, 0.1, 0.05);
    cfg.nonlinear = nonlinear;
    let problem = ManufacturedProblem { case, nu: cfg.nu, nonlinear };
    let mut state = SimState::from_exact(&cfg, &grid, &|k, x, t| case.velocity(k, x, t), &|x, t| case.pressure(x, t)).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        let before = state.clone();
        step(&mut state, &cfg, &problem).unwrap();
        worst = worst.max(pressure_law_residual(&cfg, &before, &state));
    }
    worst
}
