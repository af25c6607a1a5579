//! Discrete energy functionals behind the stability estimates.

use super::{SchemeConfig, SchemeError, SchemeId, SimState};
use crate::mac::{
    apply_dirichlet_zero, div_kappa_grad, dot, dot_vec, partial_to_cells, weighted_sq_norm,
    ScalarField, Varpi, VelocityField,
};

/// Named nonnegative terms of an energy functional and their sum.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyBreakdown {
    pub terms: Vec<(&'static str, f64)>,
    pub total: f64,
    /// True when the scheme has no proved functional and the generic
    /// `‖u‖² + dt‖ϖ^{−1/2}p‖²` is reported instead.
    pub heuristic: bool,
}

impl EnergyBreakdown {
    fn new(terms: Vec<(&'static str, f64)>, heuristic: bool) -> Self {
        let total = terms.iter().map(|t| t.1).sum();
        Self { terms, total, heuristic }
    }

    /// Same terms as `like`, all infinite; stands in for a diverged state.
    pub fn non_finite(like: &EnergyBreakdown) -> Self {
        let terms = like.terms.iter().map(|t| (t.0, f64::INFINITY)).collect();
        Self { terms, total: f64::INFINITY, heuristic: like.heuristic }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.0 == name).map(|t| t.1)
    }
}

/// `dt‖ϖ^{1/2} ∂_k u_k‖²`.
fn directional(u: &ScalarField, k: usize, varpi: &Varpi, dt: f64) -> Result<f64, SchemeError> {
    Ok(dt * weighted_sq_norm(&partial_to_cells(u, k)?, varpi, 1.0))
}

/// `(ν+ϖ)ν Σ_k (∂_xx ∂_yy u_k, u_k)` with homogeneous data between the factors.
fn split_seminorm(u: &VelocityField, nu: f64, varpi: f64) -> Result<f64, SchemeError> {
    let mut s = 0.0;
    for c in u.comps() {
        let mut v = c.clone();
        apply_dirichlet_zero(&mut v);
        let mut a = div_kappa_grad(&v, &[0.0, 1.0])?;
        apply_dirichlet_zero(&mut a);
        let b = div_kappa_grad(&a, &[1.0, 0.0])?;
        s += dot(&b, &v);
    }
    Ok((nu + varpi) * nu * s)
}

/// Energy functional of `state` for the configured scheme.
///
/// Proved functionals are used for `ac1`, `gs2d`, `jacobi2d`, `jacobi_nd`,
/// `gs3d_modified` and `dirsplit1`; all other schemes report the generic
/// functional flagged as heuristic.
pub fn energy(scheme: SchemeId, state: &SimState, cfg: &SchemeConfig) -> Result<EnergyBreakdown, SchemeError> {
    let dt = cfg.dt;
    let varpi = cfg.varpi();
    let u = &state.u_now;
    let kinetic = dot_vec(u, u);
    let pressure = |p: &ScalarField, w: &Varpi| dt * weighted_sq_norm(p, w, -1.0);
    let e = match scheme {
        SchemeId::Ac1 => EnergyBreakdown::new(
            vec![("kinetic", kinetic), ("pressure", pressure(&state.p_now, &Varpi::Const(cfg.chi)))],
            false,
        ),
        SchemeId::Gs2d => EnergyBreakdown::new(
            vec![
                ("kinetic", kinetic),
                ("pressure", pressure(&state.p_now, &varpi)),
                ("dir_2", directional(u.comp(1), 1, &varpi, dt)?),
            ],
            false,
        ),
        SchemeId::Jacobi2d => EnergyBreakdown::new(
            vec![
                ("kinetic", kinetic),
                ("pressure", pressure(&state.p_now, &varpi)),
                ("dir_1", directional(u.comp(0), 0, &varpi, dt)?),
                ("dir_2", directional(u.comp(1), 1, &varpi, dt)?),
            ],
            false,
        ),
        SchemeId::JacobiNd => {
            let d = cfg.dim as f64;
            let names = ["dir_1", "dir_2", "dir_3"];
            let mut terms = vec![("kinetic", kinetic), ("pressure", pressure(&state.p_now, &varpi))];
            for k in 0..cfg.dim {
                terms.push((names[k], d * directional(u.comp(k), k, &varpi, dt)?));
            }
            EnergyBreakdown::new(terms, false)
        }
        SchemeId::Gs3dModified => EnergyBreakdown::new(
            vec![
                ("kinetic", kinetic),
                ("pressure", pressure(&state.p_now, &varpi)),
                ("dir_2", 2.0 * directional(u.comp(1), 1, &varpi, dt)?),
                ("dir_3", 2.0 * directional(u.comp(2), 2, &varpi, dt)?),
            ],
            false,
        ),
        SchemeId::Dirsplit1 => {
            let w = varpi
                .constant()
                .ok_or_else(|| SchemeError::Config("direction splitting needs constant varpi".into()))?;
            let ubar2 = ScalarField::lincomb(0.5, u.comp(1), 0.5, state.u_prev.comp(1));
            EnergyBreakdown::new(
                vec![
                    ("kinetic", kinetic),
                    ("pressure", pressure(&state.p_half, &varpi)),
                    ("dir_2", directional(&ubar2, 1, &varpi, dt)?),
                    ("seminorm", 0.25 * dt * dt * split_seminorm(u, cfg.nu, w)?),
                ],
                false,
            )
        }
        _ => {
            let p = if scheme.half_step_pressure() { &state.p_half } else { &state.p_now };
            EnergyBreakdown::new(vec![("kinetic", kinetic), ("pressure", pressure(p, &varpi))], true)
        }
    };
    Ok(e)
}

/// Both sides of the algebraic identity behind the 3D stability proof:
///
/// `2((a₁+b₀+c₀)a₁ + (a₁+b₁+c₀)b₁ + (a₁+b₁+c₁)c₁) + 2(b₁−b₀)b₁ − 2(b₁−b₀)c₁ + 2(c₁−c₀)c₁`
/// `= (a₁+b₁+c₁)² + (a₁+b₀+c₀)² + 2(b₁²+c₁²−b₀²−c₀²) + (b₁−b₀−c₁+c₀)²`.
pub fn lemma_identity(a1: f64, b1: f64, c1: f64, b0: f64, c0: f64) -> (f64, f64) {
    let lhs = 2.0 * ((a1 + b0 + c0) * a1 + (a1 + b1 + c0) * b1 + (a1 + b1 + c1) * c1)
        + 2.0 * (b1 - b0) * b1
        - 2.0 * (b1 - b0) * c1
        + 2.0 * (c1 - c0) * c1;
    let rhs = (a1 + b1 + c1).powi(2)
        + (a1 + b0 + c0).powi(2)
        + 2.0 * (b1 * b1 + c1 * c1 - b0 * b0 - c0 * c0)
        + (b1 - b0 - c1 + c0).powi(2);
    (lhs, rhs)
}
