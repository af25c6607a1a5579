//! Manufactured solutions, their forcing, and error evaluation.

use crate::mac::{divergence, l2_norm, l2_norm_vec, Location, ScalarField, VelocityField};
use crate::schemes::Problem;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// `u = (sin x sin(y+t), cos x cos(y+t))`, `p = cos x sin(y+t)`.
    Mms2d,
    /// `u = (cos x sin y sin(z+t), sin x cos y sin(z+t), −2 sin x sin y cos(z+t))`,
    /// `p = cos(x+y+z+t)`.
    Mms3d,
}

impl CaseId {
    pub fn name(self) -> &'static str {
        match self {
            CaseId::Mms2d => "mms2d",
            CaseId::Mms3d => "mms3d",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            CaseId::Mms2d => 2,
            CaseId::Mms3d => 3,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mms2d" => Ok(CaseId::Mms2d),
            "mms3d" => Ok(CaseId::Mms3d),
            _ => Err(format!("unknown case '{s}'")),
        }
    }
}

/// Closed-form velocity and pressure with their derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyticCase {
    pub id: CaseId,
}

impl AnalyticCase {
    pub fn new(id: CaseId) -> Self {
        Self { id }
    }

    pub fn dim(&self) -> usize {
        self.id.dim()
    }

    pub fn velocity(&self, k: usize, x: [f64; 3], t: f64) -> f64 {
        let [a, b, c] = x;
        match self.id {
            CaseId::Mms2d => match k {
                0 => a.sin() * (b + t).sin(),
                _ => a.cos() * (b + t).cos(),
            },
            CaseId::Mms3d => match k {
                0 => a.cos() * b.sin() * (c + t).sin(),
                1 => a.sin() * b.cos() * (c + t).sin(),
                _ => -2.0 * a.sin() * b.sin() * (c + t).cos(),
            },
        }
    }

    pub fn pressure(&self, x: [f64; 3], t: f64) -> f64 {
        let [a, b, c] = x;
        match self.id {
            CaseId::Mms2d => a.cos() * (b + t).sin(),
            CaseId::Mms3d => (a + b + c + t).cos(),
        }
    }

    /// `∂_j u_k` for `j = 0..3`.
    pub fn velocity_gradient(&self, k: usize, x: [f64; 3], t: f64) -> [f64; 3] {
        let [a, b, c] = x;
        match self.id {
            CaseId::Mms2d => {
                let (sy, cy) = (b + t).sin_cos();
                match k {
                    0 => [a.cos() * sy, a.sin() * cy, 0.0],
                    _ => [-a.sin() * cy, -a.cos() * sy, 0.0],
                }
            }
            CaseId::Mms3d => {
                let (sz, cz) = (c + t).sin_cos();
                let (sa, ca) = a.sin_cos();
                let (sb, cb) = b.sin_cos();
                match k {
                    0 => [-sa * sb * sz, ca * cb * sz, ca * sb * cz],
                    1 => [ca * cb * sz, -sa * sb * sz, sa * cb * cz],
                    _ => [-2.0 * ca * sb * cz, -2.0 * sa * cb * cz, 2.0 * sa * sb * sz],
                }
            }
        }
    }

    pub fn velocity_laplacian(&self, k: usize, x: [f64; 3], t: f64) -> f64 {
        let factor = match self.id {
            CaseId::Mms2d => -2.0,
            CaseId::Mms3d => -3.0,
        };
        factor * self.velocity(k, x, t)
    }

    pub fn velocity_time_derivative(&self, k: usize, x: [f64; 3], t: f64) -> f64 {
        let [a, b, c] = x;
        match self.id {
            CaseId::Mms2d => match k {
                0 => a.sin() * (b + t).cos(),
                _ => -a.cos() * (b + t).sin(),
            },
            CaseId::Mms3d => match k {
                0 => a.cos() * b.sin() * (c + t).cos(),
                1 => a.sin() * b.cos() * (c + t).cos(),
                _ => 2.0 * a.sin() * b.sin() * (c + t).sin(),
            },
        }
    }

    pub fn pressure_gradient(&self, x: [f64; 3], t: f64) -> [f64; 3] {
        let [a, b, c] = x;
        match self.id {
            CaseId::Mms2d => [-a.sin() * (b + t).sin(), a.cos() * (b + t).cos(), 0.0],
            CaseId::Mms3d => {
                let s = -(a + b + c + t).sin();
                [s, s, s]
            }
        }
    }

    /// `((u·∇)u)_k`.
    pub fn advection(&self, k: usize, x: [f64; 3], t: f64) -> f64 {
        let g = self.velocity_gradient(k, x, t);
        (0..self.dim()).map(|j| self.velocity(j, x, t) * g[j]).sum()
    }

    pub fn divergence(&self, x: [f64; 3], t: f64) -> f64 {
        (0..self.dim()).map(|k| self.velocity_gradient(k, x, t)[k]).sum()
    }
}

/// `f = ∂_t u − νΔu + ∇p`.
pub fn forcing_stokes(case: &AnalyticCase, nu: f64, x: [f64; 3], t: f64) -> [f64; 3] {
    let gp = case.pressure_gradient(x, t);
    let mut f = [0.0; 3];
    for k in 0..case.dim() {
        f[k] = case.velocity_time_derivative(k, x, t) - nu * case.velocity_laplacian(k, x, t) + gp[k];
    }
    f
}

/// `f = ∂_t u − νΔu + (u·∇)u + ∇p`.
pub fn forcing_ns(case: &AnalyticCase, nu: f64, x: [f64; 3], t: f64) -> [f64; 3] {
    let mut f = forcing_stokes(case, nu, x, t);
    for (k, fk) in f.iter_mut().enumerate().take(case.dim()) {
        *fk += case.advection(k, x, t);
    }
    f
}

/// A manufactured case as a [`Problem`]: forcing plus exact wall traces.
#[derive(Clone, Copy, Debug)]
pub struct ManufacturedProblem {
    pub case: AnalyticCase,
    pub nu: f64,
    pub nonlinear: bool,
}

impl Problem for ManufacturedProblem {
    fn forcing(&self, k: usize, x: [f64; 3], t: f64) -> f64 {
        let f = if self.nonlinear {
            forcing_ns(&self.case, self.nu, x, t)
        } else {
            forcing_stokes(&self.case, self.nu, x, t)
        };
        f[k]
    }

    fn boundary(&self, k: usize, x: [f64; 3], t: f64) -> f64 {
        self.case.velocity(k, x, t)
    }
}

/// L² errors of velocity and pressure and the divergence norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorTriple {
    pub err_u: f64,
    pub err_p: f64,
    pub err_div: f64,
}

fn pressure_error(p: &ScalarField, p_ref: &ScalarField, mean_adjust: bool) -> f64 {
    let mut e = ScalarField::lincomb(1.0, p, -1.0, p_ref);
    if mean_adjust {
        let m = e.mean();
        e.data_mut().iter_mut().for_each(|v| *v -= m);
    }
    l2_norm(&e)
}

/// Errors of a discrete state against the exact solution at time `t`;
/// `err_div` is `‖div u‖`.
pub fn evaluate_errors(
    u: &VelocityField,
    p: &ScalarField,
    case: &AnalyticCase,
    t: f64,
    mean_adjust: bool,
) -> ErrorTriple {
    let grid = u.grid();
    let ue = VelocityField::from_fn(grid, |k, x| case.velocity(k, x, t));
    let pe = ScalarField::from_fn(grid, Location::Cell, |x| case.pressure(x, t));
    let du = VelocityField::lincomb(1.0, u, -1.0, &ue);
    ErrorTriple {
        err_u: l2_norm_vec(&du),
        err_p: pressure_error(p, &pe, mean_adjust),
        err_div: divergence(u).map(|d| l2_norm(&d)).unwrap_or(f64::NAN),
    }
}

/// Errors against a discrete reference; `err_div` is `‖div(u − u_ref)‖`.
pub fn compare_to_reference(
    u: &VelocityField,
    p: &ScalarField,
    u_ref: &VelocityField,
    p_ref: &ScalarField,
    mean_adjust: bool,
) -> ErrorTriple {
    let du = VelocityField::lincomb(1.0, u, -1.0, u_ref);
    ErrorTriple {
        err_u: l2_norm_vec(&du),
        err_p: pressure_error(p, p_ref, mean_adjust),
        err_div: divergence(&du).map(|d| l2_norm(&d)).unwrap_or(f64::NAN),
    }
}
