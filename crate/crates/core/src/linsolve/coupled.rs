//! Coupled velocity system `u − ν dt Δu − dt ∇(varpi div u) = r`.

use super::cg::pcg;
use super::helmholtz::{Helmholtz, HelmholtzSystem, OwnTerm};
use super::{SolveError, SolveStats, SolverOptions};
use crate::mac::{
    apply_dirichlet_vec, divergence, gradient_axis, weight_cells, VelocityField, Varpi,
};

/// Per-component Dirichlet trace.
pub type VectorTrace<'a> = &'a dyn Fn(usize, [f64; 3]) -> f64;

struct CoupledOp {
    viscous: Vec<HelmholtzSystem>,
    dt_graddiv: f64,
    varpi: Varpi,
    offsets: Vec<usize>,
}

impl CoupledOp {
    fn apply_fields(&self, u: &VelocityField, out: &mut [f64]) -> Result<(), SolveError> {
        let q = weight_cells(&divergence(u)?, &self.varpi);
        for (k, sys) in self.viscous.iter().enumerate() {
            let range = self.offsets[k]..self.offsets[k + 1];
            let slot = &mut out[range];
            sys.apply_field_data(u.comp(k).data(), slot);
            let g = gradient_axis(&q, k)?;
            let gd = g.data();
            for (v, &o) in slot.iter_mut().zip(sys.unknown_offsets()) {
                *v -= self.dt_graddiv * gd[o];
            }
        }
        Ok(())
    }

    fn scatter(&self, x: &[f64], u: &mut VelocityField) {
        for (k, sys) in self.viscous.iter().enumerate() {
            sys.scatter(&x[self.offsets[k]..self.offsets[k + 1]], u.comp_mut(k).data_mut());
        }
    }
}

/// Solves `(I − nu_dt Δ − dt ∇(varpi div ·)) u = rhs` for all components at
/// once by CG, preconditioned by per-component line solves.
pub fn coupled_graddiv_solve(
    nu_dt: f64,
    varpi: &Varpi,
    dt: f64,
    rhs: &VelocityField,
    trace: VectorTrace<'_>,
    guess: Option<&VelocityField>,
    opts: &SolverOptions,
) -> Result<(VelocityField, SolveStats), SolveError> {
    let grid = rhs.grid().clone();
    let dim = grid.dim();
    if !(nu_dt >= 0.0) || !(dt >= 0.0) || !(varpi.min() >= 0.0) {
        return Err(SolveError::Param("coefficients must be nonnegative".into()));
    }
    varpi.check(&grid)?;
    let mut viscous = Vec::with_capacity(dim);
    let mut pre = Vec::with_capacity(dim);
    let mut offsets = vec![0];
    for k in 0..dim {
        let op = Helmholtz::new(1.0, 1.0, &vec![nu_dt; dim]);
        let sys = HelmholtzSystem::new(&op, rhs.comp(k))?;
        offsets.push(offsets[k] + sys.num_unknowns());
        viscous.push(sys);
        let pop = Helmholtz::new(1.0, 1.0, &vec![nu_dt; dim]).with_own(OwnTerm {
            axis: k,
            factor: dt,
            varpi: varpi,
        });
        let psys = HelmholtzSystem::new(&pop, rhs.comp(k))?;
        pre.push(psys.preconditioner(opts.preconditioner)?);
    }
    let op = CoupledOp { viscous, dt_graddiv: dt, varpi: varpi.clone(), offsets };
    let n = *op.offsets.last().unwrap();

    let mut ubc = VelocityField::zeros(&grid);
    apply_dirichlet_vec(&mut ubc, trace);
    let mut b = vec![0.0; n];
    op.apply_fields(&ubc, &mut b)?;
    for k in 0..dim {
        let r = rhs.comp(k).data();
        let sys = &op.viscous[k];
        for (bi, &o) in b[op.offsets[k]..op.offsets[k + 1]].iter_mut().zip(sys.unknown_offsets()) {
            *bi = r[o] - *bi;
        }
    }
    let mut x = vec![0.0; n];
    if let Some(g) = guess {
        for k in 0..dim {
            let v = op.viscous[k].gather(g.comp(k).data());
            x[op.offsets[k]..op.offsets[k + 1]].copy_from_slice(&v);
        }
    }
    let mut work = VelocityField::zeros(&grid);
    let mut err = None;
    // the preconditioner leaves the cross grad-div blocks, whose spectrum
    // reaches ~4d·dt·ϖ/h²; allow twice the CG bound ½√κ·ln(2/tol) for them
    let h = grid.spacing()[..dim].iter().cloned().fold(f64::INFINITY, f64::min);
    let kappa = 1.0 + 4.0 * dim as f64 * dt * varpi.max() / (h * h);
    let bound = (kappa.sqrt() * (2.0 / opts.tol.min(0.5)).ln()).ceil() as usize;
    let max_iter = match opts.max_iter {
        Some(m) => m,
        None => opts.max_iter_for(n / dim, dim).max(bound),
    };
    let stats = pcg(
        &b,
        &mut x,
        |v, y| {
            op.scatter(v, &mut work);
            crate::mac::apply_dirichlet_vec_zero(&mut work);
            if let Err(e) = op.apply_fields(&work, y) {
                err = Some(e);
            }
        },
        |r, z| {
            for k in 0..dim {
                let range = op.offsets[k]..op.offsets[k + 1];
                pre[k].apply(&r[range.clone()], &mut z[range]);
            }
        },
        opts.tol,
        max_iter,
    );
    if let Some(e) = err {
        return Err(e);
    }
    if !stats.converged {
        return Err(SolveError::NotConverged(stats));
    }
    let mut out = ubc;
    op.scatter(&x, &mut out);
    apply_dirichlet_vec(&mut out, trace);
    Ok((out, stats))
}
