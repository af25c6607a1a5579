//! Scalar Helmholtz-type problems `α v − dt Σ_k ∂_k(κ_k ∂_k v) = r` with
//! Dirichlet data, solved by line-preconditioned CG or by exact line sweeps.

use super::cg::pcg;
use super::tridiag::{Tridiag, TridiagFactor};
use super::{Preconditioner, SolveError, SolveStats, SolverOptions};
use crate::mac::{apply_dirichlet, Location, Neighbor, ScalarField, Varpi};

/// Dirichlet trace as a function of position.
pub type Trace<'a> = &'a dyn Fn([f64; 3]) -> f64;

/// Variable-coefficient term `factor·∂_a(varpi ∂_a v)` along the normal axis
/// of a face field.
#[derive(Clone, Copy, Debug)]
pub struct OwnTerm<'a> {
    pub axis: usize,
    pub factor: f64,
    pub varpi: &'a Varpi,
}

/// `α v − dt (Σ_k κ_k ∂_kk v + own)`.
#[derive(Clone, Copy, Debug)]
pub struct Helmholtz<'a> {
    pub alpha: f64,
    pub dt: f64,
    pub kappa: [f64; 3],
    pub own: Option<OwnTerm<'a>>,
}

impl<'a> Helmholtz<'a> {
    pub fn new(alpha: f64, dt: f64, kappa: &[f64]) -> Self {
        let mut k = [0.0; 3];
        k[..kappa.len()].copy_from_slice(kappa);
        Self { alpha, dt, kappa: k, own: None }
    }

    pub fn with_own(mut self, own: OwnTerm<'a>) -> Self {
        self.own = Some(own);
        self
    }

    fn validate(&self, loc: Location, dim: usize) -> Result<(), SolveError> {
        if !(self.alpha > 0.0) {
            return Err(SolveError::Param(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.dt >= 0.0) {
            return Err(SolveError::Param(format!("dt must be nonnegative, got {}", self.dt)));
        }
        if self.kappa[..dim].iter().any(|k| !(*k >= 0.0)) {
            return Err(SolveError::Param("diffusion coefficients must be nonnegative".into()));
        }
        if let Some(own) = self.own {
            if loc != Location::Face(own.axis) {
                return Err(SolveError::Param(
                    "own-direction term needs a field on faces normal to its axis".into(),
                ));
            }
            if !(own.factor >= 0.0) || !(own.varpi.min() >= 0.0) {
                return Err(SolveError::Param("own-direction coefficient must be nonnegative".into()));
            }
        }
        Ok(())
    }
}

/// Assembled stencil for one field layout.
pub struct HelmholtzSystem {
    template: ScalarField,
    dim: usize,
    alpha: f64,
    dt: f64,
    /// Field offsets of the unknowns, in flat order.
    unk: Vec<usize>,
    /// Per unknown: `[w_minus, w_plus]` for each axis.
    weights: Vec<[f64; 6]>,
    /// `(ghost, source)` offsets for homogeneous mirror filling.
    mirrors: Vec<(usize, usize)>,
    diag: Vec<f64>,
    strides: [usize; 3],
}

impl HelmholtzSystem {
    pub fn new(op: &Helmholtz<'_>, layout: &ScalarField) -> Result<Self, SolveError> {
        let grid = layout.grid().clone();
        let dim = grid.dim();
        op.validate(layout.location(), dim)?;
        let h = grid.spacing();
        let template = ScalarField::zeros(&grid, layout.location());
        let mut unk = Vec::with_capacity(template.num_unknowns());
        let mut weights = Vec::with_capacity(template.num_unknowns());
        let mut mirrors = Vec::new();
        let mut diag = Vec::with_capacity(template.num_unknowns());
        let strides = [template.stride(0), template.stride(1), template.stride(2)];
        let cell_ref = ScalarField::zeros(&grid, Location::Cell);
        template.for_each_unknown(|idx, o| {
            let mut w = [0.0; 6];
            let mut d = op.alpha;
            for a in 0..dim {
                let base = op.kappa[a] / (h[a] * h[a]);
                let (mut wm, mut wp) = (base, base);
                if let Some(own) = op.own {
                    if own.axis == a {
                        let mut c = idx;
                        let vp = own.varpi.at(cell_ref.offset(c));
                        c[a] -= 1;
                        let vm = own.varpi.at(cell_ref.offset(c));
                        wm += own.factor * vm / (h[a] * h[a]);
                        wp += own.factor * vp / (h[a] * h[a]);
                    }
                }
                w[2 * a] = wm;
                w[2 * a + 1] = wp;
                for (side, wt) in [(-1isize, wm), (1, wp)] {
                    match template.neighbor(idx, a, side) {
                        Neighbor::Mirror => {
                            d += 2.0 * op.dt * wt;
                            let g = if side < 0 { o - strides[a] } else { o + strides[a] };
                            mirrors.push((g, o));
                        }
                        _ => d += op.dt * wt,
                    }
                }
            }
            unk.push(o);
            weights.push(w);
            diag.push(d);
        });
        Ok(Self { template, dim, alpha: op.alpha, dt: op.dt, unk, weights, mirrors, diag, strides })
    }

    pub fn num_unknowns(&self) -> usize {
        self.unk.len()
    }

    pub fn unknown_offsets(&self) -> &[usize] {
        &self.unk
    }

    pub fn layout(&self) -> &ScalarField {
        &self.template
    }

    /// Operator applied to a field whose walls and ghosts are already set.
    pub fn apply_field_data(&self, data: &[f64], out: &mut [f64]) {
        for (n, &o) in self.unk.iter().enumerate() {
            let c = data[o];
            let w = &self.weights[n];
            let mut acc = 0.0;
            for a in 0..self.dim {
                let s = self.strides[a];
                acc += w[2 * a] * (c - data[o - s]) + w[2 * a + 1] * (c - data[o + s]);
            }
            out[n] = self.alpha * c + self.dt * acc;
        }
    }

    /// Operator with homogeneous Dirichlet data, on flat unknown vectors.
    pub fn apply_homogeneous(&self, x: &[f64], y: &mut [f64], work: &mut [f64]) {
        self.scatter(x, work);
        for &(g, s) in &self.mirrors {
            work[g] = -work[s];
        }
        self.apply_field_data(work, y);
    }

    pub fn scatter(&self, x: &[f64], data: &mut [f64]) {
        for (v, &o) in x.iter().zip(&self.unk) {
            data[o] = *v;
        }
    }

    pub fn gather(&self, data: &[f64]) -> Vec<f64> {
        self.unk.iter().map(|&o| data[o]).collect()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Tridiagonal blocks of the operator along `axis`.
    pub fn line_preconditioner(&self, axis: usize) -> Result<LinePreconditioner, SolveError> {
        let mut flat_of = vec![usize::MAX; self.template.data().len()];
        for (n, &o) in self.unk.iter().enumerate() {
            flat_of[o] = n;
        }
        let s = self.strides[axis];
        let mut lines = Vec::new();
        for (n, &o) in self.unk.iter().enumerate() {
            // start of a line: no unknown predecessor
            if o >= s && flat_of[o - s] != usize::MAX {
                continue;
            }
            let mut members = vec![n];
            let mut cur = o;
            while cur + s < flat_of.len() && flat_of[cur + s] != usize::MAX {
                cur += s;
                members.push(flat_of[cur]);
            }
            let m = members.len();
            let diag: Vec<f64> = members.iter().map(|&i| self.diag[i]).collect();
            let off: Vec<f64> = members[..m - 1]
                .iter()
                .map(|&i| -self.dt * self.weights[i][2 * axis + 1])
                .collect();
            let t = Tridiag::new(off.clone(), diag, off)?;
            lines.push((members, t.factor()?));
        }
        Ok(LinePreconditioner { lines })
    }

    /// Picks the axis with the strongest coupling for line relaxation.
    pub fn dominant_axis(&self) -> usize {
        let mut best = (0, f64::MIN);
        for a in 0..self.dim {
            let s: f64 = self.weights.iter().map(|w| w[2 * a] + w[2 * a + 1]).sum();
            if s > best.1 {
                best = (a, s);
            }
        }
        best.0
    }

    /// Builds the requested preconditioner as a closure-friendly object.
    pub fn preconditioner(&self, kind: Preconditioner) -> Result<Precond, SolveError> {
        Ok(match kind {
            Preconditioner::None => Precond::Identity,
            Preconditioner::Jacobi => Precond::Jacobi(self.diag.iter().map(|d| 1.0 / d).collect()),
            Preconditioner::Line => Precond::Line(self.line_preconditioner(self.dominant_axis())?),
        })
    }

    /// Solves with Dirichlet data `trace`; `guess` seeds the iteration.
    pub fn solve(
        &self,
        rhs: &ScalarField,
        trace: Trace<'_>,
        guess: Option<&ScalarField>,
        opts: &SolverOptions,
    ) -> Result<(ScalarField, SolveStats), SolveError> {
        if !rhs.same_layout(&self.template) {
            return Err(SolveError::Param("rhs layout does not match the operator".into()));
        }
        let mut vbc = self.template.clone();
        apply_dirichlet(&mut vbc, trace);
        let mut b = vec![0.0; self.unk.len()];
        self.apply_field_data(vbc.data(), &mut b);
        let r = rhs.data();
        for (bi, &o) in b.iter_mut().zip(&self.unk) {
            *bi = r[o] - *bi;
        }
        let mut x = match guess {
            Some(g) => self.gather(g.data()),
            None => vec![0.0; self.unk.len()],
        };
        let pre = self.preconditioner(opts.preconditioner)?;
        let mut work = self.template.data().to_vec();
        let max_iter = opts.max_iter_for(self.unk.len(), self.dim);
        let stats = pcg(
            &b,
            &mut x,
            |v, y| self.apply_homogeneous(v, y, &mut work),
            |r, z| pre.apply(r, z),
            opts.tol,
            max_iter,
        );
        if !stats.converged {
            return Err(SolveError::NotConverged(stats));
        }
        let mut out = vbc;
        self.scatter(&x, out.data_mut());
        apply_dirichlet(&mut out, trace);
        Ok((out, stats))
    }
}

pub struct LinePreconditioner {
    lines: Vec<(Vec<usize>, TridiagFactor)>,
}

impl LinePreconditioner {
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        let mut buf = Vec::new();
        for (members, f) in &self.lines {
            buf.clear();
            buf.extend(members.iter().map(|&i| r[i]));
            f.solve_in_place(&mut buf);
            for (&i, v) in members.iter().zip(&buf) {
                z[i] = *v;
            }
        }
    }
}

pub enum Precond {
    Identity,
    Jacobi(Vec<f64>),
    Line(LinePreconditioner),
}

impl Precond {
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        match self {
            Precond::Identity => z.copy_from_slice(r),
            Precond::Jacobi(inv) => {
                for i in 0..r.len() {
                    z[i] = r[i] * inv[i];
                }
            }
            Precond::Line(l) => l.apply(r, z),
        }
    }
}

/// Solves `α v − dt div(κ ∇v) = rhs` with Dirichlet data on `v`.
///
/// Time dependence of the boundary data is carried by the trace closure.
pub fn helmholtz_solve(
    alpha: f64,
    dt: f64,
    kappa: &[f64],
    rhs: &ScalarField,
    trace: Trace<'_>,
    opts: &SolverOptions,
) -> Result<(ScalarField, SolveStats), SolveError> {
    if kappa.len() != rhs.grid().dim() {
        return Err(SolveError::Param("one coefficient per axis required".into()));
    }
    let op = Helmholtz::new(alpha, dt, kappa);
    HelmholtzSystem::new(&op, rhs)?.solve(rhs, trace, None, opts)
}

/// Solves `(α − coeff ∂_kk) v = rhs` exactly by independent tridiagonal
/// solves along every grid line in direction `axis`.
pub fn factored_solve_line_sweep(
    axis: usize,
    alpha: f64,
    coeff: f64,
    rhs: &ScalarField,
    trace: Trace<'_>,
) -> Result<ScalarField, SolveError> {
    let mut bc = ScalarField::zeros(rhs.grid(), rhs.location());
    apply_dirichlet(&mut bc, trace);
    line_sweep_with_bc(axis, alpha, coeff, rhs, &bc)
}

/// As [`factored_solve_line_sweep`], with boundary data taken from the wall
/// nodes and ghosts of `bc` (interior values of `bc` are ignored).
pub fn line_sweep_with_bc(
    axis: usize,
    alpha: f64,
    coeff: f64,
    rhs: &ScalarField,
    bc: &ScalarField,
) -> Result<ScalarField, SolveError> {
    let dim = rhs.grid().dim();
    if axis >= dim {
        return Err(SolveError::Param(format!("axis {axis} out of range")));
    }
    if !(coeff >= 0.0) {
        return Err(SolveError::Param(format!("line coefficient must be nonnegative, got {coeff}")));
    }
    if !bc.same_layout(rhs) {
        return Err(SolveError::Param("boundary field layout does not match rhs".into()));
    }
    let mut kappa = [0.0; 3];
    kappa[axis] = coeff;
    let op = Helmholtz { alpha, dt: 1.0, kappa, own: None };
    let sys = HelmholtzSystem::new(&op, rhs)?;
    // Shift mirror ghosts to the zero-interior lift: 2g − 0 = ghost + interior.
    let mut vbc = bc.clone();
    for &(g, s) in &sys.mirrors {
        vbc.data_mut()[g] = bc.data()[g] + bc.data()[s];
    }
    for &o in &sys.unk {
        vbc.data_mut()[o] = 0.0;
    }
    let mut b = vec![0.0; sys.unk.len()];
    sys.apply_field_data(vbc.data(), &mut b);
    let r = rhs.data();
    for (bi, &o) in b.iter_mut().zip(&sys.unk) {
        *bi = r[o] - *bi;
    }
    let lines = sys.line_preconditioner(axis)?;
    let mut x = vec![0.0; b.len()];
    lines.apply(&b, &mut x);
    let mut out = vbc;
    sys.scatter(&x, out.data_mut());
    let d = out.data_mut();
    for &(g, s) in &sys.mirrors {
        d[g] -= d[s];
    }
    Ok(out)
}
