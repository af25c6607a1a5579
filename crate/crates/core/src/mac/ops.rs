//! Second-order MAC difference operators and boundary filling.

use super::field::{Location, MacGrid, ScalarField, VelocityField};
use super::GridError;

/// Grad-div coefficient: a constant or a positive cell-centred field.
#[derive(Clone, Debug, PartialEq)]
pub enum Varpi {
    Const(f64),
    Field(ScalarField),
}

impl Varpi {
    #[inline]
    pub fn at(&self, cell_offset: usize) -> f64 {
        match self {
            Varpi::Const(v) => *v,
            Varpi::Field(f) => f.data()[cell_offset],
        }
    }

    pub fn constant(&self) -> Option<f64> {
        match self {
            Varpi::Const(v) => Some(*v),
            Varpi::Field(_) => None,
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            Varpi::Const(v) => *v,
            Varpi::Field(f) => {
                let mut m = f64::INFINITY;
                f.for_each_owned(|_, o| m = m.min(f.data()[o]));
                m
            }
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            Varpi::Const(v) => *v,
            Varpi::Field(f) => {
                let mut m = f64::NEG_INFINITY;
                f.for_each_owned(|_, o| m = m.max(f.data()[o]));
                m
            }
        }
    }

    /// Checks a field coefficient against the grid it will be used on.
    pub fn check(&self, grid: &MacGrid) -> Result<(), GridError> {
        if let Varpi::Field(f) = self {
            if f.grid() != grid || f.location() != Location::Cell {
                return Err(GridError::Mismatch("varpi must be a cell field on the same grid".into()));
            }
        }
        Ok(())
    }
}

/// Unit vector offsets, in index space.
#[inline]
fn shifted(idx: [usize; 3], axis: usize, by: isize) -> [isize; 3] {
    let mut s = [idx[0] as isize, idx[1] as isize, idx[2] as isize];
    s[axis] += by;
    s
}

fn check_velocity(u: &VelocityField) -> Result<(), GridError> {
    let g = u.grid();
    for (k, c) in u.comps().iter().enumerate() {
        if c.grid() != g || c.location() != Location::Face(k) {
            return Err(GridError::Mismatch(format!("velocity component {k} does not match grid")));
        }
    }
    Ok(())
}

/// `∂_j v` for a field on faces normal to `j`, landing on cell centres.
pub fn partial_to_cells(v: &ScalarField, j: usize) -> Result<ScalarField, GridError> {
    if v.location() != Location::Face(j) {
        return Err(GridError::Mismatch(format!("expected a field on faces normal to axis {j}")));
    }
    let grid = v.grid();
    let mut out = ScalarField::zeros(grid, Location::Cell);
    let inv_h = 1.0 / grid.spacing()[j];
    let sj = v.stride(j);
    let src = v.data();
    let mut vals = Vec::with_capacity(grid.num_cells());
    out.for_each_owned(|idx, _| {
        let o = v.offset(idx);
        vals.push((src[o + sj] - src[o]) * inv_h);
    });
    let mut it = vals.into_iter();
    let offs: Vec<usize> = owned_offsets(&out);
    let d = out.data_mut();
    for o in offs {
        d[o] = it.next().unwrap();
    }
    Ok(out)
}

fn owned_offsets(f: &ScalarField) -> Vec<usize> {
    let mut v = Vec::with_capacity(f.dims().iter().product());
    f.for_each_owned(|_, o| v.push(o));
    v
}

/// Discrete divergence at cell centres.
pub fn divergence(u: &VelocityField) -> Result<ScalarField, GridError> {
    check_velocity(u)?;
    let mut out = partial_to_cells(u.comp(0), 0)?;
    for j in 1..u.dim() {
        let d = partial_to_cells(u.comp(j), j)?;
        out.axpy(1.0, &d);
    }
    Ok(out)
}

/// `∂_k q` on faces normal to `k` for a cell field `q` (ghosts used at walls).
pub fn gradient_axis(q: &ScalarField, k: usize) -> Result<ScalarField, GridError> {
    if q.location() != Location::Cell {
        return Err(GridError::Mismatch("gradient expects a cell-centred field".into()));
    }
    let grid = q.grid();
    if k >= grid.dim() {
        return Err(GridError::Param(format!("axis {k} out of range")));
    }
    let mut out = ScalarField::zeros(grid, Location::Face(k));
    let inv_h = 1.0 / grid.spacing()[k];
    let src = q.data();
    let mut vals = Vec::with_capacity(out.dims().iter().product());
    out.for_each_owned(|idx, _| {
        let right = q.offset_signed(shifted(idx, k, 0));
        let left = q.offset_signed(shifted(idx, k, -1));
        vals.push((src[right] - src[left]) * inv_h);
    });
    let offs = owned_offsets(&out);
    let d = out.data_mut();
    for (o, v) in offs.into_iter().zip(vals) {
        d[o] = v;
    }
    Ok(out)
}

/// Face-located gradient of a cell field.
pub fn gradient(p: &ScalarField) -> Result<VelocityField, GridError> {
    let comps = (0..p.grid().dim())
        .map(|k| gradient_axis(p, k))
        .collect::<Result<Vec<_>, _>>()?;
    VelocityField::from_components(comps)
}

/// Pointwise `varpi * q` for a cell field.
pub fn weight_cells(q: &ScalarField, varpi: &Varpi) -> ScalarField {
    match varpi {
        Varpi::Const(c) => {
            let mut out = q.clone();
            out.scale(*c);
            out
        }
        Varpi::Field(w) => {
            let mut out = q.clone();
            let wd = w.data();
            out.data_mut().iter_mut().zip(wd).for_each(|(a, b)| *a *= b);
            out
        }
    }
}

/// `∂_i(varpi ∂_j v)` on faces normal to `i`, with `v` on faces normal to `j`.
///
/// The inner derivative lands on cell centres, so for `i != j` this is the
/// cross term of the discrete `∇(varpi div u)`, and for `i == j` the
/// own-direction term. Values on wall nodes are set to zero.
fn grad_weighted_partial(
    i: usize,
    j: usize,
    v: &ScalarField,
    varpi: &Varpi,
) -> Result<ScalarField, GridError> {
    varpi.check(v.grid())?;
    let q = weight_cells(&partial_to_cells(v, j)?, varpi);
    let mut out = gradient_axis(&q, i)?;
    zero_walls(&mut out);
    Ok(out)
}

/// Mixed second derivative `∂_i(varpi ∂_j v)` contributing component `j` to
/// the equation for component `i`.
pub fn mixed_derivative(
    j: usize,
    i: usize,
    v: &ScalarField,
    varpi: &Varpi,
) -> Result<ScalarField, GridError> {
    if i == j {
        return Err(GridError::Param(
            "mixed_derivative needs distinct axes; use div_kappa_grad or own_diffusion".into(),
        ));
    }
    grad_weighted_partial(i, j, v, varpi)
}

/// `∂_i(varpi ∂_i v)` for a field on faces normal to `i`.
pub fn own_diffusion(i: usize, v: &ScalarField, varpi: &Varpi) -> Result<ScalarField, GridError> {
    grad_weighted_partial(i, i, v, varpi)
}

/// `Σ_k κ_k ∂_kk v` on the field's own nodes, using its ghost layer.
pub fn div_kappa_grad(v: &ScalarField, kappa: &[f64]) -> Result<ScalarField, GridError> {
    let grid = v.grid();
    let dim = grid.dim();
    if kappa.len() != dim {
        return Err(GridError::Param(format!("need {dim} coefficients, got {}", kappa.len())));
    }
    if let Some(k) = kappa.iter().find(|k| !(**k >= 0.0)) {
        return Err(GridError::Param(format!("diffusion coefficient {k} must be nonnegative")));
    }
    let h = grid.spacing();
    let w: Vec<f64> = (0..dim).map(|a| kappa[a] / (h[a] * h[a])).collect();
    let strides: Vec<usize> = (0..dim).map(|a| v.stride(a)).collect();
    let mut out = ScalarField::zeros(grid, v.location());
    let src = v.data();
    let offs = owned_offsets(v);
    let dst = out.data_mut();
    for o in offs {
        let c = src[o];
        let mut acc = 0.0;
        for a in 0..dim {
            let s = strides[a];
            acc += w[a] * (src[o + s] - 2.0 * c + src[o - s]);
        }
        dst[o] = acc;
    }
    Ok(out)
}

/// Advective term `(u·∇)u` with central differences and face-averaged
/// transporting velocities. Zero on wall nodes.
pub fn advect(u: &VelocityField) -> Result<VelocityField, GridError> {
    check_velocity(u)?;
    let dim = u.dim();
    let h = u.grid().spacing();
    let mut out = VelocityField::zeros(u.grid());
    for k in 0..dim {
        let uk = u.comp(k);
        let src = uk.data();
        let mut vals = Vec::with_capacity(uk.num_unknowns());
        uk.for_each_unknown(|idx, o| {
            let mut acc = 0.0;
            for j in 0..dim {
                let s = uk.stride(j);
                let du = (src[o + s] - src[o - s]) / (2.0 * h[j]);
                let a = if j == k {
                    src[o]
                } else {
                    let uj = u.comp(j);
                    let d = uj.data();
                    let mut base = idx;
                    base[k] -= 1;
                    let o0 = uj.offset(base);
                    let sk = uj.stride(k);
                    let sj = uj.stride(j);
                    0.25 * (d[o0] + d[o0 + sk] + d[o0 + sj] + d[o0 + sk + sj])
                };
                acc += a * du;
            }
            vals.push((o, acc));
        });
        let dst = out.comp_mut(k).data_mut();
        for (o, v) in vals {
            dst[o] = v;
        }
    }
    Ok(out)
}

/// Weighted inner product over owned nodes.
pub fn dot(f: &ScalarField, g: &ScalarField) -> f64 {
    debug_assert!(f.same_layout(g));
    let (a, b) = (f.data(), g.data());
    let mut s = 0.0;
    f.for_each_owned(|idx, o| s += f.weight(idx) * a[o] * b[o]);
    s
}

pub fn dot_vec(u: &VelocityField, v: &VelocityField) -> f64 {
    u.comps().iter().zip(v.comps()).map(|(a, b)| dot(a, b)).sum()
}

/// Discrete L² norm: `sqrt(Σ w f²)` over owned nodes, `w` the cell volume
/// (halved on wall face nodes).
pub fn l2_norm(f: &ScalarField) -> f64 {
    dot(f, f).sqrt()
}

pub fn l2_norm_vec(u: &VelocityField) -> f64 {
    dot_vec(u, u).sqrt()
}

/// `Σ_cells varpi^s f²·vol` for a cell field.
pub fn weighted_sq_norm(f: &ScalarField, varpi: &Varpi, power: f64) -> f64 {
    let d = f.data();
    let mut s = 0.0;
    f.for_each_owned(|idx, o| s += f.weight(idx) * varpi.at(o).powf(power) * d[o] * d[o]);
    s
}

/// Sets wall nodes (normal-axis boundary faces) to zero.
pub fn zero_walls(f: &mut ScalarField) {
    let Location::Face(k) = f.location() else { return };
    let dims = f.dims();
    let mut offs = Vec::new();
    f.for_each_owned(|idx, o| {
        if idx[k] == 0 || idx[k] == dims[k] - 1 {
            offs.push(o);
        }
    });
    let d = f.data_mut();
    for o in offs {
        d[o] = 0.0;
    }
}

fn ext_range(f: &ScalarField, axis: usize, with_ghost: bool) -> std::ops::Range<isize> {
    let g = if with_ghost && axis < f.grid().dim() { 1 } else { 0 };
    -g..(f.dims()[axis] as isize + g)
}

/// Fills wall nodes and the ghost layer from a Dirichlet trace.
///
/// Face nodes on the wall take the trace value; ghosts across a wall take
/// `2·trace(wall) − interior`; normal-axis ghosts of face fields are linearly
/// extrapolated from the wall node.
pub fn apply_dirichlet(f: &mut ScalarField, trace: impl Fn([f64; 3]) -> f64) {
    let grid = f.grid().clone();
    let dim = grid.dim();
    let (o, e) = (grid.origin(), grid.extent());
    for a in 0..dim {
        let last = f.dims()[a] as isize - 1;
        let s = f.stride(a);
        let r: Vec<std::ops::Range<isize>> = (0..3).map(|b| ext_range(f, b, b < a)).collect();
        let normal = f.location() == Location::Face(a);
        let (r0, r1) = (if a == 0 { 0..1 } else { r[0].clone() }, if a == 1 { 0..1 } else { r[1].clone() });
        let r2 = if a == 2 { 0..1 } else { r[2].clone() };
        for i in r0 {
            for j in r1.clone() {
                for k in r2.clone() {
                    let mut idx = [i, j, k];
                    for (side, pos) in [(0isize, o[a]), (last, o[a] + e[a])] {
                        idx[a] = side;
                        let off = f.offset_signed(idx);
                        let mut x = f.position_signed(idx);
                        x[a] = pos;
                        let g = trace(x);
                        let d = f.data_mut();
                        if normal {
                            d[off] = g;
                            let (inner, ghost) =
                                if side == 0 { (off + s, off - s) } else { (off - s, off + s) };
                            d[ghost] = 2.0 * g - d[inner];
                        } else {
                            let ghost = if side == 0 { off - s } else { off + s };
                            d[ghost] = 2.0 * g - d[off];
                        }
                    }
                }
            }
        }
    }
}

/// Homogeneous Dirichlet fill.
pub fn apply_dirichlet_zero(f: &mut ScalarField) {
    apply_dirichlet(f, |_| 0.0)
}

/// Zero-gradient ghost fill for cell fields (pressure carries no boundary
/// condition; ghosts exist only to evaluate gradients at wall faces).
pub fn fill_zero_gradient(p: &mut ScalarField) {
    let dim = p.grid().dim();
    for a in 0..dim {
        let last = p.dims()[a] as isize - 1;
        let s = p.stride(a);
        let r: Vec<std::ops::Range<isize>> = (0..3).map(|b| ext_range(p, b, b < a)).collect();
        let r0 = if a == 0 { 0..1 } else { r[0].clone() };
        let r1 = if a == 1 { 0..1 } else { r[1].clone() };
        let r2 = if a == 2 { 0..1 } else { r[2].clone() };
        for i in r0 {
            for j in r1.clone() {
                for k in r2.clone() {
                    let mut idx = [i, j, k];
                    for side in [0isize, last] {
                        idx[a] = side;
                        let off = p.offset_signed(idx);
                        let ghost = if side == 0 { off - s } else { off + s };
                        let d = p.data_mut();
                        d[ghost] = d[off];
                    }
                }
            }
        }
    }
}

/// Applies a per-component Dirichlet trace to every velocity component.
pub fn apply_dirichlet_vec(u: &mut VelocityField, trace: impl Fn(usize, [f64; 3]) -> f64) {
    for k in 0..u.dim() {
        apply_dirichlet(u.comp_mut(k), |x| trace(k, x));
    }
}

pub fn apply_dirichlet_vec_zero(u: &mut VelocityField) {
    for c in u.comps_mut() {
        apply_dirichlet_zero(c);
    }
}
