//! Grid geometry and staggered field storage.
//!
//! Every field carries one ghost layer per side along each active axis. In 2D
//! the third axis is collapsed to a single node with no ghosts, so all loops
//! can be written over three indices.

use super::GridError;

/// Uniform staggered grid on an axis-aligned box.
#[derive(Clone, Debug, PartialEq)]
pub struct MacGrid {
    dim: usize,
    n: [usize; 3],
    origin: [f64; 3],
    extent: [f64; 3],
    h: [f64; 3],
}

impl MacGrid {
    /// Unit square or cube with `n` cells along every axis.
    pub fn unit(dim: usize, n: usize) -> Result<Self, GridError> {
        Self::new(dim, &vec![n; dim], [0.0; 3], [1.0; 3])
    }

    pub fn new(
        dim: usize,
        cells: &[usize],
        origin: [f64; 3],
        extent: [f64; 3],
    ) -> Result<Self, GridError> {
        if dim != 2 && dim != 3 {
            return Err(GridError::Param(format!("dimension must be 2 or 3, got {dim}")));
        }
        if cells.len() != dim {
            return Err(GridError::Param(format!(
                "expected {dim} cell counts, got {}",
                cells.len()
            )));
        }
        let mut n = [1; 3];
        let mut h = [1.0; 3];
        for a in 0..dim {
            if cells[a] < 2 {
                return Err(GridError::Param(format!("axis {a}: need at least 2 cells")));
            }
            if !(extent[a] > 0.0) {
                return Err(GridError::Param(format!("axis {a}: extent must be positive")));
            }
            n[a] = cells[a];
            h[a] = extent[a] / cells[a] as f64;
        }
        Ok(Self { dim, n, origin, extent, h })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cells per axis; `1` on the collapsed third axis in 2D.
    pub fn cells(&self) -> [usize; 3] {
        self.n
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.h
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn extent(&self) -> [f64; 3] {
        self.extent
    }

    /// Cell volume (area in 2D).
    pub fn cell_volume(&self) -> f64 {
        self.h[..self.dim].iter().product()
    }

    pub fn num_cells(&self) -> usize {
        self.n.iter().product()
    }
}

/// Where the nodes of a field sit inside the cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Cell,
    /// Faces normal to the given axis.
    Face(usize),
}

/// Classification of a neighbour reached from an unknown node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Neighbor {
    Unknown,
    /// Face node on the wall, holds a prescribed value.
    Boundary,
    /// Ghost node across a wall, filled by mirror extrapolation.
    Mirror,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: MacGrid,
    loc: Location,
    dims: [usize; 3],
    ghost: [usize; 3],
    stride: [usize; 3],
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &MacGrid, loc: Location) -> Self {
        if let Location::Face(k) = loc {
            assert!(k < grid.dim(), "face axis {k} out of range");
        }
        let mut dims = grid.cells();
        if let Location::Face(k) = loc {
            dims[k] += 1;
        }
        let mut ghost = [0; 3];
        for g in ghost.iter_mut().take(grid.dim()) {
            *g = 1;
        }
        let ext = [dims[0] + 2 * ghost[0], dims[1] + 2 * ghost[1], dims[2] + 2 * ghost[2]];
        let stride = [ext[1] * ext[2], ext[2], 1];
        Self {
            grid: grid.clone(),
            loc,
            dims,
            ghost,
            stride,
            data: vec![0.0; ext[0] * ext[1] * ext[2]],
        }
    }

    /// Samples `f` at every node, ghosts included.
    pub fn from_fn(grid: &MacGrid, loc: Location, f: impl Fn([f64; 3]) -> f64) -> Self {
        let mut out = Self::zeros(grid, loc);
        let g = out.ghost;
        for i in -(g[0] as isize)..(out.dims[0] + g[0]) as isize {
            for j in -(g[1] as isize)..(out.dims[1] + g[1]) as isize {
                for k in -(g[2] as isize)..(out.dims[2] + g[2]) as isize {
                    let x = out.position_signed([i, j, k]);
                    let o = out.offset_signed([i, j, k]);
                    out.data[o] = f(x);
                }
            }
        }
        out
    }

    pub fn grid(&self) -> &MacGrid {
        &self.grid
    }

    pub fn location(&self) -> Location {
        self.loc
    }

    /// Owned node counts per axis.
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.stride[axis]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Storage offset of an owned node.
    #[inline]
    pub fn offset(&self, idx: [usize; 3]) -> usize {
        (idx[0] + self.ghost[0]) * self.stride[0]
            + (idx[1] + self.ghost[1]) * self.stride[1]
            + (idx[2] + self.ghost[2])
    }

    /// Storage offset of any node, ghosts included (`-1` and `dims[a]`).
    #[inline]
    pub fn offset_signed(&self, idx: [isize; 3]) -> usize {
        let mut o = 0;
        for a in 0..3 {
            let v = idx[a] + self.ghost[a] as isize;
            debug_assert!(v >= 0 && (v as usize) < self.dims[a] + 2 * self.ghost[a]);
            o += v as usize * self.stride[a];
        }
        o
    }

    #[inline]
    pub fn get(&self, idx: [usize; 3]) -> f64 {
        self.data[self.offset(idx)]
    }

    #[inline]
    pub fn set(&mut self, idx: [usize; 3], v: f64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// Physical coordinate of a node along one axis.
    #[inline]
    pub fn coord(&self, axis: usize, i: isize) -> f64 {
        if axis >= self.grid.dim {
            return 0.0;
        }
        let h = self.grid.h[axis];
        let o = self.grid.origin[axis];
        match self.loc {
            Location::Face(k) if k == axis => o + i as f64 * h,
            _ => o + (i as f64 + 0.5) * h,
        }
    }

    pub fn position(&self, idx: [usize; 3]) -> [f64; 3] {
        self.position_signed([idx[0] as isize, idx[1] as isize, idx[2] as isize])
    }

    pub fn position_signed(&self, idx: [isize; 3]) -> [f64; 3] {
        [self.coord(0, idx[0]), self.coord(1, idx[1]), self.coord(2, idx[2])]
    }

    /// True when the node's value is a solver unknown (not a wall face node).
    #[inline]
    pub fn is_unknown(&self, idx: [usize; 3]) -> bool {
        match self.loc {
            Location::Face(k) => idx[k] > 0 && idx[k] + 1 < self.dims[k],
            Location::Cell => true,
        }
    }

    /// Whether the node lies on the wall along its own normal axis.
    #[inline]
    pub fn on_wall(&self, idx: [usize; 3]) -> bool {
        !self.is_unknown(idx)
    }

    /// Neighbour kind of an unknown node along `axis`, side `-1` or `+1`.
    #[inline]
    pub fn neighbor(&self, idx: [usize; 3], axis: usize, side: isize) -> Neighbor {
        let last = self.dims[axis] - 1;
        let edge = if side < 0 { idx[axis] == 0 } else { idx[axis] == last };
        let next_edge = if side < 0 { idx[axis] == 1 } else { idx[axis] + 1 == last };
        match self.loc {
            Location::Face(k) if k == axis => {
                if next_edge {
                    Neighbor::Boundary
                } else {
                    Neighbor::Unknown
                }
            }
            _ => {
                if edge {
                    Neighbor::Mirror
                } else {
                    Neighbor::Unknown
                }
            }
        }
    }

    /// Visits every owned node.
    pub fn for_each_owned(&self, mut f: impl FnMut([usize; 3], usize)) {
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let idx = [i, j, k];
                    f(idx, self.offset(idx));
                }
            }
        }
    }

    /// Visits every unknown node.
    pub fn for_each_unknown(&self, mut f: impl FnMut([usize; 3], usize)) {
        let (lo, hi) = self.unknown_range();
        for i in lo[0]..hi[0] {
            for j in lo[1]..hi[1] {
                for k in lo[2]..hi[2] {
                    let idx = [i, j, k];
                    f(idx, self.offset(idx));
                }
            }
        }
    }

    pub fn unknown_range(&self) -> ([usize; 3], [usize; 3]) {
        let mut lo = [0; 3];
        let mut hi = self.dims;
        if let Location::Face(k) = self.loc {
            lo[k] = 1;
            hi[k] = self.dims[k] - 1;
        }
        (lo, hi)
    }

    pub fn num_unknowns(&self) -> usize {
        let (lo, hi) = self.unknown_range();
        (0..3).map(|a| hi[a] - lo[a]).product()
    }

    /// Quadrature weight of an owned node: cell volume, halved per wall
    /// coordinate for face nodes lying on the boundary (trapezoid rule).
    #[inline]
    pub fn weight(&self, idx: [usize; 3]) -> f64 {
        let v = self.grid.cell_volume();
        if self.on_wall(idx) {
            0.5 * v
        } else {
            v
        }
    }

    pub fn same_layout(&self, other: &ScalarField) -> bool {
        self.loc == other.loc && self.grid == other.grid
    }

    pub fn fill(&mut self, v: f64) {
        self.data.iter_mut().for_each(|x| *x = v);
    }

    pub fn scale(&mut self, a: f64) {
        self.data.iter_mut().for_each(|x| *x *= a);
    }

    /// `self += a * other`, ghosts included.
    pub fn axpy(&mut self, a: f64, other: &ScalarField) {
        debug_assert!(self.same_layout(other));
        self.data.iter_mut().zip(&other.data).for_each(|(x, y)| *x += a * y);
    }

    /// `a * x + b * y`.
    pub fn lincomb(a: f64, x: &ScalarField, b: f64, y: &ScalarField) -> ScalarField {
        debug_assert!(x.same_layout(y));
        let mut out = x.clone();
        out.data.iter_mut().zip(&y.data).for_each(|(o, v)| *o = a * *o + b * v);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Largest absolute owned value.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        self.for_each_owned(|_, o| m = m.max(self.data[o].abs()));
        m
    }

    /// Largest absolute value over unknown nodes.
    pub fn max_abs_unknown(&self) -> f64 {
        let mut m = 0.0f64;
        self.for_each_unknown(|_, o| m = m.max(self.data[o].abs()));
        m
    }

    /// Weighted mean over owned nodes.
    pub fn mean(&self) -> f64 {
        let (mut s, mut w) = (0.0, 0.0);
        self.for_each_owned(|idx, o| {
            let wt = self.weight(idx);
            s += wt * self.data[o];
            w += wt;
        });
        s / w
    }

    /// Copies owned values out in row-major order.
    pub fn owned_values(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dims.iter().product());
        self.for_each_owned(|_, o| v.push(self.data[o]));
        v
    }

    /// Inverse of [`ScalarField::owned_values`]; ghosts are left at zero.
    pub fn set_owned_values(&mut self, values: &[f64]) -> Result<(), GridError> {
        let n: usize = self.dims.iter().product();
        if values.len() != n {
            return Err(GridError::Mismatch(format!(
                "expected {n} owned values, got {}",
                values.len()
            )));
        }
        let mut it = values.iter();
        let offsets: Vec<usize> = {
            let mut v = Vec::with_capacity(n);
            self.for_each_owned(|_, o| v.push(o));
            v
        };
        for o in offsets {
            self.data[o] = *it.next().unwrap();
        }
        Ok(())
    }
}

/// Velocity with component `k` on faces normal to axis `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityField {
    comps: Vec<ScalarField>,
}

impl VelocityField {
    pub fn zeros(grid: &MacGrid) -> Self {
        Self {
            comps: (0..grid.dim()).map(|k| ScalarField::zeros(grid, Location::Face(k))).collect(),
        }
    }

    pub fn from_fn(grid: &MacGrid, f: impl Fn(usize, [f64; 3]) -> f64) -> Self {
        Self {
            comps: (0..grid.dim())
                .map(|k| ScalarField::from_fn(grid, Location::Face(k), |x| f(k, x)))
                .collect(),
        }
    }

    pub fn from_components(comps: Vec<ScalarField>) -> Result<Self, GridError> {
        let Some(first) = comps.first() else {
            return Err(GridError::Mismatch("no components".into()));
        };
        let grid = first.grid().clone();
        if comps.len() != grid.dim() {
            return Err(GridError::Mismatch(format!(
                "{} components on a {}D grid",
                comps.len(),
                grid.dim()
            )));
        }
        for (k, c) in comps.iter().enumerate() {
            if c.grid() != &grid || c.location() != Location::Face(k) {
                return Err(GridError::Mismatch(format!("component {k} has wrong layout")));
            }
        }
        Ok(Self { comps })
    }

    pub fn grid(&self) -> &MacGrid {
        self.comps[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, k: usize) -> &ScalarField {
        &self.comps[k]
    }

    pub fn comp_mut(&mut self, k: usize) -> &mut ScalarField {
        &mut self.comps[k]
    }

    pub fn comps(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn comps_mut(&mut self) -> &mut [ScalarField] {
        &mut self.comps
    }

    pub fn set_comp(&mut self, k: usize, f: ScalarField) {
        debug_assert!(f.same_layout(&self.comps[k]));
        self.comps[k] = f;
    }

    pub fn scale(&mut self, a: f64) {
        self.comps.iter_mut().for_each(|c| c.scale(a));
    }

    pub fn axpy(&mut self, a: f64, other: &VelocityField) {
        for (c, o) in self.comps.iter_mut().zip(&other.comps) {
            c.axpy(a, o);
        }
    }

    pub fn lincomb(a: f64, x: &VelocityField, b: f64, y: &VelocityField) -> VelocityField {
        VelocityField {
            comps: x
                .comps
                .iter()
                .zip(&y.comps)
                .map(|(u, v)| ScalarField::lincomb(a, u, b, v))
                .collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(ScalarField::is_finite)
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(ScalarField::max_abs).fold(0.0, f64::max)
    }
}
