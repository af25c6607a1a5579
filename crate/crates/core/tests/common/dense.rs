//! Dense matrices of the MAC stencils, built directly from index arithmetic.
//!
//! Velocity vectors hold every owned node of every component, wall nodes
//! included; operator rows for wall nodes are zero. Cell vectors hold one
//! value per cell.

use artcomp::mac::{Location, MacGrid, ScalarField, VelocityField};
use nalgebra::{DMatrix, DVector};

pub type Trace<'a> = &'a dyn Fn(usize, [f64; 3]) -> f64;

pub struct Dense {
    pub grid: MacGrid,
    pub dim: usize,
    n: [usize; 3],
    h: [f64; 3],
    origin: [f64; 3],
    extent: [f64; 3],
    comp_off: Vec<usize>,
    pub nvel: usize,
    pub ncell: usize,
}

impl Dense {
    pub fn new(grid: &MacGrid) -> Self {
        let dim = grid.dim();
        let n = grid.cells();
        let mut comp_off = vec![0];
        for k in 0..dim {
            let d = Self::comp_dims_of(n, k);
            comp_off.push(comp_off[k] + d.iter().product::<usize>());
        }
        Self {
            grid: grid.clone(),
            dim,
            n,
            h: grid.spacing(),
            origin: grid.origin(),
            extent: grid.extent(),
            nvel: comp_off[dim],
            ncell: n.iter().product(),
            comp_off,
        }
    }

    fn comp_dims_of(n: [usize; 3], k: usize) -> [usize; 3] {
        let mut d = n;
        d[k] += 1;
        d
    }

    pub fn comp_dims(&self, k: usize) -> [usize; 3] {
        Self::comp_dims_of(self.n, k)
    }

    pub fn vi(&self, k: usize, idx: [usize; 3]) -> usize {
        let d = self.comp_dims(k);
        self.comp_off[k] + (idx[0] * d[1] + idx[1]) * d[2] + idx[2]
    }

    pub fn ci(&self, idx: [usize; 3]) -> usize {
        (idx[0] * self.n[1] + idx[1]) * self.n[2] + idx[2]
    }

    pub fn is_wall(&self, k: usize, idx: [usize; 3]) -> bool {
        idx[k] == 0 || idx[k] == self.n[k]
    }

    /// All owned velocity nodes as `(component, index)`.
    pub fn vel_nodes(&self) -> Vec<(usize, [usize; 3])> {
        let mut out = Vec::with_capacity(self.nvel);
        for k in 0..self.dim {
            let d = self.comp_dims(k);
            for i in 0..d[0] {
                for j in 0..d[1] {
                    for l in 0..d[2] {
                        out.push((k, [i, j, l]));
                    }
                }
            }
        }
        out
    }

    pub fn cells(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(self.ncell);
        for i in 0..self.n[0] {
            for j in 0..self.n[1] {
                for l in 0..self.n[2] {
                    out.push([i, j, l]);
                }
            }
        }
        out
    }

    pub fn face_pos(&self, k: usize, idx: [usize; 3]) -> [f64; 3] {
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            let off = if a == k { 0.0 } else { 0.5 };
            x[a] = self.origin[a] + (idx[a] as f64 + off) * self.h[a];
        }
        x
    }

    pub fn cell_pos(&self, idx: [usize; 3]) -> [f64; 3] {
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.origin[a] + (idx[a] as f64 + 0.5) * self.h[a];
        }
        x
    }

    pub fn sample(&self, f: impl Fn(usize, [f64; 3]) -> f64) -> DVector<f64> {
        DVector::from_iterator(self.nvel, self.vel_nodes().into_iter().map(|(k, idx)| f(k, self.face_pos(k, idx))))
    }

    pub fn sample_cells(&self, f: impl Fn([f64; 3]) -> f64) -> DVector<f64> {
        DVector::from_iterator(self.ncell, self.cells().into_iter().map(|c| f(self.cell_pos(c))))
    }

    pub fn vel(&self, u: &VelocityField) -> DVector<f64> {
        DVector::from_iterator(self.nvel, self.vel_nodes().into_iter().map(|(k, idx)| u.comp(k).get(idx)))
    }

    pub fn cell(&self, p: &ScalarField) -> DVector<f64> {
        assert_eq!(p.location(), Location::Cell);
        DVector::from_iterator(self.ncell, self.cells().into_iter().map(|c| p.get(c)))
    }

    /// Wall values of a trace, zero elsewhere.
    pub fn wall_values(&self, g: Trace<'_>) -> DVector<f64> {
        DVector::from_iterator(
            self.nvel,
            self.vel_nodes()
                .into_iter()
                .map(|(k, idx)| if self.is_wall(k, idx) { g(k, self.face_pos(k, idx)) } else { 0.0 }),
        )
    }

    /// Diagonal projection onto the unknown (non-wall) rows of the listed components.
    pub fn unknown_rows(&self, comps: &[usize]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nvel, self.nvel);
        for (k, idx) in self.vel_nodes() {
            if comps.contains(&k) && !self.is_wall(k, idx) {
                let r = self.vi(k, idx);
                m[(r, r)] = 1.0;
            }
        }
        m
    }

    /// `Σ_a κ_a ∂_aa` per component with mirror ghosts across tangential
    /// walls; returns the matrix and the constant contributed by the trace.
    pub fn diffusion(&self, kappa: [f64; 3], g: Trace<'_>) -> (DMatrix<f64>, DVector<f64>) {
        let mut m = DMatrix::zeros(self.nvel, self.nvel);
        let mut c = DVector::zeros(self.nvel);
        for (k, idx) in self.vel_nodes() {
            if self.is_wall(k, idx) {
                continue;
            }
            let r = self.vi(k, idx);
            let d = self.comp_dims(k);
            for a in 0..self.dim {
                let w = kappa[a] / (self.h[a] * self.h[a]);
                m[(r, r)] -= 2.0 * w;
                for side in [-1isize, 1] {
                    let j = idx[a] as isize + side;
                    if j >= 0 && (j as usize) < d[a] {
                        let mut nb = idx;
                        nb[a] = j as usize;
                        m[(r, self.vi(k, nb))] += w;
                    } else {
                        let mut x = self.face_pos(k, idx);
                        x[a] = if side < 0 { self.origin[a] } else { self.origin[a] + self.extent[a] };
                        m[(r, r)] -= w;
                        c[r] += 2.0 * w * g(k, x);
                    }
                }
            }
        }
        (m, c)
    }

    /// `∂_i(ϖ ∂_j v_j)` for `i ≠ j`, or the own-direction `∂_i(ϖ ∂_i v_i)`,
    /// with `ϖ` given per cell. Rows of component `i`, columns of `j`.
    pub fn graddiv_block(&self, i: usize, j: usize, varpi: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nvel, self.nvel);
        for (k, idx) in self.vel_nodes() {
            if k != i || self.is_wall(i, idx) {
                continue;
            }
            let r = self.vi(i, idx);
            for (cell_i, sign) in [(idx[i], 1.0), (idx[i] - 1, -1.0)] {
                let mut cell = idx;
                cell[i] = cell_i;
                let w = sign * varpi[self.ci(cell)] / (self.h[i] * self.h[j]);
                let mut hi = cell;
                hi[j] += 1;
                m[(r, self.vi(j, hi))] += w;
                m[(r, self.vi(j, cell))] -= w;
            }
        }
        m
    }

    /// Full `∇(ϖ div ·)`.
    pub fn graddiv(&self, varpi: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nvel, self.nvel);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m += self.graddiv_block(i, j, varpi);
            }
        }
        m
    }

    /// `C△`: row `i` collects `∂_i(ϖ ∂_j v_j)` for `j > i`.
    pub fn c_upper(&self, varpi: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nvel, self.nvel);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                m += self.graddiv_block(i, j, varpi);
            }
        }
        m
    }

    /// Face gradient of a cell vector; zero on wall rows.
    pub fn grad(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nvel, self.ncell);
        for (k, idx) in self.vel_nodes() {
            if self.is_wall(k, idx) {
                continue;
            }
            let r = self.vi(k, idx);
            let mut lo = idx;
            lo[k] -= 1;
            m[(r, self.ci(idx))] += 1.0 / self.h[k];
            m[(r, self.ci(lo))] -= 1.0 / self.h[k];
        }
        m
    }

    pub fn div(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.ncell, self.nvel);
        for c in self.cells() {
            let r = self.ci(c);
            for j in 0..self.dim {
                let mut hi = c;
                hi[j] += 1;
                m[(r, self.vi(j, hi))] += 1.0 / self.h[j];
                m[(r, self.vi(j, c))] -= 1.0 / self.h[j];
            }
        }
        m
    }

    /// Solves `a x = b` after replacing every wall row by `x = wall`.
    pub fn solve_with_walls(&self, mut a: DMatrix<f64>, mut b: DVector<f64>, wall: &DVector<f64>) -> DVector<f64> {
        for (k, idx) in self.vel_nodes() {
            if self.is_wall(k, idx) {
                let r = self.vi(k, idx);
                a.row_mut(r).fill(0.0);
                a[(r, r)] = 1.0;
                b[r] = wall[r];
            }
        }
        a.lu().solve(&b).expect("dense system is singular")
    }
}

pub fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}
