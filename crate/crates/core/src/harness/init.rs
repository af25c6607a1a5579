//! Random discretely divergence-free velocity fields.

use crate::mac::{apply_dirichlet_vec_zero, Location, MacGrid, ScalarField, VelocityField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Potential component `c` on the grid edges parallel to axis `c`
/// (nodes along the other axes), zero on the walls.
fn potential(grid: &MacGrid, c: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = grid.cells();
    let dims = node_dims(grid, c);
    let mut a = vec![0.0; dims.iter().product()];
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let idx = [i, j, k];
                let interior = (0..grid.dim()).filter(|&b| b != c).all(|b| idx[b] > 0 && idx[b] < n[b]);
                let v: f64 = rng.gen_range(-1.0..1.0);
                if interior {
                    a[(i * dims[1] + j) * dims[2] + k] = v;
                }
            }
        }
    }
    a
}

/// Extents of potential component `c`: cells along `c`, nodes elsewhere.
/// In 2D only the out-of-plane component exists and it lives on nodes.
fn node_dims(grid: &MacGrid, c: usize) -> [usize; 3] {
    let n = grid.cells();
    let mut d = [1; 3];
    for b in 0..grid.dim() {
        d[b] = if b == c { n[b] } else { n[b] + 1 };
    }
    d
}

/// `u = curl A` with random `A` vanishing tangentially on the walls, so
/// `div u = 0` exactly at every cell and `u·n = 0` on the boundary.
/// The result is normalised to unit discrete L² norm.
pub fn random_solenoidal(grid: &MacGrid, seed: u64) -> VelocityField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = grid.dim();
    let h = grid.spacing();
    let pots: Vec<(usize, Vec<f64>)> = if dim == 2 {
        vec![(2, potential(grid, 2, &mut rng))]
    } else {
        (0..3).map(|c| (c, potential(grid, c, &mut rng))).collect()
    };
    let get = |c: usize, idx: [usize; 3]| -> f64 {
        let (_, a) = pots.iter().find(|p| p.0 == c).expect("potential present");
        let d = node_dims(grid, c);
        a[(idx[0] * d[1] + idx[1]) * d[2] + idx[2]]
    };
    let has = |c: usize| pots.iter().any(|p| p.0 == c);
    let mut comps = Vec::with_capacity(dim);
    for a in 0..dim {
        let mut f = ScalarField::zeros(grid, Location::Face(a));
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        let mut vals = Vec::new();
        f.for_each_owned(|idx, off| {
            // u_a = ∂_b A_c − ∂_c A_b
            let mut v = 0.0;
            if has(c) && b < dim {
                let mut hi = idx;
                hi[b] += 1;
                v += (get(c, hi) - get(c, idx)) / h[b];
            }
            if has(b) && c < dim {
                let mut hi = idx;
                hi[c] += 1;
                v -= (get(b, hi) - get(b, idx)) / h[c];
            }
            vals.push((off, v));
        });
        for (off, v) in vals {
            f.data_mut()[off] = v;
        }
        comps.push(f);
    }
    let mut u = VelocityField::from_components(comps).expect("consistent layout");
    apply_dirichlet_vec_zero(&mut u);
    let norm = crate::mac::l2_norm_vec(&u);
    if norm > 0.0 {
        u.scale(1.0 / norm);
    }
    u
}
