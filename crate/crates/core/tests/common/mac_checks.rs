//! Measurements of the MAC operator suite: summation by parts, exactness
//! on polynomials and truncation ratios under grid halving.

use artcomp::mac::{
    advect, apply_dirichlet, apply_dirichlet_vec, apply_dirichlet_vec_zero, apply_dirichlet_zero, div_kappa_grad,
    divergence, dot, dot_vec, fill_zero_gradient, gradient, l2_norm, mixed_derivative, Location, MacGrid, ScalarField,
    Varpi, VelocityField,
};
use artcomp::manufactured::{AnalyticCase, CaseId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Relative defect of `⟨div u, p⟩ = −⟨u, ∇p⟩` for random no-slip `u`.
pub fn adjointness_defect(dim: usize, n: usize, seed: u64) -> f64 {
    let grid = MacGrid::unit(dim, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = VelocityField::from_fn(&grid, |_, _| 0.0);
    for k in 0..dim {
        let c = u.comp_mut(k);
        let vals: Vec<f64> = (0..c.owned_values().len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        c.set_owned_values(&vals).unwrap();
    }
    apply_dirichlet_vec_zero(&mut u);
    let mut p = ScalarField::zeros(&grid, Location::Cell);
    let vals: Vec<f64> = (0..grid.num_cells()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    p.set_owned_values(&vals).unwrap();
    fill_zero_gradient(&mut p);
    let lhs = dot(&divergence(&u).unwrap(), &p);
    let rhs = -dot_vec(&u, &gradient(&p).unwrap());
    (lhs - rhs).abs() / (1.0 + lhs.abs())
}

/// Largest error of the operators on fields they must reproduce exactly.
pub fn linear_exactness() -> f64 {
    let mut worst: f64 = 0.0;
    for dim in [2, 3] {
        let grid = MacGrid::new(dim, &vec![7; dim], [0.2, -0.3, 0.1], [1.3, 0.9, 1.1]).unwrap();
        // divergence of (x, −y) / (x, y, −2z) vanishes
        let lin = |k: usize, x: [f64; 3]| match (dim, k) {
            (2, 0) => x[0],
            (2, _) => -x[1],
            (_, 2) => -2.0 * x[2],
            _ => x[k],
        };
        let mut u = VelocityField::from_fn(&grid, lin);
        apply_dirichlet_vec(&mut u, lin);
        worst = worst.max(divergence(&u).unwrap().max_abs());
        // gradient of x + 2y (+ 3z) at interior faces
        let mut p = ScalarField::from_fn(&grid, Location::Cell, |x| x[0] + 2.0 * x[1] + 3.0 * x[2]);
        fill_zero_gradient(&mut p);
        let g = gradient(&p).unwrap();
        for k in 0..dim {
            let c = g.comp(k);
            c.for_each_unknown(|_, o| worst = worst.max((c.data()[o] - (k + 1) as f64).abs()));
        }
        // κ-Laplacian of a trilinear field is zero
        let bil = |x: [f64; 3]| 1.0 + x[0] - 2.0 * x[1] + 0.5 * x[2] + x[0] * x[1] + x[1] * x[2];
        for loc in [Location::Cell, Location::Face(0), Location::Face(1)] {
            let mut v = ScalarField::from_fn(&grid, loc, bil);
            apply_dirichlet(&mut v, bil);
            let l = div_kappa_grad(&v, &vec![0.7; dim]).unwrap();
            l.for_each_unknown(|_, o| worst = worst.max(l.data()[o].abs()));
        }
        // ∂_x(ϖ ∂_y (xy)) = ϖ at interior nodes
        let mut v = ScalarField::from_fn(&grid, Location::Face(1), |x| x[0] * x[1]);
        apply_dirichlet(&mut v, |x| x[0] * x[1]);
        let m = mixed_derivative(1, 0, &v, &Varpi::Const(2.5)).unwrap();
        m.for_each_unknown(|_, o| worst = worst.max((m.data()[o] - 2.5).abs()));
    }
    worst
}

/// Root-mean-square over the nodes selected by `keep`.
fn rms(f: &ScalarField, exact: impl Fn([f64; 3]) -> f64, keep: impl Fn(&ScalarField, [usize; 3]) -> bool) -> f64 {
    let mut s = 0.0;
    let vol = f.grid().cell_volume();
    f.for_each_owned(|idx, o| {
        if keep(f, idx) {
            let e = f.data()[o] - exact(f.position(idx));
            s += e * e * vol;
        }
    });
    s.sqrt()
}

fn unknown(f: &ScalarField, idx: [usize; 3]) -> bool {
    f.is_unknown(idx)
}

/// Nodes inside the fixed subsquare `[1/4, 3/4]²`.
fn deep(f: &ScalarField, idx: [usize; 3]) -> bool {
    let x = f.position(idx);
    (0..f.grid().dim()).all(|a| (0.25..=0.75).contains(&x[a]))
}

fn errors_at(n: usize) -> Vec<(&'static str, f64)> {
    let g2 = MacGrid::unit(2, n).unwrap();
    let mut out = Vec::new();

    let w = |k: usize, x: [f64; 3]| if k == 0 { (2.0 * x[0]).sin() * x[1].cos() } else { x[0].cos() * (3.0 * x[1]).sin() };
    let mut v = VelocityField::from_fn(&g2, w);
    apply_dirichlet_vec(&mut v, w);
    let dv = divergence(&v).unwrap();
    out.push((
        "divergence",
        rms(&dv, |x| 2.0 * (2.0 * x[0]).cos() * x[1].cos() + 3.0 * x[0].cos() * (3.0 * x[1]).cos(), unknown),
    ));

    let mut p = ScalarField::from_fn(&g2, Location::Cell, |x| x[0].cos() * x[1].sin());
    fill_zero_gradient(&mut p);
    let g = gradient(&p).unwrap();
    let mut gmax: f64 = 0.0;
    for k in 0..2 {
        let c = g.comp(k);
        c.for_each_unknown(|idx, o| {
            let x = c.position(idx);
            let e = if k == 0 { -x[0].sin() * x[1].sin() } else { x[0].cos() * x[1].cos() };
            gmax = gmax.max((c.data()[o] - e).abs());
        });
    }
    out.push(("gradient", gmax));

    let s = |x: [f64; 3]| (PI * x[0]).sin() * (PI * x[1]).sin();
    for (name, loc) in [("div_kappa_grad(cell)", Location::Cell), ("div_kappa_grad(face)", Location::Face(0))] {
        let mut v = ScalarField::from_fn(&g2, loc, s);
        apply_dirichlet_zero(&mut v);
        let l = div_kappa_grad(&v, &[1.0, 1.0]).unwrap();
        out.push((name, rms(&l, |x| -2.0 * PI * PI * s(x), unknown)));
    }

    let mut v = ScalarField::from_fn(&g2, Location::Face(1), |x| x[0].sin() * x[1].cos());
    apply_dirichlet(&mut v, |x| x[0].sin() * x[1].cos());
    let m = mixed_derivative(1, 0, &v, &Varpi::Const(2.0)).unwrap();
    out.push(("mixed_derivative", rms(&m, |x| -2.0 * x[0].cos() * x[1].sin(), unknown)));

    let case = AnalyticCase::new(CaseId::Mms2d);
    let mut u = VelocityField::from_fn(&g2, |k, x| case.velocity(k, x, 0.0));
    apply_dirichlet_vec(&mut u, |k, x| case.velocity(k, x, 0.0));
    let b = advect(&u).unwrap();
    for k in 0..2 {
        let name = if k == 0 { "advect(u_x)" } else { "advect(u_y)" };
        out.push((name, rms(b.comp(k), |x| case.advection(k, x, 0.0), deep)));
    }
    out
}

/// `e(h)/e(h/2)` for each operator, from `n` to `2n` cells.
pub fn truncation_ratios(n: usize) -> Vec<(&'static str, f64)> {
    let a = errors_at(n);
    let b = errors_at(2 * n);
    a.iter().zip(&b).map(|(x, y)| (x.0, x.1 / y.1)).collect()
}

/// Largest discrete divergence of a sampled manufactured velocity.
pub fn manufactured_divergence(case: CaseId, n: usize, t: f64) -> f64 {
    let c = AnalyticCase::new(case);
    let g = MacGrid::unit(case.dim(), n).unwrap();
    let mut u = VelocityField::from_fn(&g, |k, x| c.velocity(k, x, t));
    apply_dirichlet_vec(&mut u, |k, x| c.velocity(k, x, t));
    divergence(&u).unwrap().max_abs()
}

/// Discrete `‖sin(πx) sin(πy)‖` on cells.
pub fn sine_norm(n: usize) -> f64 {
    let g = MacGrid::unit(2, n).unwrap();
    l2_norm(&ScalarField::from_fn(&g, Location::Cell, |x| (PI * x[0]).sin() * (PI * x[1]).sin()))
}
