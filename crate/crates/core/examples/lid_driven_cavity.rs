//! A user-defined problem: a driven cavity with a smoothed lid velocity,
//! advanced with the nonlinear Gauss-Seidel scheme until the flow settles.

use artcomp::mac::{divergence, l2_norm, l2_norm_vec, MacGrid, VelocityField};
use artcomp::schemes::{step, Problem, SchemeConfig, SchemeId, SimState};

struct Cavity;

impl Problem for Cavity {
    fn forcing(&self, _: usize, _: [f64; 3], _: f64) -> f64 {
        0.0
    }

    fn boundary(&self, k: usize, x: [f64; 3], _: f64) -> f64 {
        // tangential lid speed vanishing at the corners
        if k == 0 && x[1] > 1.0 - 1e-12 {
            16.0 * x[0] * x[0] * (1.0 - x[0]) * (1.0 - x[0])
        } else {
            0.0
        }
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = MacGrid::unit(2, 32)?;
    let mut cfg = SchemeConfig::new(SchemeId::Gs2d, 2, 0.05, 0.01);
    cfg.nonlinear = true;
    let mut state = SimState::zeros(&grid, cfg.dt);
    let mut last = VelocityField::zeros(&grid);
    for block in 1..=8 {
        for _ in 0..50 {
            step(&mut state, &cfg, &Cavity)?;
        }
        let change = VelocityField::lincomb(1.0, &state.u_now, -1.0, &last);
        println!(
            "t = {:>5.1}  ‖u‖ = {:.5}  change over block = {:.2e}  ‖div u‖ = {:.2e}",
            block as f64 * 50.0 * cfg.dt,
            l2_norm_vec(&state.u_now),
            l2_norm_vec(&change),
            l2_norm(&divergence(&state.u_now)?)
        );
        last = state.u_now.clone();
    }
    Ok(())
}
