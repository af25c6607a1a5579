//! Defect correction: each stage solves the same backward-Euler operator
//! with a source built from divided differences of the previous stage.
//! The composite `u₀ + dt·u₁ + dt²·u₂` trails the newest level by two steps.

use artcomp::mac::{MacGrid, ScalarField, VelocityField};
use artcomp::manufactured::{evaluate_errors, AnalyticCase, CaseId, ManufacturedProblem};
use artcomp::schemes::{step, SchemeConfig, SchemeId, SimState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = MacGrid::unit(2, 48)?;
    let case = AnalyticCase::new(CaseId::Mms2d);
    let nu = 0.01;
    println!("{:>7} {:>12} {:>12} {:>12}", "dt", "stage 0", "0+1", "0+1+2");
    for dt in [0.4, 0.2, 0.1] {
        let cfg = SchemeConfig::new(SchemeId::Defect3Coupled, 2, dt, nu);
        let problem = ManufacturedProblem { case, nu, nonlinear: false };
        let mut s = SimState::from_exact(&cfg, &grid, &|k, x, t| case.velocity(k, x, t), &|x, t| case.pressure(x, t))?;
        let steps = (6.0 / dt).round() as usize + SchemeId::Defect3Coupled.output_lag();
        for _ in 0..steps {
            step(&mut s, &cfg, &problem)?;
        }
        // every partial composite at the level the last stage has reached
        let t = s.time() - 2.0 * dt;
        let err = |u: &VelocityField, p: &ScalarField| evaluate_errors(u, p, &case, t, true).err_u;
        let (u0, p0) = (s.u0[2].clone(), s.p0[2].clone());
        let mut u1 = u0.clone();
        u1.axpy(dt, &s.u1[1]);
        let mut p1 = p0.clone();
        p1.axpy(dt, &s.p1[1]);
        let (u2, p2, _) = s.solution(SchemeId::Defect3Coupled);
        println!("{dt:>7} {:>12.3e} {:>12.3e} {:>12.3e}", err(&u0, &p0), err(&u1, &p1), err(&u2, &p2));
    }
    Ok(())
}
