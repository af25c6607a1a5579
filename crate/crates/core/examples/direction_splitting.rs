//! Stepping the direction-splitting schemes by hand.
//!
//! Each step solves only tridiagonal line systems. The pressure lives at
//! half-integer levels; `SimState::solution` extrapolates it to the
//! integer level for comparison with the exact solution.

use artcomp::mac::MacGrid;
use artcomp::manufactured::{evaluate_errors, AnalyticCase, CaseId, ManufacturedProblem};
use artcomp::schemes::{step, SchemeConfig, SchemeId, SimState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = MacGrid::unit(2, 32)?;
    let case = AnalyticCase::new(CaseId::Mms2d);
    let nu = 0.01;
    for id in [SchemeId::Dirsplit1, SchemeId::DirsplitDefect2] {
        println!("{id}");
        for dt in [0.1, 0.05, 0.025] {
            let cfg = SchemeConfig::new(id, 2, dt, nu);
            let problem = ManufacturedProblem { case, nu, nonlinear: false };
            let mut state = SimState::from_exact(&cfg, &grid, &|k, x, t| case.velocity(k, x, t), &|x, t| case.pressure(x, t))?;
            let steps = (2.0 / dt).round() as usize;
            for _ in 0..steps {
                step(&mut state, &cfg, &problem)?;
            }
            let (u, p, t) = state.solution(id);
            let e = evaluate_errors(&u, &p, &case, t, true);
            println!("  dt={dt:<6} t={t:.2}  err_u={:.3e}  err_p={:.3e}", e.err_u, e.err_p);
        }
    }
    Ok(())
}
