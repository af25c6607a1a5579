//! The linear-algebra layer: a tridiagonal solve, a Helmholtz solve by
//! preconditioned CG, and the coupled grad-div system.

use artcomp::linsolve::{coupled_graddiv_solve, helmholtz_solve, thomas_solve, SolverOptions, Tridiag};
use artcomp::mac::{Location, MacGrid, ScalarField, Varpi, VelocityField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Tridiag::new(vec![-1.0; 4], vec![2.0; 5], vec![-1.0; 4])?;
    let x = thomas_solve(&m, &[1.0, 0.0, 0.0, 0.0, 1.0])?;
    println!("tridiagonal solution: {x:?}");

    let grid = MacGrid::unit(2, 64)?;
    let rhs = ScalarField::from_fn(&grid, Location::Cell, |x| x[0] * (1.0 - x[1]));
    let opts = SolverOptions::default();
    let (_, stats) = helmholtz_solve(1.0, 0.1, &[0.01, 0.01], &rhs, &|_| 0.0, &opts)?;
    println!(
        "Helmholtz 64²: {} CG iterations, relative residual {:.1e}",
        stats.iterations, stats.final_residual
    );

    let f = VelocityField::from_fn(&grid, |k, x| if k == 0 { x[1] } else { -x[0] });
    for dt in [0.01, 0.1, 1.0] {
        let (_, s) = coupled_graddiv_solve(0.01 * dt, &Varpi::Const(1.0), dt, &f, &|_, _| 0.0, None, &opts)?;
        println!("coupled grad-div, dt={dt:<4}: {} iterations", s.iterations);
    }
    Ok(())
}
