//! A spatially varying penalty `λ(x)`. The grad-div weight becomes
//! `ϖ = λ(x) + χ`, which the Gauss-Seidel and Jacobi schemes and the
//! coupled defect schemes accept; the split schemes need a constant.

use artcomp::harness::random_solenoidal;
use artcomp::mac::{Location, MacGrid, ScalarField};
use artcomp::schemes::{energy, step, SchemeConfig, SchemeId, SimState, Unforced};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = MacGrid::unit(2, 24)?;
    let lambda = ScalarField::from_fn(&grid, Location::Cell, |x| 5.0 * (x[0] - 0.5).powi(2));
    for id in [SchemeId::Gs2d, SchemeId::JacobiNd, SchemeId::Defect2Coupled, SchemeId::Defect2Split] {
        let mut cfg = SchemeConfig::new(id, 2, 0.1, 0.05);
        cfg.lambda_field = Some(lambda.clone());
        let u = random_solenoidal(&grid, 1);
        let p = ScalarField::zeros(&grid, Location::Cell);
        let mut state = match SimState::from_fields(&cfg, u, p) {
            Ok(s) => s,
            Err(e) => {
                println!("{id:>16}: rejected ({e})");
                continue;
            }
        };
        let e0 = energy(id, &state, &cfg)?.total;
        for _ in 0..100 {
            step(&mut state, &cfg, &Unforced)?;
        }
        let e1 = energy(id, &state, &cfg)?.total;
        println!("{id:>16}: energy {e0:.4e} -> {e1:.4e} after 100 steps");
    }
    Ok(())
}
