//! The staggered-grid operators: summation by parts and second-order
//! truncation of the viscous operator.

use artcomp::mac::{
    apply_dirichlet_vec_zero, apply_dirichlet_zero, div_kappa_grad, divergence, dot, dot_vec, fill_zero_gradient,
    gradient, Location, MacGrid, ScalarField, VelocityField,
};
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = MacGrid::unit(2, 12)?;
    let mut u = VelocityField::from_fn(&grid, |k, x| if k == 0 { (3.0 * x[1]).sin() } else { x[0] * x[0] });
    apply_dirichlet_vec_zero(&mut u);
    let mut p = ScalarField::from_fn(&grid, Location::Cell, |x| (x[0] - x[1]).exp());
    fill_zero_gradient(&mut p);
    let lhs = dot(&divergence(&u)?, &p);
    let rhs = -dot_vec(&u, &gradient(&p)?);
    println!("(div u, p) = {lhs:.15}\n-(u, grad p) = {rhs:.15}");

    println!("\n   n   ‖Δ_h s − Δs‖     ratio");
    let s = |x: [f64; 3]| (PI * x[0]).sin() * (PI * x[1]).sin();
    let mut prev = None;
    for n in [8, 16, 32, 64] {
        let g = MacGrid::unit(2, n)?;
        let mut v = ScalarField::from_fn(&g, Location::Cell, s);
        apply_dirichlet_zero(&mut v);
        let lap = div_kappa_grad(&v, &[1.0, 1.0])?;
        let mut err = ScalarField::from_fn(&g, Location::Cell, |x| -2.0 * PI * PI * s(x));
        err.axpy(-1.0, &lap);
        let e = dot(&err, &err).sqrt();
        let ratio = prev.map(|q: f64| format!("{:.3}", q / e)).unwrap_or_default();
        println!("{n:>4}   {e:.6e}   {ratio}");
        prev = Some(e);
    }
    Ok(())
}
