//! Rounding the edge of B(ρ) × [0, ∞) by an ε-tube: closed-form principal
//! curvatures against the finite-difference shape operator.
//!
//! cargo run --example edge_rounding -- [m]

use std::f64::consts::FRAC_PI_2;

use torical::smoothing::{rounding_tube, rounding_tube_fd, RoundingProblem};

fn main() -> torical::Result<()> {
    let m: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let rho = 1.0;
    println!("{:>8} {:>8} {:>14} {:>12} {:>10}", "eps", "theta", "Sc", "eps*Sc", "fd rel");
    for eps in [1e-2, 1e-3, 1e-4] {
        for theta in [-FRAC_PI_2, -0.8, 0.0, 0.8, FRAC_PI_2] {
            let p = RoundingProblem::new(m, rho, eps, theta)?;
            let c = rounding_tube(&p);
            let fd = rounding_tube_fd(&p)?;
            println!("{eps:>8.0e} {theta:>8.4} {:>14.4} {:>12.6} {:>10.1e}", c.sc, eps * c.sc, fd.max_residual);
        }
    }
    println!("\n2(m-1)/rho = {}", 2.0 * (m - 1) as f64 / rho);
    Ok(())
}
