//! Lipschitz lower bounds for maps to tori and the torical width of spheres
//! from the recursive focal radii.

use std::f64::consts::PI;

use torical::torus::{crossover_vs_classical, lipschitz_lower_bound, spherical_width_lower_bound, subsphere_data};

fn main() -> torical::Result<()> {
    println!("{:>3} {:>12} {:>14}", "n", "Lip >=", "width(S^n) >=");
    for n in [3, 4, 5, 8, 16, 64] {
        let sigma = (n * (n - 1)) as f64;
        println!(
            "{n:>3} {:>12.6} {:>14.8}",
            lipschitz_lower_bound(n, sigma, PI / 2.0)?,
            spherical_width_lower_bound(n)?
        );
    }
    println!("\nfirst n beating n/(2^n pi): {:?}", crossover_vs_classical(2..=64));

    for rho in [0.25, 0.5, 1.0 / 2f64.sqrt(), 1.0] {
        let s = subsphere_data(rho)?;
        println!("rho = {rho:.4}  focal radius {:.6}  curvature {:.6}", s.focal_radius, s.curvature);
    }
    Ok(())
}
