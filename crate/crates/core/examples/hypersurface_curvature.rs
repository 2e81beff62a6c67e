//! Gauss equation for hypersurfaces of spheres and Euclidean space, and the
//! curvature of balanced sphere products measured by finite differences.

use torical::hypersurface::{
    curvature_lower_bound, gauss_scalar_curvature, sphere_product_curvature, Ambient, PrincipalCurvatures,
};

fn main() -> torical::Result<()> {
    let clifford = PrincipalCurvatures::new(vec![1.0, -1.0], Ambient::Sphere(3))?;
    println!("Clifford torus in S^3: Sc = {}", gauss_scalar_curvature(&clifford));

    for rho in [0.3f64, 0.6, 0.9] {
        let lam = (1.0 - rho * rho).sqrt() / rho;
        let pc = PrincipalCurvatures::umbilic(lam, Ambient::Sphere(5))?;
        println!("distance sphere rho = {rho}: Sc = {:.6}  (12/rho^2 = {:.6})", gauss_scalar_curvature(&pc), 12.0 / (rho * rho));
    }

    println!("\n{:>3} {:>3} {:>10}", "n", "k", "bound");
    for n in [4, 6, 10] {
        for k in 1..n {
            println!("{n:>3} {k:>3} {:>10.6}", curvature_lower_bound(n, k)?);
        }
    }

    println!("\nbalanced products, max |II(X,X)|:");
    for dims in [vec![1, 1], vec![2, 2], vec![1, 1, 1], vec![2, 1, 1, 1]] {
        let c = sphere_product_curvature(&dims)?;
        println!(
            "{dims:?}: R^N {:.8} (fd {:.8})  in sphere {:.8} (fd {:.8})",
            c.euclidean, c.euclidean_fd, c.in_sphere, c.in_sphere_fd
        );
    }
    Ok(())
}
