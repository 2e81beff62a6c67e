//! Width constants of the band classes and the numerically maximal width of
//! the Riccati boundary problem, including a plateau curvature bound.
//!
//! cargo run --example extremal_width -- [sigma]

use std::f64::consts::PI;

use torical::extremal::{
    extremal_profile, max_band_width, symmetrization_corollary_bound, width_bound, BandClass, BandSpec,
};

fn main() -> torical::Result<()> {
    let sigma_scale: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);

    println!("{:>3} {:>14} {:>14} {:>14}", "n", "2pi/n bound", "numerical", "difference");
    for n in 2..=8 {
        let sigma = sigma_scale * (n * (n - 1)) as f64;
        let bound = width_bound(BandClass::Overtorical, n, sigma)?;
        let w = max_band_width(&BandSpec::unconstrained(n, sigma)?)?;
        let w = w.width().unwrap_or(f64::NAN);
        println!("{n:>3} {bound:>14.10} {w:>14.10} {:>+14.2e}", w - bound);
    }

    println!();
    for class in BandClass::ALL {
        println!("{:<26} k = {}  n=3, sigma=6: {:.6}", class.label(), class.pi_multiple(), width_bound(class, 3, 6.0)?);
    }

    // Extremal profile f = φ'/φ on the maximal band for n = 3.
    let spec = BandSpec::unconstrained(3, 6.0)?;
    let w = max_band_width(&spec)?.width().unwrap_or(2.0 * PI / 3.0);
    let sol = extremal_profile(&spec, 0.999 * w)?;
    println!("\nprofile on width {:.6}: {} steps, f from {:.3e} to {:.3e}", 0.999 * w, sol.ts.len(), sol.fs[0], sol.fs[sol.fs.len() - 1]);

    println!("\nSc >= 6 near the core, Sc >= -eps elsewhere (n = 3, delta0 = 0.2):");
    for eps in [0.0, 0.1, 0.5, 2.0] {
        println!("  eps = {eps:<4} distance bound {:?}", symmetrization_corollary_bound(3, 6.0, 0.2, eps)?);
    }
    Ok(())
}
