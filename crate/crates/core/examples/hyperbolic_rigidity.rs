//! The hyperbolic cusp metric dt² + e^{2t}Σdτᵢ² and its boundary problem:
//! equality data give only the stationary profile, perturbed data nothing.

use torical::extremal::{max_band_width, BandSpec, ScalarBound};
use torical::{Interval, WarpedBandMetric};

fn main() -> torical::Result<()> {
    for n in [2, 3, 4, 6] {
        let k = (n - 1) as f64;
        let g = WarpedBandMetric::hyperbolic(n, Interval::symmetric(2.0)?)?;
        println!(
            "n = {n}: Sc = {:.3}  H = {:.3}  Ric = {:.3}",
            g.scalar_curvature(0.7)?,
            g.mean_curvature(0.7)?,
            g.ricci_normal(0.7)?
        );
        let sigma = ScalarBound::constant(-((n * (n - 1)) as f64));
        for (label, dm) in [("equality", 0.0), ("perturbed", 0.1), ("relaxed", -0.1)] {
            let spec = BandSpec::new(n, sigma.clone(), -k - dm, k + dm)?;
            println!("  {label:<10} M- = {:+.2} M+ = {:+.2}: {:?}", spec.m_minus(), spec.m_plus(), max_band_width(&spec)?);
        }
    }
    Ok(())
}
