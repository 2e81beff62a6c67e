//! Scalar curvature, boundary mean curvature and Ricci(∂t, ∂t) of a few
//! warped band metrics, analytic against finite differences.
//!
//! cargo run --example warped_curvature -- [n]

use std::f64::consts::PI;

use torical::{Interval, Profile, WarpedBandMetric};

fn main() -> torical::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let nf = n as f64;

    let metrics = [
        ("hyperbolic", WarpedBandMetric::hyperbolic(n, Interval::symmetric(1.5)?)?),
        ("extremal", WarpedBandMetric::extremal(n, Interval::symmetric(0.9 * PI / nf)?)?),
        ("flat", WarpedBandMetric::flat(n, Interval::symmetric(1.0)?)?),
        (
            "t^0.7",
            WarpedBandMetric::uniform(Profile::power(0.7, Interval::new(0.5, 2.0)?)?, n, Interval::new(0.5, 2.0)?)?,
        ),
    ];

    for (name, g) in &metrics {
        let report = g.cross_validate_uniform(1001)?;
        let iv = g.interval();
        println!("{name} (n = {n}, t in [{:.3}, {:.3}])  fd residual {:.2e}", iv.lo, iv.hi, report.residual_max);
        println!("  {:>8} {:>14} {:>14} {:>14}", "t", "Sc", "H", "Ric(dt,dt)");
        for i in 0..5 {
            let t = iv.lo + (i as f64 + 0.5) * iv.length() / 5.0;
            println!(
                "  {t:>8.4} {:>14.8} {:>14.8} {:>14.8}",
                g.scalar_curvature(t)?,
                g.mean_curvature(t)?,
                g.ricci_normal(t)?
            );
        }
    }
    Ok(())
}
