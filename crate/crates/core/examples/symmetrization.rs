//! One symmetrization step on a circle: lowest eigenpair of −Δ + V and the
//! scalar curvature of the warped product it produces.
//!
//! cargo run --example symmetrization -- [grid points]

use std::f64::consts::PI;

use torical::extremal::{stability_step, verify_symmetrization_invariant, StabilityProblem};

fn main() -> torical::Result<()> {
    let points: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(256);
    let length = 2.0 * PI;

    for (label, amp) in [("constant", 0.0), ("cos y", 1.0), ("3 cos 2y", 3.0)] {
        let freq = if amp > 2.0 { 2.0 } else { 1.0 };
        let problem = StabilityProblem::from_fn(length, points, |y| 0.5 + amp * (freq * y).cos())?;
        let outcome = stability_step(&problem)?;
        // Sc_new = 2(λ₀ − V) for a flat slice, so its minimum is 2λ₀ − 2 max V.
        let floor = 2.0 * (outcome.lambda0 - 0.5 - amp);
        let report = verify_symmetrization_invariant(&problem, &outcome, floor, 1e-8)?;
        println!(
            "V = 0.5 + {label:<9} lambda0 = {:+.8}  min Sc_new = {:+.6}  identity residual {:.1e}  stable {}",
            outcome.lambda0, report.min_sc_new, report.identity_residual, report.stable
        );
    }
    Ok(())
}
