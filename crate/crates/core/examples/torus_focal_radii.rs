//! Focal radii of the recursive tori, from the recurrence and from the
//! brute-force tangent-ball oracle.
//!
//! cargo run --example torus_focal_radii -- [resolution]

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

use torical::torus::{brute_force_focal_radius, embed_and_sample, focal_radius_table, TorusConstruction};

fn main() -> torical::Result<()> {
    let resolution: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(128);

    let table = focal_radius_table(32)?;
    println!("{:>4} {:>14} {:>14}", "n", "r(n)", "r(n) n^1.5");
    for n in [2, 3, 4, 5, 8, 16, 32] {
        println!("{n:>4} {:>14.10} {:>14.10}", table.get(n).unwrap(), table.scaled(n).unwrap());
    }

    let cases = [
        ("unit circle", TorusConstruction::circle(), 1.0),
        (
            "product torus",
            TorusConstruction::pair(TorusConstruction::circle(), TorusConstruction::circle())?,
            FRAC_1_SQRT_2,
        ),
        ("Y(4)", TorusConstruction::build(4)?, table.get(4).unwrap()),
    ];
    println!();
    for (name, construction, expected) in cases {
        let start = Instant::now();
        let cloud = embed_and_sample(&construction, resolution)?;
        let est = brute_force_focal_radius(&cloud)?;
        println!(
            "{name:<14} points {:>8}  oracle {:.6}  stored {:.6}  rel.err {:+.2e}  ({:.1?})",
            est.points,
            est.radius,
            expected,
            est.radius / expected - 1.0,
            start.elapsed()
        );
    }
    Ok(())
}
